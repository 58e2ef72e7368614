#include <gtest/gtest.h>

#include "fwdlogic/parser.hpp"
#include "fwdlogic/synthesis.hpp"
#include "support/enumerate.hpp"

using namespace fwdlogic;

namespace {

ErrorKind parse_kind(const std::string& text) {
  try {
    parse(text);
  } catch (const FwdError& e) {
    return e.kind();
  }
  return ErrorKind::IllFormed;
}

}  // namespace

TEST(Parser, CrissCrossContext) {
  auto f = parse("ctx C = { x : (~name @ ((~cost * bot[y])[y]))[y], y : (cost @ ((name * 1[x])[x]))[x] };");
  Context g = f.context("C")->ctx.annotated();
  AnnType x = AnnType::par(PlainType::dual_atom("name"), "y",
                           AnnType::tensor(PlainType::dual_atom("cost"), "y", AnnType::bot("y")));
  EXPECT_EQ(*g.at("x").type, x);
}

TEST(Parser, ExampleForwarder) {
  auto p = parse_process("in x(u). in y(v). out y[u'](fwd u u')(out x[v'](fwd v' v)(wait x. close y))");
  using P = Process;
  P want = P::recv("x", "u", P::recv("y", "v", P::send("y", "u'", P::link("u", "u'"),
                                                      P::send("x", "v'", P::link("v'", "v"),
                                                              P::wait("x", P::close("y"))))));
  EXPECT_EQ(p.str(), want.str());
}

TEST(Parser, PlainContext) {
  auto c = parse_context("{ x : (a @ bot), y : (~a * 1) }").plain();
  EXPECT_EQ(c.at("x"), PlainType::par(PlainType::atom("a"), PlainType::bot()));
}

TEST(Parser, MissingAnnotationIsNotAnnotated) {
  EXPECT_THROW(parse_context("{ x : (a @ bot)[y], y : (~a * 1) }").annotated(), FwdError);
}

TEST(Parser, QueuesAndDone) {
  auto g = parse_context("{ x : 1[y], y : . queue [ [x] m : a, [x]* ] }").annotated();
  EXPECT_FALSE(g.at("y").type);
  EXPECT_EQ(g.at("y").queue.length(), 2u);
  EXPECT_EQ(g.str(), "{ x : 1[y], y : . queue [[x] m : a, [x]*] }");
}

TEST(Parser, ChoiceMarkers) {
  auto g = parse_context("{ x : bot[y] queue [ [y]l, [y]r ], y : (1[x] + 1[x])[x] }").annotated();
  auto f = g.at("x").queue.fifos().at("y");
  EXPECT_EQ(f[0].kind, QueuePayload::Kind::Left);
  EXPECT_EQ(f[1].kind, QueuePayload::Kind::Right);
}

TEST(Parser, UnicodeAliases) {
  auto a = parse_type("(a⊗¬b)");
  auto b = parse_type("(a * ~b)");
  EXPECT_EQ(to_plain(a), to_plain(b));
  EXPECT_EQ(to_plain(parse_type("(⊥ ⅋ 𝟏)")), PlainType::par(PlainType::bot(), PlainType::one()));
  EXPECT_EQ(to_plain(parse_type("((1 ⊕ ⊥) ＆ 1)")).conn(), Conn::With);
}

TEST(Parser, TypeAliases) {
  auto f = parse("type T = (a * 1); ctx C = { x : T, y : (~a @ bot) };");
  EXPECT_EQ(f.context("C")->ctx.plain().at("x"), PlainType::tensor(PlainType::atom("a"), PlainType::one()));
}

TEST(Parser, Comments) {
  EXPECT_NO_THROW(parse("-- nothing here\nproc P = close x; -- trailing\n"));
}

TEST(Parser, Directives) {
  auto f = parse("ctx C = { x : 1 }; proc P = close x; check P in C; synth C;");
  ASSERT_EQ(f.decls.size(), 4u);
  auto* d = std::get_if<Directive>(&f.decls[2]);
  ASSERT_TRUE(d);
  EXPECT_EQ(d->verb, "check");
  EXPECT_EQ(*d->in, "C");
}

TEST(Parser, ErrorsCarryPosition) {
  try {
    parse("proc P = close x;\nproc Q = wait x close y;");
    FAIL();
  } catch (const FwdError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(e.error().describe().find("line 2"), std::string::npos) << e.error().describe();
  }
}

TEST(Parser, DuplicateDeclaration) { EXPECT_EQ(parse_kind("proc P = close x; proc P = close y;"), ErrorKind::ParseError); }

TEST(Parser, RejectsTrailingInput) { EXPECT_THROW(parse_process("close x close y"), FwdError); }

TEST(Parser, UnknownTargetSurfacesAtConstruction) {
  auto raw = parse_context("{ x : bot[q] }");
  try {
    raw.annotated();
    FAIL();
  } catch (const FwdError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownAnnotationTarget);
  }
}

TEST(Parser, MCutSyntax) {
  auto p = parse_process(
      "mcut [x, y] fwd: wait x. close y ctx: { x : bot[y], y : 1[x] } transit: [] parts: (close x | wait y. close z)");
  EXPECT_EQ(p.kind(), ProcKind::MCut);
  EXPECT_EQ(p.parts().size(), 2u);
  EXPECT_EQ(parse_process(p.str()).str(), p.str());
}

TEST(RoundTrip, TypesFromCorpus) {
  fwdtest::Family f;
  f.max_size = 5;
  for (const auto& t : fwdtest::plain_types(f, 5)) EXPECT_EQ(to_plain(parse_type(t.str())), t) << t.str();
}

TEST(RoundTrip, AnnotatedContextsAndForwarders) {
  std::size_t n = 0;
  fwdtest::for_each_plain_context(fwdtest::Family{}, 3, [&](const CPContext& c) {
    SynthConfig cfg;
    cfg.enumerate_all = true;
    for (const auto& r : synth_plain(c, cfg)) {
      ++n;
      std::string ctx = r.context.str(), proc = r.process.str();
      EXPECT_EQ(parse_context(ctx).annotated().str(), ctx);
      EXPECT_EQ(parse_process(proc).str(), proc);
    }
  });
  EXPECT_GT(n, 100u);
}

TEST(RoundTrip, WholeFile) {
  std::string text =
      "type T = (a * 1);\n"
      "ctx C = { x : (~a @ bot[y])[y], y : (a * 1[x])[x] };\n"
      "proc P = in x(m). wait x. out y[k](fwd k m)(close y);\n"
      "check P in C;\n"
      "live C;\n";
  EXPECT_EQ(parse(text).str(), text);
  EXPECT_EQ(parse(parse(text).str()).str(), text);
}
