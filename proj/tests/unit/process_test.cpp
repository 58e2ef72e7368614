#include <gtest/gtest.h>

#include "fwdlogic/process.hpp"
#include "fwdlogic/synthesis.hpp"
#include "support/enumerate.hpp"

using namespace fwdlogic;
using P = Process;

TEST(FreeNames, Link) { EXPECT_EQ(free_names(P::link("x", "y")), (NameSet{"x", "y"})); }

TEST(FreeNames, RecvBinds) { EXPECT_EQ(free_names(P::recv("x", "y", P::link("y", "z"))), (NameSet{"x", "z"})); }

TEST(FreeNames, SendBindsInPayloadOnly) {
  EXPECT_EQ(free_names(P::send("x", "y", P::link("y", "u"), P::close("x"))), (NameSet{"x", "u"}));
  EXPECT_EQ(free_names(P::send("x", "y", P::link("x", "u"), P::close("y"))), (NameSet{"x", "u", "y"}));
}

TEST(FreeNames, MCutBindsCutAndTransit) {
  Context g = uniform_context({{"x", AnnType::bot("y")}, {"y", AnnType::one({"x"})}});
  P m = P::mcut({"x", "y"}, P::wait("x", P::close("y")), g, {}, {P::close("x"), P::wait("y", P::close("z"))});
  EXPECT_EQ(free_names(m), (NameSet{"z"}));
}

TEST(RenameApart, AvoidsGivenNames) {
  NameSupply s;
  P r = rename_apart(P::recv("x", "y", P::link("y", "z")), {"y"}, s);
  EXPECT_EQ(r.str(), "in x(y1). fwd y1 z");
}

TEST(RenameApart, IdempotentWhenApart) {
  P p = P::recv("x", "y", P::link("y", "z"));
  EXPECT_TRUE(alpha_eq(rename_apart(rename_apart(p)), rename_apart(p)));
  EXPECT_TRUE(alpha_eq(rename_apart(p), p));
}

TEST(AlphaEq, BoundNamesIrrelevant) {
  EXPECT_TRUE(alpha_eq(P::recv("x", "y", P::link("y", "z")), P::recv("x", "w", P::link("w", "z"))));
}

TEST(AlphaEq, LinkSymmetric) { EXPECT_TRUE(alpha_eq(P::link("x", "y"), P::link("y", "x"))); }

TEST(AlphaEq, ShapesDiffer) { EXPECT_FALSE(alpha_eq(P::close("x"), P::wait("x", P::close("y")))); }

TEST(AlphaEq, FreeNamesMatter) { EXPECT_FALSE(alpha_eq(P::close("x"), P::close("y"))); }

TEST(Substitute, StopsAtBinder) {
  P p = P::recv("x", "y", P::link("y", "z"));
  EXPECT_EQ(substitute(p, "y", "q").str(), p.str());
  EXPECT_EQ(substitute(p, "z", "q").str(), "in x(y). fwd y q");
}

TEST(Substitute, AvoidsCapture) {
  P p = P::recv("x", "y", P::link("y", "z"));
  P r = substitute(p, "z", "y");
  EXPECT_EQ(free_names(r), (NameSet{"x", "y"}));
  EXPECT_EQ(r.p().kind(), ProcKind::Link);
  EXPECT_NE(r.y(), Name("y"));
}

TEST(Size, NodeCount) {
  EXPECT_EQ(P::close("x").size(), 1u);
  EXPECT_EQ(P::send("x", "y", P::link("y", "u"), P::close("x")).size(), 3u);
}

// invariants over every synthesized forwarder in the small plain family
TEST(RenameApart, PreservesInvariantsOnSynthesizedTerms) {
  std::size_t seen = 0;
  fwdtest::for_each_plain_context(fwdtest::Family{}, 2, [&](const CPContext& c) {
    SynthConfig cfg;
    cfg.enumerate_all = true;
    for (const auto& r : synth_plain(c, cfg)) {
      ++seen;
      NameSupply s;
      P q = rename_apart(r.process, all_names(r.process), s);
      EXPECT_TRUE(alpha_eq(q, r.process)) << r.process.str();
      EXPECT_EQ(free_names(q), free_names(r.process));
      EXPECT_EQ(q.size(), r.process.size());
      for (const auto& n : all_names(q))
        if (!free_names(q).contains(n)) EXPECT_FALSE(all_names(r.process).contains(n)) << n;
    }
  });
  EXPECT_GT(seen, 20u);
}
