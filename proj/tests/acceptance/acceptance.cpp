// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fwdlogic.hpp"
#include "fwdlogic/cli.hpp"
#include "oracles/naive_search.hpp"
#include "support/composite.hpp"
#include "support/enumerate.hpp"
#include "support/protocols.hpp"

using namespace fwdlogic;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const char* kCrissCross = R"(
ctx C = { x : (~name @ ((~cost * bot[y])[y]))[y], y : (cost @ ((name * 1[x])[x]))[x] };
proc F = in x(u). in y(v). out y[u'](fwd u u')(out x[v'](fwd v' v)(wait x. close y));
)";

Outcome crisscross() {
  auto src = parse(kCrissCross);
  auto d = check_forwarder(src.process("F")->proc, src.context("C")->ctx.annotated());
  if (!d) return {false, d.error().describe()};
  std::vector<std::string> want{"Par@x", "Par@y", "Tensor@y(Ax)", "Tensor@x(Ax)", "Bot@x", "One@y"};
  auto got = rule_trace(*d);
  std::string s;
  for (const auto& r : got) s += (s.empty() ? "" : ", ") + r;
  return {got == want, s};
}

Outcome embedding() {
  std::size_t ctxs = 0, witnesses = 0, bad = 0;
  std::string first_bad;
  auto run = [&](const fwdtest::Family& f, std::size_t k) {
    fwdtest::for_each_plain_context(f, k, [&](const CPContext& c) {
      ++ctxs;
      SynthConfig cfg;
      cfg.enumerate_all = true;
      for (const auto& r : synth_plain(c, cfg)) {
        ++witnesses;
        auto e = erase_context(r.context);
        bool ok = e && *e == c && check_cp(r.process, c).ok();
        if (!ok && bad++ == 0) first_bad = to_string(c) + " / " + r.process.str();
      }
    });
  };
  fwdtest::Family f;  // sizes 1 and 3; size counts atoms, units and connectives
  run(f, 3);
  fwdtest::Family f5;
  f5.max_size = 5;
  run(f5, 2);
  std::ostringstream os;
  os << ctxs << " contexts, " << witnesses << " witnesses, " << bad << " rejected";
  if (bad) os << "; first: " << first_bad;
  return {bad == 0 && witnesses > 0, os.str()};
}

fwdtest::Family multiplicative() {
  fwdtest::Family f;
  f.additives = false;
  return f;
}

Outcome theorem() {
  std::size_t n = 0, live = 0, bad = 0;
  std::string first_bad;
  fwdtest::for_each_annotated_context(multiplicative(), 3, true, [&](const Context& g) {
    ++n;
    bool l = live_path_exists(g);
    bool s = !synth_annotated(g).empty();
    live += l;
    if (l != s && bad++ == 0) first_bad = g.str();
  });
  std::ostringstream os;
  os << n << " contexts (up to endpoint renaming), " << live << " live, " << bad << " disagreements";
  if (bad) os << "; first: " << first_bad;
  return {bad == 0 && live > 0, os.str()};
}

Outcome oracle() {
  std::size_t n = 0, yes = 0, bad = 0;
  std::string first_bad;
  auto cmp = [&](const Context& g) {
    ++n;
    bool a = naive::derivable(g);
    bool s = !synth_annotated(g).empty();
    yes += a;
    if (a != s && bad++ == 0) first_bad = g.str();
  };
  fwdtest::for_each_annotated_context(multiplicative(), 3, true, cmp);
  fwdtest::Family add;
  fwdtest::for_each_annotated_context(add, 2, true, cmp);
  std::ostringstream os;
  os << n << " contexts, " << yes << " derivable, " << bad << " disagreements";
  if (bad) os << "; first: " << first_bad;
  return {bad == 0 && yes > 0, os.str()};
}

Outcome admissibility() {
  std::size_t n = 0, steps = 0, bad = 0;
  std::string first_bad;
  auto note = [&](const std::string& s) {
    if (bad++ == 0) first_bad = s;
  };
  auto run = [&](const fwdtest::Family& f, std::size_t k) {
    fwdtest::for_each_plain_context(f, k, [&](const CPContext& c) {
      SynthConfig cfg;
      cfg.enumerate_all = true;
      for (const auto& r : synth_plain(c, cfg)) {
        auto comp = fwdtest::copycat_composite(r.process, r.context);
        ++n;
        try {
          if (auto v = validate_mcut(comp.term, comp.outer); !v) throw FwdError(v.error());
          // measure and subject reduction are asserted inside normalize
          NormalizeOptions no;
          no.outer = comp.outer;
          auto [res, tr] = normalize(comp.term, no);
          steps += tr.size();
          if (contains_mcut(res)) note("not cut-free: " + res.str());
        } catch (const FwdError& e) {
          note(comp.term.str() + ": " + e.error().describe());
        }
      }
    });
  };
  run(fwdtest::Family{}, 3);
  fwdtest::Family f5;
  f5.max_size = 5;
  run(f5, 2);

  // unit and axiom micro-examples
  {
    Context g = uniform_context({{Name("x"), AnnType::bot(Name("y"))}, {Name("y"), AnnType::one({Name("x")})}});
    Process m = Process::mcut({Name("x"), Name("y")}, Process::wait(Name("x"), Process::close(Name("y"))), g, {},
                              {Process::close(Name("x")), Process::wait(Name("y"), Process::close(Name("z")))});
    NormalizeOptions no;
    no.outer = CPContext{{Name("z"), PlainType::one()}};
    auto [res, tr] = normalize(m, no);
    if (!alpha_eq(res, Process::close(Name("z"))) || tr.size() != 2) note("unit example gave " + res.str());
  }
  {
    PlainType a = PlainType::atom("a");
    Context g = uniform_context({{Name("x"), AnnType::dual_atom("a")}, {Name("y"), AnnType::atom("a")}});
    Process m = Process::mcut({Name("x"), Name("y")}, Process::link(Name("x"), Name("y")), g, {},
                              {Process::link(Name("x"), Name("z")), Process::link(Name("y"), Name("w"))});
    NormalizeOptions no;
    no.outer = CPContext{{Name("z"), dual(a)}, {Name("w"), a}};
    auto [res, tr] = normalize(m, no);
    if (!alpha_eq(res, Process::link(Name("z"), Name("w"))) || tr.size() != 1) note("axiom example gave " + res.str());
  }
  std::ostringstream os;
  os << n << " composites + 2 micro-examples, " << steps << " steps, " << bad << " failures";
  if (bad) os << "; first: " << first_bad;
  return {bad == 0 && n >= 50, os.str()};
}

// Derivation shape, or the error kind when the checker rejects.
std::string verdict(const Process& p, const Context& g) {
  auto d = check_forwarder(p, g);
  if (!d) return "error " + std::string(to_string(d.error().kind));
  return to_json(*d).dump();
}

// A random interleaving of the entries that keeps each target's order.
std::vector<QueueEntry> shuffle_independent(const std::vector<QueueEntry>& es, std::mt19937& rng) {
  std::vector<Name> slots;
  for (const auto& e : es) slots.push_back(e.target);
  std::shuffle(slots.begin(), slots.end(), rng);
  std::map<Name, std::size_t> next;
  std::map<Name, std::vector<QueueEntry>> by;
  for (const auto& e : es) by[e.target].push_back(e);
  std::vector<QueueEntry> out;
  for (const auto& t : slots) out.push_back(by[t][next[t]++]);
  return out;
}

Outcome queue_fuzz() {
  // judgements with queued material, taken from derivations of synthesized forwarders
  std::vector<std::pair<Process, Context>> pool;
  std::function<void(const Derivation&)> collect = [&](const Derivation& d) {
    bool queued = false;
    for (const auto& [_, st] : d.conclusion.map()) queued |= st.queue.fifos().size() > 1;
    if (queued) pool.emplace_back(d.process, d.conclusion);
    for (const auto& p : d.premises) collect(p);
  };
  std::mt19937 gen(7);
  for (int i = 0; i < 400; ++i) {
    Context g = fwdtest::random_protocol(gen, 3 + i % 2, 4 + i % 5);
    auto rs = synth_annotated(g);
    if (rs.empty()) return {false, "no forwarder for generated protocol " + g.str()};
    collect(rs.front().derivation);
  }
  if (pool.empty()) return {false, "no judgements with queues"};

  std::mt19937 rng(20261016);
  std::size_t runs = 10000, reordered = 0, rejected = 0, bad = 0;
  std::string first_bad;
  for (std::size_t i = 0; i < runs; ++i) {
    const auto& [p0, g] = pool[rng() % pool.size()];
    // half the time pair the context with an unrelated term, to cover rejections
    const Process& p = (i % 2) ? pool[rng() % pool.size()].first : p0;
    Context::Map m;
    bool moved = false;
    for (const auto& [x, st] : g.map()) {
      auto es = st.queue.entries();
      auto sh = shuffle_independent(es, rng);
      moved |= !std::equal(es.begin(), es.end(), sh.begin(), [](const QueueEntry& a, const QueueEntry& b) {
        return a.target == b.target && a.payload.str() == b.payload.str();
      });
      m.emplace(x, EndpointState{Queue::from_entries(sh), st.type});
    }
    reordered += moved;
    std::string a = verdict(p, g), b = verdict(p, Context(std::move(m)));
    rejected += a.rfind("error", 0) == 0;
    if (a != b && bad++ == 0) first_bad = g.str() + " with " + p.str();
  }
  std::ostringstream os;
  os << runs << " runs over " << pool.size() << " judgements, " << reordered << " reordered, " << rejected
     << " rejected, " << bad << " violations";
  if (bad) os << "; first: " << first_bad;
  return {bad == 0 && reordered > runs / 2, os.str()};
}

const char* kNegatives = R"(
ctx SameAtoms = { x : a, y : a };
proc Link = fwd x y;
ctx TwoBots = { x : bot[y], y : bot[x] };
proc WaitWait = wait x. close y;
ctx Misrouted = { x : (~a * 1[y, z])[z], y : . queue [ [x]* ], z : . queue [ [y] m : a, [x]* ] };
proc Grab = out x[n](fwd n m)(close x);
ctx Leftover = { x : 1[y], y : . queue [ [x] m : a, [x]* ] };
proc Close = close x;
)";

Outcome negatives() {
  auto src = parse(kNegatives);
  struct Case {
    const char* proc;
    const char* ctx;
    ErrorKind want;
  };
  std::vector<Case> cases{{"Link", "SameAtoms", ErrorKind::RuleMismatch},
                          {"WaitWait", "TwoBots", ErrorKind::RuleMismatch},
                          {"Grab", "Misrouted", ErrorKind::WrongTarget},
                          {"Close", "Leftover", ErrorKind::ResidualQueue}};
  std::string tmp = "/tmp/fwd_acceptance_negatives.dsl";
  {
    std::ofstream o(tmp);
    o << kNegatives;
  }
  std::ostringstream os;
  bool pass = true;
  for (const auto& c : cases) {
    auto d = check_forwarder(src.process(c.proc)->proc, src.context(c.ctx)->ctx.annotated());
    std::ostringstream out, err;
    int code = run_cli({"check", tmp, "--proc", c.proc, "--ctx", c.ctx}, out, err);
    bool ok = !d && d.error().kind == c.want && code == kNo;
    pass &= ok;
    os << c.ctx << "=" << (d ? std::string("accepted") : std::string(to_string(d.error().kind))) << "/exit " << code << " ";
  }
  // nothing else can derive these either
  for (const char* c : {"SameAtoms", "TwoBots"}) {
    std::ostringstream out, err;
    int code = run_cli({"synth", tmp, "--ctx", c}, out, err);
    bool ok = synth_annotated(src.context(c)->ctx.annotated()).empty() && code == kNo && out.str() == "NONE\n";
    pass &= ok;
    os << "synth " << c << "/exit " << code << " ";
  }
  std::remove(tmp.c_str());
  return {pass, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds
    std::function<Outcome()> run;
  };
  std::vector<Criterion> cs{
      {1, "criss-cross golden derivation", 1, crisscross},
      {2, "forwarders embed into CP", 60, embedding},
      {3, "live path iff forwarder", 120, theorem},
      {4, "synthesis agrees with naive search", 120, oracle},
      {5, "composition normalizes", 60, admissibility},
      {6, "queue presentation invariance", 30, queue_fuzz},
      {7, "negative cases", 10, negatives},
  };
  bool all = true;
  for (const auto& c : cs) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass && dt < c.budget;
    all &= pass;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2fs/%.0fs", dt, c.budget);
    std::cout << (pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " [" << buf << "] " << o.detail
              << std::endl;
  }
  return all ? 0 : 1;
}
