#pragma once

#include <algorithm>
#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fwdlogic/cp_typing.hpp"
#include "fwdlogic/forwarder_typing.hpp"
#include "fwdlogic/process.hpp"

namespace fwdlogic {

/// Reduction kinds, named from the part's side: SendMsg is a part output
/// met by a forwarder input, RecvMsg a part input met by a forwarder output.
enum class StepKind { SendMsg, RecvMsg, CloseWait, WaitClose, ChoiceOffer, ChoiceSelect, AxCollapse, Commute };

inline const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::SendMsg: return "SendMsg";
    case StepKind::RecvMsg: return "RecvMsg";
    case StepKind::CloseWait: return "CloseWait";
    case StepKind::WaitClose: return "WaitClose";
    case StepKind::ChoiceOffer: return "ChoiceOffer";
    case StepKind::ChoiceSelect: return "ChoiceSelect";
    case StepKind::AxCollapse: return "AxCollapse";
    case StepKind::Commute: return "Commute";
  }
  return "?";
}

struct TraceEntry {
  StepKind kind;
  std::vector<Name> endpoints;
  Process result;  // the whole term after the step
};

using RunTrace = std::vector<TraceEntry>;

/// (sum of cut-type sizes, sum of part sizes); decreases lexicographically.
struct Measure {
  std::size_t types = 0;
  std::size_t parts = 0;
  auto operator<=>(const Measure&) const = default;
  std::string str() const { return "(" + std::to_string(types) + ", " + std::to_string(parts) + ")"; }
};

inline Measure mcut_measure(const Process& m) {
  Measure ms;
  for (const auto& x : m.cut())
    if (m.fwd_ctx().contains(x) && m.fwd_ctx().at(x).type) ms.types += m.fwd_ctx().at(x).type->size();
  for (const auto& r : m.parts()) ms.parts += r.size();
  return ms;
}

struct ReduceOptions {
  /// Which commute candidate to take (index modulo the candidate count);
  /// 0 is the least part by cut name.
  std::size_t commute_choice = 0;
  bool check_measure = true;
};

namespace detail {

inline bool is_prefix(const Process& p) {
  switch (p.kind()) {
    case ProcKind::Wait:
    case ProcKind::Recv:
    case ProcKind::Send:
    case ProcKind::Inl:
    case ProcKind::Inr:
    case ProcKind::Case: return true;
    default: return false;
  }
}

inline Process with_part(const Process& m, std::size_t i, Process r) {
  auto parts = m.parts();
  parts[i] = std::move(r);
  return Process::mcut(m.cut(), m.p(), m.fwd_ctx(), m.transit(), std::move(parts));
}

inline std::optional<std::size_t> part_index(const Process& m, const Name& x) {
  for (std::size_t i = 0; i < m.cut().size(); ++i)
    if (m.cut()[i] == x) return i;
  return std::nullopt;
}

[[noreturn]] inline void stuck(const Process& m, const std::string& why) {
  throw FwdError(make_error(ErrorKind::Stuck, why, m.str()));
}

struct LocalStep {
  StepKind kind;
  std::vector<Name> endpoints;
  Process result;
  std::vector<Process> continuing;  // MCut nodes that carry on, for the measure check
};

inline RuleStep fwd_step(const Process& m) {
  auto st = forwarder_step(m.p(), m.fwd_ctx());
  if (!st) throw FwdError(st.error());
  return std::move(st).value();
}

/// A principal reduction driven by the forwarder's head action, if the
/// matching part is ready for it.
inline std::optional<LocalStep> principal(const Process& m) {
  const Process& f = m.p();
  const Name& x = f.x();
  auto idx = part_index(m, x);

  if (f.kind() == ProcKind::Link) {
    auto ia = part_index(m, f.x()), ib = part_index(m, f.y());
    if (ia && ib) {
      const Process &ra = m.parts()[*ia], &rb = m.parts()[*ib];
      if (ra.kind() != ProcKind::Link || rb.kind() != ProcKind::Link) return std::nullopt;
      auto other = [](const Process& l, const Name& n) { return l.x() == n ? l.y() : l.x(); };
      Name z1 = other(ra, f.x()), z2 = other(rb, f.y());
      return LocalStep{StepKind::AxCollapse, {f.x(), f.y()}, Process::link(z1, z2), {}};
    }
    // identity composition: one part, linked straight to an outer endpoint
    if (ia || ib) {
      const Name& c = ia ? f.x() : f.y();
      const Name& w = ia ? f.y() : f.x();
      const Process& r = m.parts()[ia ? *ia : *ib];
      return LocalStep{StepKind::AxCollapse, {c, w}, substitute(r, c, w), {}};
    }
    stuck(m, "link forwarder on no cut endpoint");
  }
  if (!idx) stuck(m, "forwarder acts on " + x.str() + ", which is not a cut endpoint");
  const std::size_t i = *idx;
  const Process& r = m.parts()[i];
  if (!is_prefix(r) && r.kind() != ProcKind::Close && r.kind() != ProcKind::Link) return std::nullopt;
  if (r.kind() == ProcKind::Link || r.x() != x) return std::nullopt;

  auto next = [&](std::vector<Name> cut, Process fwd, Context ctx, std::vector<Transit> transit,
                  std::vector<Process> parts) {
    return Process::mcut(std::move(cut), std::move(fwd), std::move(ctx), std::move(transit), std::move(parts));
  };

  switch (f.kind()) {
    case ProcKind::Recv: {
      if (r.kind() != ProcKind::Send) stuck(m, "forwarder input meets " + r.str());
      RuleStep st = fwd_step(m);
      const Name& y = f.y();
      auto transit = m.transit();
      transit.push_back({y, substitute(r.p(), r.y(), y)});
      Process nm = next(m.cut(), f.p(), st.premises[0].second, std::move(transit),
                        [&] { auto ps = m.parts(); ps[i] = r.q(); return ps; }());
      return LocalStep{StepKind::SendMsg, {x, y}, nm, {nm}};
    }
    case ProcKind::Send: {
      if (r.kind() != ProcKind::Recv) stuck(m, "forwarder output meets " + r.str());
      RuleStep st = fwd_step(m);
      const Name& yf = f.y();
      // the queued message read by the forwarder names the transit process
      const auto& payload_ctx = st.premises[0].second;
      Name z = yf;
      for (const auto& n : payload_ctx.names())
        if (n != yf) z = n;
      std::vector<Transit> transit;
      std::optional<Process> pz;
      for (const auto& t : m.transit()) {
        if (t.name == z) {
          pz = t.proc;
        } else {
          transit.push_back(t);
        }
      }
      if (!pz) stuck(m, "no transit process for " + z.str());
      Process inner = Process::mcut({yf, z}, f.p(), payload_ctx, {}, {substitute(r.p(), r.y(), yf), *pz});
      auto parts = m.parts();
      parts[i] = inner;
      Process nm = next(m.cut(), f.q(), st.premises[1].second, std::move(transit), std::move(parts));
      return LocalStep{StepKind::RecvMsg, {x, z}, nm, {nm}};
    }
    case ProcKind::Wait: {
      if (r.kind() != ProcKind::Close) stuck(m, "forwarder wait meets " + r.str());
      RuleStep st = fwd_step(m);
      auto cut = m.cut();
      auto parts = m.parts();
      cut.erase(cut.begin() + static_cast<std::ptrdiff_t>(i));
      parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(i));
      Process nm = next(std::move(cut), f.p(), st.premises[0].second, m.transit(), std::move(parts));
      return LocalStep{StepKind::CloseWait, {x}, nm, {nm}};
    }
    case ProcKind::Close: {
      if (r.kind() != ProcKind::Wait) stuck(m, "forwarder close meets " + r.str());
      if (m.parts().size() != 1 || !m.transit().empty()) stuck(m, "close with other parts pending");
      return LocalStep{StepKind::WaitClose, {x}, r.p(), {}};
    }
    case ProcKind::Inl:
    case ProcKind::Inr: {
      if (r.kind() != ProcKind::Case) stuck(m, "forwarder selection meets " + r.str());
      RuleStep st = fwd_step(m);
      bool left = f.kind() == ProcKind::Inl;
      auto parts = m.parts();
      parts[i] = left ? r.p() : r.q();
      Process nm = next(m.cut(), f.p(), st.premises[0].second, m.transit(), std::move(parts));
      return LocalStep{StepKind::ChoiceOffer, {x}, nm, {nm}};
    }
    case ProcKind::Case: {
      if (r.kind() != ProcKind::Inl && r.kind() != ProcKind::Inr) stuck(m, "forwarder case meets " + r.str());
      RuleStep st = fwd_step(m);
      bool left = r.kind() == ProcKind::Inl;
      auto parts = m.parts();
      parts[i] = r.p();
      const auto& prem = st.premises[left ? 0 : 1];
      Process nm = next(m.cut(), prem.first, prem.second, m.transit(), std::move(parts));
      return LocalStep{StepKind::ChoiceSelect, {x}, nm, {nm}};
    }
    default: break;
  }
  stuck(m, "no reduction for forwarder " + f.str());
}

/// Parts whose outermost prefix acts on an endpoint outside the cut,
/// ordered by cut name.
inline std::vector<std::size_t> commute_candidates(const Process& m) {
  NameSet cut(m.cut().begin(), m.cut().end());
  std::vector<std::pair<Name, std::size_t>> c;
  for (std::size_t i = 0; i < m.parts().size(); ++i) {
    const Process& r = m.parts()[i];
    if (is_prefix(r) && !cut.contains(r.x())) c.push_back({m.cut()[i], i});
  }
  std::sort(c.begin(), c.end());
  std::vector<std::size_t> out;
  for (const auto& [_, i] : c) out.push_back(i);
  return out;
}

inline LocalStep commute(const Process& m, std::size_t i, const NameSet& avoid, NameSupply& supply) {
  const Process& r = m.parts()[i];
  const Name& w = r.x();
  const Name& xi = m.cut()[i];
  auto under = [&](const Process& body) { return with_part(m, i, body); };
  switch (r.kind()) {
    case ProcKind::Wait: {
      Process nm = under(r.p());
      return {StepKind::Commute, {w}, Process::wait(w, nm), {nm}};
    }
    case ProcKind::Recv: {
      Process nm = under(r.p());
      return {StepKind::Commute, {w}, Process::recv(w, r.y(), nm), {nm}};
    }
    case ProcKind::Inl:
    case ProcKind::Inr: {
      Process nm = under(r.p());
      Process out = r.kind() == ProcKind::Inl ? Process::inl(w, nm) : Process::inr(w, nm);
      return {StepKind::Commute, {w}, out, {nm}};
    }
    case ProcKind::Send: {
      NameSet fp = free_names(r.p());
      fp.erase(r.y());
      if (fp.contains(xi)) {
        Process nm = under(r.p());
        return {StepKind::Commute, {w}, Process::send(w, r.y(), nm, r.q()), {nm}};
      }
      Process nm = under(r.q());
      return {StepKind::Commute, {w}, Process::send(w, r.y(), r.p(), nm), {nm}};
    }
    case ProcKind::Case: {
      Process l = under(r.p());
      NameSet av = avoid;
      for (const auto& n : all_names(l)) av.insert(n);
      Process rr = rename_apart(under(r.q()), av, supply);
      return {StepKind::Commute, {w}, Process::case_(w, l, rr), {l, rr}};
    }
    default: break;
  }
  stuck(m, "cannot commute " + r.str());
}

inline LocalStep mcut_step(const Process& m, const NameSet& avoid, NameSupply& supply, const ReduceOptions& opt) {
  LocalStep st = [&] {
    if (auto p = principal(m)) return *p;
    auto cands = commute_candidates(m);
    if (cands.empty()) stuck(m, "no principal redex and no part to commute");
    return commute(m, cands[opt.commute_choice % cands.size()], avoid, supply);
  }();
  if (opt.check_measure) {
    Measure before = mcut_measure(m);
    for (const auto& c : st.continuing) {
      Measure after = mcut_measure(c);
      if (!(after < before))
        throw FwdError(make_error(ErrorKind::MeasureViolation,
                                  std::string(to_string(st.kind)) + " took the measure from " + before.str() +
                                      " to " + after.str(),
                                  m.str()));
    }
  }
  return st;
}

/// Reduces the leftmost innermost composition of `p`.
inline std::optional<LocalStep> reduce_innermost(const Process& p, const NameSet& avoid, NameSupply& supply,
                                                 const ReduceOptions& opt) {
  auto again = [&](const Process& q) { return reduce_innermost(q, avoid, supply, opt); };
  auto lift = [](LocalStep st, Process whole) {
    st.result = std::move(whole);
    return st;
  };
  switch (p.kind()) {
    case ProcKind::Link:
    case ProcKind::Close: return std::nullopt;
    case ProcKind::Wait:
      if (auto s = again(p.p())) return lift(*s, Process::wait(p.x(), s->result));
      return std::nullopt;
    case ProcKind::Recv:
      if (auto s = again(p.p())) return lift(*s, Process::recv(p.x(), p.y(), s->result));
      return std::nullopt;
    case ProcKind::Inl:
      if (auto s = again(p.p())) return lift(*s, Process::inl(p.x(), s->result));
      return std::nullopt;
    case ProcKind::Inr:
      if (auto s = again(p.p())) return lift(*s, Process::inr(p.x(), s->result));
      return std::nullopt;
    case ProcKind::Send:
      if (auto s = again(p.p())) return lift(*s, Process::send(p.x(), p.y(), s->result, p.q()));
      if (auto s = again(p.q())) return lift(*s, Process::send(p.x(), p.y(), p.p(), s->result));
      return std::nullopt;
    case ProcKind::Case:
      if (auto s = again(p.p())) return lift(*s, Process::case_(p.x(), s->result, p.q()));
      if (auto s = again(p.q())) return lift(*s, Process::case_(p.x(), p.p(), s->result));
      return std::nullopt;
    case ProcKind::MCut: {
      for (std::size_t i = 0; i < p.parts().size(); ++i)
        if (auto s = again(p.parts()[i])) return lift(*s, with_part(p, i, s->result));
      for (std::size_t j = 0; j < p.transit().size(); ++j)
        if (auto s = again(p.transit()[j].proc)) {
          auto ts = p.transit();
          ts[j].proc = s->result;
          return lift(*s, Process::mcut(p.cut(), p.p(), p.fwd_ctx(), std::move(ts), p.parts()));
        }
      return mcut_step(p, avoid, supply, opt);
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// One reduction of the leftmost innermost composition, or nothing when
/// the term is cut-free.
inline std::optional<TraceEntry> reduce_step(const Process& p, NameSupply& supply, const ReduceOptions& opt = {}) {
  auto st = detail::reduce_innermost(p, all_names(p), supply, opt);
  if (!st) return std::nullopt;
  return TraceEntry{st->kind, st->endpoints, st->result};
}

struct NormalizeOptions {
  /// Outer context for subject-reduction checks after every step.
  std::optional<CPContext> outer;
  ReduceOptions reduce;
  std::size_t max_steps = 100000;
  /// Varies the commute choice from step to step (for exploring orders).
  std::vector<std::size_t> commute_choices;
  std::uint64_t seed = 0;
};

/// Reduces until cut-free. Throws on Stuck, MeasureViolation, or a step
/// that breaks typing against the outer context.
inline std::pair<Process, RunTrace> normalize(const Process& p, const NormalizeOptions& opt = {}) {
  NameSupply supply(opt.seed);
  supply.reserve(all_names(p));
  Process cur = rename_apart(p, {}, supply);
  if (opt.outer) {
    auto r = check_cp(cur, *opt.outer);
    if (!r) throw FwdError(r.error());
  }
  RunTrace trace;
  for (std::size_t n = 0;; ++n) {
    if (n >= opt.max_steps) throw FwdError(make_error(ErrorKind::Stuck, "step limit reached", cur.str()));
    ReduceOptions ro = opt.reduce;
    if (n < opt.commute_choices.size()) ro.commute_choice = opt.commute_choices[n];
    auto e = reduce_step(cur, supply, ro);
    if (!e) break;
    cur = e->result;
    if (opt.outer) {
      auto r = check_cp(cur, *opt.outer);
      if (!r)
        throw FwdError(make_error(ErrorKind::TypeMismatch,
                                  std::string("subject reduction fails after ") + to_string(e->kind) + ": " +
                                      r.error().describe(),
                                  cur.str()));
    }
    trace.push_back(std::move(*e));
  }
  return {cur, std::move(trace)};
}

}  // namespace fwdlogic
