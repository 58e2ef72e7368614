#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fwdlogic/context.hpp"
#include "fwdlogic/error.hpp"
#include "fwdlogic/process.hpp"

namespace fwdlogic {

enum class FwdRule { Ax, One, Bot, Tensor, Par, PlusL, PlusR, With };

inline const char* to_string(FwdRule r) {
  switch (r) {
    case FwdRule::Ax: return "Ax";
    case FwdRule::One: return "One";
    case FwdRule::Bot: return "Bot";
    case FwdRule::Tensor: return "Tensor";
    case FwdRule::Par: return "Par";
    case FwdRule::PlusL: return "PlusL";
    case FwdRule::PlusR: return "PlusR";
    case FwdRule::With: return "With";
  }
  return "?";
}

/// Proof tree of P |- Gamma. Tensor nodes hold [payload, continuation];
/// With nodes hold [left branch, right branch].
struct Derivation {
  FwdRule rule;
  Name endpoint;
  std::vector<Name> targets;
  /// Tensor/Plus: whether the endpoint whose queue was read had finished.
  bool source_done = false;
  Process process;
  Context conclusion;
  std::vector<Derivation> premises;

  std::size_t node_count() const {
    std::size_t n = 1;
    for (const auto& d : premises) n += d.node_count();
    return n;
  }
};

/// "Par@x, Par@y, Tensor@y(Ax), ..." -- the continuation spine with payload
/// derivations folded into parentheses and With branches into braces.
inline std::vector<std::string> rule_trace(const Derivation& d) {
  std::vector<std::string> out;
  const Derivation* cur = &d;
  for (;;) {
    std::string s = std::string(to_string(cur->rule));
    if (cur->rule != FwdRule::Ax) s += "@" + cur->endpoint.str();
    auto join = [](const std::vector<std::string>& v) {
      std::string r;
      for (std::size_t i = 0; i < v.size(); ++i) r += (i ? ", " : "") + v[i];
      return r;
    };
    if (cur->rule == FwdRule::Tensor) {
      s += "(" + join(rule_trace(cur->premises[0])) + ")";
      out.push_back(s);
      cur = &cur->premises[1];
      continue;
    }
    if (cur->rule == FwdRule::With) {
      s += "{" + join(rule_trace(cur->premises[0])) + " | " + join(rule_trace(cur->premises[1])) + "}";
      out.push_back(s);
      break;
    }
    out.push_back(s);
    if (cur->premises.empty()) break;
    cur = &cur->premises[0];
  }
  return out;
}

struct ForwarderOptions {
  /// Accept `close x` against a lone x : 1 with an empty gather list.
  bool allow_empty_gather = true;
};

/// One rule application read off the head of a forwarder term.
struct RuleStep {
  FwdRule rule;
  Name endpoint;
  std::vector<Name> targets;
  bool source_done = false;
  std::vector<std::pair<Process, Context>> premises;
};

inline std::string judgement(const Process& p, const Context& g) { return p.str() + " |- " + g.str(); }

/// Applies the unique rule dictated by the outermost prefix of `p`.
inline Result<RuleStep> forwarder_step(const Process& p, const Context& g,
                                       const ForwarderOptions& opt = {}) {
  auto fail = [&](ErrorKind k, std::string msg) -> Error { return make_error(k, std::move(msg), judgement(p, g)); };

  auto fresh_ok = [&](const Name& y) { return !g.contains(y) && !g.msg_names().contains(y); };

  auto active = [&](const Name& x, Conn want, const char* what) -> Result<AnnType> {
    if (!g.contains(x)) return fail(ErrorKind::UnknownEndpoint, "no endpoint " + x.str());
    const auto& st = g.at(x);
    if (st.is_done()) return fail(ErrorKind::RuleMismatch, std::string(what) + " on finished endpoint " + x.str());
    if (st.type->conn() != want)
      return fail(ErrorKind::RuleMismatch, std::string(what) + " on " + x.str() + " : " + st.type->str());
    return *st.type;
  };

  // Reads the head of u's queue addressed to x.
  auto take = [&](const Name& u, const Name& x) -> Result<std::pair<QueuePayload, Queue>> {
    if (u == x) return fail(ErrorKind::WrongTarget, "endpoint " + x.str() + " targets itself");
    if (!g.contains(u)) return fail(ErrorKind::UnknownEndpoint, "no endpoint " + u.str());
    const Queue& q = g.at(u).queue;
    if (q.empty()) return fail(ErrorKind::EmptyQueue, "queue of " + u.str() + " is empty");
    auto r = q.dequeue_for(x);
    if (!r)
      return fail(ErrorKind::WrongTarget,
                  "queue of " + u.str() + " holds nothing for " + x.str() + ": " + q.str());
    return *r;
  };

  switch (p.kind()) {
    case ProcKind::Link: {
      const Name &x = p.x(), &y = p.y();
      for (const auto& n : {x, y})
        if (!g.contains(n)) return fail(ErrorKind::UnknownEndpoint, "no endpoint " + n.str());
      if (x == y) return fail(ErrorKind::RuleMismatch, "link of an endpoint to itself");
      if (g.size() != 2) return fail(ErrorKind::Unclosed, "axiom leaves other endpoints open");
      const auto &sx = g.at(x), &sy = g.at(y);
      if (sx.is_done() || sy.is_done()) return fail(ErrorKind::RuleMismatch, "axiom on a finished endpoint");
      if (!sx.queue.empty() || !sy.queue.empty())
        return fail(ErrorKind::ResidualQueue, "axiom with pending queue items");
      if (!is_atomic(sx.type->conn()) || !is_atomic(sy.type->conn()))
        return fail(ErrorKind::NonAtomicLink, "axiom on non-atomic types");
      if (erase(*sx.type) != dual(erase(*sy.type)))
        return fail(ErrorKind::RuleMismatch, "axiom on non-dual atoms " + sx.type->str() + ", " + sy.type->str());
      return RuleStep{FwdRule::Ax, sx.type->conn() == Conn::DualAtom ? x : y, {x, y}, false, {}};
    }
    case ProcKind::Close: {
      const Name& x = p.x();
      auto t = active(x, Conn::One, "close");
      if (!t) return t.error();
      if (!g.at(x).queue.empty()) return fail(ErrorKind::ResidualQueue, "closing endpoint " + x.str() + " has a queue");
      NameSet others;
      for (const auto& [u, st] : g.map()) {
        if (u == x) continue;
        others.insert(u);
        if (!st.is_done()) return fail(ErrorKind::Unclosed, "endpoint " + u.str() + " is still active");
        for (const auto& [tgt, fifo] : st.queue.fifos()) {
          for (const auto& item : fifo)
            if (!(item.kind == QueuePayload::Kind::Star))
              return fail(ErrorKind::ResidualQueue, "endpoint " + u.str() + " still holds " + st.queue.str());
          if (tgt != x)
            return fail(ErrorKind::WrongTarget, "close token of " + u.str() + " is addressed to " + tgt.str());
          if (fifo.size() != 1)
            return fail(ErrorKind::ResidualQueue, "endpoint " + u.str() + " holds several close tokens");
        }
        if (!st.queue.head_for(x))
          return fail(ErrorKind::WrongTarget, "endpoint " + u.str() + " has no close token for " + x.str());
      }
      const auto& us = t->targets();
      if (NameSet(us.begin(), us.end()) != others)
        return fail(ErrorKind::WrongTarget, "1-annotation [" + join_names(us) + "] does not match the finished endpoints");
      if (us.empty() && !opt.allow_empty_gather)
        return fail(ErrorKind::IllFormed, "empty gather list");
      return RuleStep{FwdRule::One, x, us, false, {}};
    }
    case ProcKind::Wait: {
      const Name& x = p.x();
      auto t = active(x, Conn::Bot, "wait");
      if (!t) return t.error();
      const Name& u = t->target();
      Context next = g.set_done(x).enqueue(x, {u, QueuePayload::star()});
      return RuleStep{FwdRule::Bot, x, {u}, false, {{p.p(), std::move(next)}}};
    }
    case ProcKind::Recv: {
      const Name& x = p.x();
      auto t = active(x, Conn::Par, "input");
      if (!t) return t.error();
      if (!fresh_ok(p.y())) return fail(ErrorKind::DuplicateName, "bound name " + p.y().str() + " clashes");
      const Name& u = t->target();
      Context next = g.enqueue(x, {u, QueuePayload::msg(p.y(), t->plain_left())}).set_type(x, t->right());
      return RuleStep{FwdRule::Par, x, {u}, false, {{p.p(), std::move(next)}}};
    }
    case ProcKind::Send: {
      const Name& x = p.x();
      const Name& y = p.y();
      auto t = active(x, Conn::Tensor, "output");
      if (!t) return t.error();
      if (!fresh_ok(y)) return fail(ErrorKind::DuplicateName, "bound name " + y.str() + " clashes");
      const Name& u = t->target();
      auto head = take(u, x);
      if (!head) return head.error();
      const auto& [item, rest] = *head;
      const PlainType& a = t->plain_left();
      if (!item.is_msg())
        return fail(ErrorKind::WrongTarget, "queue of " + u.str() + " offers " + item.str() + " instead of a message");
      if (item.type != dual(a))
        return fail(ErrorKind::WrongTarget, "queued " + item.name.str() + " : " + item.type.str() +
                                                " is not dual to " + a.str());
      const Name& z = item.name;
      if (z == y) return fail(ErrorKind::DuplicateName, "bound name " + y.str() + " clashes");
      Context payload = Context::make({{z, EndpointState::active(annotate(dual(a), y))},
                                       {y, EndpointState::active(annotate(a, z))}});
      Context next = g.set_queue(u, rest).set_type(x, t->right());
      return RuleStep{FwdRule::Tensor, x, {u}, g.at(u).is_done(),
                      {{p.p(), std::move(payload)}, {p.q(), std::move(next)}}};
    }
    case ProcKind::Inl:
    case ProcKind::Inr: {
      const Name& x = p.x();
      bool left = p.kind() == ProcKind::Inl;
      auto t = active(x, Conn::Plus, left ? "inl" : "inr");
      if (!t) return t.error();
      const Name& u = t->target();
      auto head = take(u, x);
      if (!head) return head.error();
      const auto& [item, rest] = *head;
      auto want = left ? QueuePayload::Kind::Left : QueuePayload::Kind::Right;
      if (item.kind != want)
        return fail(ErrorKind::WrongTarget, "queue of " + u.str() + " offers " + item.str() + " for " + x.str());
      Context next = g.set_queue(u, rest).set_type(x, left ? t->ann_left() : t->right());
      return RuleStep{left ? FwdRule::PlusL : FwdRule::PlusR, x, {u}, g.at(u).is_done(),
                      {{p.p(), std::move(next)}}};
    }
    case ProcKind::Case: {
      const Name& x = p.x();
      auto t = active(x, Conn::With, "case");
      if (!t) return t.error();
      const Name& u = t->target();
      Context l = g.enqueue(x, {u, QueuePayload::left()}).set_type(x, t->ann_left());
      Context r = g.enqueue(x, {u, QueuePayload::right()}).set_type(x, t->right());
      return RuleStep{FwdRule::With, x, {u}, false, {{p.p(), std::move(l)}, {p.q(), std::move(r)}}};
    }
    case ProcKind::MCut:
      return fail(ErrorKind::RuleMismatch, "a composition is not a forwarder");
  }
  return fail(ErrorKind::RuleMismatch, "unknown process form");
}

/// Checks P |- Gamma. Every rule application is forced by the term, so the
/// descent never backtracks.
inline Result<Derivation> check_forwarder(const Process& p, const Context& g,
                                          const ForwarderOptions& opt = {}) {
  auto step = forwarder_step(p, g, opt);
  if (!step) return step.error();
  Derivation d{step->rule, step->endpoint, step->targets, step->source_done, p, g, {}};
  for (const auto& [sub, ctx] : step->premises) {
    auto r = check_forwarder(sub, ctx, opt);
    if (!r) return r.error();
    d.premises.push_back(std::move(r).value());
  }
  return d;
}

/// Termination measure: type material weighs 2 per node, queued message types
/// 1 per node, markers 1. Strictly decreases from conclusion to premises.
inline std::size_t context_measure(const Context& g) {
  std::size_t m = 0;
  for (const auto& [_, st] : g.map()) {
    if (st.type) m += 2 * st.type->size();
    for (const auto& p : st.queue.payloads()) m += p.is_msg() ? p.type.size() : 1;
  }
  return m;
}

}  // namespace fwdlogic
