#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "fwdlogic/context.hpp"
#include "fwdlogic/error.hpp"

namespace fwdlogic {

/// Transition labels of the type-context semantics. Printed as
/// x*u (par), x@u (tensor), x1u (bot), x#[u,v] (one), x<->y (axiom).
struct Label {
  enum class Kind { Par, Tensor, Bot, One, Ax };
  Kind kind;
  Name x;
  Name u;                // Par/Tensor/Bot target, Ax partner
  std::vector<Name> us;  // One

  static Label par(Name x, Name u) { return {Kind::Par, std::move(x), std::move(u), {}}; }
  static Label tensor(Name x, Name u) { return {Kind::Tensor, std::move(x), std::move(u), {}}; }
  static Label bot(Name x, Name u) { return {Kind::Bot, std::move(x), std::move(u), {}}; }
  static Label one(Name x, std::vector<Name> us) { return {Kind::One, x, x, std::move(us)}; }
  static Label ax(Name x, Name y) { return {Kind::Ax, std::move(x), std::move(y), {}}; }

  std::string str() const {
    switch (kind) {
      case Kind::Par: return x.str() + "*" + u.str();
      case Kind::Tensor: return x.str() + "@" + u.str();
      case Kind::Bot: return x.str() + "1" + u.str();
      case Kind::One: return x.str() + "#[" + join_names(us) + "]";
      case Kind::Ax: return x.str() + "<->" + u.str();
    }
    return "?";
  }

  friend bool operator==(const Label&, const Label&) = default;
};

inline std::string path_str(const std::vector<Label>& path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) s += (i ? ", " : "") + path[i].str();
  return s;
}

/// Successor state; no context once the run reached the success state.
struct Transition {
  Label label;
  std::optional<Context> next;
  bool success() const { return !next.has_value(); }
};

inline Result<Unit> require_multiplicative(const Context& g) {
  for (const auto& [x, st] : g.map()) {
    if (st.type && !is_multiplicative(*st.type))
      return make_error(ErrorKind::NonMultiplicative, "endpoint " + x.str() + " has an additive type", g.str());
    for (const auto& p : st.queue.payloads())
      if (p.kind == QueuePayload::Kind::Left || p.kind == QueuePayload::Kind::Right ||
          (p.is_msg() && !is_multiplicative(p.type)))
        return make_error(ErrorKind::NonMultiplicative, "queue of " + x.str() + " holds additive material", g.str());
  }
  return Unit{};
}

/// All enabled transitions, in label order: axiom, one, tensor, par, bot;
/// endpoints ascending within each kind.
inline Result<std::vector<Transition>> step(const Context& g, NameSupply& supply) {
  if (auto r = require_multiplicative(g); !r) return r.error();
  std::vector<Transition> out;
  const auto& m = g.map();

  if (m.size() == 2) {
    const auto& [x, sx] = *m.begin();
    const auto& [y, sy] = *std::next(m.begin());
    if (sx.type && sy.type && is_atomic(sx.type->conn()) && erase(*sx.type) == dual(erase(*sy.type)) &&
        sx.queue.empty() && sy.queue.empty())
      out.push_back({Label::ax(x, y), std::nullopt});
  }
  for (const auto& [x, sx] : m) {
    if (!sx.type || sx.type->conn() != Conn::One || !sx.queue.empty()) continue;
    NameSet others;
    bool shape = true;
    for (const auto& [u, su] : m) {
      if (u == x) continue;
      others.insert(u);
      const auto& f = su.queue.fifos();
      if (su.type || f.size() != 1 || !f.contains(x) || f.at(x).size() != 1 ||
          f.at(x).front().kind != QueuePayload::Kind::Star)
        shape = false;
    }
    const auto& us = sx.type->targets();
    if (shape && NameSet(us.begin(), us.end()) == others) out.push_back({Label::one(x, us), std::nullopt});
  }
  for (const auto& [x, sx] : m) {
    if (!sx.type || sx.type->conn() != Conn::Tensor) continue;
    const Name& u = sx.type->target();
    if (u == x || !m.contains(u)) continue;
    auto r = m.at(u).queue.dequeue_for(x);
    if (!r || !r->first.is_msg() || r->first.type != dual(sx.type->plain_left())) continue;
    out.push_back({Label::tensor(x, u), g.set_queue(u, r->second).set_type(x, sx.type->right())});
  }
  for (const auto& [x, sx] : m) {
    if (!sx.type || sx.type->conn() != Conn::Par) continue;
    const Name& u = sx.type->target();
    NameSet avoid;
    for (const auto& n : g.names()) avoid.insert(n);
    for (const auto& n : g.msg_names()) avoid.insert(n);
    Name y = supply.fresh(Name("m"), avoid);
    out.push_back({Label::par(x, u),
                   g.enqueue(x, {u, QueuePayload::msg(y, sx.type->plain_left())}).set_type(x, sx.type->right())});
  }
  for (const auto& [x, sx] : m) {
    if (!sx.type || sx.type->conn() != Conn::Bot) continue;
    const Name& u = sx.type->target();
    out.push_back({Label::bot(x, u), g.set_done(x).enqueue(x, {u, QueuePayload::star()})});
  }
  return out;
}

inline Result<std::vector<Transition>> step(const Context& g) {
  NameSupply supply;
  return step(g, supply);
}

/// Replays `path` from `g` and checks the four liveness conditions on the
/// queue items it creates: every message is forwarded to its target, every
/// close token ends at the final gather with its source listed, and the run
/// ends with the closing step of the endpoint typed 1 (or an axiom).
inline bool is_live_path(const Context& g, const std::vector<Label>& path) {
  if (path.empty()) return false;
  struct Item {
    Name source, target;
    bool star;
    bool consumed = false;
  };
  std::vector<Item> items;
  // pre-existing queue content counts as enqueued before the path starts
  for (const auto& [x, st] : g.map())
    for (const auto& e : st.queue.entries())
      items.push_back({x, e.target, e.payload.kind == QueuePayload::Kind::Star});

  NameSupply supply;
  Context cur = g;
  for (std::size_t i = 0; i < path.size(); ++i) {
    auto ts = step(cur, supply);
    if (!ts) return false;
    const Transition* chosen = nullptr;
    for (const auto& t : *ts)
      if (t.label == path[i]) chosen = &t;
    if (!chosen) return false;
    const Label& l = path[i];
    bool last = i + 1 == path.size();
    if (chosen->success() != last) return false;
    switch (l.kind) {
      case Label::Kind::Par: items.push_back({l.x, l.u, false}); break;
      case Label::Kind::Bot: items.push_back({l.x, l.u, true}); break;
      case Label::Kind::Tensor: {
        // the oldest pending message from u to x
        for (auto& it : items)
          if (!it.consumed && !it.star && it.source == l.u && it.target == l.x) {
            it.consumed = true;
            break;
          }
        break;
      }
      case Label::Kind::One: {
        NameSet us(l.us.begin(), l.us.end());
        for (auto& it : items)
          if (!it.consumed && it.star && it.target == l.x && us.contains(it.source)) it.consumed = true;
        break;
      }
      case Label::Kind::Ax: break;
    }
    if (!last) cur = *chosen->next;
  }
  for (const auto& it : items)
    if (!it.consumed) return false;
  auto k = path.back().kind;
  return k == Label::Kind::One || k == Label::Kind::Ax;
}

namespace detail {

inline bool live_dfs(const Context& g, NameSupply& supply, std::vector<Label>& path,
                     std::unordered_set<std::string>& dead) {
  std::string key = g.canonical_key();
  if (dead.contains(key)) return false;
  auto ts = step(g, supply);
  for (const auto& t : *ts) {
    path.push_back(t.label);
    if (t.success()) return true;
    if (live_dfs(*t.next, supply, path, dead)) return true;
    path.pop_back();
  }
  dead.insert(key);
  return false;
}

}  // namespace detail

/// A witness path to success satisfying the liveness conditions, if any.
inline Result<std::optional<std::vector<Label>>> live_path(const Context& g, std::uint64_t seed = 0) {
  if (auto r = require_multiplicative(g); !r) return r.error();
  if (auto v = g.validate(); !v) return v.error();
  NameSupply supply(seed);
  NameSet taken;
  for (const auto& n : g.names()) taken.insert(n);
  for (const auto& n : g.msg_names()) taken.insert(n);
  supply.reserve(taken);
  std::vector<Label> path;
  std::unordered_set<std::string> dead;
  if (!detail::live_dfs(g, supply, path, dead)) return std::optional<std::vector<Label>>{};
  if (!is_live_path(g, path))
    throw FwdError(make_error(ErrorKind::IllFormed, "path to success violates liveness: " + path_str(path), g.str()));
  return std::optional<std::vector<Label>>{path};
}

inline bool live_path_exists(const Context& g) {
  auto r = live_path(g);
  return r.ok() && r->has_value();
}

}  // namespace fwdlogic
