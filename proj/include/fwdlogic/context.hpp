#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fwdlogic/error.hpp"
#include "fwdlogic/queue.hpp"
#include "fwdlogic/types.hpp"

namespace fwdlogic {

/// An endpoint's queue together with its remaining type, or no type once the
/// endpoint is done (it may still hold items to forward).
struct EndpointState {
  Queue queue;
  std::optional<AnnType> type;

  static EndpointState active(AnnType t, Queue q = {}) { return {std::move(q), std::move(t)}; }
  static EndpointState done(Queue q = {}) { return {std::move(q), std::nullopt}; }

  bool is_done() const { return !type.has_value(); }
  friend bool operator==(const EndpointState&, const EndpointState&) = default;
};

/// Plain CP typing context.
using CPContext = std::map<Name, PlainType>;

inline std::string to_string(const CPContext& c) {
  std::string s = "{";
  bool first = true;
  for (const auto& [n, t] : c) {
    s += first ? " " : ", ";
    first = false;
    s += n.str() + " : " + t.str();
  }
  return s + (first ? "}" : " }");
}

/// Forwarder typing context: endpoint name to queue and type-or-done.
class Context {
public:
  using Map = std::map<Name, EndpointState>;

  Context() = default;
  explicit Context(Map m) : map_(std::move(m)) {}

  /// Builds a context and checks closedness and name discipline.
  static Context make(Map m) {
    Context c(std::move(m));
    if (auto r = c.validate(); !r) throw FwdError(r.error());
    return c;
  }

  Result<Unit> validate() const {
    NameSet msg_names;
    for (const auto& [x, st] : map_) {
      NameSet targets;
      if (st.type) {
        collect_targets(*st.type, targets);
        if (st.type->conn() == Conn::One && st.type->targets().empty() && map_.size() > 1)
          return make_error(ErrorKind::IllFormed,
                            "endpoint " + x.str() + " has an empty 1-annotation", str());
      }
      for (const auto& e : st.queue.entries()) {
        targets.insert(e.target);
        if (e.payload.is_msg()) {
          if (map_.contains(e.payload.name) || !msg_names.insert(e.payload.name).second)
            return make_error(ErrorKind::DuplicateName,
                              "queued name " + e.payload.name.str() + " is not unique", str());
        }
      }
      for (const auto& t : targets) {
        if (!map_.contains(t))
          return make_error(ErrorKind::UnknownAnnotationTarget,
                            "endpoint " + x.str() + " refers to unknown endpoint " + t.str(), str());
        if (t == x)
          return make_error(ErrorKind::IllFormed, "endpoint " + x.str() + " targets itself", str());
      }
    }
    return Unit{};
  }

  const Map& map() const { return map_; }
  bool contains(const Name& x) const { return map_.contains(x); }
  const EndpointState& at(const Name& x) const { return map_.at(x); }
  std::size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }

  std::vector<Name> names() const {
    std::vector<Name> out;
    for (const auto& [n, _] : map_) out.push_back(n);
    return out;
  }

  /// Names of queued messages.
  NameSet msg_names() const {
    NameSet out;
    for (const auto& [_, st] : map_)
      for (const auto& p : st.queue.payloads())
        if (p.is_msg()) out.insert(p.name);
    return out;
  }

  Context set(const Name& x, EndpointState st) const {
    Context c = *this;
    c.map_.insert_or_assign(x, std::move(st));
    return c;
  }
  Context set_type(const Name& x, AnnType t) const {
    Context c = *this;
    c.map_.at(x).type = std::move(t);
    return c;
  }
  Context set_done(const Name& x) const {
    Context c = *this;
    c.map_.at(x).type.reset();
    return c;
  }
  Context set_queue(const Name& x, Queue q) const {
    Context c = *this;
    c.map_.at(x).queue = std::move(q);
    return c;
  }
  Context enqueue(const Name& x, const QueueEntry& e) const {
    return set_queue(x, map_.at(x).queue.enqueue(e));
  }
  Context erase(const Name& x) const {
    Context c = *this;
    c.map_.erase(x);
    return c;
  }

  /// Simultaneously renames endpoints, targets and queued names.
  Context rename(const std::map<Name, Name>& env) const {
    auto r = [&](const Name& n) {
      auto it = env.find(n);
      return it == env.end() ? n : it->second;
    };
    Map out;
    for (const auto& [x, st] : map_) {
      EndpointState ns;
      if (st.type) {
        AnnType t = *st.type;
        NameSet ts;
        collect_targets(t, ts);
        // two-phase through placeholders so swaps stay simultaneous
        std::map<Name, Name> back;
        std::size_t k = 0;
        for (const auto& n : ts)
          if (env.contains(n)) {
            Name tmp("%t" + std::to_string(k++));
            t = rename_targets(t, n, tmp);
            back.emplace(tmp, r(n));
          }
        for (const auto& [tmp, to] : back) t = rename_targets(t, tmp, to);
        ns.type = t;
      }
      for (auto e : st.queue.entries()) {
        e.target = r(e.target);
        if (e.payload.is_msg()) e.payload.name = r(e.payload.name);
        ns.queue = ns.queue.enqueue(e);
      }
      out.emplace(r(x), std::move(ns));
    }
    return Context(std::move(out));
  }

  Context rename(const Name& from, const Name& to) const { return rename({{from, to}}); }

  std::string str() const {
    std::string s = "{";
    bool first = true;
    for (const auto& [x, st] : map_) {
      s += first ? " " : ", ";
      first = false;
      s += x.str() + " : " + (st.type ? st.type->str() : std::string("."));
      if (!st.queue.empty()) s += " queue " + st.queue.str();
    }
    return s + (first ? "}" : " }");
  }

  /// Rendering with queued names replaced by positional placeholders, so two
  /// contexts differing only in bound message names share a key.
  std::string canonical_key() const {
    std::string s;
    std::size_t k = 0;
    for (const auto& [x, st] : map_) {
      s += x.str();
      s += ':';
      s += st.type ? st.type->str() : std::string(".");
      for (const auto& [t, fifo] : st.queue.fifos()) {
        s += '<' + t.str();
        for (const auto& p : fifo) s += p.is_msg() ? "m" + std::to_string(k++) + ":" + p.type.str() : p.str();
        s += '>';
      }
      s += ';';
    }
    return s;
  }

  friend bool operator==(const Context&, const Context&) = default;

private:
  Map map_;
};

/// Embedding into a CP context: active endpoints keep their erased type, done
/// endpoints vanish, queued names contribute their types, markers vanish.
inline Result<CPContext> erase_context(const Context& g) {
  CPContext out;
  auto bind = [&](const Name& n, const PlainType& t) -> bool { return out.emplace(n, t).second; };
  for (const auto& [x, st] : g.map()) {
    if (st.type && !bind(x, erase(*st.type)))
      return make_error(ErrorKind::DuplicateName, "name " + x.str() + " bound twice", g.str());
    for (const auto& p : st.queue.payloads())
      if (p.is_msg() && !bind(p.name, p.type))
        return make_error(ErrorKind::DuplicateName, "name " + p.name.str() + " bound twice", g.str());
  }
  return out;
}

/// Context whose endpoints carry A(x)-style uniform annotations and empty queues.
inline Context uniform_context(const std::vector<std::pair<Name, AnnType>>& entries) {
  Context::Map m;
  for (const auto& [n, t] : entries) m.emplace(n, EndpointState::active(t));
  return Context::make(std::move(m));
}

}  // namespace fwdlogic
