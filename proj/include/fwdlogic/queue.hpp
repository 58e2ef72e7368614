#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fwdlogic/name.hpp"
#include "fwdlogic/types.hpp"

namespace fwdlogic {

/// An in-transit item: a close token, a choice marker, or a received name.
struct QueuePayload {
  enum class Kind { Star, Left, Right, Msg };

  Kind kind = Kind::Star;
  Name name;       // Msg only
  PlainType type;  // Msg only

  static QueuePayload star() { return {Kind::Star, {}, {}}; }
  static QueuePayload left() { return {Kind::Left, {}, {}}; }
  static QueuePayload right() { return {Kind::Right, {}, {}}; }
  static QueuePayload msg(Name n, PlainType t) { return {Kind::Msg, std::move(n), std::move(t)}; }

  bool is_msg() const { return kind == Kind::Msg; }
  bool is_marker() const { return kind != Kind::Msg; }

  friend bool operator==(const QueuePayload& a, const QueuePayload& b) {
    if (a.kind != b.kind) return false;
    return a.kind != Kind::Msg || (a.name == b.name && a.type == b.type);
  }

  std::string str() const {
    switch (kind) {
      case Kind::Star: return "*";
      case Kind::Left: return "l";
      case Kind::Right: return "r";
      case Kind::Msg: return " " + name.str() + " : " + type.str();
    }
    return "?";
  }
};

struct QueueEntry {
  Name target;
  QueuePayload payload;

  std::string str() const { return "[" + target.str() + "]" + payload.str(); }
  friend bool operator==(const QueueEntry&, const QueueEntry&) = default;
};

/// Queue in canonical form: one FIFO per forwarding target. Entries with
/// distinct targets commute, so the per-target FIFOs are the whole content.
class Queue {
public:
  Queue() = default;

  /// Canonicalizes a raw entry sequence.
  static Queue from_entries(const std::vector<QueueEntry>& raw) {
    Queue q;
    for (const auto& e : raw) q = q.enqueue(e);
    return q;
  }

  Queue enqueue(const QueueEntry& e) const {
    Queue q = *this;
    q.fifos_[e.target].push_back(e.payload);
    return q;
  }

  /// Removes the head of the FIFO for `target`.
  std::optional<std::pair<QueuePayload, Queue>> dequeue_for(const Name& target) const {
    auto it = fifos_.find(target);
    if (it == fifos_.end()) return std::nullopt;
    Queue q = *this;
    auto& fifo = q.fifos_.at(target);
    QueuePayload head = fifo.front();
    fifo.erase(fifo.begin());
    if (fifo.empty()) q.fifos_.erase(target);
    return std::make_pair(std::move(head), std::move(q));
  }

  const QueuePayload* head_for(const Name& target) const {
    auto it = fifos_.find(target);
    return it == fifos_.end() ? nullptr : &it->second.front();
  }

  bool empty() const { return fifos_.empty(); }
  std::size_t length() const {
    std::size_t n = 0;
    for (const auto& [_, f] : fifos_) n += f.size();
    return n;
  }

  /// Entries in display order: targets ascending, FIFO order within a target.
  std::vector<QueueEntry> entries() const {
    std::vector<QueueEntry> out;
    for (const auto& [t, f] : fifos_)
      for (const auto& p : f) out.push_back({t, p});
    return out;
  }

  const std::map<Name, std::vector<QueuePayload>>& fifos() const { return fifos_; }

  /// The payload collection with brackets dropped.
  std::vector<QueuePayload> payloads() const {
    std::vector<QueuePayload> out;
    for (const auto& [_, f] : fifos_) out.insert(out.end(), f.begin(), f.end());
    return out;
  }

  std::string str() const {
    std::string s = "[";
    bool first = true;
    for (const auto& e : entries()) {
      if (!first) s += ", ";
      first = false;
      s += e.str();
    }
    return s + "]";
  }

  friend bool operator==(const Queue&, const Queue&) = default;

private:
  std::map<Name, std::vector<QueuePayload>> fifos_;
};

}  // namespace fwdlogic
