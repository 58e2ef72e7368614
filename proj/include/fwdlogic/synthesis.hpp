#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "fwdlogic/context.hpp"
#include "fwdlogic/forwarder_typing.hpp"
#include "fwdlogic/process.hpp"

namespace fwdlogic {

enum class AnnotationMode { Fixed, Infer };

struct SynthConfig {
  std::size_t max_depth = 0;  // 0: unbounded
  bool enumerate_all = false;
  std::size_t limit = 0;      // with enumerate_all; 0: no limit
  AnnotationMode mode = AnnotationMode::Fixed;
  bool allow_empty_gather = true;
  bool memo = true;
};

struct SynthResult {
  Process process;
  Context context;
  Derivation derivation;
};

namespace detail {

/// Search-side view of an endpoint: the plain remainder of its type, the
/// position of that remainder inside the original type, and its queue.
struct Slot {
  PlainType type;  // invalid once done
  std::string path;
  Queue queue;
  bool done() const { return !type.valid(); }
};

using SState = std::map<Name, Slot>;
/// Annotation per position "x/path"; One positions hold the gather list.
using Assignment = std::map<std::string, std::vector<Name>>;

inline std::string pos_key(const Name& x, const std::string& path) { return x.str() + "/" + path; }

inline void prefill(const AnnType& t, const Name& x, const std::string& path, Assignment& asg) {
  switch (t.conn()) {
    case Conn::Atom:
    case Conn::DualAtom: return;
    case Conn::One:
    case Conn::Bot: asg[pos_key(x, path)] = t.targets(); return;
    case Conn::Tensor:
    case Conn::Par:
      asg[pos_key(x, path)] = t.targets();
      prefill(t.right(), x, path + "R", asg);
      return;
    case Conn::Plus:
    case Conn::With:
      asg[pos_key(x, path)] = t.targets();
      prefill(t.ann_left(), x, path + "L", asg);
      prefill(t.right(), x, path + "R", asg);
      return;
  }
}

/// Rebuilds the annotated type at `path` from the assignment; positions the
/// search never reached inherit the nearest annotated ancestor's target.
inline AnnType rebuild(const PlainType& t, const Name& x, const std::string& path, const Assignment& asg,
                       const Name& fallback) {
  auto it = asg.find(pos_key(x, path));
  Name tgt = fallback;
  if (it != asg.end() && !it->second.empty()) tgt = it->second.front();
  switch (t.conn()) {
    case Conn::Atom: return AnnType::atom(t.atom_name());
    case Conn::DualAtom: return AnnType::dual_atom(t.atom_name());
    case Conn::One: return AnnType::one(it != asg.end() ? it->second : std::vector<Name>{fallback});
    case Conn::Bot: return AnnType::bot(tgt);
    case Conn::Tensor: return AnnType::tensor(t.left(), tgt, rebuild(t.right(), x, path + "R", asg, tgt));
    case Conn::Par: return AnnType::par(t.left(), tgt, rebuild(t.right(), x, path + "R", asg, tgt));
    case Conn::Plus:
      return AnnType::plus(rebuild(t.left(), x, path + "L", asg, tgt), tgt, rebuild(t.right(), x, path + "R", asg, tgt));
    case Conn::With:
      return AnnType::with(rebuild(t.left(), x, path + "L", asg, tgt), tgt, rebuild(t.right(), x, path + "R", asg, tgt));
  }
  return AnnType::atom(t.atom_name());
}

class SynthEngine {
public:
  using Cont = std::function<bool(const Process&)>;

  SynthEngine(const SynthConfig& cfg, NameSupply& supply) : cfg_(cfg), supply_(supply) {}

  Assignment asg;

  /// Calls k on every forwarder for `s` (in search order) until k returns true.
  bool search(const SState& s, std::size_t depth, const Cont& k) {
    if (cfg_.max_depth && depth > cfg_.max_depth) {
      truncated_ = true;
      return false;
    }
    std::string key;
    bool use_memo = cfg_.memo && !truncated_;
    if (use_memo) {
      key = state_key(s);
      if (failed_.contains(key)) return false;
    }
    bool invoked = false;
    Cont wrapped = [&](const Process& p) {
      invoked = true;
      return k(p);
    };
    if (expand(s, depth, wrapped)) return true;
    if (use_memo && !invoked && !truncated_) failed_.insert(key);
    return false;
  }

private:
  const SynthConfig& cfg_;
  NameSupply& supply_;
  std::unordered_set<std::string> failed_;
  bool truncated_ = false;

  // Sets a position for the duration of `body`, unless already set.
  template <class F>
  bool with_assignment(const std::string& pos, const std::vector<Name>& v, F&& body) {
    auto [it, inserted] = asg.emplace(pos, v);
    bool r = body();
    if (inserted) asg.erase(pos);
    return r;
  }

  std::vector<Name> choose_targets(const SState& s, const Name& x, const std::string& pos) {
    auto it = asg.find(pos);
    if (it != asg.end()) return {it->second.front()};
    std::vector<Name> out;
    for (const auto& [u, sl] : s)
      if (u != x && !sl.done()) out.push_back(u);
    return out;
  }

  std::vector<Name> sources(const SState& s, const Name& x, const std::string& pos,
                            const std::function<bool(const QueuePayload&)>& ok) {
    std::vector<Name> cands;
    auto it = asg.find(pos);
    if (it != asg.end()) {
      cands.push_back(it->second.front());
    } else {
      for (const auto& [u, _] : s)
        if (u != x) cands.push_back(u);
    }
    std::vector<Name> out;
    for (const auto& u : cands) {
      auto su = s.find(u);
      if (u == x || su == s.end()) continue;
      const QueuePayload* h = su->second.queue.head_for(x);
      if (h && ok(*h)) out.push_back(u);
    }
    return out;
  }

  std::string state_key(const SState& s) const {
    std::string key;
    std::map<Name, std::size_t> msg_ids;
    for (const auto& [x, sl] : s) {
      key += x.str();
      key += ':';
      if (sl.done()) {
        key += '.';
      } else {
        key += sl.type.str();
        positions_key(sl.type, x, sl.path, key);
      }
      for (const auto& [t, fifo] : sl.queue.fifos()) {
        key += '<' + t.str();
        for (const auto& p : fifo) {
          if (p.is_msg()) {
            key += "m:" + p.type.str();
          } else {
            key += p.str();
          }
        }
        key += '>';
      }
      key += ';';
    }
    return key;
  }

  void positions_key(const PlainType& t, const Name& x, const std::string& path, std::string& key) const {
    if (is_atomic(t.conn())) return;
    auto it = asg.find(pos_key(x, path));
    key += '{';
    if (it != asg.end()) key += join_names(it->second);
    key += '}';
    if (t.conn() == Conn::Tensor || t.conn() == Conn::Par) {
      positions_key(t.right(), x, path + "R", key);
    } else if (t.conn() == Conn::Plus || t.conn() == Conn::With) {
      positions_key(t.left(), x, path + "L", key);
      positions_key(t.right(), x, path + "R", key);
    }
  }

  Name fresh(const char* base) { return supply_.fresh(Name(base)); }

  bool expand(const SState& s, std::size_t depth, const Cont& k) {
    // Ax
    if (s.size() == 2) {
      const auto& [x, sx] = *s.begin();
      const auto& [y, sy] = *std::next(s.begin());
      if (!sx.done() && !sy.done() && is_atomic(sx.type.conn()) && sx.type == dual(sy.type) &&
          sx.queue.empty() && sy.queue.empty())
        if (k(Process::link(x, y))) return true;
    }
    // One
    for (const auto& [x, sx] : s) {
      if (sx.done() || sx.type.conn() != Conn::One || !sx.queue.empty()) continue;
      std::vector<Name> others;
      bool shape = true;
      for (const auto& [u, su] : s) {
        if (u == x) continue;
        others.push_back(u);
        const auto& f = su.queue.fifos();
        if (!su.done() || f.size() != 1 || !f.contains(x) || f.at(x).size() != 1 ||
            f.at(x).front().kind != QueuePayload::Kind::Star)
          shape = false;
      }
      if (!shape) continue;
      if (others.empty() && !cfg_.allow_empty_gather) continue;
      std::string pos = pos_key(x, sx.path);
      auto it = asg.find(pos);
      if (it != asg.end() && NameSet(it->second.begin(), it->second.end()) != NameSet(others.begin(), others.end()))
        continue;
      if (with_assignment(pos, others, [&] { return k(Process::close(x)); })) return true;
    }
    // Tensor
    for (const auto& [x, sx] : s) {
      if (sx.done() || sx.type.conn() != Conn::Tensor) continue;
      const PlainType a = sx.type.left();
      const PlainType da = dual(a);
      std::string pos = pos_key(x, sx.path);
      for (const auto& u : sources(s, x, pos, [&](const QueuePayload& h) { return h.is_msg() && h.type == da; })) {
        auto [item, rest] = *s.at(u).queue.dequeue_for(x);
        Name z = item.name;
        Name y = fresh("k");
        SState payload{{z, Slot{da, "", {}}}, {y, Slot{a, "", {}}}};
        Assignment saved = asg;
        prefill(annotate(da, y), z, "", asg);
        prefill(annotate(a, z), y, "", asg);
        SState next = s;
        next.at(u).queue = rest;
        next.at(x).type = sx.type.right();
        next.at(x).path = sx.path + "R";
        bool stop = with_assignment(pos, {u}, [&] {
          return search(payload, depth + 1, [&](const Process& pp) {
            return search(next, depth + 1, [&](const Process& qq) { return k(Process::send(x, y, pp, qq)); });
          });
        });
        asg = std::move(saved);
        if (stop) return true;
      }
    }
    // PlusL, PlusR
    for (bool left : {true, false}) {
      auto want = left ? QueuePayload::Kind::Left : QueuePayload::Kind::Right;
      for (const auto& [x, sx] : s) {
        if (sx.done() || sx.type.conn() != Conn::Plus) continue;
        std::string pos = pos_key(x, sx.path);
        for (const auto& u : sources(s, x, pos, [&](const QueuePayload& h) { return h.kind == want; })) {
          SState next = s;
          next.at(u).queue = s.at(u).queue.dequeue_for(x)->second;
          next.at(x).type = left ? sx.type.left() : sx.type.right();
          next.at(x).path = sx.path + (left ? "L" : "R");
          bool stop = with_assignment(pos, {u}, [&] {
            return search(next, depth + 1, [&](const Process& p) {
              return k(left ? Process::inl(x, p) : Process::inr(x, p));
            });
          });
          if (stop) return true;
        }
      }
    }
    // Par
    for (const auto& [x, sx] : s) {
      if (sx.done() || sx.type.conn() != Conn::Par) continue;
      std::string pos = pos_key(x, sx.path);
      for (const auto& u : choose_targets(s, x, pos)) {
        Name y = fresh("m");
        SState next = s;
        next.at(x).queue = sx.queue.enqueue({u, QueuePayload::msg(y, sx.type.left())});
        next.at(x).type = sx.type.right();
        next.at(x).path = sx.path + "R";
        bool stop = with_assignment(pos, {u}, [&] {
          return search(next, depth + 1, [&](const Process& p) { return k(Process::recv(x, y, p)); });
        });
        if (stop) return true;
      }
    }
    // Case
    for (const auto& [x, sx] : s) {
      if (sx.done() || sx.type.conn() != Conn::With) continue;
      std::string pos = pos_key(x, sx.path);
      for (const auto& u : choose_targets(s, x, pos)) {
        SState l = s, r = s;
        l.at(x).queue = sx.queue.enqueue({u, QueuePayload::left()});
        l.at(x).type = sx.type.left();
        l.at(x).path = sx.path + "L";
        r.at(x).queue = sx.queue.enqueue({u, QueuePayload::right()});
        r.at(x).type = sx.type.right();
        r.at(x).path = sx.path + "R";
        bool stop = with_assignment(pos, {u}, [&] {
          return search(l, depth + 1, [&](const Process& pl) {
            return search(r, depth + 1, [&](const Process& pr) { return k(Process::case_(x, pl, pr)); });
          });
        });
        if (stop) return true;
      }
    }
    // Bot
    for (const auto& [x, sx] : s) {
      if (sx.done() || sx.type.conn() != Conn::Bot) continue;
      std::string pos = pos_key(x, sx.path);
      for (const auto& u : choose_targets(s, x, pos)) {
        SState next = s;
        next.at(x).queue = sx.queue.enqueue({u, QueuePayload::star()});
        next.at(x).type = PlainType();
        bool stop = with_assignment(pos, {u}, [&] {
          return search(next, depth + 1, [&](const Process& p) { return k(Process::wait(x, p)); });
        });
        if (stop) return true;
      }
    }
    return false;
  }
};

inline std::vector<SynthResult> run_synth(const SState& root, Assignment prefilled,
                                          const std::map<Name, PlainType>& originals,
                                          const Context* fixed_ctx, const SynthConfig& cfg,
                                          NameSupply& supply) {
  SynthEngine eng(cfg, supply);
  eng.asg = std::move(prefilled);
  std::vector<SynthResult> out;
  ForwarderOptions fopt{cfg.allow_empty_gather};
  eng.search(root, 0, [&](const Process& p) {
    Context ctx;
    if (fixed_ctx) {
      ctx = *fixed_ctx;
    } else {
      Context::Map m;
      for (const auto& [x, t] : originals) {
        Name fb = x;
        for (const auto& [u, _] : originals)
          if (u != x) {
            fb = u;
            break;
          }
        m.emplace(x, EndpointState::active(rebuild(t, x, "", eng.asg, fb)));
      }
      ctx = Context(std::move(m));
    }
    auto d = check_forwarder(p, ctx, fopt);
    if (!d) throw FwdError(make_error(ErrorKind::IllFormed, "synthesized forwarder fails to check: " +
                                                                 d.error().describe(), judgement(p, ctx)));
    out.push_back({p, ctx, std::move(d).value()});
    if (!cfg.enumerate_all) return true;
    return cfg.limit && out.size() >= cfg.limit;
  });
  return out;
}

inline void reserve_context_names(const Context& g, NameSupply& supply) {
  NameSet all;
  for (const auto& n : g.names()) all.insert(n);
  for (const auto& n : g.msg_names()) all.insert(n);
  supply.reserve(all);
}

}  // namespace detail

/// Forwarders for a fully annotated context.
inline std::vector<SynthResult> synth_annotated(const Context& g, SynthConfig cfg, NameSupply& supply) {
  if (auto v = g.validate(); !v) throw FwdError(v.error());
  cfg.mode = AnnotationMode::Fixed;
  detail::reserve_context_names(g, supply);
  detail::SState root;
  detail::Assignment asg;
  for (const auto& [x, st] : g.map()) {
    detail::Slot sl{st.type ? erase(*st.type) : PlainType(), "", st.queue};
    if (st.type) detail::prefill(*st.type, x, "", asg);
    root.emplace(x, std::move(sl));
  }
  return detail::run_synth(root, std::move(asg), {}, &g, cfg, supply);
}

inline std::vector<SynthResult> synth_annotated(const Context& g, const SynthConfig& cfg = {}) {
  NameSupply supply;
  return synth_annotated(g, cfg, supply);
}

/// Forwarders for plain types, choosing the annotations during the search.
/// Each result carries the annotated context it was checked against.
inline std::vector<SynthResult> synth_plain(const CPContext& types, SynthConfig cfg, NameSupply& supply) {
  cfg.mode = AnnotationMode::Infer;
  NameSet names;
  detail::SState root;
  for (const auto& [x, t] : types) {
    names.insert(x);
    root.emplace(x, detail::Slot{t, "", {}});
  }
  supply.reserve(names);
  return detail::run_synth(root, {}, types, nullptr, cfg, supply);
}

inline std::vector<SynthResult> synth_plain(const CPContext& types, const SynthConfig& cfg = {}) {
  NameSupply supply;
  return synth_plain(types, cfg, supply);
}

}  // namespace fwdlogic
