#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fwdlogic/context.hpp"
#include "fwdlogic/name.hpp"

namespace fwdlogic {

enum class ProcKind { Link, Close, Wait, Send, Recv, Inl, Inr, Case, MCut };

struct ProcNode;
struct Transit;

/// CP process term, extended with the multi-cut composition form. Immutable.
class Process {
public:
  Process() = default;

  static Process link(Name x, Name y);
  static Process close(Name x);
  static Process wait(Name x, Process body);
  /// out x[fresh](payload)(cont); `fresh` is bound in `payload` only.
  static Process send(Name x, Name fresh, Process payload, Process cont);
  static Process recv(Name x, Name bound, Process body);
  static Process inl(Name x, Process body);
  static Process inr(Name x, Process body);
  static Process case_(Name x, Process left, Process right);
  /// Composition of `parts` (part i owns cut endpoint cut[i]) through a
  /// forwarder typed by `fwd_ctx`, holding `transit` messages in flight.
  static Process mcut(std::vector<Name> cut, Process forwarder, Context fwd_ctx,
                      std::vector<Transit> transit, std::vector<Process> parts);

  bool valid() const { return node_ != nullptr; }
  ProcKind kind() const;
  const Name& x() const;
  const Name& y() const;
  /// Body of Wait/Recv/Inl/Inr, payload of Send, left branch of Case, forwarder of MCut.
  const Process& p() const;
  /// Continuation of Send, right branch of Case.
  const Process& q() const;
  const std::vector<Name>& cut() const;
  const Context& fwd_ctx() const;
  const std::vector<Transit>& transit() const;
  const std::vector<Process>& parts() const;

  std::size_t size() const;
  std::string str() const;

private:
  explicit Process(std::shared_ptr<const ProcNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ProcNode> node_;
};

struct Transit {
  Name name;
  Process proc;
};

struct ProcNode {
  ProcKind kind;
  Name x, y;
  Process p, q;
  std::vector<Name> cut;
  Context ctx;
  std::vector<Transit> transit;
  std::vector<Process> parts;
  std::size_t size = 1;
};

inline Process Process::link(Name x, Name y) {
  ProcNode n{ProcKind::Link, std::move(x), std::move(y), {}, {}, {}, {}, {}, {}, 1};
  return Process(std::make_shared<const ProcNode>(std::move(n)));
}
inline Process Process::close(Name x) {
  ProcNode n{ProcKind::Close, std::move(x), {}, {}, {}, {}, {}, {}, {}, 1};
  return Process(std::make_shared<const ProcNode>(std::move(n)));
}
inline Process Process::wait(Name x, Process body) {
  std::size_t sz = 1 + body.size();
  ProcNode n{ProcKind::Wait, std::move(x), {}, std::move(body), {}, {}, {}, {}, {}, sz};
  return Process(std::make_shared<const ProcNode>(std::move(n)));
}
inline Process Process::send(Name x, Name fresh, Process payload, Process cont) {
  std::size_t sz = 1 + payload.size() + cont.size();
  ProcNode n{ProcKind::Send, std::move(x), std::move(fresh), std::move(payload), std::move(cont), {}, {}, {}, {}, sz};
  return Process(std::make_shared<const ProcNode>(std::move(n)));
}
inline Process Process::recv(Name x, Name bound, Process body) {
  std::size_t sz = 1 + body.size();
  ProcNode n{ProcKind::Recv, std::move(x), std::move(bound), std::move(body), {}, {}, {}, {}, {}, sz};
  return Process(std::make_shared<const ProcNode>(std::move(n)));
}
inline Process Process::inl(Name x, Process body) {
  std::size_t sz = 1 + body.size();
  ProcNode n{ProcKind::Inl, std::move(x), {}, std::move(body), {}, {}, {}, {}, {}, sz};
  return Process(std::make_shared<const ProcNode>(std::move(n)));
}
inline Process Process::inr(Name x, Process body) {
  std::size_t sz = 1 + body.size();
  ProcNode n{ProcKind::Inr, std::move(x), {}, std::move(body), {}, {}, {}, {}, {}, sz};
  return Process(std::make_shared<const ProcNode>(std::move(n)));
}
inline Process Process::case_(Name x, Process left, Process right) {
  std::size_t sz = 1 + left.size() + right.size();
  ProcNode n{ProcKind::Case, std::move(x), {}, std::move(left), std::move(right), {}, {}, {}, {}, sz};
  return Process(std::make_shared<const ProcNode>(std::move(n)));
}
inline Process Process::mcut(std::vector<Name> cut, Process forwarder, Context fwd_ctx,
                             std::vector<Transit> transit, std::vector<Process> parts) {
  std::size_t sz = 1 + forwarder.size();
  for (const auto& t : transit) sz += t.proc.size();
  for (const auto& r : parts) sz += r.size();
  ProcNode n{ProcKind::MCut, {}, {}, std::move(forwarder), {}, std::move(cut), std::move(fwd_ctx),
             std::move(transit), std::move(parts), sz};
  return Process(std::make_shared<const ProcNode>(std::move(n)));
}

inline ProcKind Process::kind() const { return node_->kind; }
inline const Name& Process::x() const { return node_->x; }
inline const Name& Process::y() const { return node_->y; }
inline const Process& Process::p() const { return node_->p; }
inline const Process& Process::q() const { return node_->q; }
inline const std::vector<Name>& Process::cut() const { return node_->cut; }
inline const Context& Process::fwd_ctx() const { return node_->ctx; }
inline const std::vector<Transit>& Process::transit() const { return node_->transit; }
inline const std::vector<Process>& Process::parts() const { return node_->parts; }
inline std::size_t Process::size() const { return node_ ? node_->size : 0; }

inline std::string Process::str() const {
  if (!node_) return "<none>";
  switch (kind()) {
    case ProcKind::Link: return "fwd " + x().str() + " " + y().str();
    case ProcKind::Close: return "close " + x().str();
    case ProcKind::Wait: return "wait " + x().str() + ". " + p().str();
    case ProcKind::Send:
      return "out " + x().str() + "[" + y().str() + "](" + p().str() + ")(" + q().str() + ")";
    case ProcKind::Recv: return "in " + x().str() + "(" + y().str() + "). " + p().str();
    case ProcKind::Inl: return "inl " + x().str() + ". " + p().str();
    case ProcKind::Inr: return "inr " + x().str() + ". " + p().str();
    case ProcKind::Case: return "case " + x().str() + " (" + p().str() + ")(" + q().str() + ")";
    case ProcKind::MCut: {
      std::string s = "mcut [" + join_names(cut(), ", ") + "] fwd: " + p().str() +
                      " ctx: " + fwd_ctx().str() + " transit: [";
      for (std::size_t i = 0; i < transit().size(); ++i) {
        if (i) s += ", ";
        s += transit()[i].name.str() + " = " + transit()[i].proc.str();
      }
      s += "] parts: (";
      for (std::size_t i = 0; i < parts().size(); ++i) {
        if (i) s += " | ";
        s += parts()[i].str();
      }
      return s + ")";
    }
  }
  return "?";
}

/// Names bound by an MCut node: cut endpoints, done endpoints of the forwarder
/// context, and the queued (transit) names.
inline NameSet mcut_binders(const Process& m) {
  NameSet b(m.cut().begin(), m.cut().end());
  for (const auto& [x, st] : m.fwd_ctx().map())
    if (st.is_done()) b.insert(x);
  for (const auto& n : m.fwd_ctx().msg_names()) b.insert(n);
  return b;
}

/// Forwarder-context endpoints that are neither cut nor done; only the
/// identity composition (a single part linked to an outer name) has one.
inline std::vector<Name> mcut_open_endpoints(const Process& m) {
  NameSet cut(m.cut().begin(), m.cut().end());
  std::vector<Name> out;
  for (const auto& [x, st] : m.fwd_ctx().map())
    if (!st.is_done() && !cut.contains(x)) out.push_back(x);
  return out;
}

inline void free_names_into(const Process& p, NameSet& out) {
  switch (p.kind()) {
    case ProcKind::Link:
      out.insert(p.x());
      out.insert(p.y());
      return;
    case ProcKind::Close: out.insert(p.x()); return;
    case ProcKind::Wait:
    case ProcKind::Inl:
    case ProcKind::Inr:
      out.insert(p.x());
      free_names_into(p.p(), out);
      return;
    case ProcKind::Recv: {
      NameSet inner;
      free_names_into(p.p(), inner);
      inner.erase(p.y());
      out.insert(inner.begin(), inner.end());
      out.insert(p.x());
      return;
    }
    case ProcKind::Send: {
      NameSet inner;
      free_names_into(p.p(), inner);
      inner.erase(p.y());
      out.insert(inner.begin(), inner.end());
      out.insert(p.x());
      free_names_into(p.q(), out);
      return;
    }
    case ProcKind::Case:
      out.insert(p.x());
      free_names_into(p.p(), out);
      free_names_into(p.q(), out);
      return;
    case ProcKind::MCut: {
      NameSet inner;
      free_names_into(p.p(), inner);
      for (const auto& r : p.parts()) free_names_into(r, inner);
      for (const auto& t : p.transit()) {
        NameSet tn;
        free_names_into(t.proc, tn);
        tn.erase(t.name);
        inner.insert(tn.begin(), tn.end());
      }
      for (const auto& o : mcut_open_endpoints(p)) inner.insert(o);
      for (const auto& b : mcut_binders(p)) inner.erase(b);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

inline NameSet free_names(const Process& p) {
  NameSet out;
  free_names_into(p, out);
  return out;
}

/// Every name occurring in `p`, bound or free.
inline void all_names_into(const Process& p, NameSet& out) {
  switch (p.kind()) {
    case ProcKind::Link:
      out.insert(p.x());
      out.insert(p.y());
      return;
    case ProcKind::Close: out.insert(p.x()); return;
    case ProcKind::Wait:
    case ProcKind::Inl:
    case ProcKind::Inr: out.insert(p.x()); all_names_into(p.p(), out); return;
    case ProcKind::Recv:
      out.insert(p.x());
      out.insert(p.y());
      all_names_into(p.p(), out);
      return;
    case ProcKind::Send:
      out.insert(p.x());
      out.insert(p.y());
      all_names_into(p.p(), out);
      all_names_into(p.q(), out);
      return;
    case ProcKind::Case:
      out.insert(p.x());
      all_names_into(p.p(), out);
      all_names_into(p.q(), out);
      return;
    case ProcKind::MCut:
      for (const auto& n : p.fwd_ctx().names()) out.insert(n);
      for (const auto& n : p.fwd_ctx().msg_names()) out.insert(n);
      all_names_into(p.p(), out);
      for (const auto& t : p.transit()) {
        out.insert(t.name);
        all_names_into(t.proc, out);
      }
      for (const auto& r : p.parts()) all_names_into(r, out);
      return;
  }
}

inline NameSet all_names(const Process& p) {
  NameSet out;
  all_names_into(p, out);
  return out;
}

inline bool contains_mcut(const Process& p) {
  switch (p.kind()) {
    case ProcKind::Link:
    case ProcKind::Close: return false;
    case ProcKind::Wait:
    case ProcKind::Recv:
    case ProcKind::Inl:
    case ProcKind::Inr: return contains_mcut(p.p());
    case ProcKind::Send:
    case ProcKind::Case: return contains_mcut(p.p()) || contains_mcut(p.q());
    case ProcKind::MCut: return true;
  }
  return false;
}

namespace detail {

using Env = std::map<Name, Name>;

inline Name lookup(const Env& env, const Name& n) {
  auto it = env.find(n);
  return it == env.end() ? n : it->second;
}

/// Rebuilds `p` with every binder renamed by `pick` and free occurrences
/// mapped through `env`.
template <class Pick>
Process rebind(const Process& p, const Env& env, Pick& pick) {
  switch (p.kind()) {
    case ProcKind::Link: {
      return Process::link(lookup(env, p.x()), lookup(env, p.y()));
    }
    case ProcKind::Close: return Process::close(lookup(env, p.x()));
    case ProcKind::Wait: return Process::wait(lookup(env, p.x()), rebind(p.p(), env, pick));
    case ProcKind::Inl: return Process::inl(lookup(env, p.x()), rebind(p.p(), env, pick));
    case ProcKind::Inr: return Process::inr(lookup(env, p.x()), rebind(p.p(), env, pick));
    case ProcKind::Case:
      return Process::case_(lookup(env, p.x()), rebind(p.p(), env, pick), rebind(p.q(), env, pick));
    case ProcKind::Recv: {
      Name b = pick(p.y());
      Env inner = env;
      inner.insert_or_assign(p.y(), b);
      return Process::recv(lookup(env, p.x()), b, rebind(p.p(), inner, pick));
    }
    case ProcKind::Send: {
      Name b = pick(p.y());
      Env inner = env;
      inner.insert_or_assign(p.y(), b);
      Process payload = rebind(p.p(), inner, pick);
      return Process::send(lookup(env, p.x()), b, std::move(payload), rebind(p.q(), env, pick));
    }
    case ProcKind::MCut: {
      Env inner = env;
      // Binders in a fixed order: cut list, then done endpoints, then queued names.
      std::vector<Name> order(p.cut().begin(), p.cut().end());
      for (const auto& [x, st] : p.fwd_ctx().map())
        if (st.is_done()) order.push_back(x);
      for (const auto& e : [&] {
             std::vector<Name> ms;
             for (const auto& [_, st] : p.fwd_ctx().map())
               for (const auto& pl : st.queue.payloads())
                 if (pl.is_msg()) ms.push_back(pl.name);
             return ms;
           }())
        order.push_back(e);
      NameSet seen;
      for (const auto& b : order)
        if (seen.insert(b).second) inner.insert_or_assign(b, pick(b));
      Env ctx_env;
      for (const auto& n : p.fwd_ctx().names()) ctx_env.emplace(n, lookup(inner, n));
      for (const auto& n : p.fwd_ctx().msg_names()) ctx_env.emplace(n, lookup(inner, n));
      std::vector<Name> cut;
      for (const auto& c : p.cut()) cut.push_back(lookup(inner, c));
      std::vector<Transit> transit;
      for (const auto& t : p.transit())
        transit.push_back({lookup(inner, t.name), rebind(t.proc, inner, pick)});
      std::vector<Process> parts;
      for (const auto& r : p.parts()) parts.push_back(rebind(r, inner, pick));
      Process fwd = rebind(p.p(), inner, pick);
      return Process::mcut(std::move(cut), std::move(fwd), p.fwd_ctx().rename(ctx_env),
                           std::move(transit), std::move(parts));
    }
  }
  return p;
}

}  // namespace detail

/// Renames free occurrences of names per `env`. A binder is kept unless it
/// would capture one of the new names, in which case it gets a fresh name.
inline Process substitute(const Process& p, const std::map<Name, Name>& env) {
  NameSet targets, avoid = all_names(p);
  for (const auto& [from, to] : env) {
    targets.insert(to);
    avoid.insert(from);
    avoid.insert(to);
  }
  NameSupply supply;
  auto pick = [&](const Name& b) {
    if (!targets.contains(b)) return b;
    Name f = supply.fresh(b, avoid);
    avoid.insert(f);
    return f;
  };
  return detail::rebind(p, env, pick);
}

inline Process substitute(const Process& p, const Name& from, const Name& to) {
  return substitute(p, std::map<Name, Name>{{from, to}});
}

/// Alpha-renames bound names so they are pairwise distinct and avoid both
/// `avoid` and the free names of `p`. Binders already apart are kept.
inline Process rename_apart(const Process& p, const NameSet& avoid, NameSupply& supply) {
  NameSet taken = avoid;
  for (const auto& n : free_names(p)) taken.insert(n);
  auto pick = [&](const Name& b) {
    if (!taken.contains(b)) {
      taken.insert(b);
      return b;
    }
    NameSet all = taken;
    for (const auto& n : all_names(p)) all.insert(n);
    Name f = supply.fresh(b, all);
    taken.insert(f);
    return f;
  };
  return detail::rebind(p, {}, pick);
}

inline Process rename_apart(const Process& p, const NameSet& avoid = {}) {
  NameSupply supply;
  return rename_apart(p, avoid, supply);
}

/// Canonical representative of the alpha-class: binders numbered in
/// traversal order, links oriented by name.
inline Process canonical_form(const Process& p) {
  std::size_t k = 0;
  auto pick = [&](const Name&) { return Name("%" + std::to_string(k++)); };
  Process r = detail::rebind(p, {}, pick);
  struct Orient {
    static Process go(const Process& q) {
      switch (q.kind()) {
        case ProcKind::Link:
          return q.y() < q.x() ? Process::link(q.y(), q.x()) : q;
        case ProcKind::Close: return q;
        case ProcKind::Wait: return Process::wait(q.x(), go(q.p()));
        case ProcKind::Inl: return Process::inl(q.x(), go(q.p()));
        case ProcKind::Inr: return Process::inr(q.x(), go(q.p()));
        case ProcKind::Recv: return Process::recv(q.x(), q.y(), go(q.p()));
        case ProcKind::Send: return Process::send(q.x(), q.y(), go(q.p()), go(q.q()));
        case ProcKind::Case: return Process::case_(q.x(), go(q.p()), go(q.q()));
        case ProcKind::MCut: {
          std::vector<Transit> ts;
          for (const auto& t : q.transit()) ts.push_back({t.name, go(t.proc)});
          std::vector<Process> ps;
          for (const auto& r : q.parts()) ps.push_back(go(r));
          return Process::mcut(q.cut(), go(q.p()), q.fwd_ctx(), std::move(ts), std::move(ps));
        }
      }
      return q;
    }
  };
  return Orient::go(r);
}

/// Equality up to consistent renaming of bound names; links are symmetric.
inline bool alpha_eq(const Process& a, const Process& b) {
  if (a.size() != b.size()) return false;
  return canonical_form(a).str() == canonical_form(b).str();
}

}  // namespace fwdlogic
