#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "fwdlogic/context.hpp"
#include "fwdlogic/error.hpp"
#include "fwdlogic/forwarder_typing.hpp"
#include "fwdlogic/process.hpp"

namespace fwdlogic {

enum class CPRule { Ax, One, Bot, Tensor, Par, PlusL, PlusR, With, MCutQ };

inline const char* to_string(CPRule r) {
  switch (r) {
    case CPRule::Ax: return "Ax";
    case CPRule::One: return "One";
    case CPRule::Bot: return "Bot";
    case CPRule::Tensor: return "Tensor";
    case CPRule::Par: return "Par";
    case CPRule::PlusL: return "PlusL";
    case CPRule::PlusR: return "PlusR";
    case CPRule::With: return "With";
    case CPRule::MCutQ: return "MCutQ";
  }
  return "?";
}

/// CP proof tree. MCutQ nodes list the parts first, then the transit
/// processes, and keep the forwarder's own derivation aside.
struct CPDerivation {
  CPRule rule;
  Name endpoint;
  CPContext conclusion;
  std::vector<CPDerivation> premises;
  std::shared_ptr<const Derivation> forwarder;

  std::size_t node_count() const {
    std::size_t n = 1;
    for (const auto& d : premises) n += d.node_count();
    return n;
  }
};

namespace detail {

inline Error cp_fail(ErrorKind k, std::string msg, const Process& p, const CPContext& d) {
  return make_error(k, std::move(msg), p.str() + " |-cp " + to_string(d));
}

/// Restriction of `d` to the names in `keep`.
inline CPContext restrict_to(const CPContext& d, const NameSet& keep) {
  CPContext out;
  for (const auto& [n, t] : d)
    if (keep.contains(n)) out.emplace(n, t);
  return out;
}

}  // namespace detail

inline Result<CPDerivation> check_cp(const Process& p, const CPContext& d);

namespace detail {

inline Result<CPDerivation> check_mcut(const Process& m, const CPContext& d) {
  auto fail = [&](ErrorKind k, std::string msg) { return cp_fail(k, std::move(msg), m, d); };
  const Context& g = m.fwd_ctx();
  if (auto v = g.validate(); !v) return v.error();

  NameSet cut;
  for (const auto& x : m.cut()) {
    if (!cut.insert(x).second) return fail(ErrorKind::DuplicateName, "cut name " + x.str() + " repeated");
    if (!g.contains(x)) return fail(ErrorKind::UnknownEndpoint, "cut name " + x.str() + " not in forwarder context");
    if (g.at(x).is_done()) return fail(ErrorKind::TypeMismatch, "cut name " + x.str() + " is already finished");
    if (d.contains(x)) return fail(ErrorKind::DuplicateName, "cut name " + x.str() + " shadows an outer endpoint");
  }
  if (m.parts().size() != m.cut().size())
    return fail(ErrorKind::TypeMismatch, std::to_string(m.parts().size()) + " parts for " +
                                             std::to_string(m.cut().size()) + " cut names");
  auto open = mcut_open_endpoints(m);
  if (!open.empty() && m.p().kind() != ProcKind::Link)
    return fail(ErrorKind::TypeMismatch, "open forwarder endpoints are only allowed for a link");

  auto fwd = check_forwarder(m.p(), g);
  if (!fwd) return fwd.error();

  // side condition: queued messages are exactly the transit names
  std::map<Name, PlainType> queued;
  for (const auto& [_, st] : g.map())
    for (const auto& pl : st.queue.payloads())
      if (pl.is_msg()) queued.emplace(pl.name, pl.type);
  NameSet transit_names;
  for (const auto& t : m.transit()) {
    if (!transit_names.insert(t.name).second)
      return fail(ErrorKind::SideConditionViolation, "transit name " + t.name.str() + " repeated");
    if (!queued.contains(t.name))
      return fail(ErrorKind::SideConditionViolation, "transit " + t.name.str() + " has no queued message");
  }
  for (const auto& [n, _] : queued)
    if (!transit_names.contains(n))
      return fail(ErrorKind::SideConditionViolation, "queued message " + n.str() + " has no transit process");

  NameSet bound = mcut_binders(m);
  NameSet used;
  auto claim = [&](const NameSet& fn, const std::string& who) -> std::optional<Error> {
    for (const auto& n : fn) {
      if (bound.contains(n))
        return fail(ErrorKind::TypeMismatch, who + " uses bound name " + n.str());
      if (!d.contains(n)) return fail(ErrorKind::UnknownEndpoint, who + " uses unknown endpoint " + n.str());
      if (!used.insert(n).second) return fail(ErrorKind::SplitFailure, "endpoint " + n.str() + " used twice");
    }
    return std::nullopt;
  };

  CPDerivation out{CPRule::MCutQ, m.cut().empty() ? Name("_") : m.cut().front(), d, {}, nullptr};
  for (std::size_t i = 0; i < m.parts().size(); ++i) {
    const Process& r = m.parts()[i];
    const Name& x = m.cut()[i];
    NameSet fn = free_names(r);
    if (!fn.contains(x)) return fail(ErrorKind::TypeMismatch, "part " + r.str() + " does not use " + x.str());
    for (const auto& c : m.cut())
      if (c != x && fn.contains(c))
        return fail(ErrorKind::TypeMismatch, "part " + r.str() + " uses cut name " + c.str());
    fn.erase(x);
    if (auto e = claim(fn, "part " + r.str())) return *e;
    CPContext sub = restrict_to(d, fn);
    sub.emplace(x, dual(erase(*g.at(x).type)));
    auto pd = check_cp(r, sub);
    if (!pd) return pd.error();
    out.premises.push_back(std::move(pd).value());
  }
  for (const auto& t : m.transit()) {
    NameSet fn = free_names(t.proc);
    fn.erase(t.name);
    if (auto e = claim(fn, "transit " + t.name.str())) return *e;
    CPContext sub = restrict_to(d, fn);
    sub.emplace(t.name, dual(queued.at(t.name)));
    auto td = check_cp(t.proc, sub);
    if (!td) return td.error();
    out.premises.push_back(std::move(td).value());
  }
  for (const auto& w : open) {
    if (!d.contains(w)) return fail(ErrorKind::UnknownEndpoint, "open endpoint " + w.str() + " not in context");
    if (d.at(w) != erase(*g.at(w).type))
      return fail(ErrorKind::TypeMismatch, "open endpoint " + w.str() + " has type " + d.at(w).str());
    if (!used.insert(w).second) return fail(ErrorKind::SplitFailure, "endpoint " + w.str() + " used twice");
  }
  for (const auto& [n, _] : d)
    if (!used.contains(n)) return fail(ErrorKind::UnusedEndpoint, "endpoint " + n.str() + " unused");
  out.forwarder = std::make_shared<const Derivation>(std::move(fwd).value());
  return out;
}

}  // namespace detail

/// Checks P |-cp d, using every endpoint of d exactly once. Context splits
/// are read off the free names of the subterms.
inline Result<CPDerivation> check_cp(const Process& p, const CPContext& d) {
  using detail::cp_fail;
  auto fail = [&](ErrorKind k, std::string msg) { return cp_fail(k, std::move(msg), p, d); };

  auto typed = [&](const Name& x, Conn want, const char* what) -> Result<PlainType> {
    auto it = d.find(x);
    if (it == d.end()) return fail(ErrorKind::UnknownEndpoint, "no endpoint " + x.str());
    if (it->second.conn() != want)
      return fail(ErrorKind::TypeMismatch, std::string(what) + " on " + x.str() + " : " + it->second.str());
    return it->second;
  };
  auto only = [&](std::initializer_list<Name> names) -> std::optional<Error> {
    for (const auto& [n, _] : d)
      if (std::find(names.begin(), names.end(), n) == names.end())
        return fail(ErrorKind::UnusedEndpoint, "endpoint " + n.str() + " unused");
    return std::nullopt;
  };
  auto fresh = [&](const Name& y) -> std::optional<Error> {
    if (d.contains(y)) return fail(ErrorKind::DuplicateName, "bound name " + y.str() + " shadows an endpoint");
    return std::nullopt;
  };
  auto with = [](CPContext c, const Name& n, PlainType t) {
    c.insert_or_assign(n, std::move(t));
    return c;
  };
  auto one_premise = [&](CPRule rule, const Name& x, const Process& sub,
                         const CPContext& c) -> Result<CPDerivation> {
    auto r = check_cp(sub, c);
    if (!r) return r.error();
    CPDerivation out{rule, x, d, {}, nullptr};
    out.premises.push_back(std::move(r).value());
    return out;
  };

  switch (p.kind()) {
    case ProcKind::Link: {
      for (const auto& n : {p.x(), p.y()})
        if (!d.contains(n)) return fail(ErrorKind::UnknownEndpoint, "no endpoint " + n.str());
      if (p.x() == p.y()) return fail(ErrorKind::TypeMismatch, "link of an endpoint to itself");
      if (auto e = only({p.x(), p.y()})) return *e;
      const auto &a = d.at(p.x()), &b = d.at(p.y());
      if (!is_atomic(a.conn()) || !is_atomic(b.conn()))
        return fail(ErrorKind::NonAtomicLink, "link on non-atomic types");
      if (a != dual(b)) return fail(ErrorKind::TypeMismatch, "link on non-dual atoms");
      return CPDerivation{CPRule::Ax, p.x(), d, {}, nullptr};
    }
    case ProcKind::Close: {
      auto t = typed(p.x(), Conn::One, "close");
      if (!t) return t.error();
      if (auto e = only({p.x()})) return *e;
      return CPDerivation{CPRule::One, p.x(), d, {}, nullptr};
    }
    case ProcKind::Wait: {
      auto t = typed(p.x(), Conn::Bot, "wait");
      if (!t) return t.error();
      CPContext c = d;
      c.erase(p.x());
      return one_premise(CPRule::Bot, p.x(), p.p(), c);
    }
    case ProcKind::Recv: {
      auto t = typed(p.x(), Conn::Par, "input");
      if (!t) return t.error();
      if (auto e = fresh(p.y())) return *e;
      return one_premise(CPRule::Par, p.x(), p.p(), with(with(d, p.x(), t->right()), p.y(), t->left()));
    }
    case ProcKind::Send: {
      auto t = typed(p.x(), Conn::Tensor, "output");
      if (!t) return t.error();
      if (auto e = fresh(p.y())) return *e;
      NameSet fp = free_names(p.p());
      fp.erase(p.y());
      if (fp.contains(p.x()))
        return fail(ErrorKind::SplitFailure, "payload uses the sending endpoint " + p.x().str());
      CPContext left = detail::restrict_to(d, fp);
      for (const auto& n : fp)
        if (!d.contains(n)) return fail(ErrorKind::UnknownEndpoint, "payload uses unknown endpoint " + n.str());
      CPContext right;
      for (const auto& [n, ty] : d)
        if (!fp.contains(n)) right.emplace(n, ty);
      right.insert_or_assign(p.x(), t->right());
      left.emplace(p.y(), t->left());
      auto l = check_cp(p.p(), left);
      if (!l) return l.error();
      auto r = check_cp(p.q(), right);
      if (!r) return r.error();
      CPDerivation out{CPRule::Tensor, p.x(), d, {}, nullptr};
      out.premises.push_back(std::move(l).value());
      out.premises.push_back(std::move(r).value());
      return out;
    }
    case ProcKind::Inl:
    case ProcKind::Inr: {
      bool left = p.kind() == ProcKind::Inl;
      auto t = typed(p.x(), Conn::Plus, left ? "inl" : "inr");
      if (!t) return t.error();
      return one_premise(left ? CPRule::PlusL : CPRule::PlusR, p.x(), p.p(),
                         with(d, p.x(), left ? t->left() : t->right()));
    }
    case ProcKind::Case: {
      auto t = typed(p.x(), Conn::With, "case");
      if (!t) return t.error();
      auto l = check_cp(p.p(), with(d, p.x(), t->left()));
      if (!l) return l.error();
      auto r = check_cp(p.q(), with(d, p.x(), t->right()));
      if (!r) return r.error();
      CPDerivation out{CPRule::With, p.x(), d, {}, nullptr};
      out.premises.push_back(std::move(l).value());
      out.premises.push_back(std::move(r).value());
      return out;
    }
    case ProcKind::MCut: return detail::check_mcut(p, d);
  }
  return fail(ErrorKind::TypeMismatch, "unknown process form");
}

/// The three premise families plus the side condition of a composition,
/// against the context of its free endpoints.
inline Result<Unit> validate_mcut(const Process& m, const CPContext& outer) {
  if (m.kind() != ProcKind::MCut)
    return make_error(ErrorKind::IllFormed, "not a composition", m.str());
  auto r = check_cp(m, outer);
  if (!r) return r.error();
  return Unit{};
}

}  // namespace fwdlogic
