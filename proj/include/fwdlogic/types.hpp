#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fwdlogic/error.hpp"
#include "fwdlogic/name.hpp"

namespace fwdlogic {

/// Connectives shared by plain and annotated formulas.
enum class Conn { Atom, DualAtom, One, Bot, Tensor, Par, Plus, With };

inline bool is_binary(Conn c) {
  return c == Conn::Tensor || c == Conn::Par || c == Conn::Plus || c == Conn::With;
}
inline bool is_atomic(Conn c) { return c == Conn::Atom || c == Conn::DualAtom; }
inline bool is_additive(Conn c) { return c == Conn::Plus || c == Conn::With; }

inline Conn dual_conn(Conn c) {
  switch (c) {
    case Conn::Atom: return Conn::DualAtom;
    case Conn::DualAtom: return Conn::Atom;
    case Conn::One: return Conn::Bot;
    case Conn::Bot: return Conn::One;
    case Conn::Tensor: return Conn::Par;
    case Conn::Par: return Conn::Tensor;
    case Conn::Plus: return Conn::With;
    case Conn::With: return Conn::Plus;
  }
  return c;
}

inline const char* conn_symbol(Conn c) {
  switch (c) {
    case Conn::Tensor: return "*";
    case Conn::Par: return "@";
    case Conn::Plus: return "+";
    case Conn::With: return "&";
    default: return "";
  }
}

struct PlainNode;

/// Unannotated formula. Immutable; copies share structure.
class PlainType {
public:
  PlainType() = default;

  static PlainType atom(std::string a);
  static PlainType dual_atom(std::string a);
  static PlainType one();
  static PlainType bot();
  static PlainType tensor(PlainType l, PlainType r);
  static PlainType par(PlainType l, PlainType r);
  static PlainType plus(PlainType l, PlainType r);
  static PlainType with(PlainType l, PlainType r);
  static PlainType binary(Conn c, PlainType l, PlainType r);

  bool valid() const { return node_ != nullptr; }
  Conn conn() const;
  const std::string& atom_name() const;
  const PlainType& left() const;
  const PlainType& right() const;

  std::size_t size() const;
  std::string str() const;

  friend bool operator==(const PlainType& a, const PlainType& b);
  friend int compare(const PlainType& a, const PlainType& b);
  friend bool operator<(const PlainType& a, const PlainType& b) { return compare(a, b) < 0; }

private:
  explicit PlainType(std::shared_ptr<const PlainNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const PlainNode> node_;
};

struct PlainNode {
  Conn conn;
  std::string atom;
  PlainType left, right;
  std::size_t size;
};

inline PlainType PlainType::atom(std::string a) {
  return PlainType(std::make_shared<const PlainNode>(PlainNode{Conn::Atom, std::move(a), {}, {}, 1}));
}
inline PlainType PlainType::dual_atom(std::string a) {
  return PlainType(
      std::make_shared<const PlainNode>(PlainNode{Conn::DualAtom, std::move(a), {}, {}, 1}));
}
inline PlainType PlainType::one() {
  static const PlainType t(std::make_shared<const PlainNode>(PlainNode{Conn::One, {}, {}, {}, 1}));
  return t;
}
inline PlainType PlainType::bot() {
  static const PlainType t(std::make_shared<const PlainNode>(PlainNode{Conn::Bot, {}, {}, {}, 1}));
  return t;
}
inline PlainType PlainType::binary(Conn c, PlainType l, PlainType r) {
  if (!is_binary(c)) throw std::invalid_argument("binary(): not a binary connective");
  std::size_t sz = 1 + l.size() + r.size();
  return PlainType(
      std::make_shared<const PlainNode>(PlainNode{c, {}, std::move(l), std::move(r), sz}));
}
inline PlainType PlainType::tensor(PlainType l, PlainType r) { return binary(Conn::Tensor, std::move(l), std::move(r)); }
inline PlainType PlainType::par(PlainType l, PlainType r) { return binary(Conn::Par, std::move(l), std::move(r)); }
inline PlainType PlainType::plus(PlainType l, PlainType r) { return binary(Conn::Plus, std::move(l), std::move(r)); }
inline PlainType PlainType::with(PlainType l, PlainType r) { return binary(Conn::With, std::move(l), std::move(r)); }

inline Conn PlainType::conn() const { return node_->conn; }
inline const std::string& PlainType::atom_name() const { return node_->atom; }
inline const PlainType& PlainType::left() const { return node_->left; }
inline const PlainType& PlainType::right() const { return node_->right; }
inline std::size_t PlainType::size() const { return node_ ? node_->size : 0; }

inline bool operator==(const PlainType& a, const PlainType& b) { return compare(a, b) == 0; }

inline int compare(const PlainType& a, const PlainType& b) {
  if (a.node_ == b.node_) return 0;
  if (!a.node_ || !b.node_) return a.node_ ? 1 : -1;
  if (a.conn() != b.conn()) return a.conn() < b.conn() ? -1 : 1;
  if (is_atomic(a.conn())) return a.atom_name().compare(b.atom_name()) < 0 ? -1 : (a.atom_name() == b.atom_name() ? 0 : 1);
  if (!is_binary(a.conn())) return 0;
  if (int c = compare(a.left(), b.left())) return c;
  return compare(a.right(), b.right());
}

inline std::string PlainType::str() const {
  if (!node_) return "<none>";
  switch (conn()) {
    case Conn::Atom: return atom_name();
    case Conn::DualAtom: return "~" + atom_name();
    case Conn::One: return "1";
    case Conn::Bot: return "bot";
    default:
      return "(" + left().str() + " " + conn_symbol(conn()) + " " + right().str() + ")";
  }
}

/// De Morgan dual.
inline PlainType dual(const PlainType& t) {
  switch (t.conn()) {
    case Conn::Atom: return PlainType::dual_atom(t.atom_name());
    case Conn::DualAtom: return PlainType::atom(t.atom_name());
    case Conn::One: return PlainType::bot();
    case Conn::Bot: return PlainType::one();
    default: return PlainType::binary(dual_conn(t.conn()), dual(t.left()), dual(t.right()));
  }
}

inline bool is_multiplicative(const PlainType& t) {
  if (is_additive(t.conn())) return false;
  if (!is_binary(t.conn())) return true;
  return is_multiplicative(t.left()) && is_multiplicative(t.right());
}

struct AnnNode;

/// Annotated formula. The left operand of Tensor/Par stays plain; every other
/// connective carries its forwarding target (One carries a list of them).
class AnnType {
public:
  AnnType() = default;

  static AnnType atom(std::string a);
  static AnnType dual_atom(std::string a);
  static AnnType one(std::vector<Name> targets);
  static AnnType bot(Name target);
  static AnnType tensor(PlainType l, Name target, AnnType r);
  static AnnType par(PlainType l, Name target, AnnType r);
  static AnnType plus(AnnType l, Name target, AnnType r);
  static AnnType with(AnnType l, Name target, AnnType r);

  bool valid() const { return node_ != nullptr; }
  Conn conn() const;
  const std::string& atom_name() const;
  /// Single target of Bot/Tensor/Par/Plus/With.
  const Name& target() const;
  /// Target list of One.
  const std::vector<Name>& targets() const;
  /// Plain left operand of Tensor/Par.
  const PlainType& plain_left() const;
  /// Annotated left branch of Plus/With.
  const AnnType& ann_left() const;
  const AnnType& right() const;

  std::size_t size() const;
  std::string str() const;

  friend bool operator==(const AnnType& a, const AnnType& b);

private:
  explicit AnnType(std::shared_ptr<const AnnNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const AnnNode> node_;
};

struct AnnNode {
  Conn conn;
  std::string atom;
  std::vector<Name> targets;
  PlainType plain_left;
  AnnType ann_left, right;
  std::size_t size;
};

inline AnnType AnnType::atom(std::string a) {
  return AnnType(std::make_shared<const AnnNode>(AnnNode{Conn::Atom, std::move(a), {}, {}, {}, {}, 1}));
}
inline AnnType AnnType::dual_atom(std::string a) {
  return AnnType(
      std::make_shared<const AnnNode>(AnnNode{Conn::DualAtom, std::move(a), {}, {}, {}, {}, 1}));
}
inline AnnType AnnType::one(std::vector<Name> targets) {
  NameSet seen;
  for (const auto& t : targets)
    if (!seen.insert(t).second)
      throw FwdError(ErrorKind::IllFormed, "1-annotation repeats name '" + t.str() + "'");
  return AnnType(
      std::make_shared<const AnnNode>(AnnNode{Conn::One, {}, std::move(targets), {}, {}, {}, 1}));
}
inline AnnType AnnType::bot(Name target) {
  return AnnType(std::make_shared<const AnnNode>(AnnNode{Conn::Bot, {}, {std::move(target)}, {}, {}, {}, 1}));
}
inline AnnType AnnType::tensor(PlainType l, Name target, AnnType r) {
  std::size_t sz = 1 + l.size() + r.size();
  return AnnType(std::make_shared<const AnnNode>(
      AnnNode{Conn::Tensor, {}, {std::move(target)}, std::move(l), {}, std::move(r), sz}));
}
inline AnnType AnnType::par(PlainType l, Name target, AnnType r) {
  std::size_t sz = 1 + l.size() + r.size();
  return AnnType(std::make_shared<const AnnNode>(
      AnnNode{Conn::Par, {}, {std::move(target)}, std::move(l), {}, std::move(r), sz}));
}
inline AnnType AnnType::plus(AnnType l, Name target, AnnType r) {
  std::size_t sz = 1 + l.size() + r.size();
  return AnnType(std::make_shared<const AnnNode>(
      AnnNode{Conn::Plus, {}, {std::move(target)}, {}, std::move(l), std::move(r), sz}));
}
inline AnnType AnnType::with(AnnType l, Name target, AnnType r) {
  std::size_t sz = 1 + l.size() + r.size();
  return AnnType(std::make_shared<const AnnNode>(
      AnnNode{Conn::With, {}, {std::move(target)}, {}, std::move(l), std::move(r), sz}));
}

inline Conn AnnType::conn() const { return node_->conn; }
inline const std::string& AnnType::atom_name() const { return node_->atom; }
inline const Name& AnnType::target() const { return node_->targets.at(0); }
inline const std::vector<Name>& AnnType::targets() const { return node_->targets; }
inline const PlainType& AnnType::plain_left() const { return node_->plain_left; }
inline const AnnType& AnnType::ann_left() const { return node_->ann_left; }
inline const AnnType& AnnType::right() const { return node_->right; }
inline std::size_t AnnType::size() const { return node_ ? node_->size : 0; }

inline bool operator==(const AnnType& a, const AnnType& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.conn() != b.conn()) return false;
  switch (a.conn()) {
    case Conn::Atom:
    case Conn::DualAtom: return a.atom_name() == b.atom_name();
    case Conn::One: return NameSet(a.targets().begin(), a.targets().end()) ==
                           NameSet(b.targets().begin(), b.targets().end());
    case Conn::Bot: return a.target() == b.target();
    case Conn::Tensor:
    case Conn::Par:
      return a.target() == b.target() && a.plain_left() == b.plain_left() && a.right() == b.right();
    case Conn::Plus:
    case Conn::With:
      return a.target() == b.target() && a.ann_left() == b.ann_left() && a.right() == b.right();
  }
  return false;
}

inline std::string join_names(const std::vector<Name>& ns, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (i) s += sep;
    s += ns[i].str();
  }
  return s;
}

inline std::string AnnType::str() const {
  if (!node_) return "<none>";
  switch (conn()) {
    case Conn::Atom: return atom_name();
    case Conn::DualAtom: return "~" + atom_name();
    case Conn::One: return "1[" + join_names(targets()) + "]";
    case Conn::Bot: return "bot[" + target().str() + "]";
    case Conn::Tensor:
    case Conn::Par:
      return "(" + plain_left().str() + " " + conn_symbol(conn()) + " " + right().str() + ")[" +
             target().str() + "]";
    case Conn::Plus:
    case Conn::With:
      return "(" + ann_left().str() + " " + conn_symbol(conn()) + " " + right().str() + ")[" +
             target().str() + "]";
  }
  return "?";
}

/// Decorates every connective of `t` with `x`; One gets the singleton list [x].
inline AnnType annotate(const PlainType& t, const Name& x) {
  switch (t.conn()) {
    case Conn::Atom: return AnnType::atom(t.atom_name());
    case Conn::DualAtom: return AnnType::dual_atom(t.atom_name());
    case Conn::One: return AnnType::one({x});
    case Conn::Bot: return AnnType::bot(x);
    case Conn::Tensor: return AnnType::tensor(t.left(), x, annotate(t.right(), x));
    case Conn::Par: return AnnType::par(t.left(), x, annotate(t.right(), x));
    case Conn::Plus: return AnnType::plus(annotate(t.left(), x), x, annotate(t.right(), x));
    case Conn::With: return AnnType::with(annotate(t.left(), x), x, annotate(t.right(), x));
  }
  return {};
}

inline PlainType erase(const AnnType& t) {
  switch (t.conn()) {
    case Conn::Atom: return PlainType::atom(t.atom_name());
    case Conn::DualAtom: return PlainType::dual_atom(t.atom_name());
    case Conn::One: return PlainType::one();
    case Conn::Bot: return PlainType::bot();
    case Conn::Tensor:
    case Conn::Par: return PlainType::binary(t.conn(), t.plain_left(), erase(t.right()));
    case Conn::Plus:
    case Conn::With: return PlainType::binary(t.conn(), erase(t.ann_left()), erase(t.right()));
  }
  return {};
}

/// Structural dual keeping targets. Only defined where every 1 carries exactly
/// one name; other 1-annotations have no stated dual and are rejected.
inline AnnType dual(const AnnType& t) {
  switch (t.conn()) {
    case Conn::Atom: return AnnType::dual_atom(t.atom_name());
    case Conn::DualAtom: return AnnType::atom(t.atom_name());
    case Conn::One:
      if (t.targets().size() != 1)
        throw FwdError(ErrorKind::IllFormed,
                       "dual of " + t.str() + " is undefined (needs a single annotation)");
      return AnnType::bot(t.targets().front());
    case Conn::Bot: return AnnType::one({t.target()});
    case Conn::Tensor: return AnnType::par(dual(t.plain_left()), t.target(), dual(t.right()));
    case Conn::Par: return AnnType::tensor(dual(t.plain_left()), t.target(), dual(t.right()));
    case Conn::Plus: return AnnType::with(dual(t.ann_left()), t.target(), dual(t.right()));
    case Conn::With: return AnnType::plus(dual(t.ann_left()), t.target(), dual(t.right()));
  }
  return {};
}

inline bool is_multiplicative(const AnnType& t) { return is_multiplicative(erase(t)); }

/// Every name an annotation in `t` refers to.
inline void collect_targets(const AnnType& t, NameSet& out) {
  switch (t.conn()) {
    case Conn::Atom:
    case Conn::DualAtom: return;
    case Conn::One: out.insert(t.targets().begin(), t.targets().end()); return;
    case Conn::Bot: out.insert(t.target()); return;
    case Conn::Tensor:
    case Conn::Par:
      out.insert(t.target());
      collect_targets(t.right(), out);
      return;
    case Conn::Plus:
    case Conn::With:
      out.insert(t.target());
      collect_targets(t.ann_left(), out);
      collect_targets(t.right(), out);
      return;
  }
}

/// Renames annotation targets.
inline AnnType rename_targets(const AnnType& t, const Name& from, const Name& to) {
  auto r = [&](const Name& n) { return n == from ? to : n; };
  switch (t.conn()) {
    case Conn::Atom:
    case Conn::DualAtom: return t;
    case Conn::One: {
      std::vector<Name> ts;
      for (const auto& n : t.targets()) ts.push_back(r(n));
      return AnnType::one(std::move(ts));
    }
    case Conn::Bot: return AnnType::bot(r(t.target()));
    case Conn::Tensor: return AnnType::tensor(t.plain_left(), r(t.target()), rename_targets(t.right(), from, to));
    case Conn::Par: return AnnType::par(t.plain_left(), r(t.target()), rename_targets(t.right(), from, to));
    case Conn::Plus:
      return AnnType::plus(rename_targets(t.ann_left(), from, to), r(t.target()),
                           rename_targets(t.right(), from, to));
    case Conn::With:
      return AnnType::with(rename_targets(t.ann_left(), from, to), r(t.target()),
                           rename_targets(t.right(), from, to));
  }
  return t;
}

}  // namespace fwdlogic
