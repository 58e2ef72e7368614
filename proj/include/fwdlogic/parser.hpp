#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fwdlogic/context.hpp"
#include "fwdlogic/error.hpp"
#include "fwdlogic/identity.hpp"
#include "fwdlogic/process.hpp"
#include "fwdlogic/types.hpp"

namespace fwdlogic {

/// A type as written: annotations optional on every connective.
struct TypeExpr {
  Conn conn = Conn::Atom;
  std::string atom;
  std::optional<std::vector<Name>> ann;
  std::shared_ptr<const TypeExpr> left, right;

  bool fully_plain() const {
    if (ann) return false;
    return (!left || left->fully_plain()) && (!right || right->fully_plain());
  }

  std::string str() const {
    auto a = [&] { return ann ? "[" + join_names(*ann) + "]" : std::string(); };
    switch (conn) {
      case Conn::Atom: return atom;
      case Conn::DualAtom: return "~" + atom;
      case Conn::One: return "1" + a();
      case Conn::Bot: return "bot" + a();
      default: return "(" + left->str() + " " + conn_symbol(conn) + " " + right->str() + ")" + a();
    }
  }
};

/// Annotations dropped.
inline PlainType to_plain(const TypeExpr& t) {
  switch (t.conn) {
    case Conn::Atom: return PlainType::atom(t.atom);
    case Conn::DualAtom: return PlainType::dual_atom(t.atom);
    case Conn::One: return PlainType::one();
    case Conn::Bot: return PlainType::bot();
    default: return PlainType::binary(t.conn, to_plain(*t.left), to_plain(*t.right));
  }
}

/// Requires an annotation on every connective; Tensor/Par left operands
/// must be plain.
inline AnnType to_annotated(const TypeExpr& t) {
  auto need = [&]() -> const std::vector<Name>& {
    if (!t.ann) throw FwdError(make_error(ErrorKind::IllFormed, "missing annotation on " + t.str()));
    return *t.ann;
  };
  auto single = [&]() -> Name {
    const auto& a = need();
    if (a.size() != 1) throw FwdError(make_error(ErrorKind::IllFormed, "expected one target on " + t.str()));
    return a.front();
  };
  switch (t.conn) {
    case Conn::Atom: return AnnType::atom(t.atom);
    case Conn::DualAtom: return AnnType::dual_atom(t.atom);
    case Conn::One: return AnnType::one(need());
    case Conn::Bot: return AnnType::bot(single());
    case Conn::Tensor:
    case Conn::Par: {
      if (!t.left->fully_plain())
        throw FwdError(make_error(ErrorKind::IllFormed, "left operand of " + t.str() + " must be unannotated"));
      Name u = single();
      return t.conn == Conn::Tensor ? AnnType::tensor(to_plain(*t.left), u, to_annotated(*t.right))
                                    : AnnType::par(to_plain(*t.left), u, to_annotated(*t.right));
    }
    case Conn::Plus:
    case Conn::With: {
      Name u = single();
      return t.conn == Conn::Plus ? AnnType::plus(to_annotated(*t.left), u, to_annotated(*t.right))
                                  : AnnType::with(to_annotated(*t.left), u, to_annotated(*t.right));
    }
  }
  return AnnType::atom(t.atom);
}

struct RawQueueItem {
  Name target;
  QueuePayload::Kind kind;
  std::optional<Name> name;
  std::optional<TypeExpr> type;
};

struct RawEndpoint {
  Name name;
  std::optional<TypeExpr> type;  // none: done
  std::vector<RawQueueItem> queue;
};

/// A context as written; becomes a forwarder Context or a CP context.
struct RawContext {
  std::vector<RawEndpoint> entries;

  Context annotated() const {
    Context::Map m;
    for (const auto& e : entries) {
      std::vector<QueueEntry> raw;
      for (const auto& q : e.queue) {
        QueuePayload p = q.kind == QueuePayload::Kind::Msg ? QueuePayload::msg(*q.name, to_plain(*q.type))
                                                           : QueuePayload{q.kind, {}, {}};
        raw.push_back({q.target, p});
      }
      EndpointState st{Queue::from_entries(raw), e.type ? std::optional<AnnType>(to_annotated(*e.type)) : std::nullopt};
      if (!m.emplace(e.name, std::move(st)).second)
        throw FwdError(make_error(ErrorKind::DuplicateName, "endpoint " + e.name.str() + " declared twice"));
    }
    return Context::make(std::move(m));
  }

  /// Active endpoints with their erased types plus queued names.
  CPContext plain() const {
    CPContext out;
    auto bind = [&](const Name& n, PlainType t) {
      if (!out.emplace(n, std::move(t)).second)
        throw FwdError(make_error(ErrorKind::DuplicateName, "name " + n.str() + " bound twice"));
    };
    for (const auto& e : entries) {
      if (e.type) bind(e.name, to_plain(*e.type));
      for (const auto& q : e.queue)
        if (q.kind == QueuePayload::Kind::Msg) bind(*q.name, to_plain(*q.type));
    }
    return out;
  }

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      s += (i ? ", " : " ") + e.name.str() + " : " + (e.type ? e.type->str() : std::string("."));
      if (!e.queue.empty()) {
        s += " queue [";
        for (std::size_t j = 0; j < e.queue.size(); ++j) {
          const auto& q = e.queue[j];
          s += (j ? ", [" : "[") + q.target.str() + "]";
          switch (q.kind) {
            case QueuePayload::Kind::Star: s += "*"; break;
            case QueuePayload::Kind::Left: s += "l"; break;
            case QueuePayload::Kind::Right: s += "r"; break;
            case QueuePayload::Kind::Msg: s += " " + q.name->str() + " : " + q.type->str(); break;
          }
        }
        s += "]";
      }
    }
    return s + (entries.empty() ? "}" : " }");
  }
};

struct TypeDecl {
  std::string name;
  TypeExpr type;
};
struct CtxDecl {
  std::string name;
  RawContext ctx;
};
struct ProcDecl {
  std::string name;
  Process proc;
};
/// `check F in C;`, `checkcp F in C;`, `synth C;`, `synthplain C;`,
/// `live C;`, `run F;`, `run F in C;`, `erase C;`
struct Directive {
  std::string verb;
  std::string subject;
  std::optional<std::string> in;
};

using Decl = std::variant<TypeDecl, CtxDecl, ProcDecl, Directive>;

struct SourceFile {
  std::vector<Decl> decls;

  template <class T>
  const T* find(const std::string& name) const {
    for (const auto& d : decls)
      if (const T* t = std::get_if<T>(&d); t && t->name == name) return t;
    return nullptr;
  }
  const CtxDecl* context(const std::string& n) const { return find<CtxDecl>(n); }
  const ProcDecl* process(const std::string& n) const { return find<ProcDecl>(n); }
  const TypeDecl* alias(const std::string& n) const { return find<TypeDecl>(n); }

  std::string str() const {
    std::string s;
    for (const auto& d : decls) {
      if (auto* t = std::get_if<TypeDecl>(&d)) s += "type " + t->name + " = " + t->type.str() + ";\n";
      if (auto* c = std::get_if<CtxDecl>(&d)) s += "ctx " + c->name + " = " + c->ctx.str() + ";\n";
      if (auto* p = std::get_if<ProcDecl>(&d)) s += "proc " + p->name + " = " + p->proc.str() + ";\n";
      if (auto* r = std::get_if<Directive>(&d))
        s += r->verb + " " + r->subject + (r->in ? " in " + *r->in : std::string()) + ";\n";
    }
    return s;
  }
};

namespace detail {

struct Token {
  enum class Kind { Ident, Number, Sym, End } kind;
  std::string text;
  int line, col;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip();
      if (i_ >= src_.size()) {
        out.push_back({Token::Kind::End, "", line_, col_});
        return out;
      }
      int l = line_, c = col_;
      unsigned char ch = static_cast<unsigned char>(src_[i_]);
      if (std::isalpha(ch) || ch == '_') {
        std::size_t j = i_;
        while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_' || src_[j] == '\''))
          ++j;
        out.push_back({Token::Kind::Ident, std::string(src_.substr(i_, j - i_)), l, c});
        advance(j - i_);
      } else if (std::isdigit(ch)) {
        std::size_t j = i_;
        while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
        out.push_back({Token::Kind::Number, std::string(src_.substr(i_, j - i_)), l, c});
        advance(j - i_);
      } else if (auto u = unicode()) {
        out.push_back({Token::Kind::Sym, u->first, l, c});
        advance(u->second);
        col_ -= static_cast<int>(u->second) - 1;  // one column per code point
      } else if (std::string_view("()[]{},;:.=|*@+&~").find(static_cast<char>(ch)) != std::string_view::npos) {
        out.push_back({Token::Kind::Sym, std::string(1, static_cast<char>(ch)), l, c});
        advance(1);
      } else {
        throw error(l, c, std::string("unexpected character '") + static_cast<char>(ch) + "'");
      }
    }
  }

  static FwdError error(int line, int col, const std::string& msg) {
    return FwdError(make_error(ErrorKind::ParseError,
                               "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg));
  }

private:
  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && i_ < src_.size(); ++k, ++i_) {
      if (src_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip() {
    for (;;) {
      while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) advance(1);
      if (src_.substr(i_, 2) == "--") {
        while (i_ < src_.size() && src_[i_] != '\n') advance(1);
        continue;
      }
      return;
    }
  }

  // UTF-8 operator aliases
  std::optional<std::pair<std::string, std::size_t>> unicode() const {
    static const std::pair<std::string_view, std::string_view> table[] = {
        {"⊗", "*"}, {"⅋", "@"}, {"⊕", "+"}, {"¬", "~"},
        {"⊥", "bot"}, {"＆", "&"}, {"\U0001D7CF", "1"}};
    for (const auto& [u, ascii] : table)
      if (src_.substr(i_, u.size()) == u) return std::make_pair(std::string(ascii), u.size());
    return std::nullopt;
  }
};

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  SourceFile file() {
    SourceFile f;
    while (!at_end()) {
      const Token& k = expect_ident();
      if (k.text == "type") {
        std::string n = expect_ident().text;
        expect("=");
        TypeExpr t = type();
        expect(";");
        declare(n, k);
        aliases_[n] = t;
        f.decls.push_back(TypeDecl{n, t});
      } else if (k.text == "ctx") {
        std::string n = expect_ident().text;
        expect("=");
        RawContext c = context();
        expect(";");
        declare(n, k);
        f.decls.push_back(CtxDecl{n, std::move(c)});
      } else if (k.text == "proc") {
        std::string n = expect_ident().text;
        expect("=");
        Process p = process();
        expect(";");
        declare(n, k);
        f.decls.push_back(ProcDecl{n, p});
      } else if (is_verb(k.text)) {
        Directive d{k.text, expect_ident().text, std::nullopt};
        if (peek_ident("in")) {
          ++pos_;
          d.in = expect_ident().text;
        }
        expect(";");
        f.decls.push_back(d);
      } else {
        throw err(k, "expected a declaration, found '" + k.text + "'");
      }
    }
    return f;
  }

  TypeExpr type() {
    const Token& tk = cur();
    if (sym("~")) {
      ++pos_;
      return leaf(Conn::DualAtom, expect_ident().text);
    }
    if (tk.kind == Token::Kind::Number) {
      if (tk.text != "1") throw err(tk, "unexpected number " + tk.text);
      ++pos_;
      TypeExpr t = leaf(Conn::One, "");
      t.ann = annotation();
      return t;
    }
    if (sym("1")) {  // from the unicode alias
      ++pos_;
      TypeExpr t = leaf(Conn::One, "");
      t.ann = annotation();
      return t;
    }
    if (tk.kind == Token::Kind::Ident || sym("bot")) {
      ++pos_;
      if (tk.text == "bot") {
        TypeExpr t = leaf(Conn::Bot, "");
        t.ann = annotation();
        return t;
      }
      if (auto it = aliases_.find(tk.text); it != aliases_.end()) return it->second;
      return leaf(Conn::Atom, tk.text);
    }
    if (sym("(")) {
      ++pos_;
      TypeExpr l = type();
      if (sym(")")) {
        ++pos_;
        return l;
      }
      const Token& op = cur();
      Conn c;
      if (sym("*")) c = Conn::Tensor;
      else if (sym("@")) c = Conn::Par;
      else if (sym("+")) c = Conn::Plus;
      else if (sym("&")) c = Conn::With;
      else throw err(op, "expected a connective or ')'");
      ++pos_;
      TypeExpr r = type();
      expect(")");
      TypeExpr t;
      t.conn = c;
      t.left = std::make_shared<const TypeExpr>(std::move(l));
      t.right = std::make_shared<const TypeExpr>(std::move(r));
      t.ann = annotation();
      return t;
    }
    throw err(tk, "expected a type");
  }

  RawContext context() {
    RawContext c;
    expect("{");
    if (sym("}")) {
      ++pos_;
      return c;
    }
    for (;;) {
      RawEndpoint e{Name(expect_ident().text), std::nullopt, {}};
      expect(":");
      if (sym(".")) {
        ++pos_;
      } else {
        e.type = type();
      }
      if (peek_ident("queue")) {
        ++pos_;
        e.queue = queue();
      }
      c.entries.push_back(std::move(e));
      if (sym(",")) {
        ++pos_;
        continue;
      }
      expect("}");
      return c;
    }
  }

  Process process() {
    const Token& k = cur();
    if (sym("(")) {
      ++pos_;
      Process p = process();
      expect(")");
      return p;
    }
    std::string w = expect_ident().text;
    if (w == "fwd") {
      Name x = name();
      return Process::link(x, name());
    }
    if (w == "close") return Process::close(name());
    if (w == "wait") {
      Name x = name();
      expect(".");
      return Process::wait(x, process());
    }
    if (w == "inl" || w == "inr") {
      Name x = name();
      expect(".");
      Process p = process();
      return w == "inl" ? Process::inl(x, p) : Process::inr(x, p);
    }
    if (w == "in") {
      Name x = name();
      expect("(");
      Name y = name();
      expect(")");
      expect(".");
      return Process::recv(x, y, process());
    }
    if (w == "out") {
      Name x = name();
      expect("[");
      Name y = name();
      expect("]");
      Process p = paren_process();
      Process q = paren_process();
      return Process::send(x, y, p, q);
    }
    if (w == "case") {
      Name x = name();
      Process p = paren_process();
      Process q = paren_process();
      return Process::case_(x, p, q);
    }
    if (w == "cut") {
      Name x = name();
      Name y = name();
      expect(":");
      PlainType a = to_plain(type());
      expect("(");
      Process p = process();
      expect("|");
      Process q = process();
      expect(")");
      return binary_cut(x, y, a, p, q);
    }
    if (w == "mcut") return mcut();
    throw err(k, "expected a process, found '" + w + "'");
  }

  void finish() {
    if (!at_end()) throw err(cur(), "unexpected '" + cur().text + "' after the end");
  }

private:
  std::vector<Token> t_;
  std::size_t pos_ = 0;
  std::map<std::string, TypeExpr> aliases_;
  std::map<std::string, std::string> declared_;

  static bool is_verb(const std::string& s) {
    return s == "check" || s == "checkcp" || s == "synth" || s == "synthplain" || s == "live" || s == "run" ||
           s == "erase";
  }

  void declare(const std::string& n, const Token& at) {
    if (declared_.contains(n)) throw err(at, "'" + n + "' declared twice");
    declared_[n] = at.text;
  }

  const Token& cur() const { return t_[pos_]; }
  bool at_end() const { return cur().kind == Token::Kind::End; }
  bool sym(std::string_view s) const { return cur().kind == Token::Kind::Sym && cur().text == s; }
  bool peek_ident(std::string_view s) const { return cur().kind == Token::Kind::Ident && cur().text == s; }

  static FwdError err(const Token& t, const std::string& msg) { return Lexer::error(t.line, t.col, msg); }

  void expect(std::string_view s) {
    if (!sym(s)) {
      const Token& t = cur();
      throw err(t, "expected '" + std::string(s) + "', found " + (t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'"));
    }
    ++pos_;
  }
  const Token& expect_ident() {
    const Token& t = cur();
    if (t.kind != Token::Kind::Ident)
      throw err(t, "expected a name, found " + (t.kind == Token::Kind::End ? std::string("end of input") : "'" + t.text + "'"));
    ++pos_;
    return t;
  }
  Name name() { return Name(expect_ident().text); }

  static TypeExpr leaf(Conn c, std::string atom) {
    TypeExpr t;
    t.conn = c;
    t.atom = std::move(atom);
    return t;
  }

  std::optional<std::vector<Name>> annotation() {
    if (!sym("[")) return std::nullopt;
    ++pos_;
    std::vector<Name> ns;
    if (!sym("]")) {
      ns.push_back(name());
      while (sym(",")) {
        ++pos_;
        ns.push_back(name());
      }
    }
    expect("]");
    return ns;
  }

  std::vector<RawQueueItem> queue() {
    std::vector<RawQueueItem> q;
    expect("[");
    if (sym("]")) {
      ++pos_;
      return q;
    }
    for (;;) {
      expect("[");
      Name u = name();
      expect("]");
      const Token& t = cur();
      if (sym("*")) {
        ++pos_;
        q.push_back({u, QueuePayload::Kind::Star, {}, {}});
      } else if (t.kind == Token::Kind::Ident && t_[pos_ + 1].text != ":" && (t.text == "l" || t.text == "r")) {
        ++pos_;
        q.push_back({u, t.text == "l" ? QueuePayload::Kind::Left : QueuePayload::Kind::Right, {}, {}});
      } else if (t.kind == Token::Kind::Ident) {
        Name y = name();
        expect(":");
        TypeExpr ty = type();
        if (!ty.fully_plain()) throw err(t, "queued message types carry no annotations");
        q.push_back({u, QueuePayload::Kind::Msg, y, ty});
      } else {
        throw err(t, "expected a queue item");
      }
      if (sym(",")) {
        ++pos_;
        continue;
      }
      expect("]");
      return q;
    }
  }

  Process paren_process() {
    expect("(");
    Process p = process();
    expect(")");
    return p;
  }

  void keyword(std::string_view kw) {
    const Token& t = cur();
    if (!peek_ident(kw)) throw err(t, "expected '" + std::string(kw) + ":'");
    ++pos_;
    expect(":");
  }

  Process mcut() {
    expect("[");
    std::vector<Name> cut;
    if (!sym("]")) {
      cut.push_back(name());
      while (sym(",")) {
        ++pos_;
        cut.push_back(name());
      }
    }
    expect("]");
    keyword("fwd");
    Process f = process();
    keyword("ctx");
    const Token& at = cur();
    RawContext rc = context();
    Context g;
    try {
      g = rc.annotated();
    } catch (const FwdError& e) {
      throw err(at, "forwarder context: " + e.error().describe());
    }
    keyword("transit");
    expect("[");
    std::vector<Transit> transit;
    if (!sym("]")) {
      for (;;) {
        Name y = name();
        expect("=");
        transit.push_back({y, process()});
        if (!sym(",")) break;
        ++pos_;
      }
    }
    expect("]");
    keyword("parts");
    expect("(");
    std::vector<Process> parts{process()};
    while (sym("|")) {
      ++pos_;
      parts.push_back(process());
    }
    expect(")");
    return Process::mcut(std::move(cut), f, std::move(g), std::move(transit), std::move(parts));
  }
};

}  // namespace detail

inline SourceFile parse(std::string_view text) {
  detail::Lexer lx(text);
  detail::Parser p(lx.run());
  return p.file();
}

inline TypeExpr parse_type(std::string_view text) {
  detail::Lexer lx(text);
  detail::Parser p(lx.run());
  auto r = p.type();
  p.finish();
  return r;
}

inline Process parse_process(std::string_view text) {
  detail::Lexer lx(text);
  detail::Parser p(lx.run());
  auto r = p.process();
  p.finish();
  return r;
}

inline RawContext parse_context(std::string_view text) {
  detail::Lexer lx(text);
  detail::Parser p(lx.run());
  auto r = p.context();
  p.finish();
  return r;
}

}  // namespace fwdlogic
