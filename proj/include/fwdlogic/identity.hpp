#pragma once

#include "fwdlogic/context.hpp"
#include "fwdlogic/process.hpp"
#include "fwdlogic/synthesis.hpp"

namespace fwdlogic {

/// CP copycat between x : a and w : dual(a), expanded down to atomic links.
inline Process copycat(const Name& x, const PlainType& a, const Name& w, NameSupply& supply) {
  switch (a.conn()) {
    case Conn::Atom:
    case Conn::DualAtom: return Process::link(x, w);
    case Conn::One: return Process::wait(w, Process::close(x));
    case Conn::Bot: return Process::wait(x, Process::close(w));
    case Conn::Tensor: {
      Name k = supply.fresh(Name("k"));
      Name y = supply.fresh(Name("y"));
      return Process::recv(w, k,
                           Process::send(x, y, copycat(y, a.left(), k, supply), copycat(x, a.right(), w, supply)));
    }
    case Conn::Par: {
      Name y = supply.fresh(Name("y"));
      Name k = supply.fresh(Name("k"));
      return Process::recv(x, y,
                           Process::send(w, k, copycat(y, a.left(), k, supply), copycat(x, a.right(), w, supply)));
    }
    case Conn::Plus:
      return Process::case_(w, Process::inl(x, copycat(x, a.left(), w, supply)),
                            Process::inr(x, copycat(x, a.right(), w, supply)));
    case Conn::With:
      return Process::case_(x, Process::inl(w, copycat(x, a.left(), w, supply)),
                            Process::inr(w, copycat(x, a.right(), w, supply)));
  }
  return Process::link(x, w);
}

/// Two-endpoint forwarder context {x : A(y), y : dual(A)(x)}.
inline Context identity_context(const Name& x, const PlainType& a, const Name& y) {
  return uniform_context({{x, annotate(a, y)}, {y, annotate(dual(a), x)}});
}

/// A forwarder for identity_context(x, a, y); one always exists.
inline Process identity_forwarder(const Name& x, const PlainType& a, const Name& y) {
  auto rs = synth_annotated(identity_context(x, a, y));
  if (rs.empty())
    throw FwdError(make_error(ErrorKind::IllFormed, "no identity forwarder for " + a.str()));
  return rs.front().process;
}

/// Binary cut of P |- x : a against Q |- y : dual(a) as a two-part composition.
inline Process binary_cut(const Name& x, const Name& y, const PlainType& a, const Process& p, const Process& q) {
  // forwarder endpoint x faces P, so it carries the dual type
  Context g = identity_context(x, dual(a), y);
  Process f = identity_forwarder(x, dual(a), y);
  return Process::mcut({x, y}, f, g, {}, {p, q});
}

}  // namespace fwdlogic
