#pragma once

#include <vector>

#include "fwdlogic/cp_typing.hpp"
#include "fwdlogic/identity.hpp"
#include "fwdlogic/process.hpp"

namespace fwdtest {

using namespace fwdlogic;

struct Composite {
  Process term;
  CPContext outer;
};

/// Wraps a forwarder in a composition whose parts are copycats: part i
/// talks to the forwarder on x_i and exposes the same protocol on a fresh w_i.
inline Composite copycat_composite(const Process& fwd, const Context& g) {
  NameSet avoid = all_names(fwd);
  for (const auto& x : g.names()) avoid.insert(x);
  NameSupply sup;
  sup.reserve(avoid);
  std::vector<Name> cut;
  std::vector<Process> parts;
  CPContext outer;
  for (const auto& x : g.names()) {
    Name w = sup.fresh(Name("w"), avoid);
    avoid.insert(w);
    PlainType t = erase(*g.at(x).type);
    cut.push_back(x);
    parts.push_back(copycat(x, dual(t), w, sup));
    outer.emplace(w, t);
  }
  return {Process::mcut(cut, fwd, g, {}, parts), outer};
}

}  // namespace fwdtest
