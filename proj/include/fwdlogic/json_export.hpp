#pragma once

#include <json.hpp>

#include "fwdlogic/cp_typing.hpp"
#include "fwdlogic/forwarder_typing.hpp"
#include "fwdlogic/lts.hpp"
#include "fwdlogic/mcut.hpp"

namespace fwdlogic {

using json = nlohmann::ordered_json;

inline json names_json(const std::vector<Name>& ns) {
  json a = json::array();
  for (const auto& n : ns) a.push_back(n.str());
  return a;
}

inline json to_json(const Derivation& d) {
  json j;
  j["rule"] = to_string(d.rule);
  j["endpoint"] = d.endpoint.str();
  j["targets"] = names_json(d.targets);
  if (d.rule == FwdRule::Tensor || d.rule == FwdRule::PlusL || d.rule == FwdRule::PlusR)
    j["source_done"] = d.source_done;
  j["process"] = d.process.str();
  j["context"] = d.conclusion.str();
  json ps = json::array();
  for (const auto& p : d.premises) ps.push_back(to_json(p));
  j["premises"] = ps;
  return j;
}

inline json to_json(const CPContext& c) {
  json j = json::object();
  for (const auto& [n, t] : c) j[n.str()] = t.str();
  return j;
}

inline json to_json(const CPDerivation& d) {
  json j;
  j["rule"] = to_string(d.rule);
  j["endpoint"] = d.endpoint.str();
  j["context"] = to_json(d.conclusion);
  json ps = json::array();
  for (const auto& p : d.premises) ps.push_back(to_json(p));
  j["premises"] = ps;
  if (d.forwarder) j["forwarder"] = to_json(*d.forwarder);
  return j;
}

inline json to_json(const Label& l) {
  json j;
  switch (l.kind) {
    case Label::Kind::Par: j["kind"] = "par"; break;
    case Label::Kind::Tensor: j["kind"] = "tensor"; break;
    case Label::Kind::Bot: j["kind"] = "bot"; break;
    case Label::Kind::One: j["kind"] = "one"; break;
    case Label::Kind::Ax: j["kind"] = "ax"; break;
  }
  j["endpoint"] = l.x.str();
  if (l.kind == Label::Kind::One) {
    j["targets"] = names_json(l.us);
  } else {
    j["target"] = l.u.str();
  }
  j["text"] = l.str();
  return j;
}

inline json to_json(const std::vector<Label>& path) {
  json a = json::array();
  for (const auto& l : path) a.push_back(to_json(l));
  return a;
}

inline json to_json(const TraceEntry& e) {
  json j;
  j["step"] = to_string(e.kind);
  j["endpoints"] = names_json(e.endpoints);
  j["term"] = e.result.str();
  return j;
}

inline json to_json(const RunTrace& t) {
  json a = json::array();
  for (const auto& e : t) a.push_back(to_json(e));
  return a;
}

inline json to_json(const Error& e) {
  json j;
  j["error"] = std::string(to_string(e.kind));
  j["message"] = e.message;
  if (!e.where.empty()) j["at"] = e.where;
  return j;
}

}  // namespace fwdlogic
