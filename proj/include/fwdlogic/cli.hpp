#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fwdlogic/cp_typing.hpp"
#include "fwdlogic/forwarder_typing.hpp"
#include "fwdlogic/json_export.hpp"
#include "fwdlogic/lts.hpp"
#include "fwdlogic/mcut.hpp"
#include "fwdlogic/parser.hpp"
#include "fwdlogic/synthesis.hpp"

namespace fwdlogic {

/// Exit codes: 0 ok/derivable, 1 not derivable, 2 usage or input error,
/// 3 internal assertion (Stuck, MeasureViolation).
enum ExitCode { kOk = 0, kNo = 1, kUsage = 2, kInternal = 3 };

namespace cli_detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void print_tree(const Derivation& d, std::ostream& out, int depth = 0) {
  out << std::string(2 * depth, ' ') << to_string(d.rule);
  if (d.rule != FwdRule::Ax) out << "@" << d.endpoint.str();
  if (!d.targets.empty()) out << " [" << join_names(d.targets) << "]";
  if (d.source_done) out << " (from finished endpoint)";
  out << "  " << d.conclusion.str() << "\n";
  for (const auto& p : d.premises) print_tree(p, out, depth + 1);
}

inline void print_tree(const CPDerivation& d, std::ostream& out, int depth = 0) {
  out << std::string(2 * depth, ' ') << to_string(d.rule) << "@" << d.endpoint.str() << "  "
      << to_string(d.conclusion) << "\n";
  for (const auto& p : d.premises) print_tree(p, out, depth + 1);
  if (d.forwarder) {
    out << std::string(2 * depth + 2, ' ') << "forwarder:\n";
    print_tree(*d.forwarder, out, depth + 2);
  }
}

struct Session {
  SourceFile file;
  bool as_json = false;
  std::uint64_t seed = 0;
  std::ostream& out;

  const ProcDecl& proc(const std::string& n) const {
    if (auto* p = file.process(n)) return *p;
    throw UsageError("no process named '" + n + "'");
  }
  const CtxDecl& ctx(const std::string& n) const {
    if (auto* c = file.context(n)) return *c;
    throw UsageError("no context named '" + n + "'");
  }
  Context annotated(const std::string& n) const {
    try {
      return ctx(n).ctx.annotated();
    } catch (const FwdError& e) {
      throw UsageError("context " + n + ": " + e.error().describe());
    }
  }
  CPContext plain(const std::string& n) const {
    try {
      return ctx(n).ctx.plain();
    } catch (const FwdError& e) {
      throw UsageError("context " + n + ": " + e.error().describe());
    }
  }

  int fail(const Error& e) const {
    if (as_json) {
      json j = to_json(e);
      j["ok"] = false;
      out << j.dump(2) << "\n";
    } else {
      out << "NOT DERIVABLE: " << e.describe() << "\n";
    }
    return kNo;
  }

  int check(const std::string& p, const std::string& c) const {
    auto d = check_forwarder(proc(p).proc, annotated(c));
    if (!d) return fail(d.error());
    if (as_json) {
      json j;
      j["ok"] = true;
      j["nodes"] = d->node_count();
      j["derivation"] = to_json(*d);
      out << j.dump(2) << "\n";
    } else {
      out << "OK (" << d->node_count() << " nodes)\n";
      print_tree(*d, out);
    }
    return kOk;
  }

  int check_cp_cmd(const std::string& p, const std::string& c) const {
    auto d = check_cp(proc(p).proc, plain(c));
    if (!d) return fail(d.error());
    if (as_json) {
      json j;
      j["ok"] = true;
      j["nodes"] = d->node_count();
      j["derivation"] = to_json(*d);
      out << j.dump(2) << "\n";
    } else {
      out << "OK (" << d->node_count() << " nodes)\n";
      print_tree(*d, out);
    }
    return kOk;
  }

  int synth(const std::string& c, bool plain_mode, bool all, std::size_t limit) const {
    SynthConfig cfg;
    cfg.enumerate_all = all || limit > 0;
    cfg.limit = limit;
    NameSupply supply(seed);
    std::vector<SynthResult> rs =
        plain_mode ? synth_plain(plain(c), cfg, supply) : synth_annotated(annotated(c), cfg, supply);
    if (as_json) {
      json j;
      j["ok"] = !rs.empty();
      json a = json::array();
      for (const auto& r : rs) {
        json e;
        e["process"] = r.process.str();
        e["context"] = r.context.str();
        e["derivation"] = to_json(r.derivation);
        a.push_back(e);
      }
      j["results"] = a;
      out << j.dump(2) << "\n";
    } else if (rs.empty()) {
      out << "NONE\n";
    } else {
      for (const auto& r : rs) {
        out << r.process.str() << "\n";
        if (plain_mode) out << "  ctx: " << r.context.str() << "\n";
      }
    }
    return rs.empty() ? kNo : kOk;
  }

  int live(const std::string& c) const {
    auto r = live_path(annotated(c), seed);
    if (!r) return fail(r.error());
    const auto& path = *r;
    if (as_json) {
      json j;
      j["ok"] = path.has_value();
      if (path) {
        j["path"] = path_str(*path);
        j["labels"] = to_json(*path);
      }
      out << j.dump(2) << "\n";
    } else {
      out << (path ? path_str(*path) : std::string("NONE")) << "\n";
    }
    return path ? kOk : kNo;
  }

  int run(const std::string& p, const std::optional<std::string>& c, bool trace) const {
    const Process& term = proc(p).proc;
    NormalizeOptions opt;
    opt.seed = seed;
    if (c) {
      opt.outer = plain(*c);
      auto v = check_cp(term, *opt.outer);
      if (!v) return fail(v.error());
    }
    auto [res, tr] = normalize(term, opt);
    if (as_json) {
      json j;
      j["ok"] = true;
      j["result"] = res.str();
      j["steps"] = tr.size();
      if (trace) j["trace"] = to_json(tr);
      out << j.dump(2) << "\n";
    } else {
      if (trace) {
        for (std::size_t i = 0; i < tr.size(); ++i)
          out << i + 1 << ". " << to_string(tr[i].kind) << " [" << join_names(tr[i].endpoints) << "] "
              << tr[i].result.str() << "\n";
      }
      out << res.str() << "\n";
    }
    return kOk;
  }

  int erase_cmd(const std::string& c) const {
    auto e = erase_context(annotated(c));
    if (!e) return fail(e.error());
    if (as_json) {
      json j;
      j["ok"] = true;
      j["context"] = to_json(*e);
      out << j.dump(2) << "\n";
    } else {
      out << to_string(*e) << "\n";
    }
    return kOk;
  }

  /// Runs the directives in file order; the worst exit code wins.
  int script() const {
    int worst = kOk;
    bool any = false;
    for (const auto& d : file.decls) {
      const auto* r = std::get_if<Directive>(&d);
      if (!r) continue;
      any = true;
      if (!as_json) out << "== " << r->verb << " " << r->subject << (r->in ? " in " + *r->in : "") << "\n";
      auto need_in = [&]() -> const std::string& {
        if (!r->in) throw UsageError(r->verb + " needs 'in CONTEXT'");
        return *r->in;
      };
      int code = kOk;
      if (r->verb == "check") code = check(r->subject, need_in());
      else if (r->verb == "checkcp") code = check_cp_cmd(r->subject, need_in());
      else if (r->verb == "synth") code = synth(r->subject, false, false, 0);
      else if (r->verb == "synthplain") code = synth(r->subject, true, false, 0);
      else if (r->verb == "live") code = live(r->subject);
      else if (r->verb == "run") code = run(r->subject, r->in, false);
      else if (r->verb == "erase") code = erase_cmd(r->subject);
      worst = std::max(worst, code);
    }
    if (!any) throw UsageError("no directives in file");
    return worst;
  }
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cli_detail

/// Entry point of the `fwd` tool. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Forwarder logic toolkit: check, synthesize and run forwarders between session types", "fwd"};
  app.require_subcommand(1);
  bool json_out = false;
  std::uint64_t seed = 0;
  app.add_flag("--json", json_out, "Machine-readable output");
  app.add_option("--seed", seed, "Base of the fresh-name counter");

  std::string file, proc, ctx;
  std::optional<std::string> run_ctx;
  bool plain = false, all = false, trace = false;
  std::size_t limit = 0;

  auto* check = app.add_subcommand("check", "Check a forwarder against an annotated context");
  auto* check_cp_cmd = app.add_subcommand("check-cp", "Check a process against a plain CP context");
  auto* synth = app.add_subcommand("synth", "Synthesize forwarders for a context");
  auto* live = app.add_subcommand("live", "Find a live path of an annotated multiplicative context");
  auto* run = app.add_subcommand("run", "Normalize a composition until cut-free");
  auto* erase_cmd = app.add_subcommand("erase", "Print the CP context of an annotated context");
  auto* script = app.add_subcommand("script", "Run the directives of a file");
  for (auto* sc : {check, check_cp_cmd, synth, live, run, erase_cmd, script})
    sc->add_option("FILE", file, "Source file")->required();
  for (auto* sc : {check, check_cp_cmd, run}) sc->add_option("--proc", proc, "Process name")->required();
  for (auto* sc : {check, check_cp_cmd, synth, live, erase_cmd})
    sc->add_option("--ctx", ctx, "Context name")->required();
  run->add_option("--ctx", run_ctx, "Outer context; enables typing checks after every step");
  run->add_flag("--trace", trace, "Print every reduction step");
  synth->add_flag("--plain", plain, "Treat the context as plain types and infer annotations");
  synth->add_flag("--all", all, "Enumerate all forwarders");
  synth->add_option("--limit", limit, "Stop after N forwarders");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    cli_detail::Session s{parse(cli_detail::read_file(file)), json_out, seed, out};
    if (*check) return s.check(proc, ctx);
    if (*check_cp_cmd) return s.check_cp_cmd(proc, ctx);
    if (*synth) return s.synth(ctx, plain, all, limit);
    if (*live) return s.live(ctx);
    if (*run) return s.run(proc, run_ctx, trace);
    if (*erase_cmd) return s.erase_cmd(ctx);
    if (*script) return s.script();
  } catch (const cli_detail::UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FwdError& e) {
    err << "error: " << e.error().describe() << "\n";
    switch (e.kind()) {
      case ErrorKind::Stuck:
      case ErrorKind::MeasureViolation: return kInternal;
      case ErrorKind::ParseError:
      case ErrorKind::IllFormed:
      case ErrorKind::DuplicateName:
      case ErrorKind::UnknownAnnotationTarget: return kUsage;
      default: return kInternal;
    }
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace fwdlogic
