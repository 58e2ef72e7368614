#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fwdlogic/cli.hpp"

using namespace fwdlogic;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

class Cli : public ::testing::Test {
protected:
  std::string file = ::testing::TempDir() + "fwd_cli_test.dsl";

  void write(const std::string& text) {
    std::ofstream o(file);
    o << text;
  }
  void TearDown() override { std::remove(file.c_str()); }

  CliRun fwd(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
  }
};

const char* kCrissCross = R"(
ctx C = { x : (~name @ ((~cost * bot[y])[y]))[y], y : (cost @ ((name * 1[x])[x]))[x] };
proc F = in x(u). in y(v). out y[u'](fwd u u')(out x[v'](fwd v' v)(wait x. close y));
ctx P = { x : a, y : a };
ctx Add = { x : (bot[y] & bot[y])[y], y : (1[x] + 1[x])[x] };
proc Unit = mcut [x, y] fwd: wait x. close y ctx: { x : bot[y], y : 1[x] } transit: [] parts: (close x | wait y. close z);
ctx Z = { z : 1 };
)";

}  // namespace

TEST_F(Cli, Check) {
  write(kCrissCross);
  auto r = fwd({"check", file, "--proc", "F", "--ctx", "C"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("OK (8 nodes)", 0), 0u) << r.out;
}

TEST_F(Cli, CheckCP) {
  write(kCrissCross);
  EXPECT_EQ(fwd({"check-cp", file, "--proc", "F", "--ctx", "C"}).code, 0);
  EXPECT_EQ(fwd({"check-cp", file, "--proc", "F", "--ctx", "P"}).code, 1);
}

TEST_F(Cli, Live) {
  write(kCrissCross);
  auto r = fwd({"live", file, "--ctx", "C"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "x*y, y*x, x@y, y@x, x1y, y#[x]\n");
  auto n = fwd({"live", file, "--ctx", "P"});
  EXPECT_EQ(n.code, 1);
  EXPECT_EQ(n.out, "NONE\n");
}

TEST_F(Cli, LiveOnAdditives) {
  write(kCrissCross);
  auto r = fwd({"live", file, "--ctx", "Add"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("NonMultiplicative"), std::string::npos);
}

TEST_F(Cli, SynthPlainNonDual) {
  write(kCrissCross);
  auto r = fwd({"synth", file, "--ctx", "P", "--plain"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "NONE\n");
}

TEST_F(Cli, SynthAllAndLimit) {
  write(kCrissCross);
  auto all = fwd({"synth", file, "--ctx", "C", "--all"});
  EXPECT_EQ(all.code, 0);
  EXPECT_EQ(std::count(all.out.begin(), all.out.end(), '\n'), 6);
  auto two = fwd({"synth", file, "--ctx", "C", "--limit", "2"});
  EXPECT_EQ(std::count(two.out.begin(), two.out.end(), '\n'), 2);
}

TEST_F(Cli, Run) {
  write(kCrissCross);
  auto r = fwd({"run", file, "--proc", "Unit", "--trace", "--ctx", "Z"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1. CloseWait"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("2. WaitClose"), std::string::npos);
  EXPECT_EQ(r.out.substr(r.out.rfind('\n', r.out.size() - 2) + 1), "close z\n");
}

TEST_F(Cli, Erase) {
  write(kCrissCross);
  auto r = fwd({"erase", file, "--ctx", "C"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "{ x : (~name @ (~cost * bot)), y : (cost @ (name * 1)) }\n");
}

TEST_F(Cli, JsonStableUnderSeed) {
  write(kCrissCross);
  auto a = fwd({"--json", "--seed", "7", "synth", file, "--ctx", "C", "--all"});
  auto b = fwd({"--json", "--seed", "7", "synth", file, "--ctx", "C", "--all"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto j = json::parse(a.out);
  EXPECT_TRUE(j["ok"].get<bool>());
  EXPECT_EQ(j["results"].size(), 6u);
  EXPECT_EQ(j["results"][0]["derivation"]["rule"], "Par");
  auto c = fwd({"--json", "--seed", "8", "synth", file, "--ctx", "C"});
  EXPECT_NE(a.out.substr(0, 200), c.out.substr(0, 200));
}

TEST_F(Cli, JsonCheckAndRun) {
  write(kCrissCross);
  auto j = json::parse(fwd({"--json", "check", file, "--proc", "F", "--ctx", "C"}).out);
  EXPECT_EQ(j["nodes"], 8);
  EXPECT_EQ(j["derivation"]["premises"][0]["rule"], "Par");
  auto r = json::parse(fwd({"--json", "run", file, "--proc", "Unit", "--trace"}).out);
  EXPECT_EQ(r["result"], "close z");
  EXPECT_EQ(r["trace"][0]["step"], "CloseWait");
  auto bad = json::parse(fwd({"--json", "check", file, "--proc", "F", "--ctx", "P"}).out);
  EXPECT_FALSE(bad["ok"].get<bool>());
  EXPECT_EQ(bad["error"], "RuleMismatch");
}

TEST_F(Cli, Script) {
  write(std::string(kCrissCross) + "check F in C;\nsynth P;\n");
  auto r = fwd({"script", file});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("== check F in C"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  write(kCrissCross);
  EXPECT_EQ(fwd({}).code, 2);
  EXPECT_EQ(fwd({"check", file, "--proc", "F"}).code, 2);
  EXPECT_EQ(fwd({"check", file, "--proc", "Nope", "--ctx", "C"}).code, 2);
  EXPECT_EQ(fwd({"check", "/nonexistent/file.dsl", "--proc", "F", "--ctx", "C"}).code, 2);
  EXPECT_EQ(fwd({"frobnicate"}).code, 2);
}

TEST_F(Cli, ParseErrorExit) {
  write("proc P = close;");
  auto r = fwd({"check", file, "--proc", "P", "--ctx", "C"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos) << r.err;
}

TEST_F(Cli, BadContextExit) {
  write("ctx C = { x : bot[q] }; proc P = close x;");
  EXPECT_EQ(fwd({"check", file, "--proc", "P", "--ctx", "C"}).code, 2);
}

TEST_F(Cli, Help) {
  auto r = fwd({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("check"), std::string::npos);
}
