#include <gtest/gtest.h>

#include "fwdlogic/types.hpp"
#include "support/enumerate.hpp"

using namespace fwdlogic;

namespace {

PlainType A(const char* a) { return PlainType::atom(a); }
PlainType D(const char* a) { return PlainType::dual_atom(a); }

std::vector<PlainType> corpus() {
  fwdtest::Family f;
  f.max_size = 5;
  f.atoms = {"a", "b"};
  return fwdtest::plain_types(f, 5);
}

}  // namespace

TEST(Dual, AtomFlips) {
  EXPECT_EQ(dual(A("a")), D("a"));
  EXPECT_EQ(dual(D("a")), A("a"));
  EXPECT_EQ(dual(PlainType::one()), PlainType::bot());
}

TEST(Dual, CrissCrossType) {
  PlainType t = PlainType::par(D("name"), PlainType::tensor(D("cost"), PlainType::bot()));
  PlainType want = PlainType::tensor(A("name"), PlainType::par(A("cost"), PlainType::one()));
  EXPECT_EQ(dual(t), want);
}

TEST(Dual, AdditivesSwap) {
  EXPECT_EQ(dual(PlainType::plus(A("a"), PlainType::one())), PlainType::with(D("a"), PlainType::bot()));
}

TEST(Dual, InvolutionOnCorpus) {
  for (const auto& t : corpus()) EXPECT_EQ(dual(dual(t)), t) << t.str();
}

TEST(Annotate, AtomsStayBare) { EXPECT_EQ(annotate(A("a"), "x"), AnnType::atom("a")); }

TEST(Annotate, OneGetsSingleton) { EXPECT_EQ(annotate(PlainType::one(), "x"), AnnType::one({"x"})); }

TEST(Annotate, EveryConnectiveCarriesTarget) {
  PlainType t = PlainType::par(A("cost"), PlainType::tensor(A("name"), PlainType::one()));
  AnnType want = AnnType::par(A("cost"), "x", AnnType::tensor(A("name"), "x", AnnType::one({"x"})));
  EXPECT_EQ(annotate(t, "x"), want);
  EXPECT_EQ(annotate(t, "x").str(), "(cost @ (name * 1[x])[x])[x]");
}

TEST(Erase, DropsLists) { EXPECT_EQ(erase(AnnType::one({"x", "y"})), PlainType::one()); }

TEST(Erase, CrissCrossRoot) {
  AnnType x = AnnType::par(D("name"), "y", AnnType::tensor(D("cost"), "y", AnnType::bot("y")));
  EXPECT_EQ(erase(x), PlainType::par(D("name"), PlainType::tensor(D("cost"), PlainType::bot())));
}

TEST(Erase, InvertsAnnotateOnCorpus) {
  for (const auto& t : corpus()) {
    EXPECT_EQ(erase(annotate(t, "x")), t) << t.str();
    EXPECT_EQ(erase(annotate(t, "y")), t) << t.str();
  }
}

TEST(Dual, CommutesWithAnnotateUpToErasure) {
  for (const auto& t : corpus()) {
    EXPECT_EQ(erase(dual(annotate(t, "x"))), dual(t)) << t.str();
    EXPECT_EQ(dual(annotate(t, "x")), annotate(dual(t), "x")) << t.str();
  }
}

TEST(Dual, RejectsWideOne) { EXPECT_THROW(dual(AnnType::one({"x", "y"})), FwdError); }

TEST(Size, CountsNodes) {
  EXPECT_EQ(A("a").size(), 1u);
  EXPECT_EQ(PlainType::tensor(A("a"), PlainType::par(D("a"), PlainType::bot())).size(), 5u);
}

TEST(AnnType, OneRejectsRepeats) { EXPECT_THROW(AnnType::one({"x", "x"}), FwdError); }

TEST(AnnType, OneListComparesAsSet) { EXPECT_EQ(AnnType::one({"x", "y"}), AnnType::one({"y", "x"})); }
