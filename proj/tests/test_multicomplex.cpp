#include <random>

#include "test_util.hpp"
#include "fnmc/multicomplex.hpp"

using namespace fnmc;

namespace {

FnTree T(const char* s) { return parse_tree_digits(s); }

FnChain C(std::initializer_list<const char*> trees) {
  std::vector<FnTree> v;
  for (const char* s : trees) v.push_back(T(s));
  int n = v.empty() ? 0 : v.front().points();
  return FnChain::from_terms(n, v);
}

std::vector<FnTree> all_trees(int n) {
  std::vector<FnTree> out;
  for (int d = 0; d <= 2 * (n - 1); ++d) {
    auto part = enumerate_trees(n, d);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

FnTree random_tree(int n, std::mt19937& rng) {
  std::vector<int> order(n), depths(n - 1);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  for (auto& a : depths) a = static_cast<int>(rng() % 3);
  return FnTree(order, depths);
}

}  // namespace

TEST_CASE("D0 examples") {
  CHECK(D0(T("12")) == C({"1|2", "2|1"}));
  CHECK(D0(T("1|3||24")) == C({"3||1||24", "1||3||24", "1|3||4|2", "1|3||2|4"}));
  CHECK(D0(T("1||2")).empty());
}

TEST_CASE("D1 examples") {
  CHECK(D1(T("12")) == C({"2||13", "13||2"}));
  CHECK(D1_at(T("13|2"), 3) == C({"13|2||4", "3||14|2", "13||4|2", "3|2||14"}));
  CHECK(D1_at(T("12"), 0) == C({"1||23"}));
  CHECK(D1_at(T("12"), 3) == C({"12||3"}));
  // The D1^4 example tree 1|23||7|548||9 skips label 6; this is its order-preserving compression.
  CHECK(D1_at(T("1|23||6|547||8"), 4) ==
        C({"1|23||7|648||5||9", "1|23||648||7|5||9", "1|23||7|48||65||9", "1|23||48||7|65||9",
           "1|23||7|64||58||9", "1|23||64||7|58||9", "1|23||7|4||658||9", "1|23||4||7|658||9"}));
}

TEST_CASE("D2 examples") {
  CHECK(D2(T("12")) == C({"13||2|4", "3|1||24"}));
  CHECK(D2(T("21")) == C({"31||4|2", "1|3||42"}));
  CHECK(D2(T("1|2")) == C({"1|3||2|4"}));
  CHECK(D2(T("1||2")).empty());
}

TEST_CASE("D3 examples") {
  CHECK(D3(T("1||23")).empty());
  CHECK(D3(T("1|2|3")) == C({"1|3|5||2|4|6"}));
  FnChain full = D3(T("123"));
  std::vector<FnTree> no_single_bar;
  for (const auto& t : full)
    if (!t.has_depth(1)) no_single_bar.push_back(t);
  CHECK(FnChain::from_terms(6, no_single_bar) == C({"13||25||46", "35||16||24"}));
}

TEST_CASE("shift union") {
  CHECK(shift_union({1, 1, 4}, {1, 2}) == std::vector<int>{1, 1, 1, 2, 2});
  CHECK(shift_union({}, {2, 3}) == std::vector<int>{2, 3});
  FnTree t = T("2|31||54");
  for (auto I : std::vector<std::vector<int>>{{0}, {1, 3}, {2, 7}, {1, 1, 4}})
    for (auto J : std::vector<std::vector<int>>{{0}, {1, 2}, {5, 6}, {3}}) {
      std::vector<int> sI = I, sJ = J;
      FnTree inner = coface_multi(t, J);
      if (*std::max_element(I.begin(), I.end()) > inner.points() + static_cast<int>(I.size()))
        continue;
      CHECK(coface_multi(inner, I) == coface_multi(t, shift_union(I, J)));
    }
}

TEST_CASE("multicomplex identities on every tree with at most four points") {
  std::array<std::size_t, kSliceClasses> coverage{};
  for (int n = 1; n <= 4; ++n)
    for (const auto& t : all_trees(n)) {
      CHECK(verify_truncated_identity(t));
      SliceReport rep = verify_sliced(t);
      CHECK_MESSAGE(rep.ok, format_tree(t));
      for (int c = 0; c < kSliceClasses; ++c) coverage[c] += rep.coverage[c];
    }
  for (int c = 0; c < kSliceClasses; ++c) CHECK_MESSAGE(coverage[c] > 0, slice_class_name(c));
}

TEST_CASE("multicomplex identities on random five point trees") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    FnTree t = random_tree(5, rng);
    CHECK_MESSAGE(verify_sliced(t).ok, format_tree(t));
  }
}

TEST_CASE("terms of D_A lie below d_A") {
  for (int n = 1; n <= 4; ++n)
    for (const auto& t : all_trees(n)) {
      for (int a = 0; a <= n + 1; ++a) CHECK(verify_mu_bound(t, {a}));
      for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b) {
          CHECK(verify_mu_bound(t, {a, b}));
          for (int c = b + 1; c <= n; ++c) CHECK(verify_mu_bound(t, {a, b, c}));
        }
      CHECK(verify_mu_bound(t, {}));
    }
}

TEST_CASE("m = 2 family") {
  FnTree t = parse_tree("1 2");  // depth 2 is not allowed for m = 2
  CHECK_THROWS_AS(D_m2(t, {1}), FnError);
  // One top cloud 12 (depth 1) doubled at 1.
  FnTree u = FnTree(std::vector<int>{1, 2}, std::vector<int>{1});
  CHECK(D0_m2(u).size() == 2);
  for (int n = 1; n <= 4; ++n) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i + 1;
    for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
      std::vector<int> depths(n - 1);
      for (int g = 0; g + 1 < n; ++g) depths[g] = (mask >> g) & 1;
      std::vector<int> perm = order;
      do {
        CHECK(verify_sliced_m2(FnTree(perm, depths)));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
}
