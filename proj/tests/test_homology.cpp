#include <map>
#include <set>

#include "test_util.hpp"
#include "fnmc/homology.hpp"
#include "fnmc/multicomplex.hpp"

using namespace fnmc;

namespace {

ChordDiagram D(int k, std::string_view edges) { return parse_diagram_inline(edges, k); }

// Unsigned Stirling numbers of the first kind c(n, c) count diagrams with n - c chords.
std::size_t stirling1(int n, int c) {
  std::vector<std::vector<std::size_t>> s(n + 1, std::vector<std::size_t>(n + 1, 0));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= i; ++j) s[i][j] = s[i - 1][j - 1] + (i - 1) * s[i - 1][j];
  return s[n][c];
}

// Associated Stirling numbers: permutations of n with c cycles, none fixed.
std::size_t derangement_cycles(int n, int c) {
  std::vector<std::vector<std::size_t>> a(n + 1, std::vector<std::size_t>(n + 1, 0));
  a[0][0] = 1;
  for (int i = 2; i <= n; ++i)
    for (int j = 1; j <= i / 2; ++j)
      a[i][j] = (i - 1) * a[i - 1][j] + (i - 1) * a[i - 2][j - 1];
  return a[n][c];
}

FnChain digits_chain(std::string_view text, int points) {
  std::vector<FnTree> terms;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = std::min(text.find('+', pos), text.size());
    auto item = text.substr(pos, end - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    terms.push_back(parse_tree_digits(item));
    pos = end + 1;
  }
  return FnChain::from_terms(points, std::move(terms));
}

std::string shape_text(const SinhaShape& s) { return format_tree(shape_tree(s)); }

}  // namespace

TEST_CASE("diagram enumeration order and counts") {
  auto all = enumerate_diagrams(4, 2);
  REQUIRE(all.size() == 11);
  CHECK(all.front() == D(4, "1-2,1-3"));
  CHECK(all.back() == D(4, "2-3,3-4"));
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(diagram_less(all[i - 1], all[i]));

  auto norm = enumerate_normalized(4, 2);
  CHECK(norm == std::vector<ChordDiagram>{D(4, "1-2,3-4"), D(4, "1-3,2-4"), D(4, "2-3,1-4")});
  CHECK(enumerate_normalized(3, 1).empty());

  const std::map<std::pair<int, int>, std::size_t> frozen{
      {{4, 2}, 3}, {{5, 4}, 24}, {{6, 4}, 130}, {{7, 4}, 210},
      {{8, 5}, 2380}, {{9, 5}, 2520}, {{10, 5}, 945}};
  for (auto& [kd, n] : frozen) CHECK(normalized_count(kd.first, kd.second) == n);
  for (int k = 1; k <= 8; ++k)
    for (int d = 0; d < k; ++d) {
      CHECK(enumerate_diagrams(k, d).size() == stirling1(k, k - d));
      CHECK(normalized_count(k, d) == derangement_cycles(k, k - d));
    }
  for (auto& g : enumerate_normalized(6, 4)) CHECK(normalized_index(g) >= 0);
  CHECK(normalized_index(D(4, "1-2,2-3")) == -1);
}

TEST_CASE("planetary cycles") {
  auto c = planetary_cycle(D(2, "1-2"));
  CHECK(c == digits_chain("12 + 21", 2));
  CHECK(planetary_cycle(D(4, "1-3,2-4")) == digits_chain("13||24 + 31||24 + 13||42 + 31||42", 4));
  CHECK(planetary_cycle(D(3, "1-2,1-3")) == digits_chain("231 + 132 + 213 + 312", 3));
  for (int k = 2; k <= 6; ++k)
    for (int d = 1; d < k; ++d)
      for (auto& g : enumerate_normalized(k, d)) {
        auto z = planetary_cycle(g);
        CHECK(z.size() == (1u << d));
        CHECK(D0(z).empty());
      }
}

TEST_CASE("Sinha shapes") {
  auto s = sinha_shape(parse_tree_digits("24||153"));
  REQUIRE(s);
  CHECK(shape_text(*s) == format_tree(parse_tree_digits("153||24")));
  CHECK_FALSE(sinha_shape(parse_tree_digits("1|2")));
  CHECK_FALSE(sinha_shape(parse_tree_digits("41||23")));
  CHECK(shape_text(diagram_to_sinha(D(5, "1-3,1-4,2-5"))) == format_tree(parse_tree_digits("143||25")));
  CHECK(shape_text(diagram_to_sinha(D(9, "4-5,3-6,2-7,1-8,1-9"))) ==
        format_tree(parse_tree_digits("198||27||36||45")));

  auto odd = evaluate_chain(digits_chain("12 + 21 + 1|2", 2));
  REQUIRE(odd.size() == 1);
  CHECK(shape_text(odd[0]) == "1 2");
  CHECK(evaluate_chain(digits_chain("12||3 + 3||12", 3)).empty());
}

TEST_CASE("pairing with Sinha cocycles") {
  const auto& b = sinha_basis(3, 2);
  REQUIRE(b.diagrams() == std::vector<ChordDiagram>{D(3, "1-2,1-3"), D(3, "1-2,2-3")});
  // Shapes 132 and 123; the cycles are 231+132+213+312 and 321+231+132+123.
  CHECK(b.pairing().get(0, 0));
  CHECK(b.pairing().get(0, 1));
  CHECK_FALSE(b.pairing().get(1, 0));
  CHECK(b.pairing().get(1, 1));

  for (auto [k, d] : {std::pair{4, 2}, {5, 3}, {6, 4}, {7, 4}}) {
    const auto& basis = sinha_basis(k, d);
    for (std::size_t p = 0; p < basis.size(); ++p) {
      auto x = class_coordinates(planetary_cycle(basis.diagrams()[p]), k, d);
      for (std::size_t i = 0; i < x.bits.size(); ++i) CHECK(x.bits[i] == (i == p));
    }
    // With blocks of length at most three, every increasing block doubles the number of
    // planetary classes a shape pairs with.
    for (std::size_t r = 0; r < basis.size(); ++r) {
      auto shape = diagram_to_sinha(basis.diagrams()[r]);
      bool short_blocks = true;
      int ascending = 0;
      for (auto& bl : shape.blocks) {
        short_blocks = short_blocks && bl.size() <= 3;
        ascending += bl.size() == 3 && bl[1] < bl[2];
      }
      if (!short_blocks) continue;
      Gf2Vector e(basis.size(), 0);
      e[r] = 1;
      auto x = basis.coordinates_from_evaluation(e);
      int nz = 0;
      for (auto bit : x.bits) nz += bit;
      CHECK(nz == 1 << ascending);
    }
  }
}

TEST_CASE("first differential") {
  CHECK(d1_matrix(6, 4).rows() == 130);
  CHECK(d1_matrix(6, 4).cols() == 24);
  CHECK(d1_matrix(7, 4).rows() == 210);
  CHECK(gf2_rank(d1_matrix(6, 4)) == 23);
  CHECK(gf2_kernel(d1_matrix(7, 4)).size() == 25);
  for (auto [k, d] : {std::pair{4, 2}, {5, 3}, {6, 3}, {6, 4}, {7, 4}})
    CHECK((d1_matrix(k + 1, d) * d1_matrix(k, d)).is_zero());
  CHECK(e2_dimension(4, 4) == 2);
  CHECK(e2_dimension(6, 8) == 2);
  CHECK(e2_dimension(6, 7) == 0);
}

TEST_CASE("E2 vanishes outside the vanishing lines") {
  for (int k = 1; k <= 7; ++k)
    for (int q = 0; q <= 14; ++q)
      if (!inside_vanishing_lines(k, q)) CHECK(e2_dimension(k, q) == 0);
}

TEST_CASE("stacking product") {
  ChordDiagram iota{2, {{1, 2}}};
  ChordDiagram q{3, {{1, 2}, {1, 3}}};
  CHECK(stack(q, iota) == D(5, "1-2,1-3,4-5"));
  CHECK(stack(stack(q, iota), iota) == stack(q, stack(iota, iota)));
  CHECK(stack(q, q) == q1_iota_squared());
  auto u = from_diagrams({D(3, "1-2,1-3"), D(3, "1-2,2-3")}, 3, 2);
  auto w = multiply(u, unit_vector(iota));
  CHECK(support(w) == std::vector<ChordDiagram>{D(5, "1-2,1-3,4-5"), D(5, "1-2,2-3,4-5")});
  // Products of cycles are cycles.
  for (auto& a : gf2_kernel(d1_matrix(4, 2))) {
    auto prod = multiply(CoordVector{3, 2, a}, unit_vector(iota));
    auto img = d1_matrix(6, 3) * prod.bits;
    for (auto bit : img) CHECK(bit == 0);
  }
}

TEST_CASE("Vassiliev class in E2(6,8)") {
  auto v = vassiliev_class();
  CHECK(v.rank_ladder == std::vector<std::size_t>{23, 24, 25});
  CHECK(D0(v.cycle).empty());
  auto img = d1_matrix(7, 4) * v.coords.bits;
  for (auto bit : img) CHECK(bit == 0);
  CHECK(class_coordinates(v.cycle, 6, 4) == v.coords);
}

TEST_CASE("bigrading conventions") {
  for (int m = 2; m <= 5; ++m)
    for (int i = -4; i <= 0; ++i)
      for (int j = -12; j <= 0; ++j) {
        Bigrading t{i, j};
        CHECK(vassiliev_to_sinha(tourtchine_to_vassiliev(t, m), m) == tourtchine_to_sinha(t, m));
      }
  CHECK(inside_vanishing_lines(6, 8));
  CHECK(inside_vanishing_lines(9, 10));
  CHECK_FALSE(inside_vanishing_lines(9, 9));
  CHECK_FALSE(inside_vanishing_lines(4, 2));
  CHECK_FALSE(inside_vanishing_lines(4, 8));
}

TEST_CASE("diag and gf2vec files") {
  auto g = q1_iota_squared();
  CHECK(parse_diag(format_diag(g)) == g);
  CHECK(parse_diag("# c\nDIAG k=3 d=2\n1 3\n1 2\n") == D(3, "1-2,1-3"));
  CHECK_THROWS_AS(parse_diag("DIAG k=3 d=2\n1 3\n2 3\n"), FnError);
  CHECK_THROWS_AS(parse_diagram_inline("1-2,x"), FnError);
  CHECK(parse_diagram_inline("2-1,3-1").points == 3);
  CoordVector v{6, 4, Gf2Vector(130, 0)};
  v.bits[0] = v.bits[77] = 1;
  CHECK(parse_gf2vec(format_gf2vec(v)) == v);
  CHECK_THROWS_AS(parse_gf2vec("GF2VEC k=6 d=4 len=3\n4\n"), FnError);
}
