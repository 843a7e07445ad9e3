#include <random>

#include "test_util.hpp"
#include "fnmc/fox.hpp"
#include "fnmc/multicomplex.hpp"

using namespace fnmc;

namespace {

FoxMonomial M(const char* s) { return parse_monomial(s); }
FoxPolynomial P(const char* s) { return parse_polynomial(s); }

}  // namespace

TEST_CASE("monomial validation") {
  CHECK(validate(M("Y1 | X1 5 | Y2 || X1")));
  CHECK(validate(M("X1 X2 || Y2 || dY2 | X1 2 X2 | Y2")));
  CHECK(validate(M("1 2 || Z1")));
  CHECK(validate(M("Z1 || Y1 | X1 4 X2 | Y2 || Y1 | X1 5 X2 | Y2 || Z2")));
  CHECK_FALSE(validate(M("Y1 X1")));
  CHECK_FALSE(validate(M("1 || 2 || 1")));
  CHECK_FALSE(validate(M("| 1 2")));
  CHECK_FALSE(validate(M("1 2 |")));
  CHECK_FALSE(validate(M("1 ||| 2")));
  CHECK_FALSE(validate(M("Z1 | 2")));
  CHECK_FALSE(validate(M("Z1 || 2 || Z1")));
  CHECK_FALSE(validate(M("dY1 || dY2")));
  CHECK_FALSE(validate(M("dY1 4")));
}

TEST_CASE("parse and format monomials") {
  FoxMonomial m = M("Y1 | X1 5 | Y2 || X1");
  CHECK(format_monomial(m) == "Y1 | X1 5 | Y2 || X1");
  CHECK(parse_monomial(format_monomial(m)) == m);
  CHECK(M("\xE2\x88\x82Y2 | 3") == M("dY2 | 3"));
  CHECK_THROWS_AS(M("W1"), FnError);
}

TEST_CASE("elimination and restriction") {
  CHECK(eliminate(M("1 | 2 || 3"), 2) == M("1 || 3"));
  CHECK(eliminate(M("1 | 2 || 3"), 1) == M("2 || 3"));
  CHECK(eliminate(M("1 | 2 || 3"), 3) == M("1 | 2"));
  CHECK(eliminate(M("1 2 | 3"), 2) == M("1 | 3"));
  CHECK_THROWS_AS(eliminate(M("1 2"), 5), FnError);
  CHECK(restrict_to(M("4 | 1 2 || 5 | 3"), {1, 3}) == M("1 || 3"));
  CHECK(restrict_dummy(M("1 2"), {}, SymbolKind::EmptyX).symbols().front().kind ==
        SymbolKind::EmptyX);
  // Elimination in any order gives the same restriction.
  FoxMonomial w = M("4 | 1 2 || 5 | 3 6");
  CHECK(eliminate(eliminate(w, 5), 2) == eliminate(eliminate(w, 2), 5));
}

TEST_CASE("dummy simplification") {
  FoxMonomial a({{SymbolKind::Constant, 1}, {SymbolKind::EmptyX, 0}, {SymbolKind::Constant, 2}},
                {0, 1});
  REQUIRE(simplify_dummies(a));
  CHECK(a == M("1 | 2"));
  FoxMonomial b({{SymbolKind::Constant, 1}, {SymbolKind::EmptyX, 0}, {SymbolKind::Constant, 2}},
                {1, 2});
  CHECK_FALSE(simplify_dummies(b));
  FoxMonomial c({{SymbolKind::Constant, 1}, {SymbolKind::EmptyY, 0}, {SymbolKind::Constant, 2}},
                {2, 1});
  REQUIRE(simplify_dummies(c));
  CHECK(c == M("1 || 2"));
  FoxMonomial d({{SymbolKind::EmptyY, 0}, {SymbolKind::Constant, 2}}, {2});
  CHECK_FALSE(simplify_dummies(d));
  FoxMonomial e({{SymbolKind::EmptyZ, 0}, {SymbolKind::Constant, 2}}, {2});
  REQUIRE(simplify_dummies(e));
  CHECK(e == M("2"));
}

TEST_CASE("upper differential") {
  CHECK(upper_diff(M("8 9")) == P("8 | 9 + 9 | 8"));
  CHECK(upper_diff(M("4")).empty());
  CHECK(upper_diff(M("1 | 2 3")) == P("1 | 2 | 3 + 1 | 3 | 2"));
  // A 2-cloud of size s contributes 2^s - 2 ordered splittings.
  CHECK(upper_diff(M("1 2 3")).size() == 6);
  CHECK_THROWS_AS(upper_diff(M("1 || 2")), FnError);
}

TEST_CASE("X evaluation example") {
  EvalStats st;
  auto r = eval_X(M("Y1 | X1 5 | Y2 || X1"), 1, M("1 2"), &st);
  CHECK(r == P("Y1 | 5 | Y2 || 1 2 + Y1 | 1 5 | Y2 || 2 + Y1 | 2 5 | Y2 || 1"));
  CHECK(st.raw_terms == 4);
  CHECK(st.vanished == 1);
  CHECK_THROWS_AS(eval_X(M("Y1 | X1 5"), 1, M("5 6")), FnError);
}

TEST_CASE("X evaluation enumerates d^|T| distributions") {
  EvalStats st;
  eval_X(M("X1 1 || X1 2 | X1"), 1, M("3 4 5"), &st);
  CHECK(st.raw_terms == 27);
}

TEST_CASE("Y evaluation example with a derived variable") {
  auto r = eval_Y(M("X1 X2 || Y2 || dY2 | X1 2 X2 | Y2"), 2, M("4 | 8 9"));
  CHECK(r == P("X1 X2 || 4 || 8 | 9 | X1 2 X2 + X1 X2 || 4 || 9 | 8 | X1 2 X2"
               " + X1 X2 || 4 || X1 2 X2 | 8 9 + X1 X2 || 8 9 || X1 2 X2 | 4"
               " + X1 X2 || 4 | 8 9 || X1 2 X2"));
}

TEST_CASE("Z evaluation and total evaluation") {
  CHECK(eval_Z(M("Z1 || 3"), 1, M("1 | 2")) == P("1 | 2 || 3"));
  CHECK(eval_Z(M("Z1 || 3"), 1, FoxMonomial()) == P("3"));

  // The D1^4 worked example, evaluated on its literal clouds.
  CloudAssignment a;
  a.x[1] = M("6");
  a.x[2] = M("9");
  a.y[1] = M("8");
  a.y[2] = FoxMonomial();
  a.z[1] = M("1 | 2 3");
  a.z[2] = M("10");
  auto r = eval_total(P("Z1 || Y1 | X1 4 X2 | Y2 || Y1 | X1 5 X2 | Y2 || Z2"), a);
  CHECK(r == P("1|2 3||8|6 4 9||5||10 + 1|2 3||6 4 9||8|5||10 + 1|2 3||8|4 9||6 5||10"
               " + 1|2 3||4 9||8|6 5||10 + 1|2 3||8|6 4||5 9||10 + 1|2 3||6 4||8|5 9||10"
               " + 1|2 3||8|4||6 5 9||10 + 1|2 3||4||8|6 5 9||10"));

  // Monomials touching the assigned support evaluate to zero.
  CloudAssignment b;
  b.x[1] = M("1");
  CHECK(eval_total(P("X1 1"), b).empty());
  CloudAssignment c;
  c.x[1] = M("1");
  c.x[2] = M("1");
  CHECK_THROWS_AS(eval_total(P("X1 X2"), c), FnError);
}

TEST_CASE("fast numeric evaluation agrees with the symbolic evaluator") {
  const char* cores[] = {
      "Z1 || Y1 | X1 2 X2 | Y2 || Y1 | X1 3 X2 | Y2 || Z2",
      "Z1 || Y1 | X1 X2 3 X3 | X1 2 X2 X3 | Y2 || Y1 | X1 4 X2 5 X3 | Y2 || Z2",
      "Y1 | X1 2 X2 | Y2 || Y1 | X2 3 X1 | Y2",
  };
  std::mt19937 rng(7);
  for (const char* core : cores) {
    FoxMonomial m = M(core);
    for (int trial = 0; trial < 40; ++trial) {
      // Scatter the free labels over the variables.
      std::vector<int> free;
      auto used = m.constants();
      for (int x = 1; x <= 11; ++x)
        if (std::find(used.begin(), used.end(), x) == used.end()) free.push_back(x);
      std::shuffle(free.begin(), free.end(), rng);
      std::vector<std::vector<int>> parts(7);
      for (int x : free) {
        std::size_t v = rng() % 7;
        const SymbolKind kinds[7] = {SymbolKind::X, SymbolKind::X, SymbolKind::X, SymbolKind::Y,
                                     SymbolKind::Y, SymbolKind::Z, SymbolKind::Z};
        const int index[7] = {1, 2, 3, 1, 2, 1, 2};
        if (m.occurrences(kinds[v], index[v]) == 0) v = 0;
        parts[v].push_back(x);
      }
      CloudAssignment sym;
      FastAssignment fast;
      auto make = [&](const std::vector<int>& labels, int max_bar, NumCloud& nc) {
        std::vector<FoxSymbol> sy;
        std::vector<int> ba;
        nc.size = 0;
        for (int x : labels) {
          int bar = static_cast<int>(rng() % (max_bar + 1));
          if (!sy.empty()) {
            ba.push_back(bar);
            nc.bars[nc.size - 1] = static_cast<std::uint8_t>(bar);
          }
          sy.push_back({SymbolKind::Constant, x});
          nc.labels[nc.size++] = static_cast<std::uint8_t>(x);
        }
        return FoxMonomial(std::move(sy), std::move(ba));
      };
      sym.x[1] = make(parts[0], 0, fast.x[1]);
      sym.x[2] = make(parts[1], 0, fast.x[2]);
      sym.x[3] = make(parts[2], 0, fast.x[3]);
      sym.y[1] = make(parts[3], 1, fast.y[1]);
      sym.y[2] = make(parts[4], 1, fast.y[2]);
      sym.z[1] = make(parts[5], 2, fast.z[1]);
      sym.z[2] = make(parts[6], 2, fast.z[2]);
      FoxPolynomial expected = eval_total(FoxPolynomial::single(m), sym);
      std::vector<FnTree> got;
      evaluate_numeric(m, fast, got);
      CHECK(FnChain::from_terms(11, got) == to_chain(expected));
    }
  }
}

TEST_CASE("D0 matches its Fox expression") {
  // On a single 1-cloud Y, D0 is ev(Y1 || Y1) plus the upper differential.
  for (const char* s : {"1 2 | 3", "2 | 1 | 3 4", "3 1 2", "1 | 2 | 3 | 4"}) {
    FnTree t = parse_tree(s);
    FoxMonomial cloud = tree_to_monomial(t);
    FoxPolynomial expected = eval_Y(M("Y1 || Y1"), 1, cloud);
    expected += upper_diff(cloud);
    CHECK(D0(t) == to_chain(expected));
  }
}
