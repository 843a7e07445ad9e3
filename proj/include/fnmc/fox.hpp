#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fnmc/tree.hpp"

namespace fnmc {

enum class SymbolKind : std::uint8_t { Constant, X, Y, DY, Z, EmptyX, EmptyY, EmptyZ };

struct FoxSymbol {
  SymbolKind kind = SymbolKind::Constant;
  int value = 0;  // the constant, or the variable index
  auto operator<=>(const FoxSymbol&) const = default;
};

// A word of symbols with bar counts between consecutive symbols. Leading and
// trailing bars are representable so that malformed input can be validated.
class FoxMonomial {
 public:
  FoxMonomial() = default;
  FoxMonomial(std::vector<FoxSymbol> symbols, std::vector<int> bars, int leading = 0,
              int trailing = 0);

  const std::vector<FoxSymbol>& symbols() const noexcept { return symbols_; }
  const std::vector<int>& bars() const noexcept { return bars_; }
  int leading_bars() const noexcept { return leading_; }
  int trailing_bars() const noexcept { return trailing_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }

  bool is_numerical() const noexcept;
  std::vector<int> constants() const;
  int occurrences(SymbolKind kind, int index) const;

  auto operator<=>(const FoxMonomial&) const = default;
  bool operator==(const FoxMonomial&) const = default;

 private:
  std::vector<FoxSymbol> symbols_;
  std::vector<int> bars_;
  int leading_ = 0;
  int trailing_ = 0;
};

// F2 sum of monomials, sorted and free of duplicates.
class FoxPolynomial {
 public:
  FoxPolynomial() = default;
  static FoxPolynomial from_terms(std::vector<FoxMonomial> terms);
  static FoxPolynomial single(FoxMonomial m);

  const std::vector<FoxMonomial>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  FoxPolynomial& operator+=(const FoxPolynomial& other);
  bool operator==(const FoxPolynomial&) const = default;

 private:
  std::vector<FoxMonomial> terms_;
};

// Tokens: integers, X<n>, Y<n>, dY<n> (or ∂Y<n>), Z<n>, and bars.
FoxMonomial parse_monomial(std::string_view text);
FoxPolynomial parse_polynomial(std::string_view text);
std::string format_monomial(const FoxMonomial& m);
std::string format_polynomial(const FoxPolynomial& p);

bool validate(const FoxMonomial& m);

// Apply a map on constants; constants missing from the map are kept.
FoxMonomial relabel_constants(const FoxMonomial& m, const std::map<int, int>& map);
FoxPolynomial relabel_constants(const FoxPolynomial& p, const std::map<int, int>& map);
// x -> x + 1 for every constant x >= i.
FoxMonomial delta(const FoxMonomial& m, int i);

FoxMonomial eliminate(const FoxMonomial& m, int label);
// Eliminates every constant outside keep.
FoxMonomial restrict_to(const FoxMonomial& m, const std::vector<int>& keep);
// As restrict_to, but an empty result becomes the dummy of the given kind.
FoxMonomial restrict_dummy(const FoxMonomial& m, const std::vector<int>& keep, SymbolKind dummy);

// Removes dummies left to right. Returns false when the monomial vanishes.
bool simplify_dummies(FoxMonomial& m);

// Upper differential of a numerical cloud whose bars are at most 1.
FoxPolynomial upper_diff(const FoxMonomial& cloud);

struct EvalStats {
  std::size_t raw_terms = 0;
  std::size_t vanished = 0;
};

// Substitutes a numerical 2-cloud for the X variable, distributing its
// constants over the occurrences in every possible way.
FoxPolynomial eval_X(const FoxMonomial& m, int index, const FoxMonomial& cloud,
                     EvalStats* stats = nullptr);
// Substitutes a numerical 1-cloud for Y, distributing 2-clouds over the
// occurrences; the derived occurrence receives the upper differential.
FoxPolynomial eval_Y(const FoxMonomial& m, int index, const FoxMonomial& cloud,
                     EvalStats* stats = nullptr);
FoxPolynomial eval_Z(const FoxMonomial& m, int index, const FoxMonomial& cloud);
FoxPolynomial eval_X(const FoxPolynomial& p, int index, const FoxMonomial& cloud);
FoxPolynomial eval_Y(const FoxPolynomial& p, int index, const FoxMonomial& cloud);
FoxPolynomial eval_Z(const FoxPolynomial& p, int index, const FoxMonomial& cloud);

struct CloudAssignment {
  std::map<int, FoxMonomial> x;
  std::map<int, FoxMonomial> y;
  std::map<int, FoxMonomial> z;
};

// Evaluates all X, then all Y, then all Z variables.
FoxPolynomial eval_total(const FoxPolynomial& p, const CloudAssignment& a);

FnTree monomial_to_tree(const FoxMonomial& m);
FnChain to_chain(const FoxPolynomial& p);
FoxMonomial tree_to_monomial(const FnTree& t);

// Numerical cloud for fast evaluation: labels with bar counts between them.
struct NumCloud {
  int size = 0;
  std::uint8_t labels[kMaxPoints];
  std::uint8_t bars[kMaxPoints];
};

// Fast total evaluation of a core monomial without derived variables. Every
// variable of the core must be assigned (possibly to an empty cloud); the
// resulting trees are appended to out.
struct FastAssignment {
  NumCloud x[8];
  NumCloud y[8];
  NumCloud z[4];
};
void evaluate_numeric(const FoxMonomial& core, const FastAssignment& a, std::vector<FnTree>& out);

}  // namespace fnmc
