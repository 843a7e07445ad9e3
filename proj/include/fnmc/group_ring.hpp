#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fnmc/perm.hpp"
#include "fnmc/tree.hpp"

namespace fnmc {

// Element of F2[S_k]: the sorted set of permutations with coefficient 1.
using GrElement = std::vector<PermCode>;

void gr_add_into(GrElement& a, const GrElement& b);
GrElement gr_mul(const GrElement& a, const GrElement& b, int k);
// Applies g -> g^-1 termwise (the anti-involution of the group ring).
GrElement gr_invert(const GrElement& a, int k);
inline bool gr_is_unit(const GrElement& a) noexcept { return a.size() == 1; }

using GrRow = std::vector<std::pair<int, GrElement>>;  // sorted by column

class GroupRingMatrix {
 public:
  GroupRingMatrix() = default;
  GroupRingMatrix(int rows, int cols, int k);
  static GroupRingMatrix identity(int n, int k);

  int rows() const noexcept { return static_cast<int>(rows_.size()); }
  int cols() const noexcept { return cols_; }
  int degree() const noexcept { return k_; }
  const GrRow& row(int r) const { return rows_[r]; }
  const GrElement& at(int r, int c) const;
  void toggle(int r, int c, PermCode g);
  void add(int r, int c, const GrElement& e);
  std::size_t terms() const;

  bool operator==(const GroupRingMatrix&) const = default;

 private:
  int cols_ = 0;
  int k_ = 1;
  std::vector<GrRow> rows_;
};

struct GrVector {
  int k = 1;
  std::vector<GrElement> entries;

  GrVector() = default;
  GrVector(int length, int k_) : k(k_), entries(static_cast<std::size_t>(length)) {}
  int length() const noexcept { return static_cast<int>(entries.size()); }
  std::size_t terms() const;
  bool operator==(const GrVector&) const = default;
};

GroupRingMatrix gr_matmul(const GroupRingMatrix& a, const GroupRingMatrix& b);
GrVector gr_matvec(const GroupRingMatrix& a, const GrVector& x);
GroupRingMatrix action_convert(const GroupRingMatrix& a);
GrVector action_convert(const GrVector& v);

// Coefficient matrix of D0 from FN(k, d) to FN(k, d-1) over the left action:
// column j is D0 of the identity-order tree with the j-th depth vector, and the
// entry in row i is the sum of the orders of its terms with the i-th depth vector.
GroupRingMatrix d0_matrix(int k, int d);

// Coordinates of a chain in FN(k, d) as a left-module vector over the depth vectors.
GrVector chain_to_grvector(const FnChain& c, int d);
FnChain grvector_to_chain(const GrVector& v, int d);

// Coset representative c_r = (r r+1 ... t), the cycle sending t to r.
PermCode coset_rep(int r, int t, int k) noexcept;

// Rewrites a system over F2[S_t] as one over F2[S_{t-1}] with t times as many
// rows and columns: index i becomes i*t + (r-1) for the coset of c_r.
GroupRingMatrix expand_scalars(const GroupRingMatrix& a, int t);
// Right-hand sides split along the cosets of their terms' value at t.
GrVector expand_rhs(const GrVector& b, int t);
// Unknowns recombine as x_c = sum_s c_s x_{c,s}; expand_unknowns is its inverse.
GrVector collapse_unknowns(const GrVector& y, int t);
GrVector expand_unknowns(const GrVector& x, int t);

struct SolveStats {
  int t_min = 0;                   // lowest symmetric group the elimination descended to
  std::vector<std::size_t> pivots;  // unit pivots used at each level, from k downwards
  std::vector<std::size_t> sizes;   // rows entering each level
};

struct SolveResult {
  bool feasible = false;
  GrVector x;
  SolveStats stats;
};

// Solves A x = b, (Ax)_i = sum_j A_ij x_j, with entries of A in F2[S_t] for t = level.
// Unit pivots are taken in sweeps over the columns (rows top to bottom within a column);
// when none remain the rest of the system descends to S_{t-1}.
using SolveProgress = std::function<void(int level, std::size_t rows, std::size_t pivots)>;
SolveResult equivariant_solve(const GroupRingMatrix& a, const GrVector& b, int level = 0,
                              const SolveProgress& progress = {});

// "GRMAT rows=<r> cols=<c> group=S<k>" then "i j p1 ... pk" lines (1-based).
GroupRingMatrix parse_grmat(std::string_view content);
std::string format_grmat(const GroupRingMatrix& a);
// "GRVEC len=<n> group=S<k>" then "i p1 ... pk" lines.
GrVector parse_grvec(std::string_view content);
std::string format_grvec(const GrVector& v);

}  // namespace fnmc
