#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fnmc/gf2.hpp"
#include "fnmc/tree.hpp"

namespace fnmc {

// Product of classes alpha_{i,j} over the edges, i < j, with the j strictly increasing.
struct ChordDiagram {
  int points = 0;
  std::vector<std::pair<int, int>> edges;  // (i, j)

  bool operator==(const ChordDiagram&) const = default;
  auto operator<=>(const ChordDiagram&) const = default;
};

bool is_valid(const ChordDiagram& d);
bool is_normalized(const ChordDiagram& d);
// Canonical ordering: j-row lexicographic, then i-row.
bool diagram_less(const ChordDiagram& a, const ChordDiagram& b);

std::vector<ChordDiagram> enumerate_diagrams(int k, int d);
std::vector<ChordDiagram> enumerate_normalized(int k, int d);
std::size_t normalized_count(int k, int d);
// Position in enumerate_normalized(points, edges), or -1.
long normalized_index(const ChordDiagram& d);

// Iterated planetary cycle: one term per choice of side (above or below its star) for
// every planet, components left to right by lowest label.
FnChain planetary_cycle(const ChordDiagram& d);
FnChain planetary_cycle(const std::vector<ChordDiagram>& sum, int points);

// Vertical blocks separated by double bars, each led by its minimum, blocks in order of
// their minima.
struct SinhaShape {
  std::vector<std::vector<int>> blocks;
  bool operator==(const SinhaShape&) const = default;
  auto operator<=>(const SinhaShape&) const = default;
};

FnTree shape_tree(const SinhaShape& s);
std::optional<SinhaShape> sinha_shape(const FnTree& t);
// Shapes met an odd number of times.
std::vector<SinhaShape> evaluate_chain(const FnChain& c);
SinhaShape diagram_to_sinha(const ChordDiagram& d);

// Coordinates over enumerate_normalized(k, d).
struct CoordVector {
  int points = 0;
  int edges = 0;
  Gf2Vector bits;
  bool operator==(const CoordVector&) const = default;
};

// Pairing with the Sinha cocycles of the normalized shapes, followed by the base change to
// the planetary basis.
class SinhaBasis {
 public:
  SinhaBasis(int k, int d);

  int points() const noexcept { return k_; }
  int edges() const noexcept { return d_; }
  std::size_t size() const noexcept { return diagrams_.size(); }
  const std::vector<ChordDiagram>& diagrams() const noexcept { return diagrams_; }
  // Row index of a shape, or -1 for shapes outside the normalized family.
  long shape_index(const SinhaShape& s) const;
  const Gf2Matrix& pairing() const noexcept { return pairing_; }

  // Solves B x = e for the evaluation vector e.
  CoordVector coordinates_from_evaluation(const Gf2Vector& e) const;
  Gf2Vector evaluation(const FnChain& c) const;
  CoordVector coordinates(const FnChain& c) const;

 private:
  int k_, d_;
  std::vector<ChordDiagram> diagrams_;
  std::vector<std::pair<SinhaShape, std::size_t>> shapes_;  // sorted by shape
  Gf2Matrix pairing_;
  Gf2Matrix inverse_t_;  // rows are the columns of the inverse pairing
};

// Built once per bigrading and kept for the life of the process.
const SinhaBasis& sinha_basis(int k, int d);
CoordVector class_coordinates(const FnChain& c, int k, int d);

// d1 from E1(k-1, 2d) to E1(k, 2d): column p is the class of D1(planetary_cycle(p)).
Gf2Matrix d1_matrix(int k, int d);
// dim ker(d1 out of (k, q)) - rank(d1 into (k, q)); zero for odd q.
std::size_t e2_dimension(int k, int q);

ChordDiagram stack(const ChordDiagram& a, const ChordDiagram& b);
CoordVector multiply(const CoordVector& u, const CoordVector& v);
CoordVector unit_vector(const ChordDiagram& d);
CoordVector from_diagrams(const std::vector<ChordDiagram>& sum, int k, int d);
std::vector<ChordDiagram> support(const CoordVector& v);

struct VassilievClass {
  CoordVector coords;
  FnChain cycle;
  std::vector<std::size_t> rank_ladder;  // im d1, + Q1(iota)^2, + v
  std::size_t kernel_position = 0;       // index of v in the canonical kernel basis
};

// Q1(iota)^2 = {(1,2),(1,3),(4,5),(4,6)}.
ChordDiagram q1_iota_squared();
VassilievClass vassiliev_class();

// Products u * Q^b * iota^a, (a,b) != (0,0), iota = {(1,2)}, Q = {(1,2),(1,3)}, with u
// running over a kernel basis of d1 at the complementary bigrading (the unit when that is
// (0,0)).
std::vector<CoordVector> framing_span(int k, int d);

// Bigrading conventions for ambient dimension m.
struct Bigrading {
  int a = 0, b = 0;
  bool operator==(const Bigrading&) const = default;
};
Bigrading tourtchine_to_sinha(Bigrading ij, int m);     // (i,j) -> (p,q)
Bigrading tourtchine_to_vassiliev(Bigrading ij, int m);  // (i,j) -> (n,d)
Bigrading vassiliev_to_sinha(Bigrading nd, int m);       // (n,d) -> (p,q)
// Nonvanishing region for k points and degree q: q <= (k-1)(m-1), 2q >= k(m-1), and
// q a multiple of m-1.
bool inside_vanishing_lines(int k, int q, int m = 3);

// "DIAG k=<points> d=<edges>" then "i j" lines.
ChordDiagram parse_diag(std::string_view content);
std::string format_diag(const ChordDiagram& d);
// Inline form "1-2,1-3,4-5,4-6"; the point count defaults to the largest label.
ChordDiagram parse_diagram_inline(std::string_view text, int points = 0);
// "GF2VEC k=<points> d=<edges> len=<n>" then 1-based indices of set bits.
CoordVector parse_gf2vec(std::string_view content);
std::string format_gf2vec(const CoordVector& v);

}  // namespace fnmc
