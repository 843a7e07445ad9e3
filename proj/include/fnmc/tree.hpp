#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fnmc {

inline constexpr int kMaxPoints = 16;

class FnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Leaves carry labels 1..n in left-to-right order; depths[g] in {0,1,2}
// sits between positions g and g+1.
class FnTree {
 public:
  FnTree() = default;
  FnTree(std::span<const int> order, std::span<const int> depths);

  // No validation; callers guarantee a permutation of 1..n and depths <= 2.
  static FnTree from_raw(int n, const std::uint8_t* order, const std::uint8_t* depths) noexcept;

  int points() const noexcept { return n_; }
  int label(int pos) const noexcept { return order_[pos]; }
  int depth(int gap) const noexcept { return depths_[gap]; }
  int degree() const noexcept;
  int position_of(int label) const noexcept;
  // Minimum depth between the leaves carrying a and b.
  int pair_depth(int a, int b) const noexcept;
  bool has_depth(int value) const noexcept;

  std::vector<int> order() const;
  std::vector<int> depths() const;
  const std::uint8_t* raw_order() const noexcept { return order_.data(); }
  const std::uint8_t* raw_depths() const noexcept { return depths_.data(); }

  std::uint64_t hash() const noexcept;

  auto operator<=>(const FnTree&) const = default;
  bool operator==(const FnTree&) const = default;

 private:
  std::uint8_t n_ = 1;
  std::array<std::uint8_t, kMaxPoints> order_{1};
  std::array<std::uint8_t, kMaxPoints - 1> depths_{};
};

struct FnTreeHash {
  std::size_t operator()(const FnTree& t) const noexcept { return t.hash(); }
};

// Sorts and cancels equal pairs, leaving the mod 2 support.
void reduce_mod2(std::vector<FnTree>& terms);

// Formal F2 sum of trees with a common point count, kept sorted.
class FnChain {
 public:
  FnChain() = default;
  explicit FnChain(int points) : points_(points) {}
  static FnChain from_terms(int points, std::vector<FnTree> terms);

  int points() const noexcept { return points_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  const std::vector<FnTree>& terms() const noexcept { return terms_; }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  bool contains(const FnTree& t) const;
  void toggle(const FnTree& t);
  FnChain& operator+=(const FnChain& other);
  friend FnChain operator+(FnChain a, const FnChain& b) { return a += b; }
  bool operator==(const FnChain&) const = default;

 private:
  int points_ = 0;
  std::vector<FnTree> terms_;
};

// Text form: labels separated by whitespace, depth 1 written "|" and depth 0 "||".
FnTree parse_tree(std::string_view text);
// Compact form for at most 9 points: each digit is a label, e.g. "13||2|4".
FnTree parse_tree_digits(std::string_view text);
std::string format_tree(const FnTree& t);
FnChain parse_chain(std::string_view text, int points);
std::string format_chain(const FnChain& c);

using DepthVector = std::vector<int>;

// Vectors in {0,1,2}^(k-1) with sum d, lexicographically ascending.
std::vector<DepthVector> enumerate_depth_vectors(int k, int d);
// Depth vector major, permutation minor (lexicographic, identity first).
std::vector<FnTree> enumerate_trees(int k, int d);
std::size_t count_trees(int k, int d);

// Returns the tree with order sigma(order) for a permutation of 1..n in one-line form.
FnTree relabel(const FnTree& t, std::span<const int> sigma);
// Applies an arbitrary label map; map[label] for label in 1..n.
FnTree relabel_map(const FnTree& t, const int* map);
FnChain relabel(const FnChain& c, std::span<const int> sigma);

// Order on FN(n) in which corollas are minimal and degree increases upwards.
bool poset_leq(const FnTree& s, const FnTree& t);

FnTree coface(const FnTree& t, int i);
FnTree codegeneracy(const FnTree& t, int j);
// d_I = d_{i1} ... d_{ip} for I sorted ascending, so d_{ip} applies first.
FnTree coface_multi(const FnTree& t, std::vector<int> indices);
FnTree identity_tree(const DepthVector& depths);

struct ChainFile {
  int points = 0;
  int ambient = 3;
  FnChain chain;
};
ChainFile read_fnchain(const std::string& path);
void write_fnchain(const std::string& path, const FnChain& chain, int ambient = 3);
ChainFile parse_fnchain(std::string_view content);
std::string format_fnchain(const FnChain& chain, int ambient = 3);

}  // namespace fnmc
