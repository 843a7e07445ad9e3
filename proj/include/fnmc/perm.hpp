#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fnmc/tree.hpp"

namespace fnmc {

inline constexpr int kMaxPermDegree = 8;

// A permutation of 1..k (k <= 8) in one-line form, one nibble per position with
// position 1 in the most significant used nibble. Numeric order is lexicographic
// order of the one-line words, so reverse-lex order is descending code order.
using PermCode = std::uint32_t;

PermCode perm_identity(int k) noexcept;
PermCode perm_from_one_line(std::span<const int> p);
std::vector<int> perm_one_line(PermCode p, int k);
std::string format_perm(PermCode p, int k);

inline int perm_apply(PermCode p, int k, int x) noexcept {
  return static_cast<int>((p >> (4 * (k - x))) & 0xFu);
}

// (p o q)(x) = p(q(x)).
PermCode perm_compose(PermCode p, PermCode q, int k) noexcept;
PermCode perm_inverse(PermCode p, int k) noexcept;
// Largest t with p(x) = x for every x > t.
int perm_support_top(PermCode p, int k) noexcept;

// Position of p in the lexicographic enumeration of S_k.
std::uint32_t perm_lex_rank(PermCode p, int k) noexcept;

// The k! permutations in reverse-lexicographic order, so the identity is last.
// Composition is tabulated for k <= 7 and computed on the fly for k = 8.
class PermTables {
 public:
  explicit PermTables(int k);

  int degree() const noexcept { return k_; }
  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(perms_.size()); }
  PermCode perm(std::uint32_t index) const { return perms_[index]; }
  std::uint32_t index_of(PermCode p) const noexcept;
  std::uint32_t identity() const noexcept { return size() - 1; }
  std::uint32_t compose(std::uint32_t p, std::uint32_t q) const noexcept;
  std::uint32_t inverse(std::uint32_t p) const noexcept { return inverse_[p]; }
  bool tabulated() const noexcept { return !compose_.empty(); }

 private:
  int k_;
  std::vector<PermCode> perms_;
  std::vector<std::uint32_t> inverse_;
  std::vector<std::uint16_t> compose_;
};

}  // namespace fnmc
