#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "fnmc/tree.hpp"

namespace fnmc {

// Terms are appended unreduced; callers reduce mod 2.
void D0_into(const FnTree& t, std::vector<FnTree>& out);
void D1_at_into(const FnTree& t, int i, std::vector<FnTree>& out);
void D2_at_into(const FnTree& t, int i, int j, std::vector<FnTree>& out);
void D3_at_into(const FnTree& t, int i, int j, int k, std::vector<FnTree>& out);

FnChain D0(const FnTree& t);
FnChain D0(const FnChain& c);
// 0 <= i <= n+1; the extremal values give the outer terms.
FnChain D1_at(const FnTree& t, int i);
FnChain D1(const FnTree& t);
FnChain D1(const FnChain& c);
FnChain D2_at(const FnTree& t, int i, int j);
FnChain D2(const FnTree& t);
FnChain D2(const FnChain& c);
FnChain D3_at(const FnTree& t, int i, int j, int k);
FnChain D3(const FnTree& t);
FnChain D3(const FnChain& c);

// Degree-r component D_r for r in 0..3.
FnChain D_degree(const FnChain& c, int r);
// D_A for a multiset of indices; zero where no formula applies.
FnChain D_multiset(const FnTree& t, std::vector<int> indices);
FnChain D_multiset(const FnChain& c, const std::vector<int>& indices);

// L with d_I d_J = d_L, by rewriting d_j d_i = d_i d_{j-1} for i < j.
std::vector<int> shift_union(std::vector<int> I, std::vector<int> J);

// Sum over r + s = k of D_r D_s applied to t, for every k up to max_k.
bool verify_truncated_identity(const FnTree& t, int max_k = 3);

inline constexpr int kSliceClasses = 21;
const char* slice_class_name(int c);

struct SliceReport {
  bool ok = true;
  std::size_t slices_checked = 0;
  std::vector<std::vector<int>> failures;      // offending K
  std::array<std::size_t, kSliceClasses> coverage{};  // nontrivial slices per class
};

// Checks every slice sum_{I v J = K} D_I D_J t = 0 with |K| <= 3.
SliceReport verify_sliced(const FnTree& t);
int classify_slice(const FnTree& t, const std::vector<int>& K);

// Every term of D_A(t) lies below d_A(t).
bool verify_mu_bound(const FnTree& t, const std::vector<int>& indices);

// The m = 2 family on trees with depths in {0,1}.
FnChain D0_m2(const FnTree& t);
FnChain D_m2(const FnTree& t, std::vector<int> indices);
FnChain D_m2(const FnChain& c, const std::vector<int>& indices);
bool verify_sliced_m2(const FnTree& t, int max_k = 3);

}  // namespace fnmc
