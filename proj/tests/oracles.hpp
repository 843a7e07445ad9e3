#pragma once

#include <map>
#include <random>
#include <vector>

#include "fnmc/gf2.hpp"
#include "fnmc/group_ring.hpp"

namespace fnmc::oracle {

// All permutations of 1..k, in an order of our own (next_permutation from the identity).
inline std::vector<PermCode> group(int k) {
  std::vector<int> p(k);
  for (int i = 0; i < k; ++i) p[i] = i + 1;
  std::vector<PermCode> out;
  do out.push_back(perm_from_one_line(p));
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// The GF(2) matrix of x -> A x with each group-ring coordinate written out in the basis of group
// elements: row (i, u), column (j, h), entry = parity of g in A_ij with g h = u.
inline Gf2Matrix expand_full(const GroupRingMatrix& a) {
  const int k = a.degree();
  auto g = group(k);
  std::map<PermCode, std::size_t> idx;
  for (std::size_t i = 0; i < g.size(); ++i) idx[g[i]] = i;
  const std::size_t n = g.size();
  Gf2Matrix m(a.rows() * n, a.cols() * n);
  for (int i = 0; i < a.rows(); ++i)
    for (const auto& [j, e] : a.row(i))
      for (PermCode x : e)
        for (std::size_t h = 0; h < n; ++h) {
          PermCode u = perm_compose(x, g[h], k);
          m.flip(i * n + idx[u], j * n + h);
        }
  return m;
}

inline Gf2Vector expand_full(const GrVector& v) {
  auto g = group(v.k);
  std::map<PermCode, std::size_t> idx;
  for (std::size_t i = 0; i < g.size(); ++i) idx[g[i]] = i;
  Gf2Vector out(v.length() * g.size(), 0);
  for (int i = 0; i < v.length(); ++i)
    for (PermCode p : v.entries[i]) out[i * g.size() + idx[p]] ^= 1;
  return out;
}

inline PermCode random_perm(int k, std::mt19937& rng, int top = 0) {
  if (top == 0) top = k;
  std::vector<int> p(k);
  for (int i = 0; i < k; ++i) p[i] = i + 1;
  std::shuffle(p.begin(), p.begin() + top, rng);
  return perm_from_one_line(p);
}

inline GrElement random_element(int k, std::mt19937& rng, int max_terms) {
  GrElement e;
  const int n = static_cast<int>(rng() % (max_terms + 1));
  for (int i = 0; i < n; ++i) gr_add_into(e, GrElement{random_perm(k, rng)});
  return e;
}

inline GroupRingMatrix random_matrix(int rows, int cols, int k, std::mt19937& rng, double density,
                                     int max_terms) {
  GroupRingMatrix a(rows, cols, k);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (u(rng) < density) a.add(i, j, random_element(k, rng, max_terms));
  return a;
}

inline GrVector random_vector(int len, int k, std::mt19937& rng, int max_terms) {
  GrVector v(len, k);
  for (auto& e : v.entries) e = random_element(k, rng, max_terms);
  return v;
}

}  // namespace fnmc::oracle
