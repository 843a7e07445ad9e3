#include "fnmc/perm.hpp"

#include <algorithm>
#include <numeric>

namespace fnmc {

PermCode perm_identity(int k) noexcept {
  PermCode p = 0;
  for (int x = 1; x <= k; ++x) p = (p << 4) | static_cast<PermCode>(x);
  return p;
}

PermCode perm_from_one_line(std::span<const int> p) {
  const int k = static_cast<int>(p.size());
  if (k < 1 || k > kMaxPermDegree) throw FnError("permutation degree out of range");
  unsigned seen = 0;
  PermCode code = 0;
  for (int v : p) {
    if (v < 1 || v > k || (seen >> v) & 1u) throw FnError("not a permutation");
    seen |= 1u << v;
    code = (code << 4) | static_cast<PermCode>(v);
  }
  return code;
}

std::vector<int> perm_one_line(PermCode p, int k) {
  std::vector<int> out(k);
  for (int x = 1; x <= k; ++x) out[x - 1] = perm_apply(p, k, x);
  return out;
}

std::string format_perm(PermCode p, int k) {
  std::string s;
  for (int x = 1; x <= k; ++x) {
    if (x > 1) s += ' ';
    s += std::to_string(perm_apply(p, k, x));
  }
  return s;
}

PermCode perm_compose(PermCode p, PermCode q, int k) noexcept {
  PermCode out = 0;
  for (int x = 1; x <= k; ++x) out = (out << 4) | static_cast<PermCode>(perm_apply(p, k, perm_apply(q, k, x)));
  return out;
}

PermCode perm_inverse(PermCode p, int k) noexcept {
  PermCode out = 0;
  for (int x = 1; x <= k; ++x)
    out |= static_cast<PermCode>(x) << (4 * (k - perm_apply(p, k, x)));
  return out;
}

int perm_support_top(PermCode p, int k) noexcept {
  int t = k;
  while (t > 1 && perm_apply(p, k, t) == t) --t;
  return t;
}

std::uint32_t perm_lex_rank(PermCode p, int k) noexcept {
  std::uint32_t rank = 0;
  unsigned used = 0;
  for (int x = 1; x <= k; ++x) {
    const int v = perm_apply(p, k, x);
    const int smaller_free = v - 1 - __builtin_popcount(used & ((1u << v) - 1));
    rank = rank * static_cast<std::uint32_t>(k - x + 1) + static_cast<std::uint32_t>(smaller_free);
    used |= 1u << v;
  }
  return rank;
}

PermTables::PermTables(int k) : k_(k) {
  if (k < 1 || k > kMaxPermDegree) throw FnError("permutation tables need 1 <= k <= 8");
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 1);
  do perms_.push_back(perm_from_one_line(p));
  while (std::next_permutation(p.begin(), p.end()));
  std::reverse(perms_.begin(), perms_.end());
  inverse_.resize(perms_.size());
  for (std::uint32_t i = 0; i < size(); ++i) inverse_[i] = index_of(perm_inverse(perms_[i], k));
  if (k <= 7) {
    const std::size_t n = perms_.size();
    compose_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        compose_[i * n + j] = static_cast<std::uint16_t>(
            index_of(perm_compose(perms_[i], perms_[j], k)));
  }
}

std::uint32_t PermTables::index_of(PermCode p) const noexcept {
  return size() - 1 - perm_lex_rank(p, k_);
}

std::uint32_t PermTables::compose(std::uint32_t p, std::uint32_t q) const noexcept {
  if (!compose_.empty()) return compose_[static_cast<std::size_t>(p) * size() + q];
  return index_of(perm_compose(perms_[p], perms_[q], k_));
}

}  // namespace fnmc
