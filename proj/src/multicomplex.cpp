#include "fnmc/multicomplex.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "fnmc/fox.hpp"

namespace fnmc {

namespace {

// Core expressions in i, j, k. Placeholders (i+1), (j+2), ... become constants
// once the indices are known.
struct TemplateSymbol {
  SymbolKind kind;
  int value;   // variable index, or which of i/j/k for constants
  int offset;  // constant offset
};
struct CoreTemplate {
  std::vector<TemplateSymbol> symbols;
  std::vector<int> bars;
};

CoreTemplate parse_template(const char* text) {
  CoreTemplate t;
  int pending = 0;
  auto push = [&](TemplateSymbol s) {
    if (!t.symbols.empty()) t.bars.push_back(pending);
    pending = 0;
    t.symbols.push_back(s);
  };
  for (const char* c = text; *c;) {
    if (*c == ' ') {
      ++c;
    } else if (*c == '|') {
      ++pending;
      ++c;
    } else if (*c == 'X' || *c == 'Y' || *c == 'Z') {
      SymbolKind k = *c == 'X' ? SymbolKind::X : *c == 'Y' ? SymbolKind::Y : SymbolKind::Z;
      int v = *++c - '0';
      ++c;
      push({k, v, 0});
    } else if (*c == '(') {
      int which = c[1] - 'i';
      int off = c[3] - '0';
      c += 5;
      push({SymbolKind::Constant, which, off});
    } else {
      push({SymbolKind::Constant, *c - 'i', 0});
      ++c;
    }
  }
  return t;
}

FoxMonomial instantiate(const CoreTemplate& t, const int* idx) {
  std::vector<FoxSymbol> sy;
  sy.reserve(t.symbols.size());
  for (const auto& s : t.symbols) {
    if (s.kind == SymbolKind::Constant)
      sy.push_back({SymbolKind::Constant, idx[s.value] + s.offset});
    else
      sy.push_back({s.kind, s.value});
  }
  return FoxMonomial(std::move(sy), t.bars);
}

std::vector<CoreTemplate> parse_all(std::initializer_list<const char*> texts) {
  std::vector<CoreTemplate> out;
  for (const char* s : texts) out.push_back(parse_template(s));
  return out;
}

const std::vector<CoreTemplate>& core_d1() {
  static const auto t = parse_all({"Z1 || Y1 | X1 i X2 | Y2 || Y1 | X1 (i+1) X2 | Y2 || Z2"});
  return t;
}

// Keyed by the 2-cloud pattern of the indices in tree order.
const std::vector<CoreTemplate>& core_d2(bool same_two_cloud) {
  static const auto split = parse_all(
      {"Z1 || Y1 | X1 i X2 | Y2 | X3 (j+1) X4 | Y3 || Y1 | X1 (i+1) X2 | Y2 | X3 (j+2) X4 | Y3 || Z2"});
  static const auto joint = parse_all({
      "Z1 || Y1 | X1 i X2 (j+1) X3 | Y2 || Y1 | X1 (i+1) X2 X3 | X1 X2 (j+2) X3 | Y2 || Z2",
      "Z1 || Y1 | X1 X2 (j+1) X3 | X1 i X2 X3 | Y2 || Y1 | X1 (i+1) X2 (j+2) X3 | Y2 || Z2",
  });
  return same_two_cloud ? joint : split;
}

const std::vector<CoreTemplate>& core_d3(bool ij, bool jk) {
  static const auto apart = parse_all({
      "Z1 || Y1 | X1 i X2 | Y2 | X3 (j+1) X4 | Y3 | X5 (k+2) X6 | Y4 || "
      "Y1 | X1 (i+1) X2 | Y2 | X3 (j+2) X4 | Y3 | X5 (k+3) X6 | Y4 || Z2",
  });
  static const auto left = parse_all({
      "Z1 || Y1 | X1 i X2 (j+1) X3 | Y2 | X4 (k+2) X5 | Y3 || "
      "Y1 | X1 (i+1) X2 X3 | X1 X2 (j+2) X3 | Y2 | X4 (k+3) X5 | Y3 || Z2",
      "Z1 || Y1 | X1 X2 (j+1) X3 | X1 i X2 X3 | Y2 | X4 (k+2) X5 | Y3 || "
      "Y1 | X1 (i+1) X2 (j+2) X3 | Y2 | X4 (k+3) X5 | Y3 || Z2",
  });
  static const auto right = parse_all({
      "Z1 || Y1 | X1 i X2 | Y2 | X3 (j+1) X4 (k+2) X5 | Y3 || "
      "Y1 | X1 (i+1) X2 | Y2 | X3 (j+2) X4 X5 | X3 X4 (k+3) X5 | Y3 || Z2",
      "Z1 || Y1 | X1 i X2 | Y2 | X3 X4 (k+2) X5 | X3 (j+1) X4 X5 | Y3 || "
      "Y1 | X1 (i+1) X2 | Y2 | X3 (j+2) X4 (k+3) X5 | Y3 || Z2",
  });
  static const auto aligned = parse_all({
      "Z1 || Y1 | X1 X2 (j+1) X3 (k+2) X4 | X1 i X2 X3 X4 | Y2 || "
      "Y1 | X1 X2 (j+2) X3 X4 | X1 (i+1) X2 X3 (k+3) X4 | Y2 || Z2",
      "Z1 || Y1 | X1 X2 (j+1) X3 (k+2) X4 | X1 i X2 X3 X4 | Y2 || "
      "Y1 | X1 (i+1) X2 (j+2) X3 X4 | X1 X2 X3 (k+3) X4 | Y2 || Z2",
      "Z1 || Y1 | X1 X2 (j+1) X3 X4 | X1 i X2 X3 (k+2) X4 | Y2 || "
      "Y1 | X1 (i+1) X2 (j+2) X3 X4 | X1 X2 X3 (k+3) X4 | Y2 || Z2",
      "Z1 || Y1 | X1 i X2 X3 (k+2) X4 | X1 X2 (j+1) X3 X4 | Y2 || "
      "Y1 | X1 (i+1) X2 X3 X4 | X1 X2 (j+2) X3 (k+3) X4 | Y2 || Z2",
      "Z1 || Y1 | X1 X2 X3 (k+2) X4 | X1 i X2 (j+1) X3 X4 | Y2 || "
      "Y1 | X1 (i+1) X2 X3 X4 | X1 X2 (j+2) X3 (k+3) X4 | Y2 || Z2",
      "Z1 || Y1 | X1 X2 X3 (k+2) X4 | X1 i X2 (j+1) X3 X4 | Y2 || "
      "Y1 | X1 (i+1) X2 X3 (k+3) X4 | X1 X2 (j+2) X3 X4 | Y2 || Z2",
      "Z1 || Y1 | X1 i X2 (j+1) X3 (k+2) X4 | Y2 || "
      "Y1 | X1 (i+1) X2 X3 X4 | X1 X2 (j+2) X3 X4 | X1 X2 X3 (k+3) X4 | Y2 || Z2",
      "Z1 || Y1 | X1 X2 X3 (k+2) X4 | X1 X2 (j+1) X3 X4 | X1 i X2 X3 X4 | Y2 || "
      "Y1 | X1 (i+1) X2 (j+2) X3 (k+3) X4 | Y2 || Z2",
      "Z1 || Y1 | X1 i X2 (j+1) X3 X4 | Y2 || Y1 | X1 (i+1) X2 X3 (k+2) X4 | Y2 || "
      "Y1 | X1 X2 (j+2) X3 (k+3) X4 | Y2 || Z2",
      "Z1 || Y1 | X1 X2 (j+1) X3 (k+2) X4 | Y2 || Y1 | X1 i X2 X3 (k+3) X4 | Y2 || "
      "Y1 | X1 (i+1) X2 (j+2) X3 X4 | Y2 || Z2",
  });
  if (ij && jk) return aligned;
  if (ij) return left;
  if (jk) return right;
  return apart;
}

void fill_cloud(const FnTree& t, int from, int to, const int* map, NumCloud& c) {
  c.size = 0;
  for (int p = from; p <= to; ++p) {
    if (c.size > 0) c.bars[c.size - 1] = static_cast<std::uint8_t>(2 - t.depth(p - 1));
    c.labels[c.size++] = static_cast<std::uint8_t>(map[t.label(p)]);
  }
}

// Evaluates the cores for indices idx[0] < ... < idx[r-1] that also appear in
// this order in t and share a 1-cloud.
void eval_cores(const FnTree& t, const int* idx, int r, std::vector<FnTree>& out) {
  const int n = t.points();
  int pos[3];
  for (int m = 0; m < r; ++m) pos[m] = t.position_of(idx[m]);

  int L = pos[0], R = pos[r - 1];
  while (L > 0 && t.depth(L - 1) >= 1) --L;
  while (R + 1 < n && t.depth(R) >= 1) ++R;

  // Consecutive indices in one 2-cloud form a group.
  bool joined[2] = {false, false};
  for (int m = 0; m + 1 < r; ++m) joined[m] = t.pair_depth(idx[m], idx[m + 1]) == 2;

  int map[kMaxPoints + 2];
  for (int x = 1; x <= n; ++x) {
    int shift = 0;
    for (int m = 0; m < r; ++m) shift += x > idx[m] ? 1 : 0;
    map[x] = x + shift;
  }

  FastAssignment a;
  fill_cloud(t, 0, L - 1, map, a.z[1]);
  fill_cloud(t, R + 1, n - 1, map, a.z[2]);
  int xi = 1, yi = 1, prev_end = L - 1;
  for (int m = 0; m < r; ++m) {
    bool starts_group = m == 0 || !joined[m - 1];
    if (starts_group) {
      int l = pos[m];
      while (l > 0 && t.depth(l - 1) == 2) --l;
      fill_cloud(t, prev_end + 1, l - 1, map, a.y[yi++]);
      fill_cloud(t, l, pos[m] - 1, map, a.x[xi++]);
    }
    bool ends_group = m == r - 1 || !joined[m];
    if (ends_group) {
      int e = pos[m];
      while (e + 1 < n && t.depth(e) == 2) ++e;
      fill_cloud(t, pos[m] + 1, e, map, a.x[xi++]);
      prev_end = e;
    } else {
      fill_cloud(t, pos[m] + 1, pos[m + 1] - 1, map, a.x[xi++]);
    }
  }
  fill_cloud(t, prev_end + 1, R, map, a.y[yi++]);

  const std::vector<CoreTemplate>* cores;
  if (r == 1) cores = &core_d1();
  else if (r == 2) cores = &core_d2(joined[0]);
  else cores = &core_d3(joined[0], joined[1]);
  int vals[3] = {idx[0], r > 1 ? idx[1] : 0, r > 2 ? idx[2] : 0};
  for (const auto& c : *cores) evaluate_numeric(instantiate(c, vals), a, out);
}

// Handles indices in arbitrary tree order through the diagonal relabelling.
void eval_equivariant(const FnTree& t, const int* idx, int r, std::vector<FnTree>& out) {
  const int n = t.points();
  int by_pos[3];
  for (int m = 0; m < r; ++m) by_pos[m] = idx[m];
  std::sort(by_pos, by_pos + r, [&](int a, int b) { return t.position_of(a) < t.position_of(b); });
  bool in_order = std::equal(by_pos, by_pos + r, idx);
  if (in_order) {
    eval_cores(t, idx, r, out);
    return;
  }
  // sigma sends by_pos[m] to idx[m]; the transported tree has idx in order.
  int sigma[kMaxPoints + 1];
  for (int x = 1; x <= n; ++x) sigma[x] = x;
  for (int m = 0; m < r; ++m) sigma[by_pos[m]] = idx[m];
  FnTree moved = relabel_map(t, sigma);
  std::size_t start = out.size();
  eval_cores(moved, idx, r, out);

  auto rank = [&](int v) { return static_cast<int>(std::find(idx, idx + r, v) - idx); };
  int back[kMaxPoints + 4];
  for (int x = 1; x <= n + r; ++x) back[x] = x;
  for (int m = 0; m < r; ++m) {
    int src = idx[m], dst = by_pos[m];
    back[src + m] = dst + rank(dst);
    back[src + m + 1] = dst + rank(dst) + 1;
  }
  for (std::size_t q = start; q < out.size(); ++q) out[q] = relabel_map(out[q], back);
}

template <class F>
FnChain collect(int points, F f) {
  std::vector<FnTree> terms;
  f(terms);
  return FnChain::from_terms(points, std::move(terms));
}

template <class F>
FnChain over_chain(const FnChain& c, int added, F f) {
  std::vector<FnTree> terms;
  for (const auto& t : c) f(t, terms);
  return FnChain::from_terms(c.points() + added, std::move(terms));
}

}  // namespace

void D0_into(const FnTree& t, std::vector<FnTree>& out) {
  const int n = t.points();
  std::uint8_t order[kMaxPoints], depths[kMaxPoints];
  int L = 0;
  while (L < n) {
    int R = L;
    while (R + 1 < n && t.depth(R) >= 1) ++R;
    // 2-clouds of the 1-cloud [L, R].
    int starts[kMaxPoints + 1], h = 0;
    for (int p = L; p <= R; ++p)
      if (p == L || t.depth(p - 1) == 1) starts[h++] = p;
    starts[h] = R + 1;

    auto copy_outside = [&]() {
      for (int p = 0; p < n; ++p) order[p] = static_cast<std::uint8_t>(t.label(p));
      for (int g = 0; g + 1 < n; ++g) depths[g] = static_cast<std::uint8_t>(t.depth(g));
    };

    // Shuffle the 2-clouds into two nonempty 1-clouds.
    for (std::uint32_t mask = 1; h >= 2 && mask + 1 < (1u << h); ++mask) {
      copy_outside();
      int w = L;
      for (int side = 1; side >= 0; --side) {
        bool first_of_side = true;
        for (int u = 0; u < h; ++u) {
          if (((mask >> u) & 1u) != static_cast<unsigned>(side)) continue;
          for (int p = starts[u]; p < starts[u + 1]; ++p) {
            if (w > L) depths[w - 1] = p > starts[u] ? 2 : (first_of_side ? 0 : 1);
            order[w++] = static_cast<std::uint8_t>(t.label(p));
          }
          first_of_side = false;
        }
      }
      out.push_back(FnTree::from_raw(n, order, depths));
    }
    // Split one 2-cloud into two nonempty 2-clouds.
    for (int u = 0; u < h; ++u) {
      const int l = starts[u], s = starts[u + 1] - l;
      for (std::uint32_t mask = 1; s >= 2 && mask + 1 < (1u << s); ++mask) {
        copy_outside();
        int w = l;
        for (int side = 1; side >= 0; --side) {
          bool first_of_side = true;
          for (int p = l; p < l + s; ++p) {
            if (((mask >> (p - l)) & 1u) != static_cast<unsigned>(side)) continue;
            if (w > l) depths[w - 1] = first_of_side ? 1 : 2;
            order[w++] = static_cast<std::uint8_t>(t.label(p));
            first_of_side = false;
          }
        }
        out.push_back(FnTree::from_raw(n, order, depths));
      }
    }
    L = R + 1;
  }
}

void D1_at_into(const FnTree& t, int i, std::vector<FnTree>& out) {
  const int n = t.points();
  if (i < 0 || i > n + 1) throw FnError("D1 index out of range");
  if (n + 1 > kMaxPoints) throw FnError("D1 would exceed the point limit");
  std::uint8_t order[kMaxPoints], depths[kMaxPoints];
  if (i == 0) {
    order[0] = 1;
    depths[0] = 0;
    for (int p = 0; p < n; ++p) {
      order[p + 1] = static_cast<std::uint8_t>(t.label(p) + 1);
      if (p + 1 < n) depths[p + 1] = static_cast<std::uint8_t>(t.depth(p));
    }
    out.push_back(FnTree::from_raw(n + 1, order, depths));
    return;
  }
  if (i == n + 1) {
    for (int p = 0; p < n; ++p) order[p] = static_cast<std::uint8_t>(t.label(p));
    for (int g = 0; g + 1 < n; ++g) depths[g] = static_cast<std::uint8_t>(t.depth(g));
    order[n] = static_cast<std::uint8_t>(n + 1);
    depths[n - 1] = 0;
    out.push_back(FnTree::from_raw(n + 1, order, depths));
    return;
  }
  int idx[1] = {i};
  eval_cores(t, idx, 1, out);
}

void D2_at_into(const FnTree& t, int i, int j, std::vector<FnTree>& out) {
  const int n = t.points();
  if (i > j) std::swap(i, j);
  if (i < 1 || j > n || i == j) throw FnError("D2 needs two distinct indices in 1..n");
  if (n + 2 > kMaxPoints) throw FnError("D2 would exceed the point limit");
  if (t.pair_depth(i, j) == 0) return;
  int idx[2] = {i, j};
  eval_equivariant(t, idx, 2, out);
}

void D3_at_into(const FnTree& t, int i, int j, int k, std::vector<FnTree>& out) {
  const int n = t.points();
  int idx[3] = {i, j, k};
  std::sort(idx, idx + 3);
  if (idx[0] < 1 || idx[2] > n || idx[0] == idx[1] || idx[1] == idx[2])
    throw FnError("D3 needs three distinct indices in 1..n");
  if (n + 3 > kMaxPoints) throw FnError("D3 would exceed the point limit");
  if (t.pair_depth(idx[0], idx[1]) == 0 || t.pair_depth(idx[1], idx[2]) == 0 ||
      t.pair_depth(idx[0], idx[2]) == 0)
    return;
  eval_equivariant(t, idx, 3, out);
}

FnChain D0(const FnTree& t) {
  return collect(t.points(), [&](auto& v) { D0_into(t, v); });
}

FnChain D0(const FnChain& c) {
  return over_chain(c, 0, [](const FnTree& t, auto& v) { D0_into(t, v); });
}

FnChain D1_at(const FnTree& t, int i) {
  return collect(t.points() + 1, [&](auto& v) { D1_at_into(t, i, v); });
}

FnChain D1(const FnTree& t) {
  return collect(t.points() + 1, [&](auto& v) {
    for (int i = 0; i <= t.points() + 1; ++i) D1_at_into(t, i, v);
  });
}

FnChain D1(const FnChain& c) {
  return over_chain(c, 1, [](const FnTree& t, auto& v) {
    for (int i = 0; i <= t.points() + 1; ++i) D1_at_into(t, i, v);
  });
}

FnChain D2_at(const FnTree& t, int i, int j) {
  return collect(t.points() + 2, [&](auto& v) { D2_at_into(t, i, j, v); });
}

namespace {

void D2_all(const FnTree& t, std::vector<FnTree>& v) {
  for (int i = 1; i <= t.points(); ++i)
    for (int j = i + 1; j <= t.points(); ++j) D2_at_into(t, i, j, v);
}

void D3_all(const FnTree& t, std::vector<FnTree>& v) {
  const int n = t.points();
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      if (t.pair_depth(i, j) == 0) continue;
      for (int k = j + 1; k <= n; ++k) D3_at_into(t, i, j, k, v);
    }
}

}  // namespace

FnChain D2(const FnTree& t) {
  return collect(t.points() + 2, [&](auto& v) { D2_all(t, v); });
}

FnChain D2(const FnChain& c) { return over_chain(c, 2, D2_all); }

FnChain D3_at(const FnTree& t, int i, int j, int k) {
  return collect(t.points() + 3, [&](auto& v) { D3_at_into(t, i, j, k, v); });
}

FnChain D3(const FnTree& t) {
  return collect(t.points() + 3, [&](auto& v) { D3_all(t, v); });
}

FnChain D3(const FnChain& c) { return over_chain(c, 3, D3_all); }

FnChain D_degree(const FnChain& c, int r) {
  switch (r) {
    case 0: return D0(c);
    case 1: return D1(c);
    case 2: return D2(c);
    case 3: return D3(c);
    default: throw FnError("differentials stop at degree 3");
  }
}

FnChain D_multiset(const FnTree& t, std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  const int n = t.points(), r = static_cast<int>(indices.size());
  const int points = n + r;
  if (r == 0) return D0(t);
  if (r == 1) return D1_at(t, indices[0]);
  bool distinct = std::adjacent_find(indices.begin(), indices.end()) == indices.end();
  bool internal = indices.front() >= 1 && indices.back() <= n;
  if (!distinct || !internal || r > 3) return FnChain(points);
  if (r == 2) return D2_at(t, indices[0], indices[1]);
  return D3_at(t, indices[0], indices[1], indices[2]);
}

FnChain D_multiset(const FnChain& c, const std::vector<int>& indices) {
  std::vector<FnTree> terms;
  for (const auto& t : c) {
    FnChain part = D_multiset(t, indices);
    terms.insert(terms.end(), part.begin(), part.end());
  }
  return FnChain::from_terms(c.points() + static_cast<int>(indices.size()), std::move(terms));
}

std::vector<int> shift_union(std::vector<int> I, std::vector<int> J) {
  std::sort(I.begin(), I.end());
  std::sort(J.begin(), J.end());
  std::vector<int> w = I;
  w.insert(w.end(), J.begin(), J.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t q = 0; q + 1 < w.size(); ++q)
      if (w[q] > w[q + 1]) {
        int j = w[q], i = w[q + 1];
        w[q] = i;
        w[q + 1] = j - 1;
        changed = true;
      }
  }
  return w;
}

bool verify_truncated_identity(const FnTree& t, int max_k) {
  FnChain single(t.points());
  single.toggle(t);
  std::vector<FnChain> first = {D0(single), D1(single), D2(single), D3(single)};
  for (int k = 1; k <= max_k; ++k) {
    FnChain sum(t.points() + k);
    for (int s = 0; s <= k; ++s) sum += D_degree(first[s], k - s);
    if (!sum.empty()) return false;
  }
  return true;
}

namespace {

std::vector<std::vector<int>> admissible_sets(int n, int max_size) {
  std::vector<std::vector<int>> out = {{}};
  if (max_size >= 1)
    for (int a = 0; a <= n + 1; ++a) out.push_back({a});
  if (max_size >= 2)
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b) out.push_back({a, b});
  if (max_size >= 3)
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b)
        for (int c = b + 1; c <= n; ++c) out.push_back({a, b, c});
  return out;
}

const char* const kSliceNames[kSliceClasses] = {
    "deg1 left extremal",      "deg1 right extremal",      "deg1 internal",
    "deg2 i<2 j",              "deg2 i<1 j",               "deg2 left extremal",
    "deg2 both extremal",      "deg2 right extremal",      "deg2 repeated index",
    "deg3 aligned",            "deg3 left mixed",          "deg3 right mixed",
    "deg3 planar",             "deg3 left extremal j<2 k", "deg3 left extremal j<1 k",
    "deg3 right extremal i<2 j", "deg3 right extremal i<1 j", "deg3 repeated left i<2 k",
    "deg3 repeated left i<1 k", "deg3 repeated right i<2 k", "deg3 repeated right i<1 k",
};

}  // namespace

const char* slice_class_name(int c) { return kSliceNames[c]; }

int classify_slice(const FnTree& t, const std::vector<int>& K) {
  const int n = t.points();
  auto internal = [&](int x) { return x >= 1 && x <= n; };
  if (K.size() == 1) {
    if (K[0] == 0) return 0;
    if (K[0] == n + 1) return 1;
    return 2;
  }
  if (K.size() == 2) {
    int a = K[0], b = K[1];
    if (a == b) return 8;
    if (internal(a) && internal(b)) {
      int d = t.pair_depth(a, b);
      return d == 2 ? 3 : d == 1 ? 4 : -1;
    }
    if (a == 0 && internal(b)) return 5;
    if (a == 0 && b == n + 1) return 6;
    if (internal(a) && b == n + 1) return 7;
    return -1;
  }
  if (K.size() == 3) {
    int a = K[0], b = K[1], c = K[2];
    if (a < b && b < c && internal(a) && internal(c)) {
      int p[3] = {a, b, c};
      std::sort(p, p + 3, [&](int x, int y) { return t.position_of(x) < t.position_of(y); });
      int d1 = t.pair_depth(p[0], p[1]), d2 = t.pair_depth(p[1], p[2]);
      if (d1 == 0 || d2 == 0) return -1;
      if (d1 == 2 && d2 == 2) return 9;
      if (d1 == 2) return 10;
      if (d2 == 2) return 11;
      return 12;
    }
    auto by_depth = [&](int x, int y, int base) {
      int d = t.pair_depth(x, y);
      return d == 2 ? base : d == 1 ? base + 1 : -1;
    };
    if (a == 0 && internal(b) && internal(c) && b < c) return by_depth(b, c, 13);
    if (internal(a) && internal(b) && a < b && c == n + 1) return by_depth(a, b, 15);
    if (internal(a) && internal(c) && a == b && b < c) return by_depth(a, c, 17);
    if (internal(a) && internal(c) && a < b && b == c) return by_depth(a, c, 19);
  }
  return -1;
}

SliceReport verify_sliced(const FnTree& t) {
  const int n = t.points();
  SliceReport rep;
  std::map<std::vector<int>, std::vector<FnTree>> buckets;
  std::map<std::vector<int>, bool> nontrivial;
  FnChain single(n);
  single.toggle(t);
  for (const auto& J : admissible_sets(n, 3)) {
    FnChain inner = D_multiset(t, J);
    const int m = n + static_cast<int>(J.size());
    for (const auto& I : admissible_sets(m, 3 - static_cast<int>(J.size()))) {
      if (I.empty() && J.empty()) continue;
      auto K = shift_union(I, J);
      auto& bucket = buckets[K];
      bool& seen = nontrivial[K];
      if (inner.empty()) continue;
      FnChain outer = D_multiset(inner, I);
      seen = seen || !outer.empty();
      bucket.insert(bucket.end(), outer.begin(), outer.end());
    }
  }
  for (auto& [K, terms] : buckets) {
    reduce_mod2(terms);
    ++rep.slices_checked;
    if (!terms.empty()) {
      rep.ok = false;
      rep.failures.push_back(K);
    }
    int cls = classify_slice(t, K);
    if (cls >= 0 && nontrivial[K]) ++rep.coverage[cls];
  }
  return rep;
}

bool verify_mu_bound(const FnTree& t, const std::vector<int>& indices) {
  FnChain image = D_multiset(t, indices);
  if (image.empty()) return true;
  FnTree top = coface_multi(t, indices);
  return std::all_of(image.begin(), image.end(), [&](const FnTree& s) { return poset_leq(s, top); });
}

FnChain D0_m2(const FnTree& t) {
  const int n = t.points();
  std::vector<FnTree> out;
  std::uint8_t order[kMaxPoints], depths[kMaxPoints];
  int l = 0;
  while (l < n) {
    int r = l;
    while (r + 1 < n && t.depth(r) == 1) ++r;
    const int s = r - l + 1;
    for (std::uint32_t mask = 1; s >= 2 && mask + 1 < (1u << s); ++mask) {
      for (int p = 0; p < n; ++p) order[p] = static_cast<std::uint8_t>(t.label(p));
      for (int g = 0; g + 1 < n; ++g) depths[g] = static_cast<std::uint8_t>(t.depth(g));
      int w = l;
      for (int side = 1; side >= 0; --side) {
        bool first = true;
        for (int p = l; p <= r; ++p) {
          if (((mask >> (p - l)) & 1u) != static_cast<unsigned>(side)) continue;
          if (w > l) depths[w - 1] = first ? 0 : 1;
          order[w++] = static_cast<std::uint8_t>(t.label(p));
          first = false;
        }
      }
      out.push_back(FnTree::from_raw(n, order, depths));
    }
    l = r + 1;
  }
  return FnChain::from_terms(n, std::move(out));
}

FnChain D_m2(const FnTree& t, std::vector<int> indices) {
  const int n = t.points();
  std::sort(indices.begin(), indices.end());
  const int r = static_cast<int>(indices.size());
  if (t.has_depth(2)) throw FnError("m = 2 trees have depths in {0,1}");
  if (r == 0) return D0_m2(t);
  FnChain zero(n + r);
  if (indices.front() < 1 || indices.back() > n) return zero;
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) return zero;
  if (n + r > kMaxPoints) throw FnError("D_m2 would exceed the point limit");
  for (int m = 0; m + 1 < r; ++m)
    if (t.pair_depth(indices[m], indices[m + 1]) == 0) return zero;

  // Move the indices into increasing tree order.
  std::vector<int> by_pos = indices;
  std::sort(by_pos.begin(), by_pos.end(),
            [&](int a, int b) { return t.position_of(a) < t.position_of(b); });
  int sigma[kMaxPoints + 1];
  for (int x = 1; x <= n; ++x) sigma[x] = x;
  for (int m = 0; m < r; ++m) sigma[by_pos[m]] = indices[m];
  FnTree u = relabel_map(t, sigma);

  int pos[kMaxPoints];
  for (int m = 0; m < r; ++m) pos[m] = u.position_of(indices[m]);
  int l = pos[0], e = pos[r - 1];
  while (l > 0 && u.depth(l - 1) == 1) --l;
  while (e + 1 < n && u.depth(e) == 1) ++e;

  int map[kMaxPoints + 1];
  for (int x = 1; x <= n; ++x) {
    int shift = 0;
    for (int m = 0; m < r; ++m) shift += x > indices[m] ? 1 : 0;
    map[x] = x + shift;
  }
  // Shift depths up by one so that the m = 3 evaluator applies.
  std::uint8_t up[kMaxPoints];
  for (int g = 0; g + 1 < n; ++g) up[g] = static_cast<std::uint8_t>(u.depth(g) + 1);
  FnTree lifted = FnTree::from_raw(n, u.raw_order(), up);

  FastAssignment a;
  fill_cloud(lifted, 0, l - 1, map, a.y[1]);
  fill_cloud(lifted, e + 1, n - 1, map, a.y[2]);
  fill_cloud(lifted, l, pos[0] - 1, map, a.x[1]);
  for (int m = 0; m + 1 < r; ++m) fill_cloud(lifted, pos[m] + 1, pos[m + 1] - 1, map, a.x[m + 2]);
  fill_cloud(lifted, pos[r - 1] + 1, e, map, a.x[r + 1]);

  std::vector<FoxSymbol> sy;
  std::vector<int> ba;
  auto push = [&](FoxSymbol s, int bar) {
    if (!sy.empty()) ba.push_back(bar);
    sy.push_back(s);
  };
  push({SymbolKind::Y, 1}, 0);
  for (int copy = 0; copy < 2; ++copy) {
    push({SymbolKind::X, 1}, 1);
    for (int m = 0; m < r; ++m) {
      push({SymbolKind::Constant, indices[m] + m + copy}, 0);
      push({SymbolKind::X, m + 2}, 0);
    }
  }
  push({SymbolKind::Y, 2}, 1);
  std::vector<FnTree> lifted_terms;
  evaluate_numeric(FoxMonomial(std::move(sy), std::move(ba)), a, lifted_terms);

  int back[kMaxPoints + 1];
  for (int x = 1; x <= n + r; ++x) back[x] = x;
  for (int m = 0; m < r; ++m) {
    int src = indices[m], dst = by_pos[m];
    int rank = static_cast<int>(std::find(indices.begin(), indices.end(), dst) - indices.begin());
    back[src + m] = dst + rank;
    back[src + m + 1] = dst + rank + 1;
  }
  std::vector<FnTree> out;
  std::uint8_t down[kMaxPoints];
  for (const auto& s : lifted_terms) {
    for (int g = 0; g + 1 < s.points(); ++g) down[g] = static_cast<std::uint8_t>(s.depth(g) - 1);
    out.push_back(relabel_map(FnTree::from_raw(s.points(), s.raw_order(), down), back));
  }
  return FnChain::from_terms(n + r, std::move(out));
}

FnChain D_m2(const FnChain& c, const std::vector<int>& indices) {
  std::vector<FnTree> terms;
  for (const auto& t : c) {
    FnChain part = D_m2(t, indices);
    terms.insert(terms.end(), part.begin(), part.end());
  }
  return FnChain::from_terms(c.points() + static_cast<int>(indices.size()), std::move(terms));
}

bool verify_sliced_m2(const FnTree& t, int max_k) {
  const int n = t.points();
  std::map<std::vector<int>, std::vector<FnTree>> buckets;
  auto sets = [](int pts, int max_size) {
    std::vector<std::vector<int>> out = {{}};
    std::vector<int> cur;
    auto rec = [&](auto&& self, int from) -> void {
      if (!cur.empty()) out.push_back(cur);
      if (static_cast<int>(cur.size()) == max_size) return;
      for (int a = from; a <= pts; ++a) {
        cur.push_back(a);
        self(self, a + 1);
        cur.pop_back();
      }
    };
    rec(rec, 1);
    return out;
  };
  for (const auto& J : sets(n, max_k)) {
    FnChain inner = D_m2(t, J);
    if (inner.empty()) continue;
    const int m = n + static_cast<int>(J.size());
    for (const auto& I : sets(m, max_k - static_cast<int>(J.size()))) {
      if (I.empty() && J.empty()) continue;
      FnChain outer = D_m2(inner, I);
      auto& b = buckets[shift_union(I, J)];
      b.insert(b.end(), outer.begin(), outer.end());
    }
  }
  for (auto& [K, terms] : buckets) {
    reduce_mod2(terms);
    if (!terms.empty()) return false;
  }
  return true;
}

}  // namespace fnmc
