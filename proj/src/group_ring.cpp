#include "fnmc/group_ring.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

#include "fnmc/multicomplex.hpp"

namespace fnmc {

namespace {

void cancel_pairs(GrElement& v) {
  std::sort(v.begin(), v.end());
  std::size_t out = 0, i = 0;
  while (i < v.size()) {
    std::size_t j = i + 1;
    while (j < v.size() && v[j] == v[i]) ++j;
    if ((j - i) % 2 == 1) v[out++] = v[i];
    i = j;
  }
  v.resize(out);
}

const GrElement kZero;

// row += sum over (c, e) of factor * e placed at column c.
void add_scaled_row(GrRow& row, const GrRow& src, const GrElement& factor, int k, int skip_col,
                    std::vector<int>* new_cols) {
  GrRow merged;
  merged.reserve(row.size() + src.size());
  std::size_t i = 0;
  for (const auto& [c, e] : src) {
    if (c == skip_col) continue;
    GrElement prod = gr_mul(factor, e, k);
    if (prod.empty()) continue;
    while (i < row.size() && row[i].first < c) merged.push_back(std::move(row[i++]));
    if (i < row.size() && row[i].first == c) {
      gr_add_into(row[i].second, prod);
      if (!row[i].second.empty()) merged.push_back(std::move(row[i]));
      ++i;
    } else {
      merged.emplace_back(c, std::move(prod));
      if (new_cols) new_cols->push_back(c);
    }
  }
  while (i < row.size()) merged.push_back(std::move(row[i++]));
  row = std::move(merged);
}

GrElement* find_entry(GrRow& row, int c) {
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, int col) { return e.first < col; });
  return it != row.end() && it->first == c ? &it->second : nullptr;
}

struct Cosets {
  std::vector<PermCode> rep, rep_inv;  // index r in 1..t
};

Cosets make_cosets(int t, int k) {
  Cosets cs;
  cs.rep.resize(t + 1);
  cs.rep_inv.resize(t + 1);
  for (int r = 1; r <= t; ++r) {
    cs.rep[r] = coset_rep(r, t, k);
    cs.rep_inv[r] = perm_inverse(cs.rep[r], k);
  }
  return cs;
}

// Builds rows of the expanded system; entries collected as (row, col, perm) and reduced.
std::vector<GrRow> expand_rows(const std::vector<GrRow>& rows, int t, int k) {
  Cosets cs = make_cosets(t, k);
  std::vector<GrRow> out(rows.size() * static_cast<std::size_t>(t));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<std::vector<std::pair<int, PermCode>>> parts(t);
    for (const auto& [c, e] : rows[r])
      for (PermCode g : e)
        for (int s = 1; s <= t; ++s) {
          const int a = perm_apply(g, k, s);
          PermCode h = perm_compose(cs.rep_inv[a], perm_compose(g, cs.rep[s], k), k);
          parts[a - 1].emplace_back(c * t + (s - 1), h);
        }
    for (int a = 0; a < t; ++a) {
      auto& p = parts[a];
      std::sort(p.begin(), p.end());
      GrRow& dst = out[r * t + a];
      std::size_t i = 0;
      while (i < p.size()) {
        std::size_t j = i;
        GrElement e;
        while (j < p.size() && p[j].first == p[i].first) {
          std::size_t l = j;
          while (l < p.size() && p[l] == p[j]) ++l;
          if ((l - j) % 2 == 1) e.push_back(p[j].second);
          j = l;
        }
        if (!e.empty()) dst.emplace_back(p[i].first, std::move(e));
        i = j;
      }
    }
  }
  return out;
}

std::vector<GrElement> expand_rhs_entries(const std::vector<GrElement>& b, int t, int k) {
  Cosets cs = make_cosets(t, k);
  std::vector<GrElement> out(b.size() * static_cast<std::size_t>(t));
  for (std::size_t r = 0; r < b.size(); ++r)
    for (PermCode g : b[r]) {
      const int a = perm_apply(g, k, t);
      out[r * t + (a - 1)].push_back(perm_compose(cs.rep_inv[a], g, k));
    }
  for (auto& e : out) cancel_pairs(e);
  return out;
}

void check_level(PermCode g, int t, int k) {
  if (perm_support_top(g, k) > t) throw FnError("group ring entry moves points above the level");
}

struct System {
  int k = 1, t = 1, cols = 0;
  std::vector<GrRow> rows;
  std::vector<GrElement> rhs;
};

std::optional<std::vector<GrElement>> solve_system(System sys, SolveStats& stats,
                                                   const SolveProgress& progress) {
  const int k = sys.k, t = sys.t;
  stats.t_min = t;
  stats.sizes.push_back(sys.rows.size());
  stats.pivots.push_back(0);
  const std::size_t level_slot = stats.pivots.size() - 1;
  const PermCode id = perm_identity(k);

  const std::size_t nrows = sys.rows.size();
  std::vector<std::vector<int>> col_rows(sys.cols);
  for (std::size_t r = 0; r < nrows; ++r)
    for (const auto& [c, e] : sys.rows[r]) col_rows[c].push_back(static_cast<int>(r));
  std::vector<char> active(nrows, 1), pivot_col(sys.cols, 0);
  std::vector<std::pair<int, int>> pivots;  // (row, col)

  bool found = true;
  std::vector<int> new_cols;
  while (found) {
    found = false;
    for (int c = 0; c < sys.cols; ++c) {
      if (pivot_col[c]) continue;
      auto& cand = col_rows[c];
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
      std::size_t keep = 0;
      int prow = -1;
      for (int r : cand) {
        if (!active[r]) continue;
        GrElement* e = find_entry(sys.rows[r], c);
        if (!e) continue;
        cand[keep++] = r;
        if (prow < 0 && gr_is_unit(*e)) prow = r;
      }
      cand.resize(keep);
      if (prow < 0) continue;

      GrRow& prow_entries = sys.rows[prow];
      const PermCode g = find_entry(prow_entries, c)->front();
      if (g != id) {
        const GrElement ginv{perm_inverse(g, k)};
        for (auto& [col, e] : prow_entries) e = gr_mul(ginv, e, k);
        sys.rhs[prow] = gr_mul(ginv, sys.rhs[prow], k);
      }
      for (int r : cand) {
        if (r == prow) continue;
        GrElement factor = *find_entry(sys.rows[r], c);
        new_cols.clear();
        add_scaled_row(sys.rows[r], prow_entries, factor, k, c, &new_cols);
        // Column c itself cancels: factor * id + factor = 0.
        auto it = std::lower_bound(sys.rows[r].begin(), sys.rows[r].end(), c,
                                   [](const auto& e, int col) { return e.first < col; });
        if (it != sys.rows[r].end() && it->first == c) sys.rows[r].erase(it);
        gr_add_into(sys.rhs[r], gr_mul(factor, sys.rhs[prow], k));
        for (int nc : new_cols) col_rows[nc].push_back(r);
      }
      active[prow] = 0;
      pivot_col[c] = 1;
      col_rows[c].clear();
      col_rows[c].shrink_to_fit();
      pivots.emplace_back(prow, c);
      found = true;
      if (progress && pivots.size() % 256 == 0) progress(t, nrows, pivots.size());
    }
  }
  stats.pivots[level_slot] = pivots.size();
  if (progress) progress(t, nrows, pivots.size());
  col_rows.clear();
  col_rows.shrink_to_fit();

  std::vector<GrElement> x(sys.cols);

  // Remaining rows: zero rows must have zero right-hand side; the rest descend.
  std::vector<int> rest;
  for (std::size_t r = 0; r < nrows; ++r) {
    if (!active[r]) continue;
    if (sys.rows[r].empty()) {
      if (!sys.rhs[r].empty()) return std::nullopt;
      continue;
    }
    rest.push_back(static_cast<int>(r));
  }
  if (!rest.empty()) {
    if (t == 1) throw FnError("scalar system without unit pivots");
    std::vector<int> compact(sys.cols, -1), cols_used;
    for (int r : rest)
      for (const auto& [c, e] : sys.rows[r])
        if (compact[c] < 0) {
          compact[c] = 0;
          cols_used.push_back(c);
        }
    std::sort(cols_used.begin(), cols_used.end());
    for (std::size_t i = 0; i < cols_used.size(); ++i) compact[cols_used[i]] = static_cast<int>(i);

    std::vector<GrRow> sub_rows;
    std::vector<GrElement> sub_rhs;
    sub_rows.reserve(rest.size());
    for (int r : rest) {
      GrRow row = std::move(sys.rows[r]);
      for (auto& [c, e] : row) c = compact[c];
      sub_rows.push_back(std::move(row));
      sub_rhs.push_back(std::move(sys.rhs[r]));
    }
    System next;
    next.k = k;
    next.t = t - 1;
    next.cols = static_cast<int>(cols_used.size()) * t;
    next.rows = expand_rows(sub_rows, t, k);
    next.rhs = expand_rhs_entries(sub_rhs, t, k);
    sub_rows.clear();
    sub_rows.shrink_to_fit();
    auto y = solve_system(std::move(next), stats, progress);
    if (!y) return std::nullopt;
    Cosets cs = make_cosets(t, k);
    for (std::size_t i = 0; i < cols_used.size(); ++i) {
      GrElement xc;
      for (int s = 1; s <= t; ++s)
        for (PermCode h : (*y)[i * t + (s - 1)]) xc.push_back(perm_compose(cs.rep[s], h, k));
      cancel_pairs(xc);
      x[cols_used[i]] = std::move(xc);
    }
  }

  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    const auto [r, c] = *it;
    GrElement xc = sys.rhs[r];
    for (const auto& [col, e] : sys.rows[r])
      if (col != c && !x[col].empty()) gr_add_into(xc, gr_mul(e, x[col], k));
    x[c] = std::move(xc);
  }
  return x;
}

}  // namespace

void gr_add_into(GrElement& a, const GrElement& b) {
  if (b.empty()) return;
  GrElement out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  a = std::move(out);
}

GrElement gr_mul(const GrElement& a, const GrElement& b, int k) {
  GrElement out;
  out.reserve(a.size() * b.size());
  for (PermCode g : a)
    for (PermCode h : b) out.push_back(perm_compose(g, h, k));
  cancel_pairs(out);
  return out;
}

GrElement gr_invert(const GrElement& a, int k) {
  GrElement out;
  out.reserve(a.size());
  for (PermCode g : a) out.push_back(perm_inverse(g, k));
  std::sort(out.begin(), out.end());
  return out;
}

GroupRingMatrix::GroupRingMatrix(int rows, int cols, int k)
    : cols_(cols), k_(k), rows_(static_cast<std::size_t>(rows)) {
  if (rows < 0 || cols < 0) throw FnError("negative matrix dimension");
  if (k < 1 || k > kMaxPermDegree) throw FnError("group degree out of range");
}

GroupRingMatrix GroupRingMatrix::identity(int n, int k) {
  GroupRingMatrix m(n, n, k);
  for (int i = 0; i < n; ++i) m.toggle(i, i, perm_identity(k));
  return m;
}

const GrElement& GroupRingMatrix::at(int r, int c) const {
  const auto& row = rows_.at(r);
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, int col) { return e.first < col; });
  return it != row.end() && it->first == c ? it->second : kZero;
}

void GroupRingMatrix::add(int r, int c, const GrElement& e) {
  if (r < 0 || r >= rows() || c < 0 || c >= cols_) throw FnError("matrix index out of range");
  if (e.empty()) return;
  auto& row = rows_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& en, int col) { return en.first < col; });
  if (it != row.end() && it->first == c) {
    gr_add_into(it->second, e);
    if (it->second.empty()) row.erase(it);
  } else {
    row.insert(it, {c, e});
  }
}

void GroupRingMatrix::toggle(int r, int c, PermCode g) { add(r, c, GrElement{g}); }

std::size_t GroupRingMatrix::terms() const {
  std::size_t n = 0;
  for (const auto& row : rows_)
    for (const auto& [c, e] : row) n += e.size();
  return n;
}

std::size_t GrVector::terms() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.size();
  return n;
}

GroupRingMatrix gr_matmul(const GroupRingMatrix& a, const GroupRingMatrix& b) {
  if (a.cols() != b.rows() || a.degree() != b.degree())
    throw FnError("group ring matrix product: shape or group mismatch");
  const int k = a.degree();
  GroupRingMatrix c(a.rows(), b.cols(), k);
  for (int r = 0; r < a.rows(); ++r) {
    std::map<int, GrElement> acc;
    for (const auto& [l, e] : a.row(r))
      for (const auto& [j, f] : b.row(l)) gr_add_into(acc[j], gr_mul(e, f, k));
    for (auto& [j, e] : acc) c.add(r, j, e);
  }
  return c;
}

GrVector gr_matvec(const GroupRingMatrix& a, const GrVector& x) {
  if (a.cols() != x.length() || a.degree() != x.k)
    throw FnError("group ring matrix-vector product: shape or group mismatch");
  GrVector y(a.rows(), a.degree());
  for (int r = 0; r < a.rows(); ++r) {
    GrElement acc;
    for (const auto& [c, e] : a.row(r))
      if (!x.entries[c].empty())
        for (PermCode g : e)
          for (PermCode h : x.entries[c]) acc.push_back(perm_compose(g, h, a.degree()));
    cancel_pairs(acc);
    y.entries[r] = std::move(acc);
  }
  return y;
}

GroupRingMatrix action_convert(const GroupRingMatrix& a) {
  GroupRingMatrix out(a.rows(), a.cols(), a.degree());
  for (int r = 0; r < a.rows(); ++r)
    for (const auto& [c, e] : a.row(r)) out.add(r, c, gr_invert(e, a.degree()));
  return out;
}

GrVector action_convert(const GrVector& v) {
  GrVector out(v.length(), v.k);
  for (int i = 0; i < v.length(); ++i) out.entries[i] = gr_invert(v.entries[i], v.k);
  return out;
}

namespace {

std::map<DepthVector, int> depth_index(int k, int d) {
  std::map<DepthVector, int> idx;
  auto vs = enumerate_depth_vectors(k, d);
  for (std::size_t i = 0; i < vs.size(); ++i) idx.emplace(vs[i], static_cast<int>(i));
  return idx;
}

PermCode tree_perm(const FnTree& t) {
  PermCode p = 0;
  for (int q = 0; q < t.points(); ++q) p = (p << 4) | t.label(q);
  return p;
}

}  // namespace

GroupRingMatrix d0_matrix(int k, int d) {
  if (k < 1 || k > kMaxPermDegree || d < 1 || d > 2 * (k - 1))
    throw FnError("d0_matrix: invalid bigrading");
  auto cols = enumerate_depth_vectors(k, d);
  auto row_idx = depth_index(k, d - 1);
  GroupRingMatrix m(static_cast<int>(row_idx.size()), static_cast<int>(cols.size()), k);
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const FnTree& t : D0(identity_tree(cols[j])))
      m.toggle(row_idx.at(t.depths()), static_cast<int>(j), tree_perm(t));
  return m;
}

GrVector chain_to_grvector(const FnChain& c, int d) {
  const int k = c.points();
  if (k < 1 || k > kMaxPermDegree) throw FnError("chain_to_grvector: unsupported point count");
  auto idx = depth_index(k, d);
  GrVector v(static_cast<int>(idx.size()), k);
  for (const FnTree& t : c) {
    auto it = idx.find(t.depths());
    if (it == idx.end()) throw FnError("chain_to_grvector: tree of the wrong degree");
    v.entries[it->second].push_back(tree_perm(t));
  }
  for (auto& e : v.entries) cancel_pairs(e);
  return v;
}

FnChain grvector_to_chain(const GrVector& v, int d) {
  auto depths = enumerate_depth_vectors(v.k, d);
  if (depths.size() != v.entries.size()) throw FnError("grvector_to_chain: length mismatch");
  std::vector<FnTree> terms;
  for (std::size_t i = 0; i < depths.size(); ++i)
    for (PermCode g : v.entries[i]) terms.emplace_back(perm_one_line(g, v.k), depths[i]);
  return FnChain::from_terms(v.k, std::move(terms));
}

PermCode coset_rep(int r, int t, int k) noexcept {
  std::vector<int> p(k);
  for (int x = 1; x <= k; ++x) p[x - 1] = x;
  for (int x = r; x < t; ++x) p[x - 1] = x + 1;
  p[t - 1] = r;
  PermCode code = 0;
  for (int v : p) code = (code << 4) | static_cast<PermCode>(v);
  return code;
}

GroupRingMatrix expand_scalars(const GroupRingMatrix& a, int t) {
  const int k = a.degree();
  if (t < 2 || t > k) throw FnError("expand_scalars: level out of range");
  std::vector<GrRow> rows(a.rows());
  for (int r = 0; r < a.rows(); ++r) {
    rows[r] = a.row(r);
    for (const auto& [c, e] : rows[r])
      for (PermCode g : e) check_level(g, t, k);
  }
  auto ex = expand_rows(rows, t, k);
  GroupRingMatrix out(a.rows() * t, a.cols() * t, k);
  for (std::size_t r = 0; r < ex.size(); ++r)
    for (auto& [c, e] : ex[r]) out.add(static_cast<int>(r), c, e);
  return out;
}

GrVector expand_rhs(const GrVector& b, int t) {
  if (t < 2 || t > b.k) throw FnError("expand_rhs: level out of range");
  for (const auto& e : b.entries)
    for (PermCode g : e) check_level(g, t, b.k);
  GrVector out;
  out.k = b.k;
  out.entries = expand_rhs_entries(b.entries, t, b.k);
  return out;
}

GrVector expand_unknowns(const GrVector& x, int t) { return expand_rhs(x, t); }

GrVector collapse_unknowns(const GrVector& y, int t) {
  if (t < 2 || t > y.k || y.length() % t != 0) throw FnError("collapse_unknowns: bad shape");
  Cosets cs = make_cosets(t, y.k);
  GrVector x(y.length() / t, y.k);
  for (int i = 0; i < x.length(); ++i) {
    GrElement e;
    for (int s = 1; s <= t; ++s)
      for (PermCode h : y.entries[i * t + (s - 1)]) e.push_back(perm_compose(cs.rep[s], h, y.k));
    cancel_pairs(e);
    x.entries[i] = std::move(e);
  }
  return x;
}

SolveResult equivariant_solve(const GroupRingMatrix& a, const GrVector& b, int level,
                              const SolveProgress& progress) {
  const int k = a.degree();
  if (b.k != k || b.length() != a.rows()) throw FnError("equivariant_solve: shape mismatch");
  const int t = level == 0 ? k : level;
  if (t < 1 || t > k) throw FnError("equivariant_solve: level out of range");
  System sys;
  sys.k = k;
  sys.t = t;
  sys.cols = a.cols();
  sys.rows.resize(a.rows());
  for (int r = 0; r < a.rows(); ++r) {
    sys.rows[r] = a.row(r);
    for (const auto& [c, e] : sys.rows[r])
      for (PermCode g : e) check_level(g, t, k);
  }
  sys.rhs = b.entries;
  for (const auto& e : sys.rhs)
    for (PermCode g : e) check_level(g, t, k);

  SolveResult res;
  auto x = solve_system(std::move(sys), res.stats, progress);
  if (!x) return res;
  res.x.k = k;
  res.x.entries = std::move(*x);
  if (gr_matvec(a, res.x) != b) throw FnError("equivariant_solve: solution failed verification");
  res.feasible = true;
  return res;
}

GroupRingMatrix parse_grmat(std::string_view content) {
  std::istringstream in{std::string(content)};
  std::string line;
  bool have_header = false;
  GroupRingMatrix m;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!have_header) {
      int rows = 0, cols = 0, k = 0;
      if (std::sscanf(line.c_str(), " GRMAT rows=%d cols=%d group=S%d", &rows, &cols, &k) != 3)
        throw FnError("grmat file: bad header");
      m = GroupRingMatrix(rows, cols, k);
      have_header = true;
      continue;
    }
    std::istringstream ls(line);
    int i = 0, j = 0;
    std::vector<int> p(m.degree());
    if (!(ls >> i >> j)) throw FnError("grmat file: bad entry line: " + line);
    for (auto& v : p)
      if (!(ls >> v)) throw FnError("grmat file: short permutation: " + line);
    std::string extra;
    if (ls >> extra) throw FnError("grmat file: trailing data: " + line);
    m.toggle(i - 1, j - 1, perm_from_one_line(p));
  }
  if (!have_header) throw FnError("grmat file: missing header");
  return m;
}

std::string format_grmat(const GroupRingMatrix& a) {
  std::string s = "GRMAT rows=" + std::to_string(a.rows()) + " cols=" + std::to_string(a.cols()) +
                  " group=S" + std::to_string(a.degree()) + "\n";
  for (int r = 0; r < a.rows(); ++r)
    for (const auto& [c, e] : a.row(r))
      for (PermCode g : e)
        s += std::to_string(r + 1) + " " + std::to_string(c + 1) + " " + format_perm(g, a.degree()) + "\n";
  return s;
}

GrVector parse_grvec(std::string_view content) {
  std::istringstream in{std::string(content)};
  std::string line;
  bool have_header = false;
  GrVector v;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!have_header) {
      int len = 0, k = 0;
      if (std::sscanf(line.c_str(), " GRVEC len=%d group=S%d", &len, &k) != 2 || len < 0 || k < 1 ||
          k > kMaxPermDegree)
        throw FnError("grvec file: bad header");
      v = GrVector(len, k);
      have_header = true;
      continue;
    }
    std::istringstream ls(line);
    int i = 0;
    std::vector<int> p(v.k);
    if (!(ls >> i) || i < 1 || i > v.length()) throw FnError("grvec file: bad entry line: " + line);
    for (auto& x : p)
      if (!(ls >> x)) throw FnError("grvec file: short permutation: " + line);
    std::string extra;
    if (ls >> extra) throw FnError("grvec file: trailing data: " + line);
    gr_add_into(v.entries[i - 1], GrElement{perm_from_one_line(p)});
  }
  if (!have_header) throw FnError("grvec file: missing header");
  return v;
}

std::string format_grvec(const GrVector& v) {
  std::string s = "GRVEC len=" + std::to_string(v.length()) + " group=S" + std::to_string(v.k) + "\n";
  for (int i = 0; i < v.length(); ++i)
    for (PermCode g : v.entries[i]) s += std::to_string(i + 1) + " " + format_perm(g, v.k) + "\n";
  return s;
}

}  // namespace fnmc
