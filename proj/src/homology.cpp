#include "fnmc/homology.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "fnmc/multicomplex.hpp"

namespace fnmc {

namespace {

std::vector<int> j_row(const ChordDiagram& d) {
  std::vector<int> r;
  for (auto& e : d.edges) r.push_back(e.second);
  return r;
}

std::vector<int> i_row(const ChordDiagram& d) {
  std::vector<int> r;
  for (auto& e : d.edges) r.push_back(e.first);
  return r;
}

// Appends every diagram with the given prefix, j-row then i-row ascending.
void enumerate_rec(int k, int d, int next_j, std::vector<int>& js, std::vector<ChordDiagram>& out) {
  if (static_cast<int>(js.size()) == d) {
    std::vector<int> is(d, 1);
    while (true) {
      ChordDiagram g{k, {}};
      for (int e = 0; e < d; ++e) g.edges.emplace_back(is[e], js[e]);
      out.push_back(std::move(g));
      int e = d - 1;
      while (e >= 0 && is[e] == js[e] - 1) is[e--] = 1;
      if (e < 0) break;
      ++is[e];
    }
    return;
  }
  for (int j = next_j; j <= k - (d - static_cast<int>(js.size()) - 1); ++j) {
    js.push_back(j);
    enumerate_rec(k, d, j + 1, js, out);
    js.pop_back();
  }
}

struct Forest {
  std::vector<std::vector<int>> children;  // ascending
  std::vector<int> edge_of;                // edge index whose larger end is the label
  std::vector<int> roots;                  // ascending
};

Forest make_forest(const ChordDiagram& d) {
  Forest f;
  f.children.assign(d.points + 1, {});
  f.edge_of.assign(d.points + 1, -1);
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    auto [i, j] = d.edges[e];
    f.children[i].push_back(j);
    f.edge_of[j] = static_cast<int>(e);
  }
  for (auto& c : f.children) std::sort(c.begin(), c.end());
  for (int v = 1; v <= d.points; ++v)
    if (f.edge_of[v] < 0) f.roots.push_back(v);
  return f;
}

void emit_block(const Forest& f, int v, unsigned mask, std::vector<int>& out) {
  const auto& ch = f.children[v];
  for (int c : ch)
    if (!(mask >> f.edge_of[c] & 1u)) emit_block(f, c, mask, out);
  out.push_back(v);
  for (auto it = ch.rbegin(); it != ch.rend(); ++it)
    if (mask >> f.edge_of[*it] & 1u) emit_block(f, *it, mask, out);
}

FnTree blocks_tree(const std::vector<std::vector<int>>& blocks) {
  std::vector<int> order, depths;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (b > 0) depths.push_back(0);
    for (std::size_t i = 0; i < blocks[b].size(); ++i) {
      if (i > 0) depths.push_back(2);
      order.push_back(blocks[b][i]);
    }
  }
  return FnTree(order, depths);
}

std::string read_header_line(std::istringstream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
  }
  return {};
}

}  // namespace

bool is_valid(const ChordDiagram& d) {
  if (d.points < 0 || d.points > kMaxPoints) return false;
  int last_j = 0;
  for (auto [i, j] : d.edges) {
    if (i < 1 || i >= j || j > d.points || j <= last_j) return false;
    last_j = j;
  }
  return true;
}

bool is_normalized(const ChordDiagram& d) {
  if (!is_valid(d)) return false;
  std::vector<char> seen(d.points + 1, 0);
  for (auto [i, j] : d.edges) seen[i] = seen[j] = 1;
  for (int v = 1; v <= d.points; ++v)
    if (!seen[v]) return false;
  return true;
}

bool diagram_less(const ChordDiagram& a, const ChordDiagram& b) {
  if (a.points != b.points) return a.points < b.points;
  auto ja = j_row(a), jb = j_row(b);
  if (ja != jb) return ja < jb;
  return i_row(a) < i_row(b);
}

std::vector<ChordDiagram> enumerate_diagrams(int k, int d) {
  if (k < 0 || k > kMaxPoints) throw FnError("point count out of range");
  std::vector<ChordDiagram> out;
  if (d < 0 || d > std::max(k - 1, 0)) return out;
  std::vector<int> js;
  enumerate_rec(k, d, 2, js, out);
  return out;
}

std::vector<ChordDiagram> enumerate_normalized(int k, int d) {
  auto all = enumerate_diagrams(k, d);
  std::vector<ChordDiagram> out;
  for (auto& g : all)
    if (is_normalized(g)) out.push_back(std::move(g));
  return out;
}

std::size_t normalized_count(int k, int d) { return sinha_basis(k, d).size(); }

long normalized_index(const ChordDiagram& d) {
  if (!is_normalized(d)) return -1;
  const auto& list = sinha_basis(d.points, static_cast<int>(d.edges.size())).diagrams();
  auto it = std::lower_bound(list.begin(), list.end(), d, diagram_less);
  if (it == list.end() || !(*it == d)) return -1;
  return it - list.begin();
}

FnChain planetary_cycle(const ChordDiagram& d) {
  if (!is_valid(d)) throw FnError("invalid chord diagram");
  if (d.edges.size() > 20) throw FnError("too many chords");
  const Forest f = make_forest(d);
  std::vector<FnTree> terms;
  const unsigned n = 1u << d.edges.size();
  for (unsigned mask = 0; mask < n; ++mask) {
    std::vector<std::vector<int>> blocks;
    for (int r : f.roots) {
      blocks.emplace_back();
      emit_block(f, r, mask, blocks.back());
    }
    terms.push_back(blocks_tree(blocks));
  }
  return FnChain::from_terms(d.points, std::move(terms));
}

FnChain planetary_cycle(const std::vector<ChordDiagram>& sum, int points) {
  FnChain c(points);
  for (auto& g : sum) {
    if (g.points != points) throw FnError("diagram point count mismatch");
    c += planetary_cycle(g);
  }
  return c;
}

FnTree shape_tree(const SinhaShape& s) { return blocks_tree(s.blocks); }

std::optional<SinhaShape> sinha_shape(const FnTree& t) {
  SinhaShape s;
  s.blocks.emplace_back(1, t.label(0));
  for (int g = 0; g + 1 < t.points(); ++g) {
    const int dep = t.depth(g);
    if (dep == 1) return std::nullopt;
    if (dep == 0) s.blocks.emplace_back();
    s.blocks.back().push_back(t.label(g + 1));
  }
  for (auto& b : s.blocks)
    if (*std::min_element(b.begin(), b.end()) != b.front()) return std::nullopt;
  std::sort(s.blocks.begin(), s.blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return s;
}

std::vector<SinhaShape> evaluate_chain(const FnChain& c) {
  std::map<SinhaShape, int> count;
  for (auto& t : c)
    if (auto s = sinha_shape(t)) count[*s] ^= 1;
  std::vector<SinhaShape> out;
  for (auto& [s, odd] : count)
    if (odd) out.push_back(s);
  return out;
}

SinhaShape diagram_to_sinha(const ChordDiagram& d) {
  if (!is_valid(d)) throw FnError("invalid chord diagram");
  const Forest f = make_forest(d);
  const unsigned all_above = d.edges.empty() ? 0u : ~0u;
  SinhaShape s;
  for (int r : f.roots) {
    s.blocks.emplace_back();
    emit_block(f, r, all_above, s.blocks.back());
  }
  return s;
}

SinhaBasis::SinhaBasis(int k, int d) : k_(k), d_(d), diagrams_(enumerate_normalized(k, d)) {
  const std::size_t n = diagrams_.size();
  for (std::size_t p = 0; p < n; ++p) shapes_.emplace_back(diagram_to_sinha(diagrams_[p]), p);
  std::sort(shapes_.begin(), shapes_.end());
  for (std::size_t i = 1; i < n; ++i)
    if (shapes_[i - 1].first == shapes_[i].first) throw FnError("Sinha shapes are not distinct");
  pairing_ = Gf2Matrix(n, n);
  for (std::size_t p = 0; p < n; ++p) {
    for (auto& t : planetary_cycle(diagrams_[p]))
      if (auto s = sinha_shape(t))
        if (long r = shape_index(*s); r >= 0) pairing_.flip(static_cast<std::size_t>(r), p);
  }
  auto inv = gf2_inverse(pairing_);
  if (!inv) throw FnError("pairing with Sinha cocycles is singular");
  inverse_t_ = inv->transpose();
}

long SinhaBasis::shape_index(const SinhaShape& s) const {
  auto it = std::lower_bound(shapes_.begin(), shapes_.end(), s,
                             [](const auto& e, const SinhaShape& v) { return e.first < v; });
  if (it == shapes_.end() || !(it->first == s)) return -1;
  return static_cast<long>(it->second);
}

Gf2Vector SinhaBasis::evaluation(const FnChain& c) const {
  if (c.points() != k_) throw FnError("chain point count does not match the basis");
  Gf2Vector e(size(), 0);
  for (auto& t : c)
    if (auto s = sinha_shape(t))
      if (long r = shape_index(*s); r >= 0) e[static_cast<std::size_t>(r)] ^= 1;
  return e;
}

CoordVector SinhaBasis::coordinates_from_evaluation(const Gf2Vector& e) const {
  if (e.size() != size()) throw FnError("evaluation vector length mismatch");
  const std::size_t w = inverse_t_.words_per_row();
  std::vector<std::uint64_t> acc(w, 0);
  for (std::size_t r = 0; r < e.size(); ++r)
    if (e[r]) {
      const std::uint64_t* row = inverse_t_.row_words(r);
      for (std::size_t q = 0; q < w; ++q) acc[q] ^= row[q];
    }
  CoordVector v{k_, d_, Gf2Vector(size(), 0)};
  for (std::size_t i = 0; i < size(); ++i) v.bits[i] = acc[i / 64] >> (i % 64) & 1u;
  return v;
}

CoordVector SinhaBasis::coordinates(const FnChain& c) const {
  return coordinates_from_evaluation(evaluation(c));
}

const SinhaBasis& sinha_basis(int k, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<SinhaBasis>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{k, d}];
  if (!slot) slot = std::make_unique<SinhaBasis>(k, d);
  return *slot;
}

CoordVector class_coordinates(const FnChain& c, int k, int d) {
  return sinha_basis(k, d).coordinates(c);
}

Gf2Matrix d1_matrix(int k, int d) {
  const auto& source = sinha_basis(k - 1, d);
  const auto& target = sinha_basis(k, d);
  Gf2Matrix m(target.size(), source.size());
  for (std::size_t p = 0; p < source.size(); ++p) {
    const auto col = target.coordinates(D1(planetary_cycle(source.diagrams()[p]))).bits;
    for (std::size_t r = 0; r < col.size(); ++r)
      if (col[r]) m.set(r, p, true);
  }
  return m;
}

std::size_t e2_dimension(int k, int q) {
  if (q < 0 || q % 2 != 0 || k < 1) return 0;
  const int d = q / 2;
  const std::size_t n = sinha_basis(k, d).size();
  if (n == 0) return 0;
  const std::size_t out_rank = gf2_rank(d1_matrix(k + 1, d));
  const std::size_t in_rank = k >= 2 ? gf2_rank(d1_matrix(k, d)) : 0;
  return n - out_rank - in_rank;
}

ChordDiagram stack(const ChordDiagram& a, const ChordDiagram& b) {
  ChordDiagram s{a.points + b.points, a.edges};
  for (auto [i, j] : b.edges) s.edges.emplace_back(i + a.points, j + a.points);
  std::sort(s.edges.begin(), s.edges.end(),
            [](const auto& x, const auto& y) { return x.second < y.second; });
  if (!is_valid(s)) throw FnError("stacked diagram is invalid");
  return s;
}

std::vector<ChordDiagram> support(const CoordVector& v) {
  const auto& list = sinha_basis(v.points, v.edges).diagrams();
  if (v.bits.size() != list.size()) throw FnError("coordinate vector length mismatch");
  std::vector<ChordDiagram> out;
  for (std::size_t i = 0; i < list.size(); ++i)
    if (v.bits[i]) out.push_back(list[i]);
  return out;
}

CoordVector from_diagrams(const std::vector<ChordDiagram>& sum, int k, int d) {
  CoordVector v{k, d, Gf2Vector(sinha_basis(k, d).size(), 0)};
  for (auto& g : sum) {
    if (g.points != k || static_cast<int>(g.edges.size()) != d)
      throw FnError("diagram bigrading mismatch");
    long i = normalized_index(g);
    if (i < 0) throw FnError("diagram is not normalized");
    v.bits[static_cast<std::size_t>(i)] ^= 1;
  }
  return v;
}

CoordVector unit_vector(const ChordDiagram& d) {
  return from_diagrams({d}, d.points, static_cast<int>(d.edges.size()));
}

CoordVector multiply(const CoordVector& u, const CoordVector& v) {
  const int k = u.points + v.points, d = u.edges + v.edges;
  std::vector<ChordDiagram> terms;
  for (auto& a : support(u))
    for (auto& b : support(v)) terms.push_back(stack(a, b));
  return from_diagrams(terms, k, d);
}

ChordDiagram q1_iota_squared() { return ChordDiagram{6, {{1, 2}, {1, 3}, {4, 5}, {4, 6}}}; }

VassilievClass vassiliev_class() {
  const auto kernel = gf2_kernel(d1_matrix(7, 4));
  Gf2Matrix w = d1_matrix(6, 4);
  VassilievClass out;
  out.rank_ladder.push_back(gf2_rank(w));
  w.append_column(unit_vector(q1_iota_squared()).bits);
  const std::size_t base = gf2_rank(w);
  out.rank_ladder.push_back(base);
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    Gf2Matrix trial = w;
    trial.append_column(kernel[i]);
    if (std::size_t r = gf2_rank(trial); r > base) {
      out.rank_ladder.push_back(r);
      out.kernel_position = i;
      out.coords = CoordVector{6, 4, kernel[i]};
      out.cycle = planetary_cycle(support(out.coords), 6);
      return out;
    }
  }
  throw FnError("no kernel vector outside the span of the known classes");
}

std::vector<CoordVector> framing_span(int k, int d) {
  const ChordDiagram iota{2, {{1, 2}}};
  const ChordDiagram q{3, {{1, 2}, {1, 3}}};
  std::vector<CoordVector> out;
  for (int b = 0; 3 * b <= k; ++b)
    for (int a = 0; 2 * a + 3 * b <= k; ++a) {
      if (a == 0 && b == 0) continue;
      const int kc = k - 2 * a - 3 * b, dc = d - a - 2 * b;
      if (dc < 0) continue;
      ChordDiagram tail{0, {}};
      for (int i = 0; i < b; ++i) tail = stack(tail, q);
      for (int i = 0; i < a; ++i) tail = stack(tail, iota);
      const CoordVector tail_vec = unit_vector(tail);
      if (kc == 0 && dc == 0) {
        out.push_back(tail_vec);
        continue;
      }
      if (sinha_basis(kc, dc).size() == 0) continue;
      for (auto& u : gf2_kernel(d1_matrix(kc + 1, dc)))
        out.push_back(multiply(CoordVector{kc, dc, u}, tail_vec));
    }
  return out;
}

Bigrading tourtchine_to_sinha(Bigrading ij, int m) { return {-ij.b, ij.a * (m - 1)}; }
Bigrading tourtchine_to_vassiliev(Bigrading ij, int m) { return {-ij.a, m * ij.a - ij.b}; }
Bigrading vassiliev_to_sinha(Bigrading nd, int m) { return {nd.b + m * nd.a, -(m - 1) * nd.a}; }

bool inside_vanishing_lines(int k, int q, int m) {
  if (m < 2) throw FnError("ambient dimension must be at least 2");
  return q % (m - 1) == 0 && q <= (k - 1) * (m - 1) && 2 * q >= k * (m - 1);
}

ChordDiagram parse_diag(std::string_view content) {
  std::istringstream in{std::string(content)};
  std::string line;
  if (read_header_line(in, line).empty()) throw FnError("diag file: missing header");
  int k = 0, d = 0;
  if (std::sscanf(line.c_str(), " DIAG k=%d d=%d", &k, &d) != 2) throw FnError("diag file: bad header");
  ChordDiagram g{k, {}};
  while (!read_header_line(in, line).empty()) {
    std::istringstream ls(line);
    int i = 0, j = 0;
    std::string extra;
    if (!(ls >> i >> j) || (ls >> extra)) throw FnError("diag file: bad edge line: " + line);
    g.edges.emplace_back(i, j);
  }
  std::sort(g.edges.begin(), g.edges.end(),
            [](const auto& x, const auto& y) { return x.second < y.second; });
  if (static_cast<int>(g.edges.size()) != d || !is_valid(g)) throw FnError("diag file: invalid diagram");
  return g;
}

std::string format_diag(const ChordDiagram& d) {
  std::string s = "DIAG k=" + std::to_string(d.points) + " d=" + std::to_string(d.edges.size()) + "\n";
  for (auto [i, j] : d.edges) s += std::to_string(i) + " " + std::to_string(j) + "\n";
  return s;
}

ChordDiagram parse_diagram_inline(std::string_view text, int points) {
  ChordDiagram g{points, {}};
  int top = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string item(text.substr(pos, end - pos));
    int i = 0, j = 0;
    char tail = 0;
    if (std::sscanf(item.c_str(), " %d - %d %c", &i, &j, &tail) != 2)
      throw FnError("bad chord '" + item + "', expected i-j");
    if (i > j) std::swap(i, j);
    g.edges.emplace_back(i, j);
    top = std::max(top, j);
    pos = end + 1;
  }
  if (g.points == 0) g.points = top;
  std::sort(g.edges.begin(), g.edges.end(),
            [](const auto& x, const auto& y) { return x.second < y.second; });
  if (!is_valid(g)) throw FnError("chords must have distinct larger ends within 1..k");
  return g;
}

CoordVector parse_gf2vec(std::string_view content) {
  std::istringstream in{std::string(content)};
  std::string line;
  if (read_header_line(in, line).empty()) throw FnError("gf2vec file: missing header");
  CoordVector v;
  std::size_t len = 0;
  if (std::sscanf(line.c_str(), " GF2VEC k=%d d=%d len=%zu", &v.points, &v.edges, &len) != 3)
    throw FnError("gf2vec file: bad header");
  v.bits.assign(len, 0);
  while (!read_header_line(in, line).empty()) {
    std::istringstream ls(line);
    std::size_t i = 0;
    while (ls >> i) {
      if (i < 1 || i > len) throw FnError("gf2vec file: index out of range");
      v.bits[i - 1] ^= 1;
    }
    if (!ls.eof()) throw FnError("gf2vec file: bad line: " + line);
  }
  return v;
}

std::string format_gf2vec(const CoordVector& v) {
  std::string s = "GF2VEC k=" + std::to_string(v.points) + " d=" + std::to_string(v.edges) +
                  " len=" + std::to_string(v.bits.size()) + "\n";
  for (std::size_t i = 0; i < v.bits.size(); ++i)
    if (v.bits[i]) s += std::to_string(i + 1) + "\n";
  return s;
}

}  // namespace fnmc
