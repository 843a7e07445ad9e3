#include "fnmc/tree.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

namespace fnmc {

FnTree::FnTree(std::span<const int> order, std::span<const int> depths) {
  const int n = static_cast<int>(order.size());
  if (n < 1 || n > kMaxPoints) throw FnError("tree must have between 1 and 16 points");
  if (static_cast<int>(depths.size()) != n - 1) throw FnError("tree needs n-1 depths");
  std::array<bool, kMaxPoints + 1> seen{};
  for (int x : order) {
    if (x < 1 || x > n || seen[x]) throw FnError("tree order is not a permutation of 1..n");
    seen[x] = true;
  }
  for (int a : depths)
    if (a < 0 || a > 2) throw FnError("tree depth outside {0,1,2}");
  n_ = static_cast<std::uint8_t>(n);
  order_.fill(0);
  depths_.fill(0);
  for (int p = 0; p < n; ++p) order_[p] = static_cast<std::uint8_t>(order[p]);
  for (int g = 0; g + 1 < n; ++g) depths_[g] = static_cast<std::uint8_t>(depths[g]);
}

FnTree FnTree::from_raw(int n, const std::uint8_t* order, const std::uint8_t* depths) noexcept {
  FnTree t;
  t.n_ = static_cast<std::uint8_t>(n);
  t.order_.fill(0);
  std::memcpy(t.order_.data(), order, n);
  if (n > 1) std::memcpy(t.depths_.data(), depths, n - 1);
  return t;
}

int FnTree::degree() const noexcept {
  int s = 0;
  for (int g = 0; g + 1 < n_; ++g) s += depths_[g];
  return s;
}

int FnTree::position_of(int label) const noexcept {
  for (int p = 0; p < n_; ++p)
    if (order_[p] == label) return p;
  return -1;
}

int FnTree::pair_depth(int a, int b) const noexcept {
  int p = position_of(a), q = position_of(b);
  if (p > q) std::swap(p, q);
  int m = 2;
  for (int g = p; g < q; ++g) m = std::min<int>(m, depths_[g]);
  return m;
}

bool FnTree::has_depth(int value) const noexcept {
  for (int g = 0; g + 1 < n_; ++g)
    if (depths_[g] == value) return true;
  return false;
}

std::vector<int> FnTree::order() const { return {order_.begin(), order_.begin() + n_}; }

std::vector<int> FnTree::depths() const {
  return {depths_.begin(), depths_.begin() + (n_ > 0 ? n_ - 1 : 0)};
}

std::uint64_t FnTree::hash() const noexcept {
  std::uint64_t w[4];
  std::memcpy(w, this, sizeof(w));
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::uint64_t x : w) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
  }
  return h;
}

static_assert(sizeof(FnTree) == 32);

void reduce_mod2(std::vector<FnTree>& terms) {
  std::sort(terms.begin(), terms.end());
  std::size_t out = 0, i = 0;
  while (i < terms.size()) {
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j] == terms[i]) ++j;
    if ((j - i) % 2 == 1) terms[out++] = terms[i];
    i = j;
  }
  terms.resize(out);
}

FnChain FnChain::from_terms(int points, std::vector<FnTree> terms) {
  for (const auto& t : terms)
    if (t.points() != points) throw FnError("chain terms must share the point count");
  reduce_mod2(terms);
  FnChain c(points);
  c.terms_ = std::move(terms);
  return c;
}

bool FnChain::contains(const FnTree& t) const {
  return std::binary_search(terms_.begin(), terms_.end(), t);
}

void FnChain::toggle(const FnTree& t) {
  if (t.points() != points_) throw FnError("chain terms must share the point count");
  auto it = std::lower_bound(terms_.begin(), terms_.end(), t);
  if (it != terms_.end() && *it == t)
    terms_.erase(it);
  else
    terms_.insert(it, t);
}

FnChain& FnChain::operator+=(const FnChain& other) {
  if (other.empty()) return *this;
  if (empty()) {
    *this = other;
    return *this;
  }
  if (other.points_ != points_) throw FnError("cannot add chains with different point counts");
  std::vector<FnTree> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  std::set_symmetric_difference(terms_.begin(), terms_.end(), other.terms_.begin(),
                                other.terms_.end(), std::back_inserter(merged));
  terms_ = std::move(merged);
  return *this;
}

namespace {

FnTree build_tree(const std::vector<int>& labels, const std::vector<int>& bars) {
  std::vector<int> depths;
  depths.reserve(bars.size());
  for (int b : bars) depths.push_back(2 - b);
  return FnTree(labels, depths);
}

}  // namespace

FnTree parse_tree(std::string_view text) {
  std::vector<int> labels, bars;
  int pending_bars = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '|') {
      ++pending_bars;
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      int v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + (text[i] - '0');
        if (v > 1000) throw FnError("tree label too large");
        ++i;
      }
      if (labels.empty()) {
        if (pending_bars) throw FnError("tree cannot start with a bar");
      } else {
        if (pending_bars > 2) throw FnError("at most two consecutive bars");
        bars.push_back(pending_bars);
      }
      pending_bars = 0;
      labels.push_back(v);
    } else {
      throw FnError(std::string("unexpected character in tree: ") + c);
    }
  }
  if (labels.empty()) throw FnError("empty tree");
  if (pending_bars) throw FnError("tree cannot end with a bar");
  return build_tree(labels, bars);
}

FnTree parse_tree_digits(std::string_view text) {
  std::vector<int> labels, bars;
  int pending_bars = 0;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '|') {
      ++pending_bars;
    } else if (c >= '1' && c <= '9') {
      if (labels.empty() && pending_bars) throw FnError("tree cannot start with a bar");
      if (!labels.empty()) {
        if (pending_bars > 2) throw FnError("at most two consecutive bars");
        bars.push_back(pending_bars);
      }
      pending_bars = 0;
      labels.push_back(c - '0');
    } else {
      throw FnError(std::string("unexpected character in tree: ") + c);
    }
  }
  if (labels.empty()) throw FnError("empty tree");
  if (pending_bars) throw FnError("tree cannot end with a bar");
  return build_tree(labels, bars);
}

std::string format_tree(const FnTree& t) {
  std::string s = std::to_string(t.label(0));
  for (int p = 1; p < t.points(); ++p) {
    switch (t.depth(p - 1)) {
      case 2: s += ' '; break;
      case 1: s += " | "; break;
      default: s += " || "; break;
    }
    s += std::to_string(t.label(p));
  }
  return s;
}

FnChain parse_chain(std::string_view text, int points) {
  std::vector<FnTree> terms;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t plus = text.find('+', start);
    std::string_view piece = text.substr(start, plus == std::string_view::npos ? text.npos : plus - start);
    bool blank = std::all_of(piece.begin(), piece.end(),
                             [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (!blank) terms.push_back(parse_tree(piece));
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  if (points == 0 && !terms.empty()) points = terms.front().points();
  return FnChain::from_terms(points, std::move(terms));
}

std::string format_chain(const FnChain& c) {
  if (c.empty()) return "0";
  std::string s;
  for (const auto& t : c) {
    if (!s.empty()) s += " + ";
    s += format_tree(t);
  }
  return s;
}

std::vector<DepthVector> enumerate_depth_vectors(int k, int d) {
  std::vector<DepthVector> out;
  if (k < 1) return out;
  DepthVector cur(k - 1, 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == k - 1) {
      if (remaining == 0) out.push_back(cur);
      return;
    }
    int slots = k - 2 - pos;
    for (int v = 0; v <= 2; ++v) {
      int rest = remaining - v;
      if (rest < 0 || rest > 2 * slots) continue;
      cur[pos] = v;
      self(self, pos + 1, rest);
    }
  };
  rec(rec, 0, d);
  return out;
}

std::vector<FnTree> enumerate_trees(int k, int d) {
  std::vector<FnTree> out;
  std::vector<int> perm(k);
  for (const auto& a : enumerate_depth_vectors(k, d)) {
    for (int i = 0; i < k; ++i) perm[i] = i + 1;
    do {
      out.emplace_back(perm, a);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

std::size_t count_trees(int k, int d) {
  std::size_t f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f * enumerate_depth_vectors(k, d).size();
}

FnTree relabel(const FnTree& t, std::span<const int> sigma) {
  const int n = t.points();
  if (static_cast<int>(sigma.size()) != n) throw FnError("relabel permutation has wrong size");
  int map[kMaxPoints + 1];
  std::array<bool, kMaxPoints + 1> seen{};
  for (int x = 1; x <= n; ++x) {
    int y = sigma[x - 1];
    if (y < 1 || y > n || seen[y]) throw FnError("relabel map is not a permutation");
    seen[y] = true;
    map[x] = y;
  }
  return relabel_map(t, map);
}

FnTree relabel_map(const FnTree& t, const int* map) {
  std::uint8_t order[kMaxPoints];
  for (int p = 0; p < t.points(); ++p) order[p] = static_cast<std::uint8_t>(map[t.label(p)]);
  return FnTree::from_raw(t.points(), order, t.raw_depths());
}

FnChain relabel(const FnChain& c, std::span<const int> sigma) {
  std::vector<FnTree> terms;
  terms.reserve(c.size());
  for (const auto& t : c) terms.push_back(relabel(t, sigma));
  return FnChain::from_terms(c.points(), std::move(terms));
}

namespace {

// rel[a][b] = depth between a and b if a precedes b, else -1.
void pair_relations(const FnTree& t, int rel[kMaxPoints + 1][kMaxPoints + 1]) {
  const int n = t.points();
  for (int p = 0; p < n; ++p) {
    int m = 2;
    rel[t.label(p)][t.label(p)] = -1;
    for (int q = p + 1; q < n; ++q) {
      m = std::min(m, t.depth(q - 1));
      rel[t.label(p)][t.label(q)] = m;
      rel[t.label(q)][t.label(p)] = -1;
    }
  }
}

}  // namespace

bool poset_leq(const FnTree& s, const FnTree& t) {
  if (s.points() != t.points()) return false;
  const int n = t.points();
  int rs[kMaxPoints + 1][kMaxPoints + 1], rt[kMaxPoints + 1][kMaxPoints + 1];
  pair_relations(s, rs);
  pair_relations(t, rt);
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b) {
      int r = rt[a][b];
      if (a == b || r < 0) continue;
      if (rs[a][b] >= 0) {
        if (rs[a][b] > r) return false;
      } else if (rs[b][a] >= r) {
        return false;
      }
    }
  return true;
}

FnTree coface(const FnTree& t, int i) {
  const int n = t.points();
  if (i < 0 || i > n + 1) throw FnError("coface index out of range");
  if (n + 1 > kMaxPoints) throw FnError("coface would exceed the point limit");
  std::uint8_t order[kMaxPoints], depths[kMaxPoints];
  int m = 0;
  if (i == 0) {
    order[0] = 1;
    depths[0] = 2;
    for (int p = 0; p < n; ++p) {
      order[p + 1] = static_cast<std::uint8_t>(t.label(p) + 1);
      if (p + 1 < n) depths[p + 1] = static_cast<std::uint8_t>(t.depth(p));
    }
    return FnTree::from_raw(n + 1, order, depths);
  }
  if (i == n + 1) {
    for (int p = 0; p < n; ++p) {
      order[p] = static_cast<std::uint8_t>(t.label(p));
      if (p + 1 < n) depths[p] = static_cast<std::uint8_t>(t.depth(p));
    }
    order[n] = static_cast<std::uint8_t>(n + 1);
    depths[n - 1] = 2;
    return FnTree::from_raw(n + 1, order, depths);
  }
  for (int p = 0; p < n; ++p) {
    int x = t.label(p);
    if (p > 0) depths[m - 1] = static_cast<std::uint8_t>(t.depth(p - 1));
    if (x == i) {
      order[m++] = static_cast<std::uint8_t>(i);
      depths[m - 1] = 2;
      order[m++] = static_cast<std::uint8_t>(i + 1);
    } else {
      order[m++] = static_cast<std::uint8_t>(x > i ? x + 1 : x);
    }
  }
  return FnTree::from_raw(n + 1, order, depths);
}

FnTree codegeneracy(const FnTree& t, int j) {
  const int n = t.points();
  if (n < 2 || j < 0 || j > n - 1) throw FnError("codegeneracy index out of range");
  const int gone = j + 1;
  const int q = t.position_of(gone);
  std::uint8_t order[kMaxPoints], depths[kMaxPoints];
  int m = 0;
  for (int p = 0; p < n; ++p) {
    if (p == q) continue;
    int x = t.label(p);
    order[m++] = static_cast<std::uint8_t>(x > gone ? x - 1 : x);
  }
  int g = 0;
  for (int p = 0; p + 1 < n; ++p) {
    if (p == q - 1 && q + 1 < n) {
      depths[g++] = static_cast<std::uint8_t>(std::min(t.depth(p), t.depth(p + 1)));
      ++p;
    } else if (p == q - 1 || p == q) {
      continue;
    } else {
      depths[g++] = static_cast<std::uint8_t>(t.depth(p));
    }
  }
  return FnTree::from_raw(n - 1, order, depths);
}

FnTree coface_multi(const FnTree& t, std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  FnTree r = t;
  for (auto it = indices.rbegin(); it != indices.rend(); ++it) r = coface(r, *it);
  return r;
}

FnTree identity_tree(const DepthVector& depths) {
  std::vector<int> order(depths.size() + 1);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i) + 1;
  return FnTree(order, depths);
}

ChainFile parse_fnchain(std::string_view content) {
  ChainFile out;
  std::istringstream in{std::string(content)};
  std::string line;
  bool header = false;
  std::vector<FnTree> terms;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first);
    if (!header) {
      std::istringstream h(line);
      std::string tag, ntok, mtok;
      h >> tag >> ntok >> mtok;
      if (tag != "FN" || ntok.rfind("n=", 0) != 0)
        throw FnError("fnchain: expected header 'FN n=<points> m=3'");
      out.points = std::stoi(ntok.substr(2));
      if (!mtok.empty()) {
        if (mtok.rfind("m=", 0) != 0) throw FnError("fnchain: malformed ambient dimension");
        out.ambient = std::stoi(mtok.substr(2));
      }
      header = true;
      continue;
    }
    FnTree t;
    try {
      t = parse_tree(line);
    } catch (const FnError& e) {
      throw FnError("fnchain line " + std::to_string(lineno) + ": " + e.what());
    }
    if (t.points() != out.points)
      throw FnError("fnchain line " + std::to_string(lineno) + ": wrong number of points");
    terms.push_back(t);
  }
  if (!header) throw FnError("fnchain: missing header");
  out.chain = FnChain::from_terms(out.points, std::move(terms));
  return out;
}

std::string format_fnchain(const FnChain& chain, int ambient) {
  std::string s = "FN n=" + std::to_string(chain.points()) + " m=" + std::to_string(ambient) + "\n";
  for (const auto& t : chain) {
    s += format_tree(t);
    s += '\n';
  }
  return s;
}

ChainFile read_fnchain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FnError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fnchain(ss.str());
}

void write_fnchain(const std::string& path, const FnChain& chain, int ambient) {
  std::ofstream out(path);
  if (!out) throw FnError("cannot write " + path);
  out << format_fnchain(chain, ambient);
}

}  // namespace fnmc
