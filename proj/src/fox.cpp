#include "fnmc/fox.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace fnmc {

FoxMonomial::FoxMonomial(std::vector<FoxSymbol> symbols, std::vector<int> bars, int leading,
                         int trailing)
    : symbols_(std::move(symbols)), bars_(std::move(bars)), leading_(leading), trailing_(trailing) {
  std::size_t want = symbols_.empty() ? 0 : symbols_.size() - 1;
  if (bars_.size() != want) throw FnError("monomial needs one bar count between symbols");
}

bool FoxMonomial::is_numerical() const noexcept {
  return std::all_of(symbols_.begin(), symbols_.end(),
                     [](const FoxSymbol& s) { return s.kind == SymbolKind::Constant; });
}

std::vector<int> FoxMonomial::constants() const {
  std::vector<int> out;
  for (const auto& s : symbols_)
    if (s.kind == SymbolKind::Constant) out.push_back(s.value);
  return out;
}

int FoxMonomial::occurrences(SymbolKind kind, int index) const {
  int c = 0;
  for (const auto& s : symbols_)
    if (s.kind == kind && s.value == index) ++c;
  return c;
}

namespace {

void reduce_terms(std::vector<FoxMonomial>& terms) {
  std::sort(terms.begin(), terms.end());
  std::size_t out = 0, i = 0;
  while (i < terms.size()) {
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j] == terms[i]) ++j;
    if ((j - i) % 2 == 1) {
      if (out != i) terms[out] = std::move(terms[i]);
      ++out;
    }
    i = j;
  }
  terms.resize(out);
}

bool is_dummy(SymbolKind k) {
  return k == SymbolKind::EmptyX || k == SymbolKind::EmptyY || k == SymbolKind::EmptyZ;
}

}  // namespace

FoxPolynomial FoxPolynomial::from_terms(std::vector<FoxMonomial> terms) {
  reduce_terms(terms);
  FoxPolynomial p;
  p.terms_ = std::move(terms);
  return p;
}

FoxPolynomial FoxPolynomial::single(FoxMonomial m) {
  FoxPolynomial p;
  p.terms_.push_back(std::move(m));
  return p;
}

FoxPolynomial& FoxPolynomial::operator+=(const FoxPolynomial& other) {
  std::vector<FoxMonomial> merged;
  std::set_symmetric_difference(terms_.begin(), terms_.end(), other.terms_.begin(),
                                other.terms_.end(), std::back_inserter(merged));
  terms_ = std::move(merged);
  return *this;
}

FoxMonomial parse_monomial(std::string_view text) {
  std::vector<FoxSymbol> symbols;
  std::vector<int> bars;
  int pending = 0, leading = 0;
  auto read_number = [&](std::size_t& i) {
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
      throw FnError("expected a number in monomial");
    int v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
      v = v * 10 + (text[i++] - '0');
    return v;
  };
  auto push = [&](FoxSymbol s) {
    if (symbols.empty())
      leading = pending;
    else
      bars.push_back(pending);
    pending = 0;
    symbols.push_back(s);
  };
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (c == '|') {
      ++pending;
      ++i;
    } else if (std::isdigit(c)) {
      push({SymbolKind::Constant, read_number(i)});
    } else if (c == 'X' || c == 'Y' || c == 'Z') {
      ++i;
      SymbolKind k = c == 'X' ? SymbolKind::X : c == 'Y' ? SymbolKind::Y : SymbolKind::Z;
      push({k, read_number(i)});
    } else if (c == 'd' && i + 1 < text.size() && text[i + 1] == 'Y') {
      i += 2;
      push({SymbolKind::DY, read_number(i)});
    } else if (text.substr(i, 4) == "\xE2\x88\x82Y") {
      i += 4;
      push({SymbolKind::DY, read_number(i)});
    } else {
      throw FnError(std::string("unexpected character in monomial: ") + static_cast<char>(c));
    }
  }
  if (symbols.empty()) throw FnError("empty monomial");
  return FoxMonomial(std::move(symbols), std::move(bars), leading, pending);
}

FoxPolynomial parse_polynomial(std::string_view text) {
  std::vector<FoxMonomial> terms;
  std::size_t start = 0;
  while (true) {
    std::size_t plus = text.find('+', start);
    auto piece = text.substr(start, plus == std::string_view::npos ? text.npos : plus - start);
    if (piece.find_first_not_of(" \t\r\n") != std::string_view::npos && piece != "0")
      terms.push_back(parse_monomial(piece));
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return FoxPolynomial::from_terms(std::move(terms));
}

namespace {

std::string symbol_text(const FoxSymbol& s) {
  switch (s.kind) {
    case SymbolKind::Constant: return std::to_string(s.value);
    case SymbolKind::X: return "X" + std::to_string(s.value);
    case SymbolKind::Y: return "Y" + std::to_string(s.value);
    case SymbolKind::DY: return "dY" + std::to_string(s.value);
    case SymbolKind::Z: return "Z" + std::to_string(s.value);
    case SymbolKind::EmptyX: return "0X";
    case SymbolKind::EmptyY: return "0Y";
    case SymbolKind::EmptyZ: return "0Z";
  }
  return "?";
}

std::string bar_text(int b) {
  if (b == 0) return " ";
  return " " + std::string(b, '|') + " ";
}

}  // namespace

std::string format_monomial(const FoxMonomial& m) {
  std::string s(m.leading_bars(), '|');
  for (std::size_t q = 0; q < m.size(); ++q) {
    if (q > 0) s += bar_text(m.bars()[q - 1]);
    s += symbol_text(m.symbols()[q]);
  }
  s += std::string(m.trailing_bars(), '|');
  return s;
}

std::string format_polynomial(const FoxPolynomial& p) {
  if (p.empty()) return "0";
  std::string s;
  for (const auto& m : p) {
    if (!s.empty()) s += " + ";
    s += format_monomial(m);
  }
  return s;
}

bool validate(const FoxMonomial& m) {
  if (m.empty() || m.leading_bars() != 0 || m.trailing_bars() != 0) return false;
  const auto& sy = m.symbols();
  const auto& ba = m.bars();
  for (int b : ba)
    if (b < 0 || b > 2) return false;
  std::set<int> consts, zs;
  int derived = 0;
  for (std::size_t q = 0; q < sy.size(); ++q) {
    int before = q == 0 ? 3 : ba[q - 1];
    int after = q + 1 == sy.size() ? 3 : ba[q];
    switch (sy[q].kind) {
      case SymbolKind::Constant:
        if (!consts.insert(sy[q].value).second) return false;
        break;
      case SymbolKind::X:
        if (sy[q].value < 1) return false;
        break;
      case SymbolKind::DY:
        if (++derived > 1) return false;
        [[fallthrough]];
      case SymbolKind::Y:
        if (sy[q].value < 1 || before < 1 || after < 1) return false;
        break;
      case SymbolKind::Z:
        if (sy[q].value < 1 || before < 2 || after < 2) return false;
        if (!zs.insert(sy[q].value).second) return false;
        break;
      default:
        return false;
    }
  }
  return true;
}

FoxMonomial relabel_constants(const FoxMonomial& m, const std::map<int, int>& map) {
  auto sy = m.symbols();
  for (auto& s : sy)
    if (s.kind == SymbolKind::Constant) {
      auto it = map.find(s.value);
      if (it != map.end()) s.value = it->second;
    }
  return FoxMonomial(std::move(sy), m.bars(), m.leading_bars(), m.trailing_bars());
}

FoxPolynomial relabel_constants(const FoxPolynomial& p, const std::map<int, int>& map) {
  std::vector<FoxMonomial> terms;
  for (const auto& m : p) terms.push_back(relabel_constants(m, map));
  return FoxPolynomial::from_terms(std::move(terms));
}

FoxMonomial delta(const FoxMonomial& m, int i) {
  auto sy = m.symbols();
  for (auto& s : sy)
    if (s.kind == SymbolKind::Constant && s.value >= i) ++s.value;
  return FoxMonomial(std::move(sy), m.bars(), m.leading_bars(), m.trailing_bars());
}

namespace {

// Removes symbol q, merging its two bars by max; at an end the adjacent bar goes too.
FoxMonomial remove_symbol(const FoxMonomial& m, std::size_t q) {
  auto sy = m.symbols();
  auto ba = m.bars();
  const std::size_t n = sy.size();
  sy.erase(sy.begin() + static_cast<std::ptrdiff_t>(q));
  if (n == 1) {
    ba.clear();
  } else if (q == 0) {
    ba.erase(ba.begin());
  } else if (q == n - 1) {
    ba.pop_back();
  } else {
    ba[q - 1] = std::max(ba[q - 1], ba[q]);
    ba.erase(ba.begin() + static_cast<std::ptrdiff_t>(q));
  }
  return FoxMonomial(std::move(sy), std::move(ba), m.leading_bars(), m.trailing_bars());
}

}  // namespace

FoxMonomial eliminate(const FoxMonomial& m, int label) {
  for (std::size_t q = 0; q < m.size(); ++q)
    if (m.symbols()[q].kind == SymbolKind::Constant && m.symbols()[q].value == label)
      return remove_symbol(m, q);
  throw FnError("eliminate: label " + std::to_string(label) + " not in monomial");
}

FoxMonomial restrict_to(const FoxMonomial& m, const std::vector<int>& keep) {
  FoxMonomial r = m;
  for (int c : m.constants())
    if (std::find(keep.begin(), keep.end(), c) == keep.end()) r = eliminate(r, c);
  return r;
}

FoxMonomial restrict_dummy(const FoxMonomial& m, const std::vector<int>& keep, SymbolKind dummy) {
  FoxMonomial r = restrict_to(m, keep);
  if (r.empty()) return FoxMonomial({{dummy, 0}}, {});
  return r;
}

bool simplify_dummies(FoxMonomial& m) {
  std::vector<FoxSymbol> sy;
  std::vector<int> ba;
  const auto& in = m.symbols();
  int pending = 3;
  for (std::size_t q = 0; q < in.size(); ++q) {
    int after = q + 1 < in.size() ? m.bars()[q] : 3;
    if (!is_dummy(in[q].kind)) {
      if (!sy.empty()) ba.push_back(pending);
      sy.push_back(in[q]);
      pending = after;
      continue;
    }
    int p = sy.empty() ? 3 : pending;
    bool ok = in[q].kind == SymbolKind::EmptyZ ||
              (in[q].kind == SymbolKind::EmptyX && (p == 0 || after == 0)) ||
              (in[q].kind == SymbolKind::EmptyY && (p == 1 || after == 1));
    if (!ok) return false;
    pending = std::max(p, after);
  }
  m = FoxMonomial(std::move(sy), std::move(ba), m.leading_bars(), m.trailing_bars());
  return true;
}

namespace {

struct Block {
  std::vector<FoxSymbol> symbols;
  std::vector<int> bars;  // inner bars
};

// Replaces each symbol position with the corresponding block (if given).
FoxMonomial splice(const FoxMonomial& m, const std::vector<const Block*>& repl) {
  std::vector<FoxSymbol> sy;
  std::vector<int> ba;
  for (std::size_t q = 0; q < m.size(); ++q) {
    if (q > 0) ba.push_back(m.bars()[q - 1]);
    if (repl[q] == nullptr) {
      sy.push_back(m.symbols()[q]);
      continue;
    }
    const Block& b = *repl[q];
    for (std::size_t r = 0; r < b.symbols.size(); ++r) {
      if (r > 0) ba.push_back(b.bars[r - 1]);
      sy.push_back(b.symbols[r]);
    }
  }
  return FoxMonomial(std::move(sy), std::move(ba), m.leading_bars(), m.trailing_bars());
}

Block dummy_block(SymbolKind k) { return Block{{{k, 0}}, {}}; }

Block block_of(const FoxMonomial& m) { return Block{m.symbols(), m.bars()}; }

void check_disjoint(const FoxMonomial& m, const FoxMonomial& cloud) {
  auto a = m.constants();
  for (int c : cloud.constants())
    if (std::find(a.begin(), a.end(), c) != a.end())
      throw FnError("substituted cloud shares constants with the monomial");
}

void check_cloud(const FoxMonomial& cloud, int max_bar) {
  if (!cloud.is_numerical()) throw FnError("substituted cloud must be numerical");
  for (int b : cloud.bars())
    if (b > max_bar) throw FnError("substituted cloud has too many bars");
}

// Splits a cloud with bars <= 1 into its maximal runs without bars.
std::vector<Block> two_clouds(const FoxMonomial& cloud) {
  std::vector<Block> out;
  for (std::size_t q = 0; q < cloud.size(); ++q) {
    if (q == 0 || cloud.bars()[q - 1] > 0) out.emplace_back();
    else out.back().bars.push_back(0);
    out.back().symbols.push_back(cloud.symbols()[q]);
  }
  return out;
}

Block join_two_clouds(const std::vector<Block>& parts, const std::vector<int>& which) {
  Block b;
  for (int w : which) {
    if (!b.symbols.empty()) b.bars.push_back(1);
    const Block& p = parts[w];
    for (std::size_t r = 0; r < p.symbols.size(); ++r) {
      if (r > 0) b.bars.push_back(p.bars[r - 1]);
      b.symbols.push_back(p.symbols[r]);
    }
  }
  return b;
}

std::vector<std::size_t> positions_of(const FoxMonomial& m, SymbolKind k, int index) {
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < m.size(); ++q)
    if (m.symbols()[q].kind == k && m.symbols()[q].value == index) out.push_back(q);
  return out;
}

void add_simplified(FoxMonomial m, std::vector<FoxMonomial>& out, EvalStats* stats) {
  if (stats) ++stats->raw_terms;
  if (simplify_dummies(m))
    out.push_back(std::move(m));
  else if (stats)
    ++stats->vanished;
}

}  // namespace

FoxPolynomial upper_diff(const FoxMonomial& cloud) {
  check_cloud(cloud, 1);
  std::vector<FoxMonomial> out;
  const std::size_t n = cloud.size();
  std::size_t l = 0;
  while (l < n) {
    std::size_t r = l;
    while (r + 1 < n && cloud.bars()[r] == 0) ++r;
    const std::size_t s = r - l + 1;
    for (std::uint32_t mask = 1; s >= 2 && mask + 1 < (1u << s); ++mask) {
      std::vector<FoxSymbol> sy;
      std::vector<int> ba;
      for (std::size_t q = 0; q < l; ++q) {
        if (q > 0) ba.push_back(cloud.bars()[q - 1]);
        sy.push_back(cloud.symbols()[q]);
      }
      for (int side = 1; side >= 0; --side) {
        bool first = true;
        for (std::size_t q = l; q <= r; ++q) {
          if (((mask >> (q - l)) & 1u) != static_cast<unsigned>(side)) continue;
          if (!sy.empty()) ba.push_back(first ? 1 : 0);
          first = false;
          sy.push_back(cloud.symbols()[q]);
        }
      }
      for (std::size_t q = r + 1; q < n; ++q) {
        ba.push_back(cloud.bars()[q - 1]);
        sy.push_back(cloud.symbols()[q]);
      }
      out.emplace_back(std::move(sy), std::move(ba));
    }
    l = r + 1;
  }
  return FoxPolynomial::from_terms(std::move(out));
}

FoxPolynomial eval_X(const FoxMonomial& m, int index, const FoxMonomial& cloud, EvalStats* stats) {
  if (!cloud.empty()) {
    check_cloud(cloud, 0);
    check_disjoint(m, cloud);
  }
  auto occ = positions_of(m, SymbolKind::X, index);
  const std::size_t d = occ.size(), s = cloud.size();
  if (d == 0) return cloud.empty() ? FoxPolynomial::single(m) : FoxPolynomial();
  std::vector<FoxMonomial> out;
  std::vector<std::size_t> choice(s, 0);
  std::vector<Block> blocks(d);
  std::vector<const Block*> repl(m.size(), nullptr);
  Block empty = dummy_block(SymbolKind::EmptyX);
  while (true) {
    for (std::size_t o = 0; o < d; ++o) {
      blocks[o] = Block{};
      for (std::size_t u = 0; u < s; ++u)
        if (choice[u] == o) {
          if (!blocks[o].symbols.empty()) blocks[o].bars.push_back(0);
          blocks[o].symbols.push_back(cloud.symbols()[u]);
        }
      repl[occ[o]] = blocks[o].symbols.empty() ? &empty : &blocks[o];
    }
    add_simplified(splice(m, repl), out, stats);
    std::size_t u = 0;
    while (u < s && ++choice[u] == d) choice[u++] = 0;
    if (u == s) break;
  }
  return FoxPolynomial::from_terms(std::move(out));
}

FoxPolynomial eval_Y(const FoxMonomial& m, int index, const FoxMonomial& cloud, EvalStats* stats) {
  if (!cloud.empty()) {
    check_cloud(cloud, 1);
    check_disjoint(m, cloud);
  }
  std::vector<std::size_t> occ;
  std::size_t derived = SIZE_MAX;
  for (std::size_t q = 0; q < m.size(); ++q) {
    const auto& sy = m.symbols()[q];
    if (sy.value != index) continue;
    if (sy.kind == SymbolKind::DY) {
      derived = occ.size();
      occ.push_back(q);
    } else if (sy.kind == SymbolKind::Y) {
      occ.push_back(q);
    }
  }
  const std::size_t d = occ.size();
  auto parts = two_clouds(cloud);
  const std::size_t h = parts.size();
  if (d == 0) return cloud.empty() ? FoxPolynomial::single(m) : FoxPolynomial();
  std::vector<FoxMonomial> out;
  std::vector<std::size_t> choice(h, 0);
  std::vector<Block> blocks(d);
  std::vector<const Block*> repl(m.size(), nullptr);
  Block empty = dummy_block(SymbolKind::EmptyY);
  while (true) {
    for (std::size_t o = 0; o < d; ++o) {
      std::vector<int> which;
      for (std::size_t u = 0; u < h; ++u)
        if (choice[u] == o) which.push_back(static_cast<int>(u));
      blocks[o] = join_two_clouds(parts, which);
      repl[occ[o]] = blocks[o].symbols.empty() ? &empty : &blocks[o];
    }
    if (derived != SIZE_MAX && !blocks[derived].symbols.empty()) {
      FoxMonomial block(blocks[derived].symbols, blocks[derived].bars);
      for (const auto& t : upper_diff(block)) {
        Block tb = block_of(t);
        repl[occ[derived]] = &tb;
        add_simplified(splice(m, repl), out, stats);
      }
    } else {
      add_simplified(splice(m, repl), out, stats);
    }
    std::size_t u = 0;
    while (u < h && ++choice[u] == d) choice[u++] = 0;
    if (u == h) break;
  }
  return FoxPolynomial::from_terms(std::move(out));
}

FoxPolynomial eval_Z(const FoxMonomial& m, int index, const FoxMonomial& cloud) {
  if (!cloud.empty()) {
    check_cloud(cloud, 2);
    check_disjoint(m, cloud);
  }
  auto occ = positions_of(m, SymbolKind::Z, index);
  if (occ.empty()) return cloud.empty() ? FoxPolynomial::single(m) : FoxPolynomial();
  if (occ.size() > 1) throw FnError("a Z variable occurs at most once");
  std::vector<const Block*> repl(m.size(), nullptr);
  Block b = cloud.empty() ? dummy_block(SymbolKind::EmptyZ) : block_of(cloud);
  repl[occ[0]] = &b;
  FoxMonomial r = splice(m, repl);
  if (!simplify_dummies(r)) return {};
  return FoxPolynomial::single(std::move(r));
}

namespace {

template <class F>
FoxPolynomial map_terms(const FoxPolynomial& p, F f) {
  std::vector<FoxMonomial> terms;
  for (const auto& m : p)
    for (const auto& t : f(m)) terms.push_back(t);
  return FoxPolynomial::from_terms(std::move(terms));
}

}  // namespace

FoxPolynomial eval_X(const FoxPolynomial& p, int index, const FoxMonomial& cloud) {
  return map_terms(p, [&](const FoxMonomial& m) { return eval_X(m, index, cloud); });
}
FoxPolynomial eval_Y(const FoxPolynomial& p, int index, const FoxMonomial& cloud) {
  return map_terms(p, [&](const FoxMonomial& m) { return eval_Y(m, index, cloud); });
}
FoxPolynomial eval_Z(const FoxPolynomial& p, int index, const FoxMonomial& cloud) {
  return map_terms(p, [&](const FoxMonomial& m) { return eval_Z(m, index, cloud); });
}

FoxPolynomial eval_total(const FoxPolynomial& p, const CloudAssignment& a) {
  std::set<int> used;
  auto claim = [&](const FoxMonomial& c) {
    for (int x : c.constants())
      if (!used.insert(x).second) throw FnError("assigned clouds must be pairwise disjoint");
  };
  for (const auto& [i, c] : a.x) claim(c);
  for (const auto& [i, c] : a.y) claim(c);
  for (const auto& [i, c] : a.z) claim(c);
  std::vector<FoxMonomial> kept;
  for (const auto& m : p) {
    bool overlap = false;
    for (int x : m.constants()) overlap = overlap || used.count(x) > 0;
    if (!overlap) kept.push_back(m);
  }
  FoxPolynomial r = FoxPolynomial::from_terms(std::move(kept));
  for (const auto& [i, c] : a.x) r = eval_X(r, i, c);
  for (const auto& [i, c] : a.y) r = eval_Y(r, i, c);
  for (const auto& [i, c] : a.z) r = eval_Z(r, i, c);
  return r;
}

FnTree monomial_to_tree(const FoxMonomial& m) {
  if (!m.is_numerical() || m.empty()) throw FnError("only nonempty numerical monomials are trees");
  std::vector<int> order = m.constants(), depths;
  for (int b : m.bars()) depths.push_back(2 - b);
  return FnTree(order, depths);
}

FnChain to_chain(const FoxPolynomial& p) {
  std::vector<FnTree> terms;
  for (const auto& m : p) terms.push_back(monomial_to_tree(m));
  int n = terms.empty() ? 0 : terms.front().points();
  return FnChain::from_terms(n, std::move(terms));
}

FoxMonomial tree_to_monomial(const FnTree& t) {
  std::vector<FoxSymbol> sy;
  std::vector<int> ba;
  for (int p = 0; p < t.points(); ++p) {
    if (p > 0) ba.push_back(2 - t.depth(p - 1));
    sy.push_back({SymbolKind::Constant, t.label(p)});
  }
  return FoxMonomial(std::move(sy), std::move(ba));
}

void evaluate_numeric(const FoxMonomial& core, const FastAssignment& a, std::vector<FnTree>& out) {
  constexpr int kEmptyX = -1, kEmptyY = -2, kEmptyZ = -3;
  const auto& sy = core.symbols();
  const auto& ba = core.bars();
  const int L = static_cast<int>(sy.size());

  // Occurrence index of each symbol within its variable, and occurrence counts.
  int occ_index[64];
  int x_count[8] = {}, y_count[8] = {};
  for (int q = 0; q < L; ++q) {
    if (sy[q].kind == SymbolKind::X) occ_index[q] = x_count[sy[q].value]++;
    else if (sy[q].kind == SymbolKind::Y) occ_index[q] = y_count[sy[q].value]++;
    else occ_index[q] = 0;
  }

  // Units: single labels for X, 2-clouds for Y. unit_of_x[v][e] indexes digits.
  int digit_base[64];
  int ndigits = 0;
  int x_first_digit[8], y_first_digit[8];
  int y_unit_start[8][kMaxPoints + 1], y_units[8];
  for (int v = 0; v < 8; ++v) {
    x_first_digit[v] = ndigits;
    if (x_count[v] > 0)
      for (int e = 0; e < a.x[v].size; ++e) digit_base[ndigits++] = x_count[v];
  }
  for (int v = 0; v < 8; ++v) {
    y_first_digit[v] = ndigits;
    y_units[v] = 0;
    const NumCloud& c = a.y[v];
    for (int e = 0; e < c.size; ++e)
      if (e == 0 || c.bars[e - 1] > 0) y_unit_start[v][y_units[v]++] = e;
    y_unit_start[v][y_units[v]] = c.size;
    if (y_count[v] > 0)
      for (int u = 0; u < y_units[v]; ++u) digit_base[ndigits++] = y_count[v];
  }

  int digit[64] = {};
  int tok[96], tbar[96];
  std::uint8_t order[kMaxPoints], depths[kMaxPoints];
  while (true) {
    int nt = 0;
    auto emit = [&](int t, int bar_before) {
      if (nt > 0) tbar[nt - 1] = bar_before;
      tok[nt++] = t;
    };
    for (int q = 0; q < L; ++q) {
      const int before = q > 0 ? ba[q - 1] : 3;
      const int v = sy[q].value;
      switch (sy[q].kind) {
        case SymbolKind::Constant:
          emit(v, before);
          break;
        case SymbolKind::X: {
          const NumCloud& c = a.x[v];
          bool any = false;
          for (int e = 0; e < c.size; ++e)
            if (digit[x_first_digit[v] + e] == occ_index[q]) {
              emit(c.labels[e], any ? 0 : before);
              any = true;
            }
          if (!any) emit(kEmptyX, before);
          break;
        }
        case SymbolKind::Y: {
          const NumCloud& c = a.y[v];
          bool any = false;
          for (int u = 0; u < y_units[v]; ++u) {
            if (digit[y_first_digit[v] + u] != occ_index[q]) continue;
            for (int e = y_unit_start[v][u]; e < y_unit_start[v][u + 1]; ++e) {
              int bar = e > y_unit_start[v][u] ? 0 : (any ? 1 : before);
              emit(c.labels[e], bar);
            }
            any = true;
          }
          if (!any) emit(kEmptyY, before);
          break;
        }
        case SymbolKind::Z: {
          const NumCloud& c = a.z[v];
          for (int e = 0; e < c.size; ++e) emit(c.labels[e], e == 0 ? before : c.bars[e - 1]);
          if (c.size == 0) emit(kEmptyZ, before);
          break;
        }
        default:
          throw FnError("evaluate_numeric supports constants, X, Y and Z only");
      }
    }

    int n = 0, pending = 3;
    bool alive = true;
    for (int t = 0; t < nt && alive; ++t) {
      const int after = t + 1 < nt ? tbar[t] : 3;
      if (tok[t] > 0) {
        if (n > 0) depths[n - 1] = static_cast<std::uint8_t>(2 - pending);
        order[n++] = static_cast<std::uint8_t>(tok[t]);
        pending = after;
        continue;
      }
      const int p = n == 0 ? 3 : pending;
      if (tok[t] == kEmptyX) alive = p == 0 || after == 0;
      else if (tok[t] == kEmptyY) alive = p == 1 || after == 1;
      pending = std::max(p, after);
    }
    if (alive && n > 0) out.push_back(FnTree::from_raw(n, order, depths));

    int d = 0;
    while (d < ndigits && ++digit[d] == digit_base[d]) digit[d++] = 0;
    if (d == ndigits) break;
  }
}

}  // namespace fnmc
