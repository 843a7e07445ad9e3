#include "fnmc/gf2.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fnmc/tree.hpp"

namespace fnmc {

Gf2Matrix::Gf2Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), data_(rows * words_, 0) {}

Gf2Matrix Gf2Matrix::identity(std::size_t n) {
  Gf2Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

Gf2Matrix Gf2Matrix::from_columns(std::size_t rows, const std::vector<Gf2Vector>& columns) {
  Gf2Matrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw FnError("column length mismatch");
    for (std::size_t r = 0; r < rows; ++r)
      if (columns[c][r]) m.set(r, c, true);
  }
  return m;
}

void Gf2Matrix::set(std::size_t r, std::size_t c, bool v) noexcept {
  auto& w = data_[r * words_ + c / 64];
  w = v ? (w | bit(c)) : (w & ~bit(c));
}

Gf2Vector Gf2Matrix::column(std::size_t c) const {
  Gf2Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = get(r, c);
  return v;
}

Gf2Vector Gf2Matrix::row(std::size_t r) const {
  Gf2Vector v(cols_);
  for (std::size_t c = 0; c < cols_; ++c) v[c] = get(r, c);
  return v;
}

void Gf2Matrix::append_column(const Gf2Vector& v) {
  if (v.size() != rows_) throw FnError("column length mismatch");
  Gf2Matrix m(rows_, cols_ + 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::copy(row_words(r), row_words(r) + words_, m.row_words(r));
    if (v[r]) m.set(r, cols_, true);
  }
  *this = std::move(m);
}

Gf2Matrix Gf2Matrix::transpose() const {
  Gf2Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) t.set(c, r, true);
  return t;
}

bool Gf2Matrix::is_zero() const noexcept {
  for (auto w : data_)
    if (w) return false;
  return true;
}

Gf2Matrix operator*(const Gf2Matrix& a, const Gf2Matrix& b) {
  if (a.cols() != b.rows()) throw FnError("matrix product dimension mismatch");
  Gf2Matrix c(a.rows(), b.cols());
  const std::size_t w = b.words_per_row();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::uint64_t* out = c.row_words(r);
    for (std::size_t l = 0; l < a.cols(); ++l)
      if (a.get(r, l)) {
        const std::uint64_t* in = b.row_words(l);
        for (std::size_t q = 0; q < w; ++q) out[q] ^= in[q];
      }
  }
  return c;
}

Gf2Vector operator*(const Gf2Matrix& a, const Gf2Vector& v) {
  if (a.cols() != v.size()) throw FnError("matrix-vector dimension mismatch");
  Gf2Vector out(a.rows(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::uint8_t s = 0;
    for (std::size_t c = 0; c < a.cols(); ++c) s ^= static_cast<std::uint8_t>(a.get(r, c) & v[c]);
    out[r] = s;
  }
  return out;
}

namespace {

// Reduced row echelon form in place; returns pivot columns in row order.
std::vector<std::size_t> rref(Gf2Matrix& m) {
  std::vector<std::size_t> pivots;
  const std::size_t w = m.words_per_row();
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && !m.get(p, c)) ++p;
    if (p == m.rows()) continue;
    if (p != r) std::swap_ranges(m.row_words(p), m.row_words(p) + w, m.row_words(r));
    const std::uint64_t* pr = m.row_words(r);
    for (std::size_t q = 0; q < m.rows(); ++q)
      if (q != r && m.get(q, c)) {
        std::uint64_t* row = m.row_words(q);
        for (std::size_t i = c / 64; i < w; ++i) row[i] ^= pr[i];
      }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t gf2_rank(Gf2Matrix m) {
  const std::size_t w = m.words_per_row();
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && !m.get(p, c)) ++p;
    if (p == m.rows()) continue;
    if (p != r) std::swap_ranges(m.row_words(p), m.row_words(p) + w, m.row_words(r));
    const std::uint64_t* pr = m.row_words(r);
    for (std::size_t q = r + 1; q < m.rows(); ++q)
      if (m.get(q, c)) {
        std::uint64_t* row = m.row_words(q);
        for (std::size_t i = c / 64; i < w; ++i) row[i] ^= pr[i];
      }
    ++r;
  }
  return r;
}

std::vector<Gf2Vector> gf2_kernel(const Gf2Matrix& m) {
  Gf2Matrix red = m;
  auto pivots = rref(red);
  std::vector<char> is_pivot(m.cols(), 0);
  for (auto c : pivots) is_pivot[c] = 1;
  std::vector<Gf2Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Gf2Vector v(m.cols(), 0);
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      if (red.get(r, f)) v[pivots[r]] = 1;
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Gf2Vector> gf2_solve(const Gf2Matrix& m, const Gf2Vector& v) {
  if (v.size() != m.rows()) throw FnError("solve: right-hand side length mismatch");
  Gf2Matrix aug = m;
  aug.append_column(v);
  auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  Gf2Vector x(m.cols(), 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.get(r, m.cols());
  return x;
}

std::optional<Gf2Matrix> gf2_inverse(const Gf2Matrix& m) {
  if (m.rows() != m.cols()) throw FnError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Gf2Matrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c)
      if (m.get(r, c)) aug.set(r, c, true);
    aug.set(r, n + r, true);
  }
  auto pivots = rref(aug);
  if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) return std::nullopt;
  Gf2Matrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (aug.get(r, n + c)) inv.set(r, c, true);
  return inv;
}

Gf2Matrix parse_gf2(std::string_view content) {
  std::istringstream in{std::string(content)};
  std::string line;
  bool have_header = false;
  Gf2Matrix m;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!have_header) {
      std::size_t rows = 0, cols = 0;
      if (std::sscanf(line.c_str(), " GF2 rows=%zu cols=%zu", &rows, &cols) != 2)
        throw FnError("gf2 file: bad header");
      m = Gf2Matrix(rows, cols);
      have_header = true;
      continue;
    }
    std::istringstream ls(line);
    std::size_t i = 0, j = 0;
    std::string extra;
    if (!(ls >> i >> j) || (ls >> extra) || i < 1 || j < 1 || i > m.rows() || j > m.cols())
      throw FnError("gf2 file: bad entry line: " + line);
    m.flip(i - 1, j - 1);
  }
  if (!have_header) throw FnError("gf2 file: missing header");
  return m;
}

std::string format_gf2(const Gf2Matrix& m) {
  std::string s = "GF2 rows=" + std::to_string(m.rows()) + " cols=" + std::to_string(m.cols()) + "\n";
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m.get(r, c)) s += std::to_string(r + 1) + " " + std::to_string(c + 1) + "\n";
  return s;
}

Gf2Matrix read_gf2(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FnError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_gf2(ss.str());
}

void write_gf2(const std::string& path, const Gf2Matrix& m) {
  std::ofstream f(path);
  if (!f) throw FnError("cannot write " + path);
  f << format_gf2(m);
}

}  // namespace fnmc
