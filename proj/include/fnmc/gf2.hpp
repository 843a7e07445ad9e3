#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fnmc {

using Gf2Vector = std::vector<std::uint8_t>;

// Dense bit-packed matrix; bits past cols() in each row stay zero.
class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  Gf2Matrix(std::size_t rows, std::size_t cols);
  static Gf2Matrix identity(std::size_t n);
  static Gf2Matrix from_columns(std::size_t rows, const std::vector<Gf2Vector>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool get(std::size_t r, std::size_t c) const noexcept {
    return (data_[r * words_ + c / 64] >> (c % 64)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v) noexcept;
  void flip(std::size_t r, std::size_t c) noexcept { data_[r * words_ + c / 64] ^= bit(c); }

  Gf2Vector column(std::size_t c) const;
  Gf2Vector row(std::size_t r) const;
  void append_column(const Gf2Vector& v);
  Gf2Matrix transpose() const;
  bool is_zero() const noexcept;

  std::uint64_t* row_words(std::size_t r) noexcept { return data_.data() + r * words_; }
  const std::uint64_t* row_words(std::size_t r) const noexcept { return data_.data() + r * words_; }
  std::size_t words_per_row() const noexcept { return words_; }

  bool operator==(const Gf2Matrix&) const = default;

 private:
  static std::uint64_t bit(std::size_t c) noexcept { return std::uint64_t{1} << (c % 64); }
  std::size_t rows_ = 0, cols_ = 0, words_ = 0;
  std::vector<std::uint64_t> data_;
};

Gf2Matrix operator*(const Gf2Matrix& a, const Gf2Matrix& b);
Gf2Vector operator*(const Gf2Matrix& a, const Gf2Vector& v);

// Row echelon reduction with the first nonzero entry in row-major scan as pivot.
std::size_t gf2_rank(Gf2Matrix m);
// One basis vector per free column of the reduced row echelon form, free columns ascending.
std::vector<Gf2Vector> gf2_kernel(const Gf2Matrix& m);
std::optional<Gf2Vector> gf2_solve(const Gf2Matrix& m, const Gf2Vector& v);
std::optional<Gf2Matrix> gf2_inverse(const Gf2Matrix& m);

// Sparse text form: "GF2 rows=<r> cols=<c>" then 1-based "i j" lines.
Gf2Matrix parse_gf2(std::string_view content);
std::string format_gf2(const Gf2Matrix& m);
Gf2Matrix read_gf2(const std::string& path);
void write_gf2(const std::string& path, const Gf2Matrix& m);

}  // namespace fnmc
