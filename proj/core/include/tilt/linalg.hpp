#pragma once

// Exact dense linear algebra over GF(p) and Q.
//
// Scalars are stored as mpq_class for both field kinds. Over GF(p) every stored
// value is an integer in [0, p); over Q values are kept in lowest terms (gmpxx
// canonicalizes after each operation).

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tilt {

using Scalar = mpq_class;

class Field {
 public:
  enum class Kind { Prime, Rational };

  static Field prime(std::int64_t p);
  static Field rational() { return Field(Kind::Rational, 0); }

  Kind kind() const { return kind_; }
  std::int64_t characteristic() const { return p_; }
  bool is_prime() const { return kind_ == Kind::Prime; }

  Scalar reduce(const Scalar& x) const;
  Scalar from_int(long v) const { return reduce(Scalar(v)); }

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  Scalar inv(const Scalar& a) const;
  Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }

  // Formats a scalar; rationals print as "a/b".
  std::string format(const Scalar& a) const;
  std::string name() const;

  friend bool operator==(const Field& a, const Field& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_;
  }

 private:
  Field(Kind k, std::int64_t p) : kind_(k), p_(p) {}
  Kind kind_;
  std::int64_t p_;
};

bool is_prime_number(std::int64_t n);

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Row-major dense matrix over a Field. Vectors are 1 x n rows unless stated.
class Mat {
 public:
  Mat() : field_(Field::rational()) {}
  Mat(Field f, std::size_t rows, std::size_t cols)
      : field_(f), rows_(rows), cols_(cols), data_(rows * cols) {}

  static Mat zero(Field f, std::size_t rows, std::size_t cols) {
    return Mat(f, rows, cols);
  }
  static Mat identity(Field f, std::size_t n);
  // Entries given row by row; they are reduced into the field.
  static Mat from_rows(Field f, const std::vector<std::vector<long>>& rows);
  static Mat from_scalars(Field f, std::size_t rows, std::size_t cols,
                          std::vector<Scalar> entries);

  const Field& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  const Scalar& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, const Scalar& v) {
    data_[i * cols_ + j] = field_.reduce(v);
  }

  std::span<const Scalar> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  Mat row_mat(std::size_t i) const { return block(i, 0, 1, cols_); }

  bool is_zero() const;
  Mat transpose() const;
  Mat block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Mat& b);
  Mat select_rows(std::span<const std::size_t> idx) const;
  Mat select_cols(std::span<const std::size_t> idx) const;
  Mat scaled(const Scalar& s) const;

  friend Mat operator*(const Mat& a, const Mat& b);
  friend Mat operator+(const Mat& a, const Mat& b);
  friend Mat operator-(const Mat& a, const Mat& b);
  Mat operator-() const;
  friend bool operator==(const Mat& a, const Mat& b);

  std::string to_string() const;

 private:
  Field field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

Mat hstack(const Mat& a, const Mat& b);
Mat vstack(const Mat& a, const Mat& b);
Mat vstack(const Field& f, std::size_t cols, const std::vector<Mat>& parts);
Mat block_diag(const Mat& a, const Mat& b);

// Reduced row echelon form. Pivot search scans rows top-down and picks the
// first nonzero entry, so results are deterministic.
struct Echelon {
  Mat rref;                          // rank rows, fully reduced
  std::vector<std::size_t> pivots;   // pivot column per row
};
Echelon row_echelon(const Mat& m);

std::size_t rank(const Mat& m);

// Columns spanning {x : m x = 0}, one per free column of the rref, in order.
Mat kernel_basis(const Mat& m);
// Rows spanning {v : v m = 0}.
Mat left_kernel(const Mat& m);

// Solves m x = b (b may have several columns). nullopt when b is not in the
// column space. Throws LinalgError on shape mismatch.
std::optional<Mat> solve(const Mat& m, const Mat& b);
// Solves x m = b for row vectors x.
std::optional<Mat> solve_left(const Mat& m, const Mat& b);

std::optional<Mat> inverse(const Mat& m);

// Basis (rows) of the row space, in reduced echelon form.
Mat row_basis(const Mat& m);
// Rows of `ext` extending the row space of `base` to that of base+ext; picks
// the earliest rows of `ext` that increase rank.
std::vector<std::size_t> complement_rows(const Mat& base, const Mat& ext);

// Precomputed coordinate extraction for a fixed set of independent rows:
// coords(v) solves v = c * basis for v in the row space.
class RowCoordinates {
 public:
  RowCoordinates() = default;
  explicit RowCoordinates(const Mat& basis);
  std::size_t dim() const { return dim_; }
  Mat coords(const Mat& v) const;             // v: k x n -> k x dim
  bool contains(const Mat& v) const;

 private:
  Mat basis_;
  std::vector<std::size_t> pivot_cols_;
  Mat pivot_inverse_;
  std::size_t dim_ = 0;
};

// Integer Smith normal form; returns the diagonal d_1 | d_2 | ... of length
// min(rows, cols) (trailing zeros included), all nonnegative.
using IntMat = std::vector<std::vector<mpz_class>>;
std::vector<mpz_class> smith_normal_form(IntMat m);
bool is_unimodular(const IntMat& m);

}  // namespace tilt
