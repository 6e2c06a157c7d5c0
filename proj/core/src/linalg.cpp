#include "tilt/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace tilt {

bool is_prime_number(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field Field::prime(std::int64_t p) {
  if (!is_prime_number(p)) throw LinalgError("field characteristic is not prime: " + std::to_string(p));
  if (p > (std::int64_t(1) << 62)) throw LinalgError("prime too large for a word-sized field");
  return Field(Kind::Prime, p);
}

namespace {

mpz_class mod_p(const mpz_class& x, std::int64_t p) {
  mpz_class r = x % mpz_class(static_cast<long>(p));
  if (r < 0) r += p;
  return r;
}

}  // namespace

Scalar Field::reduce(const Scalar& x) const {
  if (kind_ == Kind::Rational) {
    Scalar c = x;
    c.canonicalize();
    return c;
  }
  mpz_class num = mod_p(x.get_num(), p_);
  mpz_class den = mod_p(x.get_den(), p_);
  if (den == 0) throw LinalgError("denominator divisible by the field characteristic");
  if (den == 1) return Scalar(num);
  mpz_class dinv;
  mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), mpz_class(static_cast<long>(p_)).get_mpz_t());
  return Scalar(mod_p(num * dinv, p_));
}

Scalar Field::add(const Scalar& a, const Scalar& b) const {
  if (kind_ == Kind::Rational) return a + b;
  mpz_class s = a.get_num() + b.get_num();
  if (s >= p_) s -= p_;
  return Scalar(s);
}

Scalar Field::sub(const Scalar& a, const Scalar& b) const {
  if (kind_ == Kind::Rational) return a - b;
  mpz_class s = a.get_num() - b.get_num();
  if (s < 0) s += p_;
  return Scalar(s);
}

Scalar Field::mul(const Scalar& a, const Scalar& b) const {
  if (kind_ == Kind::Rational) return a * b;
  return Scalar(mod_p(a.get_num() * b.get_num(), p_));
}

Scalar Field::neg(const Scalar& a) const {
  if (kind_ == Kind::Rational) return -a;
  if (a == 0) return a;
  return Scalar(mpz_class(static_cast<long>(p_)) - a.get_num());
}

Scalar Field::inv(const Scalar& a) const {
  if (a == 0) throw LinalgError("division by zero");
  if (kind_ == Kind::Rational) return 1 / a;
  mpz_class r;
  mpz_invert(r.get_mpz_t(), a.get_num_mpz_t(), mpz_class(static_cast<long>(p_)).get_mpz_t());
  return Scalar(r);
}

std::string Field::format(const Scalar& a) const {
  Scalar c = reduce(a);
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string Field::name() const {
  return kind_ == Kind::Rational ? "Q" : "GF(" + std::to_string(p_) + ")";
}

// ---------------------------------------------------------------------------

Mat Mat::identity(Field f, std::size_t n) {
  Mat m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Mat Mat::from_rows(Field f, const std::vector<std::vector<long>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows.front().size();
  Mat m(f, rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw LinalgError("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, Scalar(rows[i][j]));
  }
  return m;
}

Mat Mat::from_scalars(Field f, std::size_t rows, std::size_t cols, std::vector<Scalar> entries) {
  if (entries.size() != rows * cols) throw LinalgError("entry count does not match shape");
  Mat m(f, rows, cols);
  for (std::size_t k = 0; k < entries.size(); ++k) m.data_[k] = f.reduce(entries[k]);
  return m;
}

bool Mat::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& x) { return x == 0; });
}

Mat Mat::transpose() const {
  Mat t(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mat Mat::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw LinalgError("block out of range");
  Mat b(field_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Mat::set_block(std::size_t r0, std::size_t c0, const Mat& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw LinalgError("set_block out of range");
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Mat Mat::select_rows(std::span<const std::size_t> idx) const {
  Mat b(field_, idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) b(i, j) = (*this)(idx[i], j);
  return b;
}

Mat Mat::select_cols(std::span<const std::size_t> idx) const {
  Mat b(field_, rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) b(i, j) = (*this)(i, idx[j]);
  return b;
}

Mat Mat::scaled(const Scalar& s) const {
  Mat b(*this);
  Scalar r = field_.reduce(s);
  for (auto& x : b.data_) x = field_.mul(x, r);
  return b;
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols_ != b.rows_) throw LinalgError("matrix product shape mismatch");
  const Field& f = a.field_;
  Mat c(f, a.rows_, b.cols_);
  if (f.is_prime()) {
    // Accumulate in integers and reduce once per entry.
    std::vector<mpz_class> acc(b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar& x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const Scalar& y = b(k, j);
          if (y != 0) acc[j] += x.get_num() * y.get_num();
        }
      }
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) = Scalar(mod_p(acc[j], f.characteristic()));
    }
    return c;
  }
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Scalar& y = b(k, j);
        if (y != 0) c(i, j) += x * y;
      }
    }
  return c;
}

Mat operator+(const Mat& a, const Mat& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw LinalgError("matrix sum shape mismatch");
  Mat c(a.field_, a.rows_, a.cols_);
  for (std::size_t k = 0; k < a.data_.size(); ++k) c.data_[k] = a.field_.add(a.data_[k], b.data_[k]);
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw LinalgError("matrix difference shape mismatch");
  Mat c(a.field_, a.rows_, a.cols_);
  for (std::size_t k = 0; k < a.data_.size(); ++k) c.data_[k] = a.field_.sub(a.data_[k], b.data_[k]);
  return c;
}

Mat Mat::operator-() const {
  Mat c(field_, rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) c.data_[k] = field_.neg(data_[k]);
  return c;
}

bool operator==(const Mat& a, const Mat& b) {
  return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string Mat::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << field_.format((*this)(i, j));
    os << "]";
  }
  os << "]";
  return os.str();
}

Mat hstack(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) throw LinalgError("hstack row mismatch");
  Mat c(a.field(), a.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(0, a.cols(), b);
  return c;
}

Mat vstack(const Mat& a, const Mat& b) {
  if (a.cols() != b.cols()) throw LinalgError("vstack column mismatch");
  Mat c(a.field(), a.rows() + b.rows(), a.cols());
  c.set_block(0, 0, a);
  c.set_block(a.rows(), 0, b);
  return c;
}

Mat vstack(const Field& f, std::size_t cols, const std::vector<Mat>& parts) {
  std::size_t r = 0;
  for (const auto& p : parts) {
    if (p.cols() != cols) throw LinalgError("vstack column mismatch");
    r += p.rows();
  }
  Mat c(f, r, cols);
  r = 0;
  for (const auto& p : parts) {
    c.set_block(r, 0, p);
    r += p.rows();
  }
  return c;
}

Mat block_diag(const Mat& a, const Mat& b) {
  Mat c(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(a.rows(), a.cols(), b);
  return c;
}

// ---------------------------------------------------------------------------

Echelon row_echelon(const Mat& m) {
  const Field& f = m.field();
  Mat a = m;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(r, j));
    Scalar inv = f.inv(a(r, c));
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) = f.mul(a(r, j), inv);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      Scalar factor = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j)
        if (a(r, j) != 0) a(i, j) = f.sub(a(i, j), f.mul(factor, a(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return {a.block(0, 0, r, a.cols()), std::move(pivots)};
}

std::size_t rank(const Mat& m) { return row_echelon(m).pivots.size(); }

Mat kernel_basis(const Mat& m) {
  const Field& f = m.field();
  Echelon e = row_echelon(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Mat k(f, m.cols(), free_cols.size());
  for (std::size_t t = 0; t < free_cols.size(); ++t) {
    std::size_t fc = free_cols[t];
    k(fc, t) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) k(e.pivots[r], t) = f.neg(e.rref(r, fc));
  }
  return k;
}

Mat left_kernel(const Mat& m) { return kernel_basis(m.transpose()).transpose(); }

std::optional<Mat> solve(const Mat& m, const Mat& b) {
  if (m.rows() != b.rows()) throw LinalgError("solve: shape mismatch");
  const Field& f = m.field();
  Echelon e = row_echelon(hstack(m, b));
  Mat x(f, m.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] >= m.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.rref(r, m.cols() + j);
  }
  return x;
}

std::optional<Mat> solve_left(const Mat& m, const Mat& b) {
  auto x = solve(m.transpose(), b.transpose());
  if (!x) return std::nullopt;
  return x->transpose();
}

std::optional<Mat> inverse(const Mat& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  if (rank(m) != m.rows()) return std::nullopt;
  return solve(m, Mat::identity(m.field(), m.rows()));
}

Mat row_basis(const Mat& m) { return row_echelon(m).rref; }

std::vector<std::size_t> complement_rows(const Mat& base, const Mat& ext) {
  std::vector<std::size_t> chosen;
  Mat acc = row_basis(base);
  std::size_t r = acc.rows();
  for (std::size_t i = 0; i < ext.rows(); ++i) {
    Mat trial = acc.rows() ? vstack(acc, ext.row_mat(i)) : ext.row_mat(i);
    Mat red = row_basis(trial);
    if (red.rows() > r) {
      chosen.push_back(i);
      acc = red;
      r = red.rows();
    }
  }
  return chosen;
}

RowCoordinates::RowCoordinates(const Mat& basis) : basis_(basis), dim_(basis.rows()) {
  if (dim_ == 0) return;
  Echelon e = row_echelon(basis);
  if (e.pivots.size() != dim_) throw LinalgError("RowCoordinates: rows are dependent");
  pivot_cols_ = e.pivots;
  auto inv = inverse(basis.select_cols(pivot_cols_));
  if (!inv) throw LinalgError("RowCoordinates: singular pivot block");
  pivot_inverse_ = *inv;
}

Mat RowCoordinates::coords(const Mat& v) const {
  if (dim_ == 0) return Mat(v.field(), v.rows(), 0);
  return v.select_cols(pivot_cols_) * pivot_inverse_;
}

bool RowCoordinates::contains(const Mat& v) const {
  if (dim_ == 0) return v.is_zero();
  return coords(v) * basis_ == v;
}

// ---------------------------------------------------------------------------

std::vector<mpz_class> smith_normal_form(IntMat a) {
  std::size_t rows = a.size();
  std::size_t cols = rows ? a[0].size() : 0;
  std::size_t n = std::min(rows, cols);
  std::vector<mpz_class> diag;
  for (std::size_t t = 0; t < n; ++t) {
    // Find a nonzero pivot of minimal absolute value in the trailing block.
    auto find_pivot = [&](std::size_t& pi, std::size_t& pj) {
      bool found = false;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (!found || abs(a[i][j]) < abs(a[pi][pj]))) {
            pi = i;
            pj = j;
            found = true;
          }
      return found;
    };
    std::size_t pi = t, pj = t;
    if (!find_pivot(pi, pj)) {
      for (std::size_t k = t; k < n; ++k) diag.push_back(0);
      break;
    }
    for (;;) {
      std::swap(a[t], a[pi]);
      for (auto& row : a) std::swap(row[t], row[pj]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
        if (q != 0)
          for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        if (q != 0)
          for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (clean) {
        // Enforce divisibility of the rest of the block by the pivot.
        bool divides = true;
        for (std::size_t i = t + 1; i < rows && divides; ++i)
          for (std::size_t j = t + 1; j < cols; ++j)
            if (a[i][j] % a[t][t] != 0) {
              for (std::size_t k = t; k < cols; ++k) a[t][k] += a[i][k];
              divides = false;
              break;
            }
        if (divides) break;
      }
      pi = t;
      pj = t;
      find_pivot(pi, pj);
    }
    diag.push_back(abs(a[t][t]));
  }
  return diag;
}

bool is_unimodular(const IntMat& m) {
  if (m.empty() || m.size() != m[0].size()) return m.empty();
  auto d = smith_normal_form(m);
  return std::all_of(d.begin(), d.end(), [](const mpz_class& x) { return x == 1; });
}

}  // namespace tilt
