#pragma once

// Independent reference computations used by the unit tests. Nothing here
// calls into the elimination routines of the library.

#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "tilt/complex.hpp"
#include "tilt/linalg.hpp"

namespace oracle {

using tilt::Field;
using tilt::Mat;
using tilt::Scalar;

// Rank over GF(p) by enumerating the row span: |span| = p^rank.
inline std::size_t rank_by_enumeration(const Mat& m) {
  const Field& f = m.field();
  long p = f.characteristic();
  std::set<std::vector<long>> span;
  std::vector<long> coeff(m.rows(), 0);
  while (true) {
    std::vector<long> v(m.cols(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        v[j] = (v[j] + coeff[i] * m(i, j).get_num().get_si()) % p;
    span.insert(v);
    std::size_t k = 0;
    while (k < coeff.size() && ++coeff[k] == p) coeff[k++] = 0;
    if (k == coeff.size()) break;
  }
  std::size_t r = 0;
  for (std::size_t s = 1; s < span.size(); s *= static_cast<std::size_t>(p)) ++r;
  return r;
}

// Integer determinant by cofactor expansion.
inline mpz_class det(const std::vector<std::vector<mpz_class>>& m) {
  std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  mpz_class d = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<mpz_class>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<mpz_class> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    mpz_class t = m[0][c] * det(minor);
    d += (c % 2 ? -t : t);
  }
  return d;
}

// Smith invariants from determinantal divisors d_k = gcd of k x k minors.
inline std::vector<mpz_class> smith_by_minors(const std::vector<std::vector<mpz_class>>& m) {
  std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::size_t n = std::min(rows, cols);
  std::vector<mpz_class> dk(n + 1, 0);
  dk[0] = 1;
  auto subsets = [](std::size_t total, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
      if (cur.size() == k) {
        out.push_back(cur);
        return;
      }
      for (std::size_t i = start; i < total; ++i) {
        cur.push_back(i);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
    return out;
  };
  for (std::size_t k = 1; k <= n; ++k) {
    mpz_class g = 0;
    for (const auto& rs : subsets(rows, k))
      for (const auto& cs : subsets(cols, k)) {
        std::vector<std::vector<mpz_class>> sub;
        for (auto r : rs) {
          std::vector<mpz_class> row;
          for (auto c : cs) row.push_back(m[r][c]);
          sub.push_back(row);
        }
        mpz_class d = det(sub);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      }
    dk[k] = g;
  }
  std::vector<mpz_class> out;
  for (std::size_t k = 1; k <= n; ++k) out.push_back(dk[k] == 0 ? mpz_class(0) : mpz_class(dk[k] / dk[k - 1]));
  return out;
}

inline Mat random_mat(const Field& f, std::size_t r, std::size_t c, std::mt19937& rng, int spread = 3) {
  std::uniform_int_distribution<int> d(-spread, spread);
  Mat m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, Scalar(d(rng)));
  return m;
}

// Rank of a list of rows by schoolbook elimination (own arithmetic: mpq over
// Q, mpz residues mod p otherwise).
inline std::size_t naive_rank(std::vector<std::vector<Scalar>> rows, const Field& f) {
  long p = f.characteristic();
  auto norm = [&](Scalar x) -> Scalar {
    if (p == 0) return x;
    mpz_class n = x.get_num() % p;
    if (n < 0) n += p;
    return Scalar(n);
  };
  auto inv = [&](const Scalar& x) {
    if (p == 0) return Scalar(Scalar(1) / x);
    mpz_class r;
    mpz_class n = x.get_num();
    mpz_invert(r.get_mpz_t(), n.get_mpz_t(), mpz_class(p).get_mpz_t());
    return Scalar(r);
  };
  std::size_t rank = 0;
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && norm(rows[piv][c]) == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    Scalar iv = inv(norm(rows[rank][c]));
    for (auto& x : rows[rank]) x = norm(x * iv);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank) continue;
      Scalar k = norm(rows[r][c]);
      if (k == 0) continue;
      for (std::size_t j = c; j < cols; ++j) rows[r][j] = norm(rows[r][j] - k * rows[rank][j]);
    }
    ++rank;
  }
  return rank;
}

// dim of chain maps X -> Sigma^m Y modulo null-homotopic ones, from the raw
// linear constraints on the matrix entries. Equals the derived Hom when X is a
// bounded complex of projectives or Y one of injectives.
inline std::size_t homotopy_hom_dim(const tilt::Complex& x, const tilt::Complex& y, int m) {
  using tilt::Complex;
  const auto& a = x.algebra();
  const Field& f = a->field();
  if (x.is_zero() || y.is_zero()) return 0;
  // Unknown blocks g^n : X^n -> Y^{n+m+shift}, flattened.
  struct Layout {
    std::map<int, std::size_t> offset;
    std::size_t size = 0;
  };
  auto layout = [&](int shift) {
    Layout l;
    for (int n = x.lo(); n <= x.hi(); ++n) {
      l.offset[n] = l.size;
      l.size += x.dim(n) * y.dim(n + m + shift);
    }
    return l;
  };
  auto ydim = [&](int k) { return (k < y.lo() || k > y.hi()) ? std::size_t(0) : y.dim(k); };
  auto xdim = [&](int k) { return (k < x.lo() || k > x.hi()) ? std::size_t(0) : x.dim(k); };
  auto dx = [&](int n) { return x.d(n); };
  auto dy = [&](int k) {
    Mat d = (k < y.lo() || k >= y.hi()) ? Mat(f, ydim(k), ydim(k + 1)) : y.d(k);
    return (m % 2 == 0) ? d : -d;
  };
  // Linearity rows: act_X(b) g = g act_Y(b) for each block.
  auto linear_rows = [&](Layout l, int shift) {
    std::vector<std::vector<Scalar>> rows;
    for (int n = x.lo(); n <= x.hi(); ++n) {
      std::size_t r = x.dim(n), c = ydim(n + m + shift);
      if (!r || !c) continue;
      const auto& mx = x.term(n);
      const auto& my = y.term(n + m + shift);
      for (std::size_t b = 0; b < a->dim(); ++b)
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < c; ++j) {
            std::vector<Scalar> row(l.size, Scalar(0));
            for (std::size_t k = 0; k < r; ++k) row[l.offset[n] + k * c + j] += mx.act(b)(i, k);
            for (std::size_t k = 0; k < c; ++k) row[l.offset[n] + i * c + k] -= my.act(b)(k, j);
            rows.push_back(std::move(row));
          }
    }
    return rows;
  };
  Layout lf = layout(0), lh = layout(-1);
  // Chain condition: d_X^n g^{n+1} - g^n d^{n+m} = 0.
  auto rows = linear_rows(lf, 0);
  for (int n = x.lo() - 1; n <= x.hi(); ++n) {
    std::size_t r = xdim(n), c = ydim(n + 1 + m);
    if (!r || !c) continue;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        std::vector<Scalar> row(lf.size, Scalar(0));
        if (n + 1 <= x.hi() && n >= x.lo()) {
          Mat d = dx(n);
          for (std::size_t k = 0; k < x.dim(n + 1); ++k) row[lf.offset[n + 1] + k * c + j] += d(i, k);
        }
        if (n >= x.lo()) {
          Mat d = dy(n + m);
          for (std::size_t k = 0; k < ydim(n + m); ++k) row[lf.offset[n] + i * ydim(n + m) + k] -= d(k, j);
        }
        rows.push_back(std::move(row));
      }
  }
  std::size_t cycles = lf.size - naive_rank(rows, f);
  // Boundaries: image of linear h under h -> d_X h + h d.
  auto hrows = linear_rows(lh, -1);
  std::size_t lin_h = naive_rank(hrows, f);
  for (int n = x.lo(); n <= x.hi(); ++n) {
    std::size_t r = x.dim(n), c = ydim(n + m);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        // component (i, j) of (d_X^n h^{n+1} + h^n d^{n+m-1})
        std::vector<Scalar> row(lh.size, Scalar(0));
        if (n + 1 <= x.hi()) {
          Mat d = dx(n);
          for (std::size_t k = 0; k < x.dim(n + 1); ++k) row[lh.offset[n + 1] + k * c + j] += d(i, k);
        }
        std::size_t hc = ydim(n + m - 1);
        if (hc) {
          Mat d = dy(n + m - 1);
          for (std::size_t k = 0; k < hc; ++k) row[lh.offset[n] + i * hc + k] += d(k, j);
        }
        hrows.push_back(std::move(row));
      }
  }
  std::size_t boundaries = naive_rank(hrows, f) - lin_h;
  return cycles - boundaries;
}

}  // namespace oracle
