#include "tilt/dg.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace tilt {

namespace {

using Code = DgError::Code;

int sign(int n) { return n % 2 == 0 ? 1 : -1; }

Mat unit_row(const Field& f, std::size_t n, std::size_t i) {
  Mat r(f, 1, n);
  r(0, i) = 1;
  return r;
}

Mat sparse_row(const Field& f, std::size_t n, const SparseVec& v) {
  Mat r(f, 1, n);
  for (const auto& [k, c] : v) r(0, k) = f.add(r(0, k), c);
  return r;
}

SparseVec to_sparse(const Mat& row) {
  SparseVec v;
  for (std::size_t k = 0; k < row.cols(); ++k)
    if (row(0, k) != 0) v.emplace_back(k, row(0, k));
  return v;
}

// Sum of coeff * mats[k] over a row of coefficients.
Mat combine(const Field& f, std::size_t r, std::size_t c, const std::vector<Mat>& mats, const Mat& coeffs) {
  Mat out(f, r, c);
  for (std::size_t k = 0; k < coeffs.cols(); ++k)
    if (coeffs(0, k) != 0) out = out + mats[k].scaled(coeffs(0, k));
  return out;
}

Mat sign_diag(const Field& f, const std::vector<int>& degree) {
  Mat s(f, degree.size(), degree.size());
  for (std::size_t i = 0; i < degree.size(); ++i) s.set(i, i, Scalar(sign(degree[i])));
  return s;
}

std::vector<std::size_t> indices_in_degree(const std::vector<int>& degree, int n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < degree.size(); ++i)
    if (degree[i] == n) out.push_back(i);
  return out;
}

std::map<int, std::size_t> graded_cohomology(const std::vector<int>& degree, const Mat& d) {
  std::map<int, std::size_t> out;
  if (degree.empty()) return out;
  auto [lo, hi] = std::minmax_element(degree.begin(), degree.end());
  auto block_rank = [&](int n) -> std::size_t {
    auto r = indices_in_degree(degree, n);
    auto c = indices_in_degree(degree, n + 1);
    if (r.empty() || c.empty()) return 0;
    return rank(d.select_rows(r).select_cols(c));
  };
  for (int n = *lo; n <= *hi; ++n) {
    std::size_t dn = indices_in_degree(degree, n).size();
    std::size_t h = dn - block_rank(n) - block_rank(n - 1);
    if (h) out[n] = h;
  }
  return out;
}

// Degree of a nonzero homogeneous row; throws when the row mixes degrees.
std::optional<int> row_degree(const Mat& row, const std::vector<int>& degree) {
  std::optional<int> deg;
  for (std::size_t k = 0; k < row.cols(); ++k) {
    if (row(0, k) == 0) continue;
    if (deg && *deg != degree[k]) throw DgError(Code::InvalidStructure, "row is not homogeneous");
    deg = degree[k];
  }
  return deg;
}

// Homogeneous basis of the span of homogeneous rows, sorted by degree.
std::pair<Mat, std::vector<int>> graded_row_basis(const Mat& span, const std::vector<int>& degree) {
  const Field& f = span.field();
  std::map<int, std::vector<Mat>> by_deg;
  for (std::size_t i = 0; i < span.rows(); ++i) {
    Mat r = span.row_mat(i);
    if (auto d = row_degree(r, degree)) by_deg[*d].push_back(r);
  }
  std::vector<Mat> rows;
  std::vector<int> degs;
  for (const auto& [n, rs] : by_deg) {
    Mat b = row_basis(vstack(f, span.cols(), rs));
    for (std::size_t i = 0; i < b.rows(); ++i) {
      rows.push_back(b.row_mat(i));
      degs.push_back(n);
    }
  }
  return {vstack(f, span.cols(), rows), degs};
}

}  // namespace

// ---------------------------------------------------------------------------

std::shared_ptr<const DgAlgebra> DgAlgebra::create(Spec spec) {
  std::size_t n = spec.degree.size();
  const Field& f = spec.field;
  if (spec.left_vertex.size() != n || spec.right_vertex.size() != n || spec.products.size() != n)
    throw DgError(Code::InvalidStructure, "inconsistent basis data");
  if (spec.labels.size() != n) {
    spec.labels.clear();
    for (std::size_t b = 0; b < n; ++b) spec.labels.push_back("b" + std::to_string(b));
  }
  if (spec.d.rows() == 0 && spec.d.cols() == 0) spec.d = Mat(f, n, n);
  if (spec.d.rows() != n || spec.d.cols() != n) throw DgError(Code::InvalidStructure, "differential has wrong shape");
  int verts = static_cast<int>(spec.idempotents.size());
  for (int v = 0; v < verts; ++v) {
    std::size_t e = spec.idempotents[static_cast<std::size_t>(v)];
    if (e >= n || spec.degree[e] != 0 || spec.left_vertex[e] != v || spec.right_vertex[e] != v)
      throw DgError(Code::InvalidStructure, "idempotent " + std::to_string(v) + " is not a degree 0 element of e_v A e_v");
  }
  for (std::size_t b = 0; b < n; ++b) {
    if (spec.left_vertex[b] < 0 || spec.left_vertex[b] >= verts || spec.right_vertex[b] < 0 ||
        spec.right_vertex[b] >= verts)
      throw DgError(Code::InvalidStructure, "vertex out of range");
    if (spec.products[b].size() != n) throw DgError(Code::InvalidStructure, "product table has wrong shape");
    for (std::size_t k = 0; k < n; ++k) {
      if (spec.d(b, k) == 0) continue;
      if (spec.degree[k] != spec.degree[b] + 1 || spec.left_vertex[k] != spec.left_vertex[b] ||
          spec.right_vertex[k] != spec.right_vertex[b])
        throw DgError(Code::InvalidStructure, "differential of " + spec.labels[b] + " is not homogeneous");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto& pv = spec.products[i][j];
      for (auto& [k, c] : pv) {
        c = f.reduce(c);
        if (k >= n) throw DgError(Code::InvalidStructure, "product index out of range");
        if (c == 0) continue;
        if (spec.right_vertex[i] != spec.left_vertex[j] || spec.degree[k] != spec.degree[i] + spec.degree[j] ||
            spec.left_vertex[k] != spec.left_vertex[i] || spec.right_vertex[k] != spec.right_vertex[j])
          throw DgError(Code::InvalidStructure,
                        "product " + spec.labels[i] + "*" + spec.labels[j] + " is not homogeneous");
      }
      std::erase_if(pv, [](const auto& t) { return t.second == 0; });
    }
  auto a = std::shared_ptr<DgAlgebra>(new DgAlgebra());
  a->spec_ = std::move(spec);
  a->right_mult_.assign(n, Mat(f, n, n));
  a->left_mult_.assign(n, Mat(f, n, n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& [k, c] : a->spec_.products[i][j]) {
        a->right_mult_[j](i, k) = f.add(a->right_mult_[j](i, k), c);
        a->left_mult_[i](j, k) = f.add(a->left_mult_[i](j, k), c);
      }
  return a;
}

Mat DgAlgebra::basis_vector(std::size_t b) const { return unit_row(field(), dim(), b); }

Mat DgAlgebra::unit() const {
  Mat u(field(), 1, dim());
  for (std::size_t e : spec_.idempotents) u(0, e) = 1;
  return u;
}

Mat DgAlgebra::mul(const Mat& x, const Mat& y) const {
  const Field& f = field();
  Mat out(f, 1, dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x(0, i) == 0) continue;
    for (std::size_t j = 0; j < dim(); ++j) {
      if (y(0, j) == 0) continue;
      Scalar c = f.mul(x(0, i), y(0, j));
      for (const auto& [k, v] : spec_.products[i][j]) out(0, k) = f.add(out(0, k), f.mul(c, v));
    }
  }
  return out;
}

std::vector<std::size_t> DgAlgebra::basis_in_degree(int n) const { return indices_in_degree(spec_.degree, n); }

int DgAlgebra::min_degree() const {
  return spec_.degree.empty() ? 0 : *std::min_element(spec_.degree.begin(), spec_.degree.end());
}
int DgAlgebra::max_degree() const {
  return spec_.degree.empty() ? 0 : *std::max_element(spec_.degree.begin(), spec_.degree.end());
}
bool DgAlgebra::nonpositive() const { return max_degree() <= 0; }

std::map<int, std::size_t> DgAlgebra::cohomology_dims() const { return graded_cohomology(spec_.degree, spec_.d); }

std::string DgAlgebra::check() const {
  const Field& f = field();
  std::size_t n = dim();
  if (!(spec_.d * spec_.d).is_zero()) return "d^2 != 0";
  Mat one = unit();
  for (std::size_t b = 0; b < n; ++b) {
    Mat x = basis_vector(b);
    if (!(mul(one, x) == x) || !(mul(x, one) == x)) return "unit law fails on " + spec_.labels[b];
  }
  std::vector<Mat> drow(n);
  for (std::size_t b = 0; b < n; ++b) drow[b] = spec_.d.row_mat(b);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Mat p = sparse_row(f, n, spec_.products[i][j]);
      Mat lhs = p * spec_.d;
      Mat rhs = drow[i] * right_mult_[j];
      Mat t = drow[j] * left_mult_[i];
      rhs = sign(spec_.degree[i]) > 0 ? rhs + t : rhs - t;
      if (!(lhs == rhs)) return "Leibniz fails on " + spec_.labels[i] + ", " + spec_.labels[j];
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (spec_.right_vertex[i] != spec_.left_vertex[j]) continue;
      Mat ij = sparse_row(f, n, spec_.products[i][j]);
      for (std::size_t k = 0; k < n; ++k) {
        if (spec_.right_vertex[j] != spec_.left_vertex[k]) continue;
        Mat lhs = ij * right_mult_[k];
        Mat rhs = sparse_row(f, n, spec_.products[j][k]) * left_mult_[i];
        if (!(lhs == rhs))
          return "associativity fails on " + spec_.labels[i] + ", " + spec_.labels[j] + ", " + spec_.labels[k];
      }
    }
  return "";
}

DgAlgebraPtr dg_from_algebra(const AlgebraPtr& a) {
  Algebra::Spec s = a->spec();
  DgAlgebra::Spec d;
  d.field = s.field;
  d.labels = s.labels;
  d.degree.assign(a->dim(), 0);
  d.left_vertex = s.left_vertex;
  d.right_vertex = s.right_vertex;
  d.idempotents = s.idempotents;
  d.d = Mat(s.field, a->dim(), a->dim());
  d.products = s.products;
  return DgAlgebra::create(std::move(d));
}

// ---------------------------------------------------------------------------

DgAlgebraPtr endomorphism_dg(const std::vector<Complex>& parts, bool nonpositive) {
  if (parts.empty()) throw DgError(Code::InvalidStructure, "no parts");
  const Field& f = parts.front().algebra()->field();
  std::size_t r = parts.size();
  struct Block {
    std::unique_ptr<HomComplex> hc;
    std::map<int, Mat> basis;  // per degree, rows in hom coordinates
    std::map<int, RowCoordinates> coords;
    std::map<int, std::size_t> offset;
  };
  std::vector<std::vector<Block>> blocks(r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      Block b;
      b.hc = std::make_unique<HomComplex>(parts[j], parts[i]);
      blocks[i].push_back(std::move(b));
    }
  auto identity_coords = [&](std::size_t i) {
    GradedMap id{0, {}};
    for (int n = parts[i].lo(); n <= parts[i].hi(); ++n) id.comp[n] = Mat::identity(f, parts[i].dim(n));
    return blocks[i][i].hc->coords(id);
  };
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      Block& b = blocks[i][j];
      const VecComplex& v = b.hc->vec();
      int hi = b.hc->deg_hi();
      if (nonpositive) hi = std::min(hi, 0);
      if (i == j) hi = std::max(hi, 0);
      for (int n = std::min(b.hc->deg_lo(), hi); n <= hi; ++n) {
        std::size_t dn = v.dim(n);
        Mat rows = Mat::identity(f, dn);
        if (n == 0 && nonpositive) rows = dn ? left_kernel(v.diff(0)) : Mat(f, 0, 0);
        if (n == 0 && i == j) {
          Mat id = identity_coords(i);
          auto extra = complement_rows(id, rows);
          rows = vstack(id, rows.select_rows(extra));
        }
        if (rows.rows() == 0) continue;
        b.basis[n] = rows;
        b.coords[n] = RowCoordinates(rows);
      }
    }
  DgAlgebra::Spec spec;
  spec.field = f;
  struct Elem {
    std::size_t i, j;
    int n;
    GradedMap map;
  };
  std::vector<Elem> elems;
  spec.idempotents.assign(r, 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      Block& b = blocks[i][j];
      for (const auto& [n, rows] : b.basis) {
        b.offset[n] = elems.size();
        for (std::size_t k = 0; k < rows.rows(); ++k) {
          if (i == j && n == 0 && k == 0) {
            spec.idempotents[i] = elems.size();
            spec.labels.push_back("e" + std::to_string(i + 1));
          } else {
            spec.labels.push_back("f" + std::to_string(i + 1) + std::to_string(j + 1) + "^" + std::to_string(n) + "_" +
                                  std::to_string(k + 1));
          }
          elems.push_back({i, j, n, b.hc->to_map(n, rows.row_mat(k))});
          spec.degree.push_back(n);
          spec.left_vertex.push_back(static_cast<int>(i));
          spec.right_vertex.push_back(static_cast<int>(j));
        }
      }
    }
  std::size_t dim = elems.size();
  // Coordinates of a graded map parts[j] -> parts[i] of degree n, scattered
  // into a global row.
  auto place = [&](std::size_t i, std::size_t j, int n, const GradedMap& g, Mat& out, const Scalar& c) {
    Block& b = blocks[i][j];
    Mat hom = b.hc->coords(g);
    if (hom.is_zero()) return;
    auto it = b.coords.find(n);
    if (it == b.coords.end() || !it->second.contains(hom))
      throw DgError(Code::InvalidStructure, "endomorphism algebra is not closed");
    Mat cc = it->second.coords(hom);
    std::size_t off = b.offset[n];
    for (std::size_t k = 0; k < cc.cols(); ++k) out(0, off + k) = f.add(out(0, off + k), f.mul(c, cc(0, k)));
  };
  auto in_range = [&](std::size_t i, std::size_t j, int n) {
    const Block& b = blocks[i][j];
    return n >= b.hc->deg_lo() && n <= b.hc->deg_hi() && b.basis.count(n);
  };
  spec.d = Mat(f, dim, dim);
  for (std::size_t p = 0; p < dim; ++p) {
    const Elem& e = elems[p];
    if (nonpositive && e.n + 1 > 0) continue;
    GradedMap g = hom_differential(parts[e.j], parts[e.i], e.map);
    if (!in_range(e.i, e.j, e.n + 1)) continue;
    Mat row(f, 1, dim);
    place(e.i, e.j, e.n + 1, g, row, Scalar(1));
    spec.d.set_block(p, 0, row);
  }
  spec.products.assign(dim, std::vector<SparseVec>(dim));
  for (std::size_t p = 0; p < dim; ++p)
    for (std::size_t q = 0; q < dim; ++q) {
      const Elem& x = elems[p];
      const Elem& y = elems[q];
      if (x.j != y.i) continue;
      int n = x.n + y.n;
      if (!in_range(x.i, y.j, n)) continue;
      Mat row(f, 1, dim);
      place(x.i, y.j, n, compose(y.map, x.map), row, Scalar(1));
      spec.products[p][q] = to_sparse(row);
    }
  return DgAlgebra::create(std::move(spec));
}

// ---------------------------------------------------------------------------

Mat H0Data::project(const Mat& z) const {
  if (!coords.contains(z)) throw DgError(Code::InvalidStructure, "element is not a degree 0 cocycle");
  return coords.coords(z).block(0, 0, z.rows(), rep_count);
}

H0Data h0_algebra(const DgAlgebraPtr& a) {
  const Field& f = a->field();
  std::size_t n = a->dim();
  int r = a->vertices();
  auto corner = [&](int deg, int i, int j) {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < n; ++b)
      if (a->degree(b) == deg && a->left_vertex(b) == i && a->right_vertex(b) == j) out.push_back(b);
    return out;
  };
  auto rows_of = [&](const std::vector<std::size_t>& idx) {
    std::vector<Mat> rs;
    for (std::size_t b : idx) rs.push_back(a->basis_vector(b));
    return vstack(f, n, rs);
  };
  struct Block {
    Mat reps, bnd;
    RowCoordinates coords;
  };
  std::vector<std::vector<Block>> blocks(static_cast<std::size_t>(r), std::vector<Block>(static_cast<std::size_t>(r)));
  std::vector<Mat> all_b;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      auto i0 = corner(0, i, j), i1 = corner(1, i, j), im = corner(-1, i, j);
      Mat z = rows_of(i0);
      if (!i0.empty() && !i1.empty()) {
        Mat k = left_kernel(a->d().select_rows(i0).select_cols(i1));
        z = k.rows() ? k * z : Mat(f, 0, n);
      }
      Mat bnd = im.empty() ? Mat(f, 0, n) : row_basis(a->d().select_rows(im));
      Block& blk = blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      blk.bnd = bnd;
      Mat start = bnd;
      std::vector<Mat> reps;
      if (i == j) {
        Mat e = a->basis_vector(a->idempotent(i));
        if (RowCoordinates(bnd).contains(e))
          throw DgError(Code::NotBasic, "idempotent " + std::to_string(i + 1) + " is a coboundary; reduce first", i);
        reps.push_back(e);
        start = vstack(bnd, e);
      }
      for (std::size_t k : complement_rows(start, z)) reps.push_back(z.row_mat(k));
      blk.reps = vstack(f, n, reps);
      blk.coords = RowCoordinates(vstack(blk.reps, bnd));
      if (bnd.rows()) all_b.push_back(bnd);
    }
  auto class_of = [&](const Block& b, const Mat& x) {
    return b.coords.coords(x).block(0, 0, 1, b.reps.rows());
  };
  // Diagonal blocks: identity then radical elements x - lambda 1.
  for (int i = 0; i < r; ++i) {
    Block& b = blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    std::size_t d = b.reps.rows();
    auto mul = [&](const Mat& x, const Mat& y) { return class_of(b, a->mul(x * b.reps, y * b.reps)); };
    Mat one = unit_row(f, d, 0);
    std::vector<Mat> rad;
    for (std::size_t k = 1; k < d; ++k) {
      Mat x = unit_row(f, d, k);
      auto lam = residue_scalar(f, x, one, mul);
      if (!lam) throw DgError(Code::NotBasic, "H^0 of a corner is not local with residue field K", i);
      rad.push_back(x - one.scaled(*lam));
    }
    Mat basis = rad.empty() ? one : vstack(one, vstack(f, d, rad));
    b.reps = basis * b.reps;
    b.coords = RowCoordinates(vstack(b.reps, b.bnd));
  }
  Algebra::Spec spec;
  spec.field = f;
  spec.idempotents.assign(static_cast<std::size_t>(r), 0);
  struct Elem {
    int i, j;
    std::size_t k;
  };
  std::vector<Elem> elems;
  std::vector<Mat> reps;
  std::vector<std::vector<std::size_t>> offset(static_cast<std::size_t>(r), std::vector<std::size_t>(static_cast<std::size_t>(r)));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const Block& b = blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      offset[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = elems.size();
      for (std::size_t k = 0; k < b.reps.rows(); ++k) {
        if (i == j && k == 0) {
          spec.idempotents[static_cast<std::size_t>(i)] = elems.size();
          spec.labels.push_back("e" + std::to_string(i + 1));
        } else {
          spec.labels.push_back("h" + std::to_string(i + 1) + std::to_string(j + 1) + "_" + std::to_string(k));
        }
        elems.push_back({i, j, k});
        reps.push_back(b.reps.row_mat(k));
        spec.left_vertex.push_back(i);
        spec.right_vertex.push_back(j);
        spec.path_length.push_back(i == j && k == 0 ? 0 : -1);
      }
    }
  std::size_t m = elems.size();
  spec.products.assign(m, std::vector<SparseVec>(m));
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q) {
      if (elems[p].j != elems[q].i) continue;
      Mat prod = a->mul(reps[p], reps[q]);
      if (prod.is_zero()) continue;
      const Block& b = blocks[static_cast<std::size_t>(elems[p].i)][static_cast<std::size_t>(elems[q].j)];
      Mat c = class_of(b, prod);
      std::size_t off = offset[static_cast<std::size_t>(elems[p].i)][static_cast<std::size_t>(elems[q].j)];
      for (std::size_t k = 0; k < c.cols(); ++k)
        if (c(0, k) != 0) spec.products[p][q].emplace_back(off + k, c(0, k));
    }
  H0Data out;
  out.algebra = Algebra::create(std::move(spec));
  out.reps = vstack(f, n, reps);
  out.rep_count = m;
  out.coords = RowCoordinates(vstack(out.reps, vstack(f, n, all_b)));
  return out;
}

MoritaResult morita_reduce(const DgAlgebraPtr& a) {
  MoritaResult res;
  auto im = a->basis_in_degree(-1);
  RowCoordinates bnd(im.empty() ? Mat(a->field(), 0, a->dim()) : row_basis(a->d().select_rows(im)));
  for (int v = 0; v < a->vertices(); ++v) {
    if (bnd.dim() && bnd.contains(a->basis_vector(a->idempotent(v)))) res.stripped.push_back(v);
    else res.kept.push_back(v);
  }
  std::vector<int> new_vertex(static_cast<std::size_t>(a->vertices()), -1);
  for (std::size_t k = 0; k < res.kept.size(); ++k) new_vertex[static_cast<std::size_t>(res.kept[k])] = static_cast<int>(k);
  std::vector<std::size_t> keep;
  std::vector<std::size_t> pos(a->dim(), 0);
  for (std::size_t b = 0; b < a->dim(); ++b)
    if (new_vertex[static_cast<std::size_t>(a->left_vertex(b))] >= 0 &&
        new_vertex[static_cast<std::size_t>(a->right_vertex(b))] >= 0) {
      pos[b] = keep.size();
      keep.push_back(b);
    }
  DgAlgebra::Spec s;
  s.field = a->field();
  for (std::size_t b : keep) {
    s.labels.push_back(a->labels()[b]);
    s.degree.push_back(a->degree(b));
    s.left_vertex.push_back(new_vertex[static_cast<std::size_t>(a->left_vertex(b))]);
    s.right_vertex.push_back(new_vertex[static_cast<std::size_t>(a->right_vertex(b))]);
  }
  for (int v : res.kept) s.idempotents.push_back(pos[a->idempotent(v)]);
  s.d = a->d().select_rows(keep).select_cols(keep);
  s.products.assign(keep.size(), std::vector<SparseVec>(keep.size()));
  for (std::size_t p = 0; p < keep.size(); ++p)
    for (std::size_t q = 0; q < keep.size(); ++q)
      for (const auto& [k, c] : a->product(keep[p], keep[q])) s.products[p][q].emplace_back(pos[k], c);
  res.reduced = DgAlgebra::create(std::move(s));
  return res;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> DgModule::basis_in_degree(int n) const { return indices_in_degree(degree, n); }

std::map<int, std::size_t> DgModule::cohomology_dims() const { return graded_cohomology(degree, d); }

namespace {

Mat act_element(const DgModule& m, const Mat& x) {
  return combine(m.alg->field(), m.dim, m.dim, m.action, x);
}

}  // namespace

std::string DgModule::check() const {
  if (!alg) return "no algebra";
  const Field& f = alg->field();
  std::size_t n = alg->dim();
  if (degree.size() != dim || d.rows() != dim || d.cols() != dim || action.size() != n) return "inconsistent shapes";
  for (const auto& a : action)
    if (a.rows() != dim || a.cols() != dim) return "action matrix has wrong shape";
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      if (d(r, c) != 0 && degree[c] != degree[r] + 1) return "differential is not of degree 1";
      for (std::size_t b = 0; b < n; ++b)
        if (action[b](r, c) != 0 && degree[c] != degree[r] + alg->degree(b)) return "action is not homogeneous";
    }
  if (!(d * d).is_zero()) return "d^2 != 0";
  if (!(act_element(*this, alg->unit()) == Mat::identity(f, dim))) return "unit does not act as the identity";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Mat prod = act_element(*this, sparse_row(f, n, alg->product(i, j)));
      Mat lhs = left ? action[j] * action[i] : action[i] * action[j];
      if (!(lhs == prod)) return "action is not associative on " + alg->labels()[i] + ", " + alg->labels()[j];
    }
  Mat s = sign_diag(f, degree);
  for (std::size_t b = 0; b < n; ++b) {
    Mat da = act_element(*this, alg->d().row_mat(b));
    Mat lhs = action[b] * d;
    Mat rhs = left ? da + (d * action[b]).scaled(Scalar(sign(alg->degree(b)))) : d * action[b] + s * da;
    if (!(lhs == rhs)) return "Leibniz rule fails for " + alg->labels()[b];
  }
  return "";
}

DgModule regular_dg_module(const DgAlgebraPtr& a) {
  DgModule m;
  m.alg = a;
  m.dim = a->dim();
  m.degree = a->spec().degree;
  m.d = a->d();
  for (std::size_t b = 0; b < a->dim(); ++b) m.action.push_back(a->right_mult(b));
  return m;
}

std::pair<DgModule, Mat> dg_submodule(const DgModule& m, const Mat& span) {
  auto [basis, degs] = graded_row_basis(span, m.degree);
  RowCoordinates rc(basis);
  DgModule s;
  s.alg = m.alg;
  s.left = m.left;
  s.dim = basis.rows();
  s.degree = degs;
  auto restrict = [&](const Mat& op) {
    Mat img = basis * op;
    if (!rc.contains(img)) throw DgError(Code::InvalidStructure, "span is not a dg submodule");
    return rc.coords(img);
  };
  if (s.dim == 0) {
    s.d = Mat(m.alg->field(), 0, 0);
    s.action.assign(m.alg->dim(), Mat(m.alg->field(), 0, 0));
    return {s, basis};
  }
  s.d = restrict(m.d);
  for (const auto& a : m.action) s.action.push_back(restrict(a));
  return {s, basis};
}

std::pair<DgModule, Mat> dg_quotient(const DgModule& m, const Mat& span) {
  const Field& f = m.alg->field();
  Mat u = span.rows() ? graded_row_basis(span, m.degree).first : Mat(f, 0, m.dim);
  Mat id = Mat::identity(f, m.dim);
  auto comp = complement_rows(u, id);
  Mat c = id.select_rows(comp);
  RowCoordinates rc(vstack(c, u));
  Mat proj = rc.coords(id).block(0, 0, m.dim, c.rows());
  DgModule q;
  q.alg = m.alg;
  q.left = m.left;
  q.dim = c.rows();
  for (std::size_t k : comp) q.degree.push_back(m.degree[k]);
  q.d = c * m.d * proj;
  for (const auto& a : m.action) q.action.push_back(c * a * proj);
  return {q, proj};
}

Truncation truncate(const DgModule& m) {
  if (!m.alg->nonpositive()) throw DgError(Code::NotNonpositive, "truncation needs a nonpositive dg algebra");
  const Field& f = m.alg->field();
  std::vector<Mat> le, ge;
  for (std::size_t i = 0; i < m.dim; ++i)
    if (m.degree[i] < 0) {
      le.push_back(unit_row(f, m.dim, i));
      ge.push_back(unit_row(f, m.dim, i));
    }
  auto i0 = m.basis_in_degree(0), i1 = m.basis_in_degree(1);
  Mat id = Mat::identity(f, m.dim);
  if (!i0.empty()) {
    Mat z = i1.empty() ? Mat::identity(f, i0.size()) : left_kernel(m.d.select_rows(i0).select_cols(i1));
    if (z.rows()) le.push_back(z * id.select_rows(i0));
    ge.push_back(id.select_rows(i0));
    ge.push_back(m.d.select_rows(i0));
  }
  Truncation t;
  std::tie(t.le0, t.inc) = dg_submodule(m, vstack(f, m.dim, le));
  std::tie(t.ge1, t.proj) = dg_quotient(m, vstack(f, m.dim, ge));
  return t;
}

Module heart_to_h0(const DgModule& m, const H0Data& h0) {
  if (m.left) throw DgError(Code::InvalidStructure, "heart_to_h0 expects a right module");
  if (!m.alg->nonpositive()) throw DgError(Code::NotNonpositive, "heart_to_h0 needs a nonpositive dg algebra");
  auto h = m.cohomology_dims();
  std::optional<int> witness;
  for (const auto& [n, dim] : h)
    if (n < 0) witness = n;
  if (!witness)
    for (auto it = h.rbegin(); it != h.rend(); ++it)
      if (it->first > 0) witness = it->first;
  if (witness)
    throw DgError(Code::CohomologyNotConcentrated,
                  "cohomology in degree " + std::to_string(*witness) + " is nonzero", *witness);
  const Field& f = m.alg->field();
  auto i0 = m.basis_in_degree(0), i1 = m.basis_in_degree(1), im = m.basis_in_degree(-1);
  Mat id = Mat::identity(f, m.dim);
  Mat z = i0.empty() ? Mat(f, 0, m.dim) : id.select_rows(i0);
  if (!i0.empty() && !i1.empty()) {
    Mat k = left_kernel(m.d.select_rows(i0).select_cols(i1));
    z = k.rows() ? k * z : Mat(f, 0, m.dim);
  }
  Mat bnd = im.empty() ? Mat(f, 0, m.dim) : row_basis(m.d.select_rows(im));
  auto comp = complement_rows(bnd, z);
  Mat reps = z.select_rows(comp);
  std::size_t dim = reps.rows();
  RowCoordinates rc(vstack(reps, bnd));
  std::vector<Mat> action;
  for (std::size_t c = 0; c < h0.rep_count; ++c) {
    Mat img = reps * act_element(m, h0.reps.row_mat(c));
    action.push_back(dim ? rc.coords(img).block(0, 0, dim, dim) : Mat(f, 0, 0));
  }
  return Module::rebased(h0.algebra, dim, std::move(action)).first;
}

DgModule pullback(const Module& n, const DgAlgebraPtr& a, const H0Data& h0) {
  if (!a->nonpositive()) throw DgError(Code::NotNonpositive, "pullback needs a nonpositive dg algebra");
  const Field& f = a->field();
  DgModule m;
  m.alg = a;
  m.dim = n.dim();
  m.degree.assign(n.dim(), 0);
  m.d = Mat(f, n.dim(), n.dim());
  for (std::size_t b = 0; b < a->dim(); ++b) {
    if (a->degree(b) != 0) {
      m.action.push_back(Mat(f, n.dim(), n.dim()));
      continue;
    }
    m.action.push_back(n.act_element(h0.project(a->basis_vector(b))));
  }
  return m;
}

DgModule dg_dual(const DgModule& m) {
  const Field& f = m.alg->field();
  DgModule out;
  out.alg = m.alg;
  out.left = !m.left;
  out.dim = m.dim;
  for (int deg : m.degree) out.degree.push_back(-deg);
  Mat s(f, m.dim, m.dim);
  for (std::size_t i = 0; i < m.dim; ++i) s.set(i, i, Scalar(-sign(out.degree[i])));
  out.d = s * m.d.transpose();
  for (std::size_t b = 0; b < m.alg->dim(); ++b) {
    Mat t = m.action[b].transpose();
    if (!m.left && sign(m.alg->degree(b)) < 0) t = -t;
    out.action.push_back(t);
  }
  return out;
}

DgHom dg_hom(const DgModule& n, const DgModule& l) {
  if (n.left || l.left) throw DgError(Code::InvalidStructure, "dg_hom expects right modules");
  const Field& f = n.alg->field();
  DgHom h;
  h.vec.field = f;
  if (n.dim == 0 || l.dim == 0) return h;
  auto [nlo, nhi] = std::minmax_element(n.degree.begin(), n.degree.end());
  auto [llo, lhi] = std::minmax_element(l.degree.begin(), l.degree.end());
  int lo = *llo - *nhi, hi = *lhi - *nlo;
  h.vec.lo = lo;
  std::size_t cells = n.dim * l.dim;
  std::vector<Mat> flat;  // per degree, basis as rows of length cells
  for (int deg = lo; deg <= hi; ++deg) {
    std::vector<std::size_t> unknowns;
    for (std::size_t r = 0; r < n.dim; ++r)
      for (std::size_t c = 0; c < l.dim; ++c)
        if (l.degree[c] == n.degree[r] + deg) unknowns.push_back(r * l.dim + c);
    // Columns of k span the solution space in unknown coordinates.
    Mat k = Mat::identity(f, unknowns.size());
    for (std::size_t b = 0; b < n.alg->dim() && k.cols(); ++b) {
      const Mat& rl = l.action[b];
      const Mat& rn = n.action[b];
      if (rl.is_zero() && rn.is_zero()) continue;
      // Equations (F rl - rn F)_{r, c'} for each candidate.
      Mat eq(f, cells, k.cols());
      for (std::size_t col = 0; col < k.cols(); ++col) {
        Mat fm(f, n.dim, l.dim);
        for (std::size_t u = 0; u < unknowns.size(); ++u)
          if (k(u, col) != 0) fm(unknowns[u] / l.dim, unknowns[u] % l.dim) = k(u, col);
        Mat e = fm * rl - rn * fm;
        for (std::size_t x = 0; x < cells; ++x) eq(x, col) = e(x / l.dim, x % l.dim);
      }
      Mat ker = kernel_basis(eq);
      k = ker.cols() ? k * ker : Mat(f, unknowns.size(), 0);
    }
    std::vector<Mat> maps;
    Mat rows(f, k.cols(), cells);
    for (std::size_t col = 0; col < k.cols(); ++col) {
      Mat fm(f, n.dim, l.dim);
      for (std::size_t u = 0; u < unknowns.size(); ++u)
        if (k(u, col) != 0) {
          fm(unknowns[u] / l.dim, unknowns[u] % l.dim) = k(u, col);
          rows(col, unknowns[u]) = k(u, col);
        }
      maps.push_back(fm);
    }
    h.vec.dims.push_back(maps.size());
    h.basis.push_back(std::move(maps));
    flat.push_back(rows);
  }
  for (int deg = lo; deg < hi; ++deg) {
    std::size_t k = static_cast<std::size_t>(deg - lo);
    Mat dm(f, h.vec.dims[k], h.vec.dims[k + 1]);
    if (h.vec.dims[k] && h.vec.dims[k + 1]) {
      RowCoordinates rc(flat[k + 1]);
      for (std::size_t i = 0; i < h.vec.dims[k]; ++i) {
        const Mat& fm = h.basis[k][i];
        Mat g = fm * l.d - (n.d * fm).scaled(Scalar(sign(deg)));
        Mat row(f, 1, cells);
        for (std::size_t x = 0; x < cells; ++x) row(0, x) = g(x / l.dim, x % l.dim);
        dm.set_block(i, 0, rc.coords(row));
      }
    }
    h.vec.d.push_back(dm);
  }
  return h;
}

// ---------------------------------------------------------------------------

namespace {

// Basis of e_v A (elements with left vertex v).
std::vector<std::size_t> left_corner(const DgAlgebra& a, int v) {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < a.dim(); ++b)
    if (a.left_vertex(b) == v) out.push_back(b);
  return out;
}

struct Layout {
  std::vector<std::vector<std::size_t>> basis;  // per summand, algebra basis of e_v A
  std::vector<std::size_t> offset;
  std::vector<std::size_t> pos;  // algebra index -> position inside its corner (per vertex)
  std::size_t dim = 0;
};

Layout layout(const TwistedComplex& x) {
  Layout l;
  const DgAlgebra& a = *x.alg;
  l.pos.assign(a.dim(), 0);
  for (int v = 0; v < a.vertices(); ++v) {
    auto c = left_corner(a, v);
    for (std::size_t k = 0; k < c.size(); ++k) l.pos[c[k]] = k;
  }
  for (const auto& [v, s] : x.summands) {
    l.offset.push_back(l.dim);
    l.basis.push_back(left_corner(a, v));
    l.dim += l.basis.back().size();
  }
  return l;
}

// Row over the module placing the algebra element y (in e_v A) in summand p.
void scatter(const Layout& l, std::size_t p, const Mat& y, Mat& out, std::size_t row) {
  const Field& f = out.field();
  for (std::size_t k = 0; k < y.cols(); ++k)
    if (y(0, k) != 0) {
      std::size_t c = l.offset[p] + l.pos[k];
      out(row, c) = f.add(out(row, c), y(0, k));
    }
}

}  // namespace

DgModule TwistedComplex::module() const {
  const DgAlgebra& a = *alg;
  const Field& f = a.field();
  Layout l = layout(*this);
  DgModule m;
  m.alg = alg;
  m.dim = l.dim;
  m.d = Mat(f, l.dim, l.dim);
  m.action.assign(a.dim(), Mat(f, l.dim, l.dim));
  for (std::size_t p = 0; p < summands.size(); ++p) {
    int s = summands[p].second;
    for (std::size_t k = 0; k < l.basis[p].size(); ++k) {
      std::size_t b = l.basis[p][k];
      std::size_t row = l.offset[p] + k;
      m.degree.push_back(a.degree(b) - s);
      Mat db = a.d().row_mat(b);
      scatter(l, p, sign(s) > 0 ? db : -db, m.d, row);
      for (const auto& [key, elt] : delta) {
        if (key.second != p) continue;
        scatter(l, key.first, a.mul(elt, a.basis_vector(b)), m.d, row);
      }
      for (std::size_t c = 0; c < a.dim(); ++c)
        for (const auto& [t, coef] : a.product(b, c)) {
          std::size_t col = l.offset[p] + l.pos[t];
          m.action[c](row, col) = f.add(m.action[c](row, col), coef);
        }
    }
  }
  return m;
}

std::string TwistedComplex::check() const {
  if (!alg) return "no algebra";
  const DgAlgebra& a = *alg;
  for (const auto& [v, s] : summands)
    if (v < 0 || v >= a.vertices()) return "summand vertex out of range";
  for (const auto& [key, elt] : delta) {
    auto [q, p] = key;
    if (q >= summands.size() || p >= summands.size()) return "delta index out of range";
    if (elt.rows() != 1 || elt.cols() != a.dim()) return "delta entry has wrong shape";
    int want = summands[q].second - summands[p].second + 1;
    for (std::size_t b = 0; b < a.dim(); ++b) {
      if (elt(0, b) == 0) continue;
      if (a.degree(b) != want || a.left_vertex(b) != summands[q].first || a.right_vertex(b) != summands[p].first)
        return "delta(" + std::to_string(q) + "," + std::to_string(p) + ") is not homogeneous";
    }
  }
  return module().check();
}

bool TwistedComplex::is_minimal() const {
  const DgAlgebra& a = *alg;
  std::size_t r = summands.size();
  std::vector<std::vector<std::size_t>> out(r);
  for (const auto& [key, elt] : delta) {
    if (elt.is_zero()) continue;
    for (int v = 0; v < a.vertices(); ++v)
      if (elt(0, a.idempotent(v)) != 0) return false;
    if (key.first == key.second) return false;
    out[key.second].push_back(key.first);
  }
  // Kahn's algorithm on the support of delta.
  std::vector<std::size_t> indeg(r, 0);
  for (const auto& o : out)
    for (std::size_t q : o) ++indeg[q];
  std::vector<std::size_t> stack;
  for (std::size_t p = 0; p < r; ++p)
    if (!indeg[p]) stack.push_back(p);
  std::size_t seen = 0;
  while (!stack.empty()) {
    std::size_t p = stack.back();
    stack.pop_back();
    ++seen;
    for (std::size_t q : out[p])
      if (--indeg[q] == 0) stack.push_back(q);
  }
  return seen == r;
}

TwistedComplex twisted_from_complex(const DgAlgebraPtr& a, const Complex& p) {
  TwistedComplex t;
  t.alg = a;
  if (p.is_zero()) return t;
  if (!p.all_of_kind(SummandKind::P)) throw DgError(Code::InvalidStructure, "complex must consist of projectives");
  const AlgebraPtr& alg = p.algebra();
  if (alg->dim() != a->dim()) throw DgError(Code::InvalidStructure, "algebra mismatch");
  std::vector<std::size_t> first;  // summand index of the first summand per degree
  for (int n = p.lo(); n <= p.hi(); ++n) {
    first.push_back(t.summands.size());
    for (const auto& s : p.summands(n)) t.summands.emplace_back(s.vertex, -n);
  }
  for (int n = p.lo(); n < p.hi(); ++n) {
    Mat d = p.d(n);
    const auto& src = p.summands(n);
    const auto& dst = p.summands(n + 1);
    std::size_t ro = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      auto sb = left_corner(*a, src[i].vertex);
      std::size_t erow = ro + static_cast<std::size_t>(std::find(sb.begin(), sb.end(), a->idempotent(src[i].vertex)) - sb.begin());
      std::size_t co = 0;
      for (std::size_t j = 0; j < dst.size(); ++j) {
        auto tb = left_corner(*a, dst[j].vertex);
        Mat elt(a->field(), 1, a->dim());
        for (std::size_t k = 0; k < tb.size(); ++k) elt(0, tb[k]) = d(erow, co + k);
        if (!elt.is_zero()) {
          std::size_t p_idx = first[static_cast<std::size_t>(n - p.lo())] + i;
          std::size_t q_idx = first[static_cast<std::size_t>(n + 1 - p.lo())] + j;
          t.delta[{q_idx, p_idx}] = elt;
        }
        co += tb.size();
      }
      ro += sb.size();
    }
  }
  return t;
}

MinimalPerfect minimal_perfect_resolution(const DgModule&) {
  throw DgError(Code::CertificateMissing, "a perfectness certificate (twisted complex presentation) is required");
}

MinimalPerfect minimal_perfect_resolution(const TwistedComplex& x) {
  if (auto err = x.check(); !err.empty()) throw DgError(Code::InvalidStructure, err);
  const DgAlgebra& a = *x.alg;
  const Field& f = a.field();
  TwistedComplex cur = x;
  std::size_t dim0 = layout(x).dim;
  Mat proj = Mat::identity(f, dim0), inc = Mat::identity(f, dim0);
  for (;;) {
    std::optional<std::pair<std::size_t, std::size_t>> pick;
    Mat phi_inv;
    for (const auto& [key, elt] : cur.delta) {
      auto [q, p] = key;
      if (q == p || cur.summands[q].first != cur.summands[p].first) continue;
      int v = cur.summands[p].first;
      std::size_t e = a.idempotent(v);
      if (elt(0, e) == 0) continue;
      Mat ev = a.basis_vector(e);
      // Inverse of phi in e_v A e_v: y phi = e_v.
      Mat rphi(f, a.dim(), a.dim());
      for (std::size_t k = 0; k < a.dim(); ++k)
        if (elt(0, k) != 0) rphi = rphi + a.right_mult(k).scaled(elt(0, k));
      auto y = solve_left(rphi, ev);
      if (!y) continue;
      Mat yy = a.mul(a.mul(ev, *y), ev);
      if (!(a.mul(yy, elt) == ev) || !(a.mul(elt, yy) == ev)) continue;
      pick = key;
      phi_inv = yy;
      break;
    }
    if (!pick) break;
    auto [q, p] = *pick;
    Layout l = layout(cur);
    std::vector<std::size_t> keep;
    for (std::size_t s = 0; s < cur.summands.size(); ++s)
      if (s != p && s != q) keep.push_back(s);
    std::vector<std::size_t> idx(cur.summands.size(), 0);
    TwistedComplex next;
    next.alg = cur.alg;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      idx[keep[k]] = k;
      next.summands.push_back(cur.summands[keep[k]]);
    }
    auto entry = [&](std::size_t t, std::size_t s) -> std::optional<Mat> {
      auto it = cur.delta.find({t, s});
      if (it == cur.delta.end() || it->second.is_zero()) return std::nullopt;
      return it->second;
    };
    for (std::size_t t : keep)
      for (std::size_t s : keep) {
        Mat val(f, 1, a.dim());
        if (auto e = entry(t, s)) val = *e;
        auto ap = entry(t, p);
        auto qb = entry(q, s);
        if (ap && qb) val = val - a.mul(a.mul(*ap, phi_inv), *qb);
        if (!val.is_zero()) next.delta[{idx[t], idx[s]}] = val;
      }
    Layout nl = layout(next);
    Mat pi(f, l.dim, nl.dim), iota(f, nl.dim, l.dim);
    for (std::size_t s : keep)
      for (std::size_t k = 0; k < l.basis[s].size(); ++k) {
        pi(l.offset[s] + k, nl.offset[idx[s]] + k) = 1;
        iota(nl.offset[idx[s]] + k, l.offset[s] + k) = 1;
        // iota adds -phi^{-1} delta_{q s} x in summand p.
        if (auto qb = entry(q, s)) {
          Mat y = a.mul(a.mul(phi_inv, *qb), a.basis_vector(l.basis[s][k]));
          scatter(l, p, -y, iota, nl.offset[idx[s]] + k);
        }
      }
    for (std::size_t k = 0; k < l.basis[q].size(); ++k) {
      Mat y = a.mul(phi_inv, a.basis_vector(l.basis[q][k]));
      for (std::size_t t : keep)
        if (auto ap = entry(t, p)) scatter(nl, idx[t], -a.mul(*ap, y), pi, l.offset[q] + k);
    }
    proj = proj * pi;
    inc = iota * inc;
    cur = std::move(next);
  }
  return {cur, proj, inc};
}

bool is_quasi_iso(const DgModule& src, const DgModule& dst, const Mat& f) {
  const Field& fld = src.alg->field();
  if (f.rows() != src.dim || f.cols() != dst.dim) return false;
  for (std::size_t r = 0; r < src.dim; ++r)
    for (std::size_t c = 0; c < dst.dim; ++c)
      if (f(r, c) != 0 && src.degree[r] != dst.degree[c]) return false;
  if (!(src.d * f == f * dst.d)) return false;
  for (std::size_t b = 0; b < src.alg->dim(); ++b)
    if (!(src.action[b] * f == f * dst.action[b])) return false;
  auto hs = src.cohomology_dims(), hd = dst.cohomology_dims();
  if (hs != hd) return false;
  Mat ids = Mat::identity(fld, src.dim), idd = Mat::identity(fld, dst.dim);
  for (const auto& [n, h] : hd) {
    auto s0 = src.basis_in_degree(n), s1 = src.basis_in_degree(n + 1);
    Mat z = s0.empty() ? Mat(fld, 0, src.dim) : ids.select_rows(s0);
    if (!s0.empty() && !s1.empty()) {
      Mat k = left_kernel(src.d.select_rows(s0).select_cols(s1));
      z = k.rows() ? k * z : Mat(fld, 0, src.dim);
    }
    auto dm = dst.basis_in_degree(n - 1);
    Mat bnd = dm.empty() ? Mat(fld, 0, dst.dim) : dst.d.select_rows(dm);
    std::size_t rb = rank(bnd);
    Mat img = z.rows() ? z * f : Mat(fld, 0, dst.dim);
    if (rank(vstack(img, bnd)) - rb != h) return false;
  }
  return true;
}

std::vector<int> dg_simple_vertices(const DgAlgebraPtr& a) {
  auto r = morita_reduce(a);
  return r.kept;
}

DgModule dg_simple(const DgAlgebraPtr& a, int i) {
  auto kept = dg_simple_vertices(a);
  if (std::find(kept.begin(), kept.end(), i) == kept.end())
    throw DgError(Code::InvalidStructure, "vertex " + std::to_string(i + 1) + " has no simple (stripped idempotent)", i);
  const Field& f = a->field();
  DgModule m;
  m.alg = a;
  m.dim = 1;
  m.degree = {0};
  m.d = Mat(f, 1, 1);
  for (std::size_t b = 0; b < a->dim(); ++b) {
    Mat act(f, 1, 1);
    if (b == a->idempotent(i)) act(0, 0) = 1;
    m.action.push_back(act);
  }
  return m;
}

DgModule dg_nakayama(const TwistedComplex& m) {
  const DgAlgebra& a = *m.alg;
  const Field& f = a.field();
  DgModule src = m.module();
  DgHom h = dg_hom(src, regular_dg_module(m.alg));
  // Hom_A(M, A) as a left module: (a.f)(x) = a f(x).
  DgModule hm;
  hm.alg = m.alg;
  hm.left = true;
  std::vector<std::size_t> offset;
  std::vector<Mat> flat;
  std::size_t cells = src.dim * a.dim();
  for (std::size_t k = 0; k < h.basis.size(); ++k) {
    offset.push_back(hm.dim);
    std::vector<Mat> rows;
    for (const Mat& fm : h.basis[k]) {
      hm.degree.push_back(h.vec.lo + static_cast<int>(k));
      Mat row(f, 1, cells);
      for (std::size_t x = 0; x < cells; ++x) row(0, x) = fm(x / a.dim(), x % a.dim());
      rows.push_back(row);
    }
    hm.dim += h.basis[k].size();
    flat.push_back(vstack(f, cells, rows));
  }
  hm.d = Mat(f, hm.dim, hm.dim);
  for (std::size_t k = 0; k + 1 < h.basis.size(); ++k)
    if (h.vec.d[k].rows() && h.vec.d[k].cols()) hm.d.set_block(offset[k], offset[k + 1], h.vec.d[k]);
  std::vector<RowCoordinates> rc;
  for (const Mat& fl : flat) rc.emplace_back(fl);
  for (std::size_t b = 0; b < a.dim(); ++b) {
    Mat act(f, hm.dim, hm.dim);
    for (std::size_t k = 0; k < h.basis.size(); ++k) {
      int n = h.vec.lo + static_cast<int>(k) + a.degree(b);
      long t = n - h.vec.lo;
      for (std::size_t i = 0; i < h.basis[k].size(); ++i) {
        Mat g = h.basis[k][i] * a.left_mult(b);
        if (g.is_zero()) continue;
        if (t < 0 || t >= static_cast<long>(h.basis.size()))
          throw DgError(Code::InvalidStructure, "left action leaves the Hom complex");
        Mat row(f, 1, cells);
        for (std::size_t x = 0; x < cells; ++x) row(0, x) = g(x / a.dim(), x % a.dim());
        act.set_block(offset[k] + i, offset[static_cast<std::size_t>(t)], rc[static_cast<std::size_t>(t)].coords(row));
      }
    }
    hm.action.push_back(act);
  }
  return dg_dual(hm);
}

DgModule dual_left_projective(const DgAlgebraPtr& a, int i) {
  std::vector<std::size_t> idx;
  for (std::size_t b = 0; b < a->dim(); ++b)
    if (a->right_vertex(b) == i) idx.push_back(b);
  DgModule m;
  m.alg = a;
  m.left = true;
  m.dim = idx.size();
  for (std::size_t b : idx) m.degree.push_back(a->degree(b));
  m.d = a->d().select_rows(idx).select_cols(idx);
  for (std::size_t b = 0; b < a->dim(); ++b) m.action.push_back(a->left_mult(b).select_rows(idx).select_cols(idx));
  return dg_dual(m);
}

}  // namespace tilt
