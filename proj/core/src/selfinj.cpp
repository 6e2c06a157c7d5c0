#include <random>

#include "tilt/rickard.hpp"

namespace tilt {

namespace {

// A_A with the algebra basis as module basis.
Module algebra_module(const AlgebraPtr& a) {
  std::vector<Mat> act;
  for (std::size_t b = 0; b < a->dim(); ++b) act.push_back(a->right_mult(b));
  return Module(a, a->dim(), std::move(act));
}

// Hom_A(M, A) as a right module over the opposite algebra, in a
// vertex-homogeneous basis.
struct DualHom {
  HomSpace space;
  Module module;     // over A^op
  Mat change_inv;    // old coordinates -> new coordinates
};

DualHom dual_hom(const Module& m) {
  const AlgebraPtr& a = m.algebra();
  Module reg = algebra_module(a);
  HomSpace hs(m, reg);
  std::vector<Mat> act;
  for (std::size_t b = 0; b < a->dim(); ++b) {
    Mat rho(a->field(), hs.dim(), hs.dim());
    for (std::size_t k = 0; k < hs.dim(); ++k) rho.set_block(k, 0, hs.coordinates(hs.basis()[k] * a->left_mult(b)));
    act.push_back(std::move(rho));
  }
  auto [mod, change] = Module::rebased(a->opposite(), hs.dim(), std::move(act));
  auto inv = inverse(change);
  return {std::move(hs), std::move(mod), *inv};
}

// Coefficients for attempt t: unit vectors first, then all ones, then random.
Mat combination(std::size_t attempt, std::mt19937& rng, const Field& f, std::size_t width) {
  Mat c(f, 1, width);
  if (attempt < width) {
    c(0, attempt) = 1;
  } else if (attempt == width) {
    for (std::size_t i = 0; i < width; ++i) c(0, i) = 1;
  } else {
    std::uniform_int_distribution<long> d(1, 96);
    for (std::size_t i = 0; i < width; ++i) c.set(0, i, Scalar(d(rng)));
  }
  return c;
}

bool search(const Complex& x, const Complex& y, int attempts) {
  if (x.is_zero() || y.is_zero()) return x.is_zero() && y.is_zero();
  HomComplex hc(x, y, -1, 1);
  if (hc.vec().dim(0) == 0) return false;
  Mat reps = hc.vec().cohomology_basis(0);
  if (reps.rows() == 0) return false;
  std::mt19937 rng(7);
  for (int t = 0; t < attempts; ++t) {
    Mat c = combination(static_cast<std::size_t>(t), rng, x.algebra()->field(), reps.rows());
    GradedMap g = hc.to_map(0, c * reps);
    if (is_acyclic(cone(as_chain_map(x, y, g)).cone)) return true;
  }
  return false;
}

}  // namespace

std::optional<std::vector<int>> projective_injective_permutation(const AlgebraPtr& a) {
  std::vector<int> perm;
  for (int i = 0; i < a->vertices(); ++i) {
    Module p = projective_module(a, i);
    int found = -1;
    for (int j = 0; j < a->vertices() && found < 0; ++j) {
      Module inj = injective_module(a, j);
      if (inj.dim() != p.dim()) continue;
      // I_j is a quotient of P_i exactly when its top is S_i; equal dimensions
      // then force an isomorphism.
      auto top = quotient_module(inj, radical_span(inj)).first.dimension_vector();
      std::vector<int> want(static_cast<std::size_t>(a->vertices()), 0);
      want[static_cast<std::size_t>(i)] = 1;
      if (top == want) found = j;
    }
    if (found < 0) return std::nullopt;
    perm.push_back(found);
  }
  return perm;
}

Module nakayama_module(const Module& m) {
  DualHom h = dual_hom(m);
  return dualize(h.module, m.algebra());
}

Mat nakayama_map(const Module& src, const Module& dst, const Mat& f) {
  DualHom hs = dual_hom(src), hd = dual_hom(dst);
  // Hom(f, A): Hom(dst, A) -> Hom(src, A), h -> f h, in the rebased bases.
  const Field& fld = src.algebra()->field();
  Mat g(fld, hd.module.dim(), hs.module.dim());
  auto change = inverse(hd.change_inv);
  for (std::size_t k = 0; k < hd.space.dim(); ++k) {
    Mat h = hd.space.combine(change->row_mat(k));
    g.set_block(k, 0, hs.space.coordinates(f * h) * hs.change_inv);
  }
  return g.transpose();
}

Complex nakayama_module_complex(const Complex& x) {
  const AlgebraPtr& a = x.algebra();
  if (x.is_zero()) return Complex(a);
  std::vector<std::vector<Summand>> ss;
  std::vector<Mat> ds;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    ss.push_back({other_summand(nakayama_module(x.term(n)))});
    if (n < x.hi()) ds.push_back(nakayama_map(x.term(n), x.term(n + 1), x.d(n)));
  }
  return Complex(a, x.lo(), std::move(ss), std::move(ds)).trimmed();
}

std::optional<bool> find_quasi_iso(const Complex& x, const Complex& y, int attempts) {
  if (cohomology_dims(x) != cohomology_dims(y)) return false;
  if (search(x, y, attempts) || search(y, x, attempts)) return true;
  return std::nullopt;
}

std::optional<bool> has_symmetric_form(const AlgebraPtr& a) {
  // symmetric algebras have P_i = I_i
  auto perm = projective_injective_permutation(a);
  if (!perm) return false;
  for (int i = 0; i < a->vertices(); ++i)
    if ((*perm)[static_cast<std::size_t>(i)] != i) return false;
  const Field& f = a->field();
  std::size_t n = a->dim();
  std::vector<Mat> comm;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Mat x = a->basis_vector(i), y = a->basis_vector(j);
      comm.push_back(a->mul(x, y) - a->mul(y, x));
    }
  Mat forms = comm.empty() ? Mat::identity(f, n) : left_kernel(vstack(f, n, comm).transpose());
  if (forms.rows() == 0) return false;
  std::vector<Mat> gram;
  for (std::size_t k = 0; k < forms.rows(); ++k) {
    Mat g(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Mat p = a->mul(a->basis_vector(i), a->basis_vector(j));
        Scalar s = 0;
        for (std::size_t c = 0; c < n; ++c) s = f.add(s, f.mul(p(0, c), forms(k, c)));
        g(i, j) = s;
      }
    gram.push_back(std::move(g));
  }
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> d(1, 96);
  for (std::size_t t = 0; t < gram.size() + 24; ++t) {
    Mat g(f, n, n);
    for (std::size_t k = 0; k < gram.size(); ++k) {
      Scalar c = t < gram.size() ? Scalar(k == t ? 1 : 0) : f.from_int(d(rng));
      if (c != 0) g = g + gram[k].scaled(c);
    }
    if (rank(g) == n) return true;
  }
  return std::nullopt;
}

SelfInjectiveReport self_injective_check(const std::vector<Complex>& xs, const RickardResult* r) {
  if (xs.empty()) throw RickardError("empty collection");
  const AlgebraPtr& a = xs.front().algebra();
  auto perm = projective_injective_permutation(a);
  if (!perm) throw SelfInjectiveError(SelfInjectiveError::Code::NotSelfInjective, "the algebra is not self-injective");
  SelfInjectiveReport rep;
  rep.projective_to_injective = *perm;
  rep.symmetric = has_symmetric_form(a);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Complex nx = nakayama_module_complex(xs[i]);
    std::optional<std::size_t> match;
    for (std::size_t j = 0; j < xs.size() && !match; ++j) {
      auto iso = find_quasi_iso(nx, xs[j]);
      if (iso && *iso) match = j;
    }
    if (!match)
      throw SelfInjectiveError(SelfInjectiveError::Code::NotNuStable,
                               "nu(X_" + std::to_string(i + 1) + ") is not isomorphic to a member of the collection", i);
    rep.nu_perm.push_back(*match);
  }
  if (r) {
    std::vector<Complex> nu_inv;
    for (const auto& t : r->t) nu_inv.push_back(nu_inverse_complex(t));
    Complex t = direct_sum(a, r->t).sum;
    Complex p = direct_sum(a, nu_inv).sum;
    rep.t_iso_nu_inv_t = find_quasi_iso(p, t);
  }
  return rep;
}

}  // namespace tilt
