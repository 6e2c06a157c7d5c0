#include "tilt/rickard.hpp"

#include <algorithm>
#include <sstream>

namespace tilt {

std::string to_string(StepStatus s) {
  switch (s) {
    case StepStatus::Running: return "RUNNING";
    case StepStatus::Terminated: return "TERMINATED";
    case StepStatus::WindowStable: return "WINDOW_STABLE";
    case StepStatus::BudgetExceeded: return "BUDGET_EXCEEDED";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Tilting: return "TILTING";
    case Verdict::NotTilting: return "NOT_TILTING";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

bool RickardResult::all_certified() const {
  for (const auto& t : trace)
    if (!t.certified) return false;
  return true;
}

bool RickardResult::all_finished() const {
  for (const auto& t : trace)
    if (t.status != StepStatus::Terminated && t.status != StepStatus::WindowStable) return false;
  return true;
}

namespace {

// Brutal truncation keeping degrees <= top.
Complex truncate_above(const Complex& x, int top) {
  if (x.is_zero() || x.hi() <= top) return x;
  if (x.lo() > top) return Complex(x.algebra());
  std::vector<std::vector<Summand>> ss;
  std::vector<Mat> ds;
  for (int n = x.lo(); n <= top; ++n) {
    ss.push_back(x.summands(n));
    if (n < top) ds.push_back(x.d(n));
  }
  return Complex(x.algebra(), x.lo(), std::move(ss), std::move(ds));
}

// Injective model of x agreeing with x below the returned cutoff.
std::pair<Complex, std::optional<int>> injective_model(const Complex& x, int length) {
  Resolution r = injective_coresolution(x, length);
  if (r.genuine()) return {r.res.trimmed(), std::nullopt};
  return {truncate_above(r.res, *r.bound).trimmed(), r.bound};
}

std::optional<int> min_cutoff(std::optional<int> a, std::optional<int> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

}  // namespace

KillBasis kill_basis(const std::vector<Complex>& xs, const Complex& cur, std::optional<int> cutoff, int window) {
  KillBasis kb;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (xs[j].is_zero()) continue;
    for (int m = -window; m <= -1; ++m) {
      Complex sx = shift(xs[j], m);
      if (cutoff && sx.hi() > *cutoff - 1)
        throw RickardError("resolution length too small for window " + std::to_string(window));
      if (cur.is_zero()) continue;
      HomComplex hc(sx, cur);
      if (0 < hc.deg_lo() || 0 > hc.deg_hi()) continue;
      auto basis = hc.cohomology_basis(0);
      if (basis.empty()) continue;
      kb.entries.push_back({j, m, basis.size()});
      for (auto& g : basis) {
        kb.sources.push_back(sx);
        kb.maps.push_back(std::move(g));
      }
    }
  }
  return kb;
}

StepOutput rickard_step(const std::vector<Complex>& xs, const Complex& cur, std::optional<int> cutoff, int window,
                        int length) {
  return rickard_step(kill_basis(xs, cur, cutoff, window), cur, cutoff, length);
}

StepOutput rickard_step(const KillBasis& kb, const Complex& cur, std::optional<int> cutoff, int length) {
  const AlgebraPtr& a = cur.algebra();
  StepRecord rec;
  rec.basis = kb.entries;
  const auto& zs = kb.sources;
  const auto& fs = kb.maps;
  SumResult z = direct_sum(a, zs);
  ChainMap alpha{z.sum, cur, {}};
  for (std::size_t k = 0; k < zs.size(); ++k) {
    ChainMap part = compose(z.proj[k], as_chain_map(zs[k], cur, fs[k]));
    for (auto& [n, m] : part.comp) {
      auto it = alpha.comp.find(n);
      if (it == alpha.comp.end()) alpha.comp[n] = m;
      else it->second = it->second + m;
    }
  }
  rec.z = z.sum.describe();
  Complex c = cone(alpha).cone;
  auto [model, bound] = injective_model(c, length);
  std::optional<int> next_cut = cutoff;
  if (bound) next_cut = min_cutoff(cutoff, bound);
  if (next_cut) model = truncate_above(model, *next_cut).trimmed();
  rec.result = model.describe();
  rec.result_dim = model.total_dim();
  return {model, rec, next_cut, alpha};
}

RickardResult rickard_construct(const std::vector<Complex>& xs, const RickardParams& params) {
  if (xs.empty()) throw RickardError("empty collection");
  if (params.window < 1) throw RickardError("window must be at least 1");
  if (params.budget < 0) throw RickardError("budget must be nonnegative");
  const AlgebraPtr& a = xs.front().algebra();
  int top = 0, bottom = 0;
  bool any = false;
  for (const auto& x : xs)
    if (!x.is_zero()) {
      top = any ? std::max(top, x.hi()) : x.hi();
      bottom = any ? std::min(bottom, x.hi()) : x.hi();
      any = true;
    }
  // Hom(Sigma^m X_j, -) for m >= -W is exact on a model cut at hi(X_i) + L
  // once L >= W + 1 + hi(X_j) - hi(X_i).
  int needed = params.window + 1 + top - bottom;
  int length = params.length;
  if (length == 0) length = std::max(default_length(a, xs), needed);
  if (length < needed)
    throw RickardError("resolution length " + std::to_string(length) + " is too small for window " +
                       std::to_string(params.window) + " (need " + std::to_string(needed) + ")");
  RickardResult r;
  r.params = params;
  r.length = length;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    IndexTrace tr;
    auto [cur, cut] = injective_model(xs[i], length);
    auto cand = certified_truncation(xs, i, cur);
    KillBasis kb = kill_basis(xs, cur, cut, params.window);
    for (int n = 1;; ++n) {
      if (kb.entries.empty()) {
        tr.status = StepStatus::Terminated;
        tr.status_step = n - 1;
        break;
      }
      if (n > params.budget) {
        tr.status = StepStatus::BudgetExceeded;
        tr.status_step = params.budget;
        break;
      }
      StepOutput out = rickard_step(kb, cur, cut, length);
      out.record.n = n;
      tr.steps.push_back(out.record);
      cur = std::move(out.next);
      cut = out.cutoff;
      kb = kill_basis(xs, cur, cut, params.window);
      auto next = certified_truncation(xs, i, cur);
      bool stable = next && cand && next->first.describe() == cand->first.describe();
      cand = std::move(next);
      if (stable && !kb.entries.empty()) {
        tr.status = StepStatus::WindowStable;
        tr.status_step = n;
        break;
      }
    }
    tr.cutoff = cut;
    tr.certified = cand.has_value();
    if (cand) {
      if (cand->second < cur.hi()) tr.truncated_at = cand->second;
      r.t.push_back(cand->first);
    } else {
      r.t.push_back(cur);
    }
    r.trace.push_back(std::move(tr));
  }
  return r;
}

std::optional<std::pair<Complex, int>> certified_truncation(const std::vector<Complex>& xs, std::size_t i,
                                                            const Complex& stage) {
  if (stage.is_zero()) return std::nullopt;
  for (int k = stage.lo(); k <= stage.hi(); ++k) {
    if (stage.dim(k) == 0) continue;
    Complex t = truncate_above(stage, k).trimmed();
    bool ok = true;
    for (std::size_t j = 0; j < xs.size() && ok; ++j) {
      if (xs[j].is_zero()) continue;
      auto dims = HomComplex(xs[j], t).cohomology_dims();
      if (i == j) ok = dims.size() == 1 && dims.count(0) && dims.at(0) == 1;
      else ok = dims.empty();
    }
    if (ok) return std::make_pair(t, k);
  }
  return std::nullopt;
}

DefiningCheck check_defining_property(const std::vector<Complex>& xs, const RickardResult& r, int m_lo, int m_hi) {
  DefiningCheck c;
  c.m_lo = m_lo;
  c.m_hi = m_hi;
  for (std::size_t i = 0; i < r.t.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const Complex& t = r.t[i];
      std::map<int, std::size_t> dims;
      if (!t.is_zero() && !xs[j].is_zero()) dims = HomComplex(xs[j], t).cohomology_dims();
      for (int m = m_lo; m <= m_hi; ++m) {
        std::size_t want = (i == j && m == 0) ? 1 : 0;
        std::size_t got = dims.count(m) ? dims.at(m) : 0;
        if (got != want) {
          c.ok = false;
          c.violations.push_back({i, j, m, got});
        }
      }
    }
  return c;
}

namespace {

Complex apply_nakayama(const Complex& x, SummandKind from, SummandKind to, bool inverse) {
  const AlgebraPtr& a = x.algebra();
  if (x.is_zero()) return Complex(a);
  std::vector<std::vector<Summand>> ss;
  std::vector<Mat> ds;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    std::vector<Summand> s;
    for (const auto& sm : x.summands(n)) {
      Module expect = from == SummandKind::I ? injective_module(a, sm.vertex) : projective_module(a, sm.vertex);
      if (sm.kind != from || !(sm.module == expect))
        throw ComplexError("Nakayama functor needs a complex of standard " + std::string(inverse ? "injective" : "projective") +
                           " summands");
      s.push_back(make_summand(a, to, sm.vertex));
    }
    ss.push_back(std::move(s));
  }
  for (int n = x.lo(); n < x.hi(); ++n) {
    const auto& src = x.summands(n);
    const auto& dst = x.summands(n + 1);
    const auto& nsrc = ss[static_cast<std::size_t>(n - x.lo())];
    const auto& ndst = ss[static_cast<std::size_t>(n + 1 - x.lo())];
    std::size_t rows = 0, cols = 0;
    for (const auto& s : nsrc) rows += s.module.dim();
    for (const auto& s : ndst) cols += s.module.dim();
    Mat d(a->field(), rows, cols), old = x.d(n);
    std::size_t ro = 0, nro = 0;
    for (std::size_t p = 0; p < src.size(); ++p) {
      std::size_t co = 0, nco = 0;
      for (std::size_t q = 0; q < dst.size(); ++q) {
        Mat blk = old.block(ro, co, src[p].module.dim(), dst[q].module.dim());
        if (!blk.is_zero()) {
          int u = src[p].vertex, v = dst[q].vertex;
          Mat nb = inverse ? nakayama_inverse_injective_map(a, u, v, blk) : nakayama_projective_map(a, u, v, blk);
          d.set_block(nro, nco, nb);
        }
        co += dst[q].module.dim();
        nco += ndst[q].module.dim();
      }
      ro += src[p].module.dim();
      nro += nsrc[p].module.dim();
    }
    ds.push_back(std::move(d));
  }
  return Complex(a, x.lo(), std::move(ss), std::move(ds));
}

}  // namespace

Complex nu_inverse_complex(const Complex& t) { return apply_nakayama(t, SummandKind::I, SummandKind::P, true); }
Complex nu_complex(const Complex& p) { return apply_nakayama(p, SummandKind::P, SummandKind::I, false); }

// ---------------------------------------------------------------------------

AlgebraPtr gamma_algebra(const std::vector<Complex>& parts) {
  if (parts.empty()) throw RickardError("no parts");
  const AlgebraPtr& a = parts.front().algebra();
  const Field& f = a->field();
  std::size_t r = parts.size();
  struct BlockData {
    std::unique_ptr<HomComplex> hc;
    Mat reps;   // cocycle representatives of the H^0 basis (rows)
    Mat basis;  // chosen basis of the block in H^0 coordinates (rows)
  };
  // blocks[i][j]: classes of maps parts[j] -> parts[i]
  std::vector<std::vector<BlockData>> blocks(r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      BlockData b;
      b.hc = std::make_unique<HomComplex>(parts[j], parts[i], -1, 1);
      b.reps = b.hc->vec().dim(0) ? b.hc->vec().cohomology_basis(0) : Mat(f, 0, 0);
      blocks[i].push_back(std::move(b));
    }
  auto h0_dim = [&](std::size_t i, std::size_t j) { return blocks[i][j].reps.rows(); };
  auto rep_map = [&](std::size_t i, std::size_t j, const Mat& coords) {
    return blocks[i][j].hc->to_map(0, coords * blocks[i][j].reps);
  };
  auto class_in = [&](std::size_t i, std::size_t j, const GradedMap& g) {
    Mat z = blocks[i][j].hc->coords(g);
    auto c = blocks[i][j].hc->vec().class_of(0, z);
    if (!c) throw InternalInvariantViolation("composite of chain maps is not a cocycle");
    return *c;
  };
  // Identity classes and diagonal bases: identity first, then radical.
  std::vector<Mat> identity(r);
  for (std::size_t i = 0; i < r; ++i) {
    if (h0_dim(i, i) == 0) throw AlgebraError(AlgebraError::Code::NotBasic, "a part has zero endomorphism ring");
    GradedMap id{0, {}};
    for (int n = parts[i].lo(); n <= parts[i].hi(); ++n) id.comp[n] = Mat::identity(f, parts[i].dim(n));
    identity[i] = class_in(i, i, id);
  }
  auto product_class = [&](std::size_t i, std::size_t j, std::size_t k, const Mat& x, const Mat& y) {
    // x: parts[j] -> parts[i], y: parts[k] -> parts[j]; returns class of "y then x".
    return class_in(i, k, compose(rep_map(j, k, y), rep_map(i, j, x)));
  };
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      std::size_t d = h0_dim(i, j);
      if (i != j) {
        blocks[i][j].basis = Mat::identity(f, d);
        continue;
      }
      auto mul = [&](const Mat& x, const Mat& y) { return product_class(i, i, i, x, y); };
      std::vector<Mat> rad;
      for (std::size_t k = 0; k < d; ++k) {
        Mat x = Mat::identity(f, d).row_mat(k);
        auto lam = residue_scalar(f, x, identity[i], mul);
        if (!lam) throw AlgebraError(AlgebraError::Code::NotBasic, "endomorphism ring of a part is not local with residue field K");
        rad.push_back(x - identity[i].scaled(*lam));
      }
      Mat radm = row_basis(vstack(f, d, rad));
      if (radm.rows() != d - 1) throw AlgebraError(AlgebraError::Code::NotBasic, "endomorphism ring of a part is not local");
      blocks[i][j].basis = vstack(identity[i], radm);
    }
  // Global basis.
  Algebra::Spec spec;
  spec.field = f;
  struct Elem {
    std::size_t i, j;
    Mat coords;
  };
  std::vector<Elem> elems;
  std::vector<std::vector<std::size_t>> offset(r, std::vector<std::size_t>(r));
  for (std::size_t i = 0; i < r; ++i) spec.idempotents.push_back(0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      offset[i][j] = elems.size();
      const Mat& b = blocks[i][j].basis;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        if (i == j && k == 0) {
          spec.idempotents[i] = elems.size();
          spec.labels.push_back("e" + std::to_string(i + 1));
        } else {
          spec.labels.push_back("g" + std::to_string(i + 1) + std::to_string(j + 1) + "_" + std::to_string(k + 1));
        }
        elems.push_back({i, j, b.row_mat(k)});
        spec.left_vertex.push_back(static_cast<int>(i));
        spec.right_vertex.push_back(static_cast<int>(j));
        spec.path_length.push_back(i == j && k == 0 ? 0 : -1);
      }
    }
  spec.products.assign(elems.size(), std::vector<SparseVec>(elems.size()));
  for (std::size_t p = 0; p < elems.size(); ++p)
    for (std::size_t q = 0; q < elems.size(); ++q) {
      const Elem& x = elems[p];
      const Elem& y = elems[q];
      if (x.j != y.i) continue;
      Mat c = product_class(x.i, x.j, y.j, x.coords, y.coords);
      if (c.is_zero()) continue;
      const Mat& b = blocks[x.i][y.j].basis;
      auto s = solve_left(b, c);
      if (!s) throw InternalInvariantViolation("product outside the block basis");
      SparseVec sv;
      for (std::size_t k = 0; k < s->cols(); ++k)
        if ((*s)(0, k) != 0) sv.emplace_back(offset[x.i][y.j] + k, (*s)(0, k));
      spec.products[p][q] = std::move(sv);
    }
  return Algebra::create(std::move(spec));
}

TiltingReport check_tilting(const RickardResult& r) {
  TiltingReport rep;
  const AlgebraPtr& a = r.t.front().algebra();
  rep.t = direct_sum(a, r.t).sum;
  for (const auto& t : r.t) rep.nu_inv_parts.push_back(nu_inverse_complex(t));
  rep.nu_inv_t = direct_sum(a, rep.nu_inv_parts).sum;
  std::map<int, std::size_t> dims;
  if (!rep.nu_inv_t.is_zero()) dims = HomComplex(rep.nu_inv_t, rep.nu_inv_t).cohomology_dims();
  for (const auto& [m, d] : dims)
    if (m <= 0) rep.gamma_tilde_dims[m] = d;
  std::size_t n = r.t.size();
  rep.cartan.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Complex& src = rep.nu_inv_parts[j];
      const Complex& dst = rep.nu_inv_parts[i];
      if (src.is_zero() || dst.is_zero()) continue;
      HomComplex hc(src, dst, -1, 1);
      rep.cartan[i][j] = hc.cohomology(0);
    }
  bool certified = r.all_certified();
  std::optional<int> negative, positive;
  for (const auto& [m, d] : dims) {
    if (m < 0) negative = m;
    if (m > 0 && !positive) positive = m;
  }
  if (!certified) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "some T_i lacks a certified defining property";
  } else if (positive) {
    if (certified)
      throw InternalInvariantViolation("Hom(nu^-1 T, Sigma^" + std::to_string(*positive) + " nu^-1 T) is nonzero");
    rep.verdict = Verdict::Inconclusive;
    rep.note = "positive self-extensions in degree " + std::to_string(*positive) + " of an uncertified result";
  } else if (negative) {
    rep.verdict = Verdict::NotTilting;
    rep.witness = *negative;
  } else {
    rep.verdict = Verdict::Tilting;
  }
  if (rep.verdict != Verdict::Inconclusive) rep.gamma = gamma_algebra(rep.nu_inv_parts);
  return rep;
}

}  // namespace tilt
