#include "tilt/complex.hpp"

#include <algorithm>
#include <sstream>

namespace tilt {

namespace {

const std::vector<Summand>& no_summands() {
  static const std::vector<Summand> empty;
  return empty;
}

Module sum_of(const AlgebraPtr& a, const std::vector<Summand>& ss) {
  Module m = Module::zero(a);
  for (const auto& s : ss) m = direct_sum(m, s.module);
  return m;
}

Mat sign(const Mat& m, int k) { return k % 2 == 0 ? m : -m; }

std::size_t summands_dim(const std::vector<Summand>& ss) {
  std::size_t d = 0;
  for (const auto& s : ss) d += s.module.dim();
  return d;
}

}  // namespace

std::string Summand::name() const {
  switch (kind) {
    case SummandKind::P: return "P" + std::to_string(vertex + 1);
    case SummandKind::I: return "I" + std::to_string(vertex + 1);
    case SummandKind::S: return "S" + std::to_string(vertex + 1);
    case SummandKind::Other: break;
  }
  return "M" + std::to_string(module.dim());
}

Summand make_summand(const AlgebraPtr& a, SummandKind kind, int vertex) {
  switch (kind) {
    case SummandKind::P: return {kind, vertex, projective_module(a, vertex)};
    case SummandKind::I: return {kind, vertex, injective_module(a, vertex)};
    case SummandKind::S: return {kind, vertex, simple_module(a, vertex)};
    case SummandKind::Other: break;
  }
  throw ComplexError("make_summand needs a tagged kind");
}

Summand other_summand(Module m) { return {SummandKind::Other, -1, std::move(m)}; }

Complex::Complex(AlgebraPtr alg, int lo, std::vector<std::vector<Summand>> terms, std::vector<Mat> diffs)
    : alg_(std::move(alg)), lo_(lo), summands_(std::move(terms)), diffs_(std::move(diffs)) {
  if (summands_.empty()) {
    lo_ = 0;
    diffs_.clear();
    return;
  }
  if (diffs_.size() + 1 != summands_.size()) throw ComplexError("complex needs one differential per adjacent pair of degrees");
  for (const auto& ss : summands_) {
    for (const auto& s : ss)
      if (!s.module.algebra()->same_structure(*alg_)) throw ComplexError("summand over a different algebra");
    terms_.push_back(sum_of(alg_, ss));
  }
  for (std::size_t k = 0; k < diffs_.size(); ++k)
    if (diffs_[k].rows() != terms_[k].dim() || diffs_[k].cols() != terms_[k + 1].dim())
      throw ComplexError("differential in degree " + std::to_string(lo_ + static_cast<int>(k)) + " has the wrong shape");
}

Complex Complex::stalk(const Summand& s, int degree) {
  return Complex(s.module.algebra(), degree, {{s}}, {});
}

Complex Complex::stalk(const Module& m, int degree) { return stalk(other_summand(m), degree); }

bool Complex::is_zero() const { return total_dim() == 0; }

std::size_t Complex::dim(int n) const {
  if (n < lo_ || n > hi()) return 0;
  return terms_[static_cast<std::size_t>(n - lo_)].dim();
}

std::size_t Complex::total_dim() const {
  std::size_t t = 0;
  for (const auto& m : terms_) t += m.dim();
  return t;
}

const Module& Complex::term(int n) const {
  if (n < lo_ || n > hi()) {
    thread_local std::map<const Algebra*, Module> zeros;
    auto it = zeros.find(alg_.get());
    if (it == zeros.end() || it->second.algebra() != alg_) it = zeros.insert_or_assign(alg_.get(), Module::zero(alg_)).first;
    return it->second;
  }
  return terms_[static_cast<std::size_t>(n - lo_)];
}

const std::vector<Summand>& Complex::summands(int n) const {
  if (n < lo_ || n > hi()) return no_summands();
  return summands_[static_cast<std::size_t>(n - lo_)];
}

Mat Complex::d(int n) const {
  if (n >= lo_ && n < hi()) return diffs_[static_cast<std::size_t>(n - lo_)];
  return Mat(alg_->field(), dim(n), dim(n + 1));
}

std::string Complex::check() const {
  for (int n = lo_; n < hi(); ++n) {
    if (!is_module_map(term(n), term(n + 1), d(n))) return "d^" + std::to_string(n) + " is not a module map";
    if (n + 1 < hi() && !(d(n) * d(n + 1)).is_zero()) return "d^2 != 0 in degree " + std::to_string(n);
  }
  return {};
}

Complex Complex::trimmed() const {
  if (is_zero()) return Complex(alg_);
  int a = lo_, b = hi();
  while (dim(a) == 0) ++a;
  while (dim(b) == 0) --b;
  if (a == lo_ && b == hi()) return *this;
  std::vector<std::vector<Summand>> ss;
  std::vector<Mat> ds;
  for (int n = a; n <= b; ++n) {
    ss.push_back(summands(n));
    if (n < b) ds.push_back(d(n));
  }
  return Complex(alg_, a, std::move(ss), std::move(ds));
}

bool Complex::all_of_kind(SummandKind k) const {
  for (const auto& ss : summands_)
    for (const auto& s : ss)
      if (s.kind != k) return false;
  return true;
}

std::string Complex::describe() const {
  Complex t = trimmed();
  if (t.is_zero()) return "0";
  std::ostringstream os;
  os << "[";
  for (int n = t.lo(); n <= t.hi(); ++n) {
    if (n > t.lo()) os << " -> ";
    const auto& ss = t.summands(n);
    if (ss.empty()) os << "0";
    for (std::size_t i = 0; i < ss.size(); ++i) os << (i ? "+" : "") << ss[i].name();
  }
  os << "] (" << t.lo() << ".." << t.hi() << ")";
  return os.str();
}

bool operator==(const Complex& a, const Complex& b) {
  Complex x = a.trimmed(), y = b.trimmed();
  if (x.is_zero() || y.is_zero()) return x.is_zero() && y.is_zero();
  if (!x.alg_->same_structure(*y.alg_) || x.lo_ != y.lo_ || x.hi() != y.hi()) return false;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    const auto& s = x.summands(n);
    const auto& t = y.summands(n);
    if (s.size() != t.size()) return false;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i].kind != t[i].kind || s[i].vertex != t[i].vertex || !(s[i].module == t[i].module)) return false;
    if (!(x.d(n) == y.d(n))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Mat ChainMap::at(int n) const {
  auto it = comp.find(n);
  if (it != comp.end()) return it->second;
  return Mat(src.algebra()->field(), src.dim(n), dst.dim(n));
}

std::string ChainMap::check() const {
  int a = std::min(src.lo(), dst.lo()) - 1, b = std::max(src.hi(), dst.hi()) + 1;
  for (int n = a; n <= b; ++n) {
    Mat f = at(n);
    if (f.rows() != src.dim(n) || f.cols() != dst.dim(n)) return "component in degree " + std::to_string(n) + " has the wrong shape";
    if (!is_module_map(src.term(n), dst.term(n), f)) return "component in degree " + std::to_string(n) + " is not a module map";
    if (!(src.d(n) * at(n + 1) == f * dst.d(n))) return "map does not commute with differentials in degree " + std::to_string(n);
  }
  return {};
}

ChainMap identity_map(const Complex& x) {
  ChainMap f{x, x, {}};
  for (int n = x.lo(); n <= x.hi(); ++n) f.comp[n] = Mat::identity(x.algebra()->field(), x.dim(n));
  return f;
}

ChainMap compose(const ChainMap& f, const ChainMap& g) {
  ChainMap h{f.src, g.dst, {}};
  for (const auto& [n, m] : f.comp) {
    auto it = g.comp.find(n);
    if (it != g.comp.end()) h.comp[n] = m * it->second;
  }
  return h;
}

Complex shift(const Complex& x, int m) {
  if (x.is_zero()) return Complex(x.algebra());
  std::vector<std::vector<Summand>> ss;
  std::vector<Mat> ds;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    ss.push_back(x.summands(n));
    if (n < x.hi()) ds.push_back(sign(x.d(n), m));
  }
  return Complex(x.algebra(), x.lo() - m, std::move(ss), std::move(ds));
}

ChainMap shift(const ChainMap& f, int m) {
  ChainMap g{shift(f.src, m), shift(f.dst, m), {}};
  for (const auto& [n, c] : f.comp) g.comp[n - m] = c;
  return g;
}

ConeResult cone(const ChainMap& f) {
  const Complex& x = f.src;
  const Complex& y = f.dst;
  const AlgebraPtr& alg = y.algebra() ? y.algebra() : x.algebra();
  const Field& fld = alg->field();
  int lo = std::min(x.is_zero() ? y.lo() : x.lo() - 1, y.is_zero() ? x.lo() - 1 : y.lo());
  int hi = std::max(x.is_zero() ? y.hi() : x.hi() - 1, y.is_zero() ? x.hi() - 1 : y.hi());
  if (x.is_zero() && y.is_zero()) {
    Complex z(alg);
    return {z, ChainMap{y, z, {}}, ChainMap{z, shift(x, 1), {}}};
  }
  std::vector<std::vector<Summand>> ss;
  std::vector<Mat> ds;
  for (int n = lo; n <= hi; ++n) {
    std::vector<Summand> s = x.summands(n + 1);
    const auto& t = y.summands(n);
    s.insert(s.end(), t.begin(), t.end());
    ss.push_back(std::move(s));
    if (n < hi) {
      std::size_t xa = x.dim(n + 1), ya = y.dim(n), xb = x.dim(n + 2), yb = y.dim(n + 1);
      Mat dc(fld, xa + ya, xb + yb);
      dc.set_block(0, 0, -x.d(n + 1));
      dc.set_block(0, xb, f.at(n + 1));
      dc.set_block(xa, xb, y.d(n));
      ds.push_back(std::move(dc));
    }
  }
  Complex c(alg, lo, std::move(ss), std::move(ds));
  Complex sx = shift(x, 1);
  ChainMap to{y, c, {}}, from{c, sx, {}};
  for (int n = lo; n <= hi; ++n) {
    std::size_t xa = x.dim(n + 1), ya = y.dim(n);
    Mat t(fld, ya, xa + ya), p(fld, xa + ya, xa);
    t.set_block(0, xa, Mat::identity(fld, ya));
    p.set_block(0, 0, Mat::identity(fld, xa));
    to.comp[n] = t;
    from.comp[n] = p;
  }
  return {c, to, from};
}

SumResult direct_sum(const AlgebraPtr& alg, const std::vector<Complex>& xs) {
  const Field& f = alg->field();
  int lo = 0, hi = -1;
  bool any = false;
  for (const auto& x : xs) {
    if (!x.algebra() || x.is_zero()) continue;
    if (!x.algebra()->same_structure(*alg)) throw AlgebraError(AlgebraError::Code::AlgebraMismatch, "direct sum of complexes over different algebras");
    lo = any ? std::min(lo, x.lo()) : x.lo();
    hi = any ? std::max(hi, x.hi()) : x.hi();
    any = true;
  }
  SumResult r;
  if (!any) {
    r.sum = Complex(alg);
  } else {
    std::vector<std::vector<Summand>> ss;
    std::vector<Mat> ds;
    for (int n = lo; n <= hi; ++n) {
      std::vector<Summand> s;
      for (const auto& x : xs)
        if (x.algebra()) {
          const auto& t = x.summands(n);
          s.insert(s.end(), t.begin(), t.end());
        }
      ss.push_back(std::move(s));
      if (n < hi) {
        Mat d(f, 0, 0);
        for (const auto& x : xs)
          if (x.algebra()) d = block_diag(d, x.d(n));
        ds.push_back(std::move(d));
      }
    }
    r.sum = Complex(alg, lo, std::move(ss), std::move(ds));
  }
  std::map<int, std::size_t> offset;
  for (const auto& x : xs) {
    ChainMap in{x, r.sum, {}}, out{r.sum, x, {}};
    if (x.algebra() && !x.is_zero())
      for (int n = x.lo(); n <= x.hi(); ++n) {
        std::size_t o = offset[n], dx = x.dim(n), ds = r.sum.dim(n);
        Mat i(f, dx, ds), p(f, ds, dx);
        i.set_block(0, o, Mat::identity(f, dx));
        p.set_block(o, 0, Mat::identity(f, dx));
        in.comp[n] = i;
        out.comp[n] = p;
        offset[n] += dx;
      }
    r.inj.push_back(std::move(in));
    r.proj.push_back(std::move(out));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Gaussian elimination.

namespace {

struct Work {
  AlgebraPtr alg;
  int lo = 0;
  std::vector<std::vector<Summand>> ss;
  std::vector<Mat> d;  // d[k]: degree lo+k -> lo+k+1, last one maps to 0

  std::size_t dim(std::size_t k) const { return summands_dim(ss[k]); }
  std::size_t offset(std::size_t k, std::size_t s) const {
    std::size_t o = 0;
    for (std::size_t i = 0; i < s; ++i) o += ss[k][i].module.dim();
    return o;
  }
};

struct Witness {
  bool on = false;
  std::vector<Mat> inc, proj, h;  // per working degree (h[k]: X^k -> X^{k-1})
};

std::vector<std::size_t> range(std::size_t a, std::size_t b) {
  std::vector<std::size_t> r;
  for (std::size_t i = a; i < b; ++i) r.push_back(i);
  return r;
}

std::vector<std::size_t> range_except(std::size_t n, std::size_t a, std::size_t b) {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i < n; ++i)
    if (i < a || i >= b) r.push_back(i);
  return r;
}

// Eliminates summand s in degree k against summand t in degree k+1, whose
// block of d is invertible with inverse phi_inv.
void eliminate(Work& w, Witness& wit, std::size_t k, std::size_t s, std::size_t t, const Mat& phi_inv) {
  const Field& f = w.alg->field();
  std::size_t n0 = w.dim(k), n1 = w.dim(k + 1);
  std::size_t bo = w.offset(k, s), bd = w.ss[k][s].module.dim();
  std::size_t to = w.offset(k + 1, t), td = w.ss[k + 1][t].module.dim();
  auto B = range(bo, bo + bd), C = range_except(n0, bo, bo + bd);
  auto Bp = range(to, to + td), D = range_except(n1, to, to + td);
  const Mat& dk = w.d[k];
  Mat beta = dk.select_rows(B).select_cols(D);
  Mat gamma = dk.select_rows(C).select_cols(Bp);
  Mat delta = dk.select_rows(C).select_cols(D);
  Mat gphi = gamma * phi_inv;  // |C| x |B|
  Mat phib = phi_inv * beta;   // |B'| x |D|

  if (wit.on) {
    Mat pi_k(f, n0, C.size()), pi_k1(f, n1, D.size());
    for (std::size_t i = 0; i < C.size(); ++i) pi_k(C[i], i) = 1;
    for (std::size_t i = 0; i < D.size(); ++i) pi_k1(D[i], i) = 1;
    for (std::size_t i = 0; i < Bp.size(); ++i)
      for (std::size_t j = 0; j < D.size(); ++j) pi_k1(Bp[i], j) = f.neg(phib(i, j));
    Mat io_k(f, C.size(), n0), io_k1(f, D.size(), n1);
    for (std::size_t i = 0; i < C.size(); ++i) {
      io_k(i, C[i]) = 1;
      for (std::size_t j = 0; j < B.size(); ++j) io_k(i, B[j]) = f.neg(gphi(i, j));
    }
    for (std::size_t i = 0; i < D.size(); ++i) io_k1(i, D[i]) = 1;
    Mat hl(f, n1, n0);
    for (std::size_t i = 0; i < Bp.size(); ++i)
      for (std::size_t j = 0; j < B.size(); ++j) hl(Bp[i], B[j]) = phi_inv(i, j);
    // h^{k+1} += P^{k+1} hl I^k with the old total maps.
    wit.h[k + 1] = wit.h[k + 1] + wit.proj[k + 1] * hl * wit.inc[k];
    wit.proj[k] = wit.proj[k] * pi_k;
    wit.proj[k + 1] = wit.proj[k + 1] * pi_k1;
    wit.inc[k] = io_k * wit.inc[k];
    wit.inc[k + 1] = io_k1 * wit.inc[k + 1];
  }

  Mat new_dk = delta - gphi * beta;
  if (k > 0) w.d[k - 1] = w.d[k - 1].select_cols(C);
  w.d[k + 1] = w.d[k + 1].select_rows(D);
  w.d[k] = new_dk;
  w.ss[k].erase(w.ss[k].begin() + static_cast<long>(s));
  w.ss[k + 1].erase(w.ss[k + 1].begin() + static_cast<long>(t));
}

bool could_be_isomorphic(const Summand& a, const Summand& b) {
  if (a.module.dim() != b.module.dim() || a.module.dim() == 0) return false;
  if (a.kind != SummandKind::Other && a.kind == b.kind) return a.vertex == b.vertex;
  return a.module.dimension_vector() == b.module.dimension_vector();
}

MinimizeResult run_minimize(const Complex& x, bool witnesses) {
  MinimizeResult res;
  const AlgebraPtr& alg = x.algebra();
  if (x.is_zero()) {
    Complex z(alg);
    res.min = z;
    res.inc = ChainMap{z, x, {}};
    res.proj = ChainMap{x, z, {}};
    return res;
  }
  const Field& f = alg->field();
  Work w{alg, x.lo(), {}, {}};
  for (int n = x.lo(); n <= x.hi(); ++n) {
    w.ss.push_back(x.summands(n));
    w.d.push_back(x.d(n));
  }
  std::size_t len = w.ss.size();
  Witness wit;
  wit.on = witnesses;
  if (witnesses)
    for (std::size_t k = 0; k < len; ++k) {
      std::size_t dk = w.dim(k);
      wit.inc.push_back(Mat::identity(f, dk));
      wit.proj.push_back(Mat::identity(f, dk));
      wit.h.push_back(Mat(f, dk, k ? w.dim(k - 1) : 0));
    }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k + 1 < len && !changed; ++k)
      for (std::size_t s = 0; s < w.ss[k].size() && !changed; ++s)
        for (std::size_t t = 0; t < w.ss[k + 1].size() && !changed; ++t) {
          if (!could_be_isomorphic(w.ss[k][s], w.ss[k + 1][t])) continue;
          std::size_t bo = w.offset(k, s), bd = w.ss[k][s].module.dim();
          std::size_t to = w.offset(k + 1, t);
          Mat phi = w.d[k].block(bo, to, bd, bd);
          if (phi.is_zero()) continue;
          auto inv = inverse(phi);
          if (!inv) continue;
          eliminate(w, wit, k, s, t, *inv);
          changed = true;
        }
  }
  std::vector<Mat> ds(w.d.begin(), w.d.end() - 1);
  res.min = Complex(alg, w.lo, w.ss, std::move(ds));
  if (witnesses) {
    res.inc = ChainMap{res.min, x, {}};
    res.proj = ChainMap{x, res.min, {}};
    for (std::size_t k = 0; k < len; ++k) {
      int n = w.lo + static_cast<int>(k);
      res.inc.comp[n] = wit.inc[k];
      res.proj.comp[n] = wit.proj[k];
      if (k > 0) res.h[n] = wit.h[k];
    }
  }
  Complex trimmed = res.min.trimmed();
  if (!(trimmed.lo() == res.min.lo() && trimmed.hi() == res.min.hi())) {
    res.min = trimmed;
    res.inc.src = trimmed;
    res.proj.dst = trimmed;
    for (auto* m : {&res.inc.comp, &res.proj.comp})
      for (auto it = m->begin(); it != m->end();) {
        if (it->second.rows() * it->second.cols() == 0 && (it->first < trimmed.lo() || it->first > trimmed.hi()))
          it = m->erase(it);
        else
          ++it;
      }
  }
  return res;
}

}  // namespace

MinimizeResult minimize(const Complex& x) { return run_minimize(x, true); }
Complex minimized(const Complex& x) { return run_minimize(x, false).min; }

std::string check_homotopy(const Complex& x, const MinimizeResult& r) {
  if (auto e = r.inc.check(); !e.empty()) return "inclusion: " + e;
  if (auto e = r.proj.check(); !e.empty()) return "projection: " + e;
  const Field& f = x.algebra()->field();
  for (int n = r.min.lo(); n <= r.min.hi(); ++n)
    if (!(r.inc.at(n) * r.proj.at(n) == Mat::identity(f, r.min.dim(n)))) return "proj . inc != id in degree " + std::to_string(n);
  auto h = [&](int n) {
    auto it = r.h.find(n);
    return it != r.h.end() ? it->second : Mat(f, x.dim(n), x.dim(n - 1));
  };
  for (int n = x.lo(); n <= x.hi(); ++n) {
    Mat lhs = Mat::identity(f, x.dim(n)) - r.proj.at(n) * r.inc.at(n);
    Mat rhs = x.d(n) * h(n + 1) + h(n) * x.d(n - 1);
    if (!(lhs == rhs)) return "homotopy identity fails in degree " + std::to_string(n);
  }
  return {};
}

// ---------------------------------------------------------------------------

std::size_t cohomology_dim(const Complex& x, int n) {
  return x.dim(n) - rank(x.d(n)) - rank(x.d(n - 1));
}

std::map<int, std::size_t> cohomology_dims(const Complex& x) {
  std::map<int, std::size_t> out;
  for (int n = x.lo(); n <= x.hi(); ++n)
    if (auto c = cohomology_dim(x, n)) out[n] = c;
  return out;
}

bool is_acyclic(const Complex& x) { return cohomology_dims(x).empty(); }

Module cohomology_module(const Complex& x, int n) {
  const Module& m = x.term(n);
  Mat z = left_kernel(x.d(n));
  auto [zm, incl] = submodule(m, z);
  Mat b = row_basis(x.d(n - 1));
  if (b.rows() == 0 || zm.dim() == 0) return zm;
  RowCoordinates rc(incl);
  return quotient_module(zm, rc.coords(b)).first;
}

std::size_t VecComplex::dim(int n) const {
  if (n < lo || n >= lo + static_cast<int>(dims.size())) return 0;
  return dims[static_cast<std::size_t>(n - lo)];
}

Mat VecComplex::diff(int n) const {
  if (n >= lo && n + 1 < lo + static_cast<int>(dims.size())) return d[static_cast<std::size_t>(n - lo)];
  return Mat(field, dim(n), dim(n + 1));
}

std::size_t VecComplex::cohomology(int n) const { return dim(n) - rank(diff(n)) - rank(diff(n - 1)); }

Mat VecComplex::cohomology_basis(int n) const {
  Mat z = left_kernel(diff(n));
  Mat b = row_basis(diff(n - 1));
  return z.select_rows(complement_rows(b, z));
}

std::optional<Mat> VecComplex::class_of(int n, const Mat& z) const {
  if (!(z * diff(n)).is_zero()) return std::nullopt;
  Mat reps = cohomology_basis(n);
  Mat b = row_basis(diff(n - 1));
  Mat all = vstack(reps, b);
  if (all.rows() == 0) return Mat(field, 1, 0);
  auto c = solve_left(all, z);
  if (!c) throw ComplexError("cocycle outside Z^n");
  return c->block(0, 0, 1, reps.rows());
}

// ---------------------------------------------------------------------------

HomComplex::HomComplex(const Complex& p, const Complex& y) : p_(p), y_(y) {
  if (p.is_zero() || y.is_zero()) {
    vec_.field = (p.algebra() ? p.algebra() : y.algebra())->field();
    vec_.lo = 0;
    return;
  }
  build(y.lo() - p.hi(), y.hi() - p.lo());
}

HomComplex::HomComplex(const Complex& p, const Complex& y, int deg_lo, int deg_hi) : p_(p), y_(y) {
  build(deg_lo, deg_hi);
}

void HomComplex::build(int deg_lo, int deg_hi) {
  const Field& f = (p_.algebra() ? p_.algebra() : y_.algebra())->field();
  vec_.field = f;
  vec_.lo = deg_lo;
  // One extra degree on each side so the boundary differentials are right.
  int a = deg_lo - 1, b = deg_hi + 1;
  std::vector<std::vector<Block>> blocks;
  std::vector<std::size_t> dims;
  for (int n = a; n <= b; ++n) {
    std::vector<Block> bl;
    std::size_t off = 0;
    if (!p_.is_zero() && !y_.is_zero())
      for (int k = p_.lo(); k <= p_.hi(); ++k) {
        if (p_.dim(k) == 0 || y_.dim(k + n) == 0) continue;
        HomSpace hs(p_.term(k), y_.term(k + n));
        if (hs.dim() == 0) continue;
        std::size_t dd = hs.dim();
        bl.push_back({k, off, std::move(hs)});
        off += dd;
      }
    dims.push_back(off);
    blocks.push_back(std::move(bl));
  }
  auto find_block = [&](std::size_t idx, int k) -> const Block* {
    for (const auto& bl : blocks[idx])
      if (bl.k == k) return &bl;
    return nullptr;
  };
  std::vector<Mat> diffs;
  for (std::size_t idx = 0; idx + 1 < blocks.size(); ++idx) {
    int n = a + static_cast<int>(idx);
    Mat dm(f, dims[idx], dims[idx + 1]);
    for (const auto& bl : blocks[idx])
      for (std::size_t i = 0; i < bl.space.dim(); ++i) {
        const Mat& g = bl.space.basis()[i];
        std::size_t row = bl.offset + i;
        // component at k: g d_Y ; at k-1: -(-1)^n d_P g
        std::vector<std::pair<int, Mat>> parts;
        parts.emplace_back(bl.k, g * y_.d(bl.k + n));
        Mat other = p_.d(bl.k - 1) * g;
        parts.emplace_back(bl.k - 1, n % 2 == 0 ? -other : other);
        for (const auto& [k, m] : parts) {
          if (m.is_zero()) continue;
          const Block* tb = find_block(idx + 1, k);
          if (!tb) throw ComplexError("hom complex differential leaves the computed blocks");
          Mat c = tb->space.coordinates(m);
          for (std::size_t j = 0; j < c.cols(); ++j) dm(row, tb->offset + j) = f.add(dm(row, tb->offset + j), c(0, j));
        }
      }
    diffs.push_back(std::move(dm));
  }
  // Keep the inner degrees deg_lo..deg_hi, but remember boundary maps through
  // the padded differentials.
  vec_.dims.assign(dims.begin() + 1, dims.end() - 1);
  blocks_.assign(std::make_move_iterator(blocks.begin() + 1), std::make_move_iterator(blocks.end() - 1));
  vec_.d.assign(diffs.begin() + 1, diffs.end() - 1);
  pad_in_ = diffs.front();
  pad_out_ = diffs.back();
}

std::size_t HomComplex::cohomology(int n) const {
  if (n < deg_lo() || n > deg_hi()) throw ComplexError("degree outside the computed hom complex");
  Mat in = n == deg_lo() ? pad_in_ : vec_.diff(n - 1);
  Mat out = n == deg_hi() ? pad_out_ : vec_.diff(n);
  return vec_.dim(n) - rank(in) - rank(out);
}

std::map<int, std::size_t> HomComplex::cohomology_dims() const {
  std::map<int, std::size_t> out;
  for (int n = deg_lo(); n <= deg_hi(); ++n)
    if (auto c = cohomology(n)) out[n] = c;
  return out;
}

GradedMap HomComplex::to_map(int n, const Mat& coords) const {
  GradedMap g{n, {}};
  for (const auto& bl : blocks_[static_cast<std::size_t>(n - deg_lo())]) {
    Mat c = coords.block(0, bl.offset, 1, bl.space.dim());
    g.comp[bl.k] = bl.space.combine(c);
  }
  return g;
}

Mat HomComplex::coords(const GradedMap& f) const {
  const auto& bls = blocks_[static_cast<std::size_t>(f.degree - deg_lo())];
  Mat out(vec_.field, 1, vec_.dim(f.degree));
  for (const auto& [k, m] : f.comp) {
    if (m.is_zero()) continue;
    const Block* tb = nullptr;
    for (const auto& bl : bls)
      if (bl.k == k) tb = &bl;
    if (!tb) throw ComplexError("graded map component outside the hom complex");
    out.set_block(0, tb->offset, tb->space.coordinates(m));
  }
  return out;
}

std::vector<GradedMap> HomComplex::cohomology_basis(int n) const {
  Mat in = n == deg_lo() ? pad_in_ : vec_.diff(n - 1);
  Mat out = n == deg_hi() ? pad_out_ : vec_.diff(n);
  Mat z = left_kernel(out);
  Mat reps = z.select_rows(complement_rows(row_basis(in), z));
  std::vector<GradedMap> res;
  for (std::size_t i = 0; i < reps.rows(); ++i) res.push_back(to_map(n, reps.row_mat(i)));
  return res;
}

GradedMap hom_differential(const Complex& p, const Complex& y, const GradedMap& f) {
  GradedMap g{f.degree + 1, {}};
  int n = f.degree;
  for (const auto& [k, m] : f.comp) {
    Mat a = m * y.d(k + n);
    auto it = g.comp.find(k);
    g.comp[k] = it == g.comp.end() ? a : it->second + a;
    Mat b = p.d(k - 1) * m;
    if (n % 2 == 0) b = -b;
    it = g.comp.find(k - 1);
    g.comp[k - 1] = it == g.comp.end() ? b : it->second + b;
  }
  return g;
}

GradedMap compose(const GradedMap& f, const GradedMap& g) {
  GradedMap h{f.degree + g.degree, {}};
  for (const auto& [k, m] : f.comp) {
    auto it = g.comp.find(k + f.degree);
    if (it != g.comp.end()) h.comp[k] = m * it->second;
  }
  return h;
}

ChainMap as_chain_map(const Complex& src, const Complex& dst, const GradedMap& f) {
  if (f.degree != 0) throw ComplexError("chain maps have degree 0");
  return ChainMap{src, dst, f.comp};
}

}  // namespace tilt
