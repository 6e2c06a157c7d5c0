#include "tilt/ainf.hpp"

#include <algorithm>
#include <functional>

#include "tilt/derived.hpp"

namespace tilt {

namespace {

using Code = AInfError::Code;

int sign(long n) { return n % 2 == 0 ? 1 : -1; }

Mat dense(const Field& f, std::size_t n, const SparseVec& v) {
  Mat r(f, 1, n);
  for (const auto& [k, c] : v) r(0, k) = f.add(r(0, k), c);
  return r;
}

SparseVec sparse(const Mat& row) {
  SparseVec v;
  for (std::size_t k = 0; k < row.cols(); ++k)
    if (row(0, k) != 0) v.emplace_back(k, row(0, k));
  return v;
}

std::string tuple_name(const std::vector<std::string>& labels, const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + labels[t[i]];
  return s + ")";
}

// Calls fn on every tuple of length n whose consecutive entries are composable.
void for_composable(std::size_t dim, int n, const std::function<bool(std::size_t, std::size_t)>& next_ok,
                    const std::function<bool(std::size_t)>& first_ok,
                    const std::function<void(const Tuple&)>& fn) {
  Tuple t;
  std::function<void()> rec = [&]() {
    if (static_cast<int>(t.size()) == n) {
      fn(t);
      return;
    }
    for (std::size_t b = 0; b < dim; ++b) {
      if (t.empty() ? !first_ok(b) : !next_ok(t.back(), b)) continue;
      t.push_back(b);
      rec();
      t.pop_back();
    }
  };
  rec();
}

// Left side of the Stasheff identity of arity n on a tuple, accumulated in
// `acc`. `deg(pos, b)` is the degree of basis element b at position pos;
// `first` looks up the operation whose first slot is position 0 (a module
// element for modules), `rest` the algebra operation.
using Lookup = std::function<const SparseVec*(const Tuple&)>;

bool stasheff_vanishes(const Field& f, std::vector<Scalar>& acc, const Tuple& t,
                       const std::function<int(std::size_t, std::size_t)>& deg, const Lookup& first,
                       const Lookup& rest) {
  int n = static_cast<int>(t.size());
  std::vector<std::size_t> touched;
  Tuple mid, args;
  for (int k = 2; k < n; ++k)
    for (int j = 0; j + k <= n; ++j) {
      int l = n - j - k;
      mid.assign(t.begin() + j, t.begin() + j + k);
      const SparseVec* v = j == 0 ? first(mid) : rest(mid);
      if (!v || v->empty()) continue;
      long before = 0;
      for (int s = 0; s < j; ++s) before += deg(static_cast<std::size_t>(s), t[static_cast<std::size_t>(s)]);
      bool neg = sign(static_cast<long>(j) * k + l) * sign(static_cast<long>(k) * before) < 0;
      for (const auto& [c, vc] : *v) {
        args.assign(t.begin(), t.begin() + j);
        args.push_back(c);
        args.insert(args.end(), t.begin() + j + k, t.end());
        const SparseVec* w = first(args);
        if (!w) continue;
        Scalar coef = neg ? f.neg(vc) : vc;
        for (const auto& [o, wc] : *w) {
          acc[o] = f.add(acc[o], f.mul(coef, wc));
          touched.push_back(o);
        }
      }
    }
  bool zero = true;
  for (std::size_t o : touched) {
    if (acc[o] != 0) zero = false;
    acc[o] = 0;
  }
  return zero;
}

}  // namespace

// ---------------------------------------------------------------------------

Mat AInfAlgebra::apply(const Tuple& args) const {
  auto it = m.find(args);
  if (it == m.end()) return Mat(field, 1, dim());
  return dense(field, dim(), it->second);
}

bool AInfAlgebra::composable(const Tuple& args) const {
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (right_vertex[args[i]] != left_vertex[args[i + 1]]) return false;
  return true;
}

std::map<int, std::size_t> AInfAlgebra::graded_dims() const {
  std::map<int, std::size_t> out;
  for (int d : degree) ++out[d];
  return out;
}

int AInfAlgebra::top_arity() const {
  int top = 0;
  for (const auto& [t, v] : m)
    if (!v.empty()) top = std::max(top, static_cast<int>(t.size()));
  return top;
}

std::string AInfAlgebra::check_stasheff(int cap) const {
  int top = std::min(cap, arity_cap) + 1;
  auto deg = [&](std::size_t, std::size_t b) { return degree[b]; };
  Lookup op = [&](const Tuple& a) -> const SparseVec* {
    auto it = m.find(a);
    return it == m.end() ? nullptr : &it->second;
  };
  std::vector<Scalar> acc(dim());
  for (int n = 3; n <= top; ++n) {
    std::string bad;
    for_composable(
        dim(), n, [&](std::size_t a, std::size_t b) { return right_vertex[a] == left_vertex[b]; },
        [](std::size_t) { return true; },
        [&](const Tuple& t) {
          if (!bad.empty()) return;
          if (!stasheff_vanishes(field, acc, t, deg, op, op))
            bad = "Stasheff identity fails in arity " + std::to_string(n) + " on " + tuple_name(labels, t);
        });
    if (!bad.empty()) return bad;
  }
  return "";
}

std::string AInfAlgebra::check_strict_unit() const {
  for (std::size_t e : idempotents)
    for (std::size_t x = 0; x < dim(); ++x) {
      Mat ex = apply({e, x}), xe = apply({x, e});
      Mat want_l(field, 1, dim()), want_r(field, 1, dim());
      if (left_vertex[x] == left_vertex[e]) want_l(0, x) = 1;
      if (right_vertex[x] == left_vertex[e]) want_r(0, x) = 1;
      if (!(ex == want_l) || !(xe == want_r)) return "unit law fails on " + labels[x];
    }
  for (const auto& [t, v] : m) {
    if (t.size() < 3 || v.empty()) continue;
    for (std::size_t b : t)
      if (std::find(idempotents.begin(), idempotents.end(), b) != idempotents.end())
        return "m_" + std::to_string(t.size()) + " is nonzero on " + tuple_name(labels, t);
  }
  return "";
}

std::string AInfAlgebra::check_positive() const {
  for (std::size_t b = 0; b < dim(); ++b) {
    if (degree[b] < 0) return "negative degree element " + labels[b];
    if (degree[b] == 0 && std::find(idempotents.begin(), idempotents.end(), b) == idempotents.end())
      return "degree 0 part exceeds the idempotents at " + labels[b];
  }
  return "";
}

// ---------------------------------------------------------------------------

MinimalModel kadeishvili_minimal_model(const DgAlgebraPtr& e, int arity_cap, int positive_cap) {
  const Field& f = e->field();
  std::size_t n = e->dim();
  int r = e->vertices();
  const Mat& d = e->d();

  // New basis of E adapted to E = B + H + C in every block and degree.
  std::vector<Mat> rows;
  std::vector<std::size_t> h_pos, b_pos;
  std::vector<Mat> b_partner;  // c with d(c) = b, per B row
  std::vector<int> h_degree;
  std::vector<int> h_left, h_right;
  std::vector<std::size_t> idem(static_cast<std::size_t>(r), SIZE_MAX);
  auto scatter = [&](const Mat& local, const std::vector<std::size_t>& idx) {
    Mat out(f, local.rows(), n);
    for (std::size_t i = 0; i < local.rows(); ++i)
      for (std::size_t k = 0; k < idx.size(); ++k) out(i, idx[k]) = local(i, k);
    return out;
  };
  for (int li = 0; li < r; ++li)
    for (int rj = 0; rj < r; ++rj) {
      std::map<int, std::vector<std::size_t>> idx;
      for (std::size_t b = 0; b < n; ++b)
        if (e->left_vertex(b) == li && e->right_vertex(b) == rj) idx[e->degree(b)].push_back(b);
      std::map<int, Mat> boundaries;  // full coordinates
      std::map<int, Mat> partners;
      for (const auto& [deg, ids] : idx) {
        Mat dn = d.select_rows(ids);
        Mat z = dn.is_zero() ? Mat::identity(f, ids.size()) : left_kernel(dn);
        auto extra = complement_rows(z, Mat::identity(f, ids.size()));
        Mat c = Mat::identity(f, ids.size()).select_rows(extra);
        Mat cf = scatter(c, ids);
        boundaries[deg + 1] = cf * d;
        partners[deg + 1] = cf;
      }
      for (const auto& [deg, ids] : idx) {
        Mat dn = d.select_rows(ids);
        Mat z = dn.is_zero() ? Mat::identity(f, ids.size()) : left_kernel(dn);
        Mat zf = scatter(z, ids);
        Mat bf = boundaries.count(deg) ? boundaries[deg] : Mat(f, 0, n);
        Mat cand = zf;
        bool diag0 = li == rj && deg == 0;
        if (diag0) cand = vstack(e->basis_vector(e->idempotent(li)), zf);
        Mat bl = bf.rows() ? bf.select_cols(ids) : Mat(f, 0, ids.size());
        Mat candl = cand.select_cols(ids);
        auto hsel = complement_rows(bl, candl);
        if (diag0 && (hsel.empty() || hsel.front() != 0))
          throw AInfError(Code::ContractionFailure, "identity at vertex " + std::to_string(li + 1) + " is a boundary");
        for (std::size_t k = 0; k < bf.rows(); ++k) {
          b_pos.push_back(rows.size());
          rows.push_back(bf.row_mat(k));
          b_partner.push_back(partners[deg].row_mat(k));
        }
        for (std::size_t k : hsel) {
          if (diag0 && k == 0) idem[static_cast<std::size_t>(li)] = h_pos.size();
          h_pos.push_back(rows.size());
          rows.push_back(cand.row_mat(k));
          h_degree.push_back(deg);
          h_left.push_back(li);
          h_right.push_back(rj);
        }
      }
      for (const auto& [deg, c] : partners)
        for (std::size_t k = 0; k < c.rows(); ++k) rows.push_back(c.row_mat(k));
    }
  Mat big = vstack(f, n, rows);
  auto inv = inverse(big);
  if (!inv) throw AInfError(Code::ContractionFailure, "adapted basis is not a basis");
  std::size_t dh = h_pos.size();
  Mat p = inv->select_cols(h_pos);                                   // n x dh
  Mat incl = big.select_rows(h_pos);                                 // dh x n
  Mat hom = inv->select_cols(b_pos) * vstack(f, n, b_partner);       // n x n
  if (!(d * hom + hom * d == Mat::identity(f, n) - p * incl))
    throw AInfError(Code::ContractionFailure, "homotopy equation fails");

  MinimalModel out;
  AInfAlgebra& a = out.alg;
  a.field = f;
  a.degree = h_degree;
  a.left_vertex = h_left;
  a.right_vertex = h_right;
  a.arity_cap = arity_cap;
  a.positive_cap = std::max(arity_cap, positive_cap);
  for (int v = 0; v < r; ++v) {
    if (idem[static_cast<std::size_t>(v)] == SIZE_MAX)
      throw AInfError(Code::ContractionFailure, "missing identity representative");
    a.idempotents.push_back(idem[static_cast<std::size_t>(v)]);
  }
  {
    std::map<std::pair<std::pair<int, int>, int>, int> counter;
    a.labels.resize(dh);
    for (int v = 0; v < r; ++v) a.labels[a.idempotents[static_cast<std::size_t>(v)]] = "e" + std::to_string(v + 1);
    for (std::size_t k = 0; k < dh; ++k) {
      if (!a.labels[k].empty()) continue;
      int c = ++counter[{{h_left[k], h_right[k]}, h_degree[k]}];
      a.labels[k] = "x" + std::to_string(h_left[k] + 1) + std::to_string(h_right[k] + 1) + "^" +
                    std::to_string(h_degree[k]) + (c > 1 ? "_" + std::to_string(c) : "");
    }
  }
  out.reps = incl;

  // Transfer in the suspended convention; Q_k has degree 0 so no Koszul signs
  // appear, and b_2(sx, sy) = (-1)^{|x|+1} s(xy).
  std::map<Tuple, Mat> qmemo;
  auto edeg = [&](const Tuple& t) {
    long s = 1;
    for (std::size_t b : t) s += h_degree[b] - 1;
    return s;
  };
  std::function<Mat(const Tuple&)> small_q;
  std::function<Mat(const Tuple&)> big_q = [&](const Tuple& t) -> Mat {
    if (t.size() == 1) return incl.row_mat(t[0]);
    auto it = qmemo.find(t);
    if (it != qmemo.end()) return it->second;
    Mat v = small_q(t) * hom;
    qmemo.emplace(t, v);
    return v;
  };
  small_q = [&](const Tuple& t) -> Mat {
    Mat total(f, 1, n);
    for (std::size_t s = 1; s < t.size(); ++s) {
      Tuple lt(t.begin(), t.begin() + static_cast<long>(s)), rt(t.begin() + static_cast<long>(s), t.end());
      Mat x = big_q(lt);
      if (x.is_zero()) continue;
      Mat y = big_q(rt);
      if (y.is_zero()) continue;
      Mat xy = e->mul(x, y);
      total = sign(edeg(lt) + 1) > 0 ? total + xy : total - xy;
    }
    return total;
  };
  auto allowed = [&](int k, std::size_t x) { return k <= arity_cap || h_degree[x] > 0; };
  for (int k = 2; k <= a.positive_cap; ++k) {
    for_composable(
        dh, k, [&](std::size_t x, std::size_t y) { return h_right[x] == h_left[y] && allowed(k, y); },
        [&](std::size_t x) { return allowed(k, x); },
        [&](const Tuple& t) {
          Mat v = small_q(t) * p;
          if (v.is_zero()) return;
          long s = static_cast<long>(k) * (k - 1) / 2;
          for (int i = 0; i < k; ++i) s += static_cast<long>(k - 1 - i) * h_degree[t[static_cast<std::size_t>(i)]];
          if (sign(s) < 0) v = -v;
          a.m.emplace(t, sparse(v));
        });
  }
  return out;
}

DgAlgebraPtr resolution_endomorphisms(const std::vector<Complex>& xs, int length) {
  std::vector<Complex> parts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Resolution res = projective_resolution(xs[i], length);
    if (!res.genuine())
      throw AInfError(Code::ResolutionNotFinite,
                      "projective resolution of X_" + std::to_string(i + 1) + " does not terminate within length " +
                          std::to_string(length));
    parts.push_back(res.res);
  }
  return endomorphism_dg(parts, false);
}

AInfAlgebra collection_ainf(const std::vector<Complex>& xs, int arity_cap, int length, int positive_cap) {
  MinimalModel mm = kadeishvili_minimal_model(resolution_endomorphisms(xs, length), arity_cap, positive_cap);
  std::string why = mm.alg.check_positive();
  if (!why.empty()) throw AInfError(Code::PositivityViolation, why);
  return std::move(mm.alg);
}

// ---------------------------------------------------------------------------

Mat AInfModule::apply(const Tuple& args) const {
  auto it = m.find(args);
  if (it == m.end()) return Mat(alg->field, 1, dim());
  return dense(alg->field, dim(), it->second);
}

std::string AInfModule::check_stasheff(int cap) const {
  const AInfAlgebra& a = *alg;
  int top = std::min(cap, a.arity_cap) + 1;
  auto deg = [&](std::size_t pos, std::size_t b) { return pos == 0 ? degree[b] : a.degree[b]; };
  Lookup alg_op = [&](const Tuple& t) -> const SparseVec* {
    auto it = a.m.find(t);
    return it == a.m.end() ? nullptr : &it->second;
  };
  Lookup mod_op = [&](const Tuple& t) -> const SparseVec* {
    auto it = m.find(t);
    return it == m.end() ? nullptr : &it->second;
  };
  std::vector<Scalar> acc(dim());
  for (int n = 3; n <= top; ++n) {
    std::string bad;
    Tuple t;
    std::function<void()> rec = [&]() {
      if (!bad.empty()) return;
      if (static_cast<int>(t.size()) == n) {
        if (!stasheff_vanishes(a.field, acc, t, deg, mod_op, alg_op))
          bad = "module Stasheff identity fails in arity " + std::to_string(n);
        return;
      }
      std::size_t lim = t.empty() ? dim() : a.dim();
      for (std::size_t b = 0; b < lim; ++b) {
        if (!t.empty()) {
          int rv = t.size() == 1 ? right_vertex[t[0]] : a.right_vertex[t.back()];
          if (rv != a.left_vertex[b]) continue;
        }
        t.push_back(b);
        rec();
        t.pop_back();
      }
    };
    rec();
    if (!bad.empty()) return bad;
  }
  return "";
}

std::string AInfModule::check_strict_unit() const {
  const AInfAlgebra& a = *alg;
  for (std::size_t x = 0; x < dim(); ++x)
    for (std::size_t e : a.idempotents) {
      Mat want(a.field, 1, dim());
      if (right_vertex[x] == a.left_vertex[e]) want(0, x) = 1;
      if (!(apply({x, e}) == want)) return "unit law fails on module element " + std::to_string(x);
    }
  for (const auto& [t, v] : m) {
    if (t.size() < 3 || v.empty()) continue;
    for (std::size_t k = 1; k < t.size(); ++k)
      if (std::find(a.idempotents.begin(), a.idempotents.end(), t[k]) != a.idempotents.end())
        return "higher action is nonzero on an idempotent";
  }
  return "";
}

AInfModule projective_ainf_module(const AInfAlgebra& a, int i) {
  AInfModule mod;
  mod.alg = &a;
  mod.vertex = i;
  std::vector<std::size_t> sel;
  std::vector<long> pos(a.dim(), -1);
  for (std::size_t b = 0; b < a.dim(); ++b)
    if (a.left_vertex[b] == i) {
      pos[b] = static_cast<long>(sel.size());
      sel.push_back(b);
      mod.degree.push_back(a.degree[b]);
      mod.right_vertex.push_back(a.right_vertex[b]);
    }
  for (const auto& [t, v] : a.m) {
    if (pos[t[0]] < 0) continue;
    Tuple key = t;
    key[0] = static_cast<std::size_t>(pos[t[0]]);
    SparseVec out;
    for (const auto& [k, c] : v) {
      if (pos[k] < 0) throw AInfError(Code::InvalidStructure, "e_i A is not closed under the operations");
      out.emplace_back(static_cast<std::size_t>(pos[k]), c);
    }
    mod.m.emplace(std::move(key), std::move(out));
  }
  return mod;
}

std::vector<AInfModule> simple_ainf_modules(const AInfAlgebra& a) {
  std::string why = a.check_positive();
  if (!why.empty()) throw AInfError(Code::PositivityViolation, why);
  std::vector<AInfModule> out;
  for (int i = 0; i < a.vertices(); ++i) {
    AInfModule s;
    s.alg = &a;
    s.vertex = i;
    s.degree = {0};
    s.right_vertex = {i};
    s.m.emplace(Tuple{0, a.idempotents[static_cast<std::size_t>(i)]}, SparseVec{{0, a.field.from_int(1)}});
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Longest composable chain of degree 1 elements; nullopt on an oriented cycle.
std::optional<int> longest_degree1_path(const AInfAlgebra& a) {
  int r = a.vertices();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(r));
  for (std::size_t b = 0; b < a.dim(); ++b)
    if (a.degree[b] == 1) adj[static_cast<std::size_t>(a.left_vertex[b])].push_back(a.right_vertex[b]);
  std::vector<int> state(static_cast<std::size_t>(r), 0), best(static_cast<std::size_t>(r), 0);
  bool cyclic = false;
  std::function<void(int)> dfs = [&](int v) {
    auto& st = state[static_cast<std::size_t>(v)];
    st = 1;
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (state[static_cast<std::size_t>(w)] == 1) cyclic = true;
      if (state[static_cast<std::size_t>(w)] == 0) dfs(w);
      best[static_cast<std::size_t>(v)] = std::max(best[static_cast<std::size_t>(v)], best[static_cast<std::size_t>(w)] + 1);
    }
    st = 2;
  };
  for (int v = 0; v < r; ++v)
    if (state[static_cast<std::size_t>(v)] == 0) dfs(v);
  if (cyclic) return std::nullopt;
  return r ? *std::max_element(best.begin(), best.end()) : 0;
}

int cap_for(int window, int path) {
  int depth = window + 1;
  return depth + (depth + 1) * path;
}

}  // namespace

std::optional<int> tensor_cap_for(const AInfAlgebra& a, int degree_window) {
  auto path = longest_degree1_path(a);
  if (!path) return std::nullopt;
  return cap_for(degree_window, *path);
}

DualBar dual_bar_dg(const AInfAlgebra& a, int degree_window, int tensor_cap) {
  std::string why = a.check_positive();
  if (!why.empty()) throw AInfError(Code::PositivityViolation, why);
  const Field& f = a.field;
  int r = a.vertices();
  DualBar out;
  out.tensor_cap = std::max(0, std::min(tensor_cap, std::max(a.arity_cap, a.positive_cap)));
  out.longest_degree0_path = longest_degree1_path(a);
  if (out.longest_degree0_path) {
    for (int w = degree_window; w >= 0; --w)
      if (cap_for(w, *out.longest_degree0_path) <= out.tensor_cap) {
        out.window = w;
        break;
      }
  }

  std::vector<std::size_t> gens;
  for (std::size_t b = 0; b < a.dim(); ++b)
    if (a.degree[b] > 0) gens.push_back(b);

  // Bar basis: idempotents, then composable tensors of generators.
  std::vector<Tuple> basis;
  std::vector<int> left, right, bar_degree;
  std::map<Tuple, std::size_t> index;
  for (int v = 0; v < r; ++v) {
    basis.push_back({});
    left.push_back(v);
    right.push_back(v);
    bar_degree.push_back(0);
  }
  for (int len = 1; len <= out.tensor_cap; ++len)
    for_composable(
        gens.size(), len, [&](std::size_t x, std::size_t y) { return a.right_vertex[gens[x]] == a.left_vertex[gens[y]]; },
        [](std::size_t) { return true; },
        [&](const Tuple& t) {
          Tuple g;
          int deg = 0;
          for (std::size_t k : t) {
            g.push_back(gens[k]);
            deg += a.degree[gens[k]] - 1;
          }
          index[g] = basis.size();
          basis.push_back(g);
          left.push_back(a.left_vertex[g.front()]);
          right.push_back(a.right_vertex[g.back()]);
          bar_degree.push_back(deg);
        });
  std::size_t n = basis.size();

  // Bar differential: sum over (j, k, l) of (1^j (x) b_k (x) 1^l), Koszul sign
  // from passing the degree 1 map b_k over the first j factors.
  Mat bar_d(f, n, n);
  for (std::size_t u = static_cast<std::size_t>(r); u < n; ++u) {
    const Tuple& t = basis[u];
    int len = static_cast<int>(t.size());
    long before = 0;
    for (int j = 0; j < len; ++j) {
      for (int k = 2; j + k <= len; ++k) {
        Tuple mid(t.begin() + j, t.begin() + j + k);
        auto it = a.m.find(mid);
        if (it == a.m.end() || it->second.empty()) continue;
        long s = before + static_cast<long>(k) * (k - 1) / 2;
        for (int i = 0; i < k; ++i) s += static_cast<long>(k - 1 - i) * a.degree[mid[static_cast<std::size_t>(i)]];
        for (const auto& [c, coef] : it->second) {
          Tuple img(t.begin(), t.begin() + j);
          img.push_back(c);
          img.insert(img.end(), t.begin() + j + k, t.end());
          std::size_t w = index.at(img);
          bar_d(u, w) = f.add(bar_d(u, w), sign(s) > 0 ? coef : f.neg(coef));
        }
      }
      before += a.degree[t[static_cast<std::size_t>(j)]] - 1;
    }
  }

  // Graded dual: phi_t has degree -|t|, d(phi) = -(-1)^{|phi|} phi o D and
  // phi_t phi_u = (-1)^{|phi_t||phi_u|} phi_{tu}.
  DgAlgebra::Spec spec;
  spec.field = f;
  spec.left_vertex = left;
  spec.right_vertex = right;
  spec.d = Mat(f, n, n);
  for (std::size_t u = 0; u < n; ++u) {
    spec.degree.push_back(-bar_degree[u]);
    if (u < static_cast<std::size_t>(r)) {
      spec.labels.push_back("e" + std::to_string(u + 1));
      spec.idempotents.push_back(u);
    } else {
      std::string s = "[";
      for (std::size_t i = 0; i < basis[u].size(); ++i) s += (i ? "|" : "") + a.labels[basis[u][i]];
      spec.labels.push_back(s + "]");
    }
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t t = 0; t < n; ++t) {
      if (bar_d(u, t) == 0) continue;
      int phi_deg = spec.degree[t];
      spec.d(t, u) = sign(phi_deg) > 0 ? f.neg(bar_d(u, t)) : bar_d(u, t);
    }
  spec.products.assign(n, std::vector<SparseVec>(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (right[x] != left[y]) continue;
      Tuple cat = basis[x];
      cat.insert(cat.end(), basis[y].begin(), basis[y].end());
      std::size_t z;
      if (cat.empty()) {
        z = x;
      } else {
        auto it = index.find(cat);
        if (it == index.end()) continue;
        z = it->second;
      }
      int sg = sign(static_cast<long>(spec.degree[x]) * spec.degree[y]);
      spec.products[x][y] = {{z, f.from_int(sg)}};
    }
  out.alg = DgAlgebra::create(std::move(spec));
  for (const auto& [m, dim] : out.alg->cohomology_dims())
    if (out.certified(m)) out.cohomology[m] = dim;
  return out;
}

}  // namespace tilt
