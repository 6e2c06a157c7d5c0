#include "tilt/algebra.hpp"

#include <algorithm>
#include <map>

namespace tilt {

namespace {

using Code = AlgebraError::Code;

Mat sparse_to_row(const Field& f, std::size_t dim, const SparseVec& v) {
  Mat r(f, 1, dim);
  for (const auto& [i, c] : v) r(0, i) = f.add(r(0, i), c);
  return r;
}

}  // namespace

AlgebraPtr Algebra::create(Spec spec) {
  auto a = std::shared_ptr<Algebra>(new Algebra());
  const Field f = spec.field;
  std::size_t n = spec.labels.size();
  a->field_ = f;
  a->dim_ = n;
  a->labels_ = std::move(spec.labels);
  if (spec.products.size() != n) throw AlgebraError(Code::InvalidStructure, "product table has wrong size");
  for (auto& row : spec.products) {
    if (row.size() != n) throw AlgebraError(Code::InvalidStructure, "product table has wrong size");
    for (auto& entry : row) {
      SparseVec clean;
      std::map<std::size_t, Scalar> acc;
      for (auto& [k, c] : entry) {
        if (k >= n) throw AlgebraError(Code::InvalidStructure, "product index out of range");
        acc[k] = f.add(acc.count(k) ? acc[k] : Scalar(0), f.reduce(c));
      }
      for (auto& [k, c] : acc)
        if (c != 0) clean.emplace_back(k, c);
      entry = std::move(clean);
    }
  }
  a->products_ = std::move(spec.products);
  a->idempotents_ = std::move(spec.idempotents);
  if (a->idempotents_.empty() && n > 0) throw AlgebraError(Code::InvalidStructure, "no idempotents given");
  a->is_radical_.assign(n, true);
  for (auto e : a->idempotents_) {
    if (e >= n) throw AlgebraError(Code::InvalidStructure, "idempotent index out of range");
    a->is_radical_[e] = false;
  }
  for (std::size_t b = 0; b < n; ++b)
    if (a->is_radical_[b]) a->radical_.push_back(b);
  a->left_vertex_ = std::move(spec.left_vertex);
  a->right_vertex_ = std::move(spec.right_vertex);
  if (a->left_vertex_.size() != n || a->right_vertex_.size() != n)
    throw AlgebraError(Code::InvalidStructure, "vertex data has wrong size");
  a->path_length_ = spec.path_length.size() == n ? std::move(spec.path_length) : std::vector<int>(n, -1);

  a->right_mult_.assign(n, Mat(f, n, n));
  a->left_mult_.assign(n, Mat(f, n, n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& [k, c] : a->products_[i][j]) {
        a->right_mult_[j](i, k) = c;
        a->left_mult_[i](j, k) = c;
      }

  // Homogeneity of the basis with respect to the idempotents.
  int r = static_cast<int>(a->idempotents_.size());
  for (std::size_t b = 0; b < n; ++b) {
    int x = a->left_vertex_[b], y = a->right_vertex_[b];
    if (x < 0 || x >= r || y < 0 || y >= r) throw AlgebraError(Code::InvalidStructure, "vertex out of range");
    SparseVec self{{b, Scalar(1)}};
    if (a->products_[a->idempotents_[x]][b] != self || a->products_[b][a->idempotents_[y]] != self)
      throw AlgebraError(Code::InvalidStructure, "basis element " + a->labels_[b] + " is not vertex-homogeneous");
  }

  // Radical generators: radical basis elements independent modulo J^2.
  std::vector<Mat> sq;
  for (auto i : a->radical_)
    for (auto j : a->radical_)
      if (!a->products_[i][j].empty()) sq.push_back(sparse_to_row(f, n, a->products_[i][j]));
  Mat j2 = vstack(f, n, sq);
  std::vector<Mat> rad_rows;
  for (auto b : a->radical_) rad_rows.push_back(a->basis_vector(b));
  Mat rad = vstack(f, n, rad_rows);
  for (auto idx : complement_rows(j2, rad)) a->arrow_generators_.push_back(a->radical_[idx]);
  a->generators_ = a->idempotents_;
  a->generators_.insert(a->generators_.end(), a->arrow_generators_.begin(), a->arrow_generators_.end());
  return a;
}

Mat Algebra::basis_vector(std::size_t b) const {
  Mat r(field_, 1, dim_);
  r(0, b) = 1;
  return r;
}

Mat Algebra::unit() const {
  Mat r(field_, 1, dim_);
  for (auto e : idempotents_) r(0, e) = 1;
  return r;
}

Mat Algebra::mul(const Mat& x, const Mat& y) const {
  Mat r(field_, 1, dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (x(0, i) == 0) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (y(0, j) == 0) continue;
      Scalar c = field_.mul(x(0, i), y(0, j));
      for (const auto& [k, s] : products_[i][j]) r(0, k) = field_.add(r(0, k), field_.mul(c, s));
    }
  }
  return r;
}

std::vector<std::size_t> Algebra::corner_basis(int x, int y) const {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < dim_; ++b)
    if (left_vertex_[b] == x && right_vertex_[b] == y) out.push_back(b);
  return out;
}

std::vector<std::vector<int>> Algebra::cartan() const {
  int r = vertices();
  std::vector<std::vector<int>> c(static_cast<std::size_t>(r), std::vector<int>(static_cast<std::size_t>(r), 0));
  for (std::size_t b = 0; b < dim_; ++b) ++c[static_cast<std::size_t>(left_vertex_[b])][static_cast<std::size_t>(right_vertex_[b])];
  return c;
}

std::string Algebra::check_associativity() const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      Mat ij = sparse_to_row(field_, dim_, products_[i][j]);
      for (std::size_t k = 0; k < dim_; ++k) {
        Mat left = ij * right_mult_[k];
        Mat jk = sparse_to_row(field_, dim_, products_[j][k]);
        Mat right = jk * left_mult_[i];
        if (!(left == right))
          return "associativity fails on (" + labels_[i] + ", " + labels_[j] + ", " + labels_[k] + ")";
      }
    }
  return {};
}

std::string Algebra::check_idempotents() const {
  Mat one = unit();
  for (std::size_t b = 0; b < dim_; ++b) {
    Mat v = basis_vector(b);
    if (!(mul(one, v) == v) || !(mul(v, one) == v)) return "sum of idempotents is not a unit on " + labels_[b];
  }
  for (std::size_t x = 0; x < idempotents_.size(); ++x)
    for (std::size_t y = 0; y < idempotents_.size(); ++y) {
      const auto& p = products_[idempotents_[x]][idempotents_[y]];
      SparseVec expect;
      if (x == y) expect.emplace_back(idempotents_[x], Scalar(1));
      if (p != expect) return "idempotents are not orthogonal";
    }
  // Primitivity: e_x A e_x = K e_x + (radical part), which must be nilpotent.
  for (int x = 0; x < vertices(); ++x)
    if (!corner_radical(shared_from_this(), x)) return "idempotent " + std::to_string(x + 1) + " is not primitive";
  return {};
}

std::string Algebra::check_radical() const {
  // J is a two-sided ideal: products with J stay in J.
  for (auto j : radical_)
    for (std::size_t b = 0; b < dim_; ++b)
      for (const auto* p : {&products_[j][b], &products_[b][j]})
        for (const auto& [k, c] : *p)
          if (!is_radical_[k]) return "radical is not an ideal (" + labels_[j] + ", " + labels_[b] + ")";
  // Nilpotency: J^k = 0 for some k <= dim.
  std::vector<Mat> rows;
  for (auto j : radical_) rows.push_back(basis_vector(j));
  Mat power = vstack(field_, dim_, rows);
  for (std::size_t step = 0; step <= dim_ + 1 && power.rows() > 0; ++step) {
    std::vector<Mat> next;
    for (std::size_t i = 0; i < power.rows(); ++i)
      for (auto j : radical_) {
        Mat p = power.row_mat(i) * right_mult_[j];
        if (!p.is_zero()) next.push_back(p);
      }
    if (next.empty()) return {};
    power = row_basis(vstack(field_, dim_, next));
  }
  return power.rows() == 0 ? std::string{} : "radical is not nilpotent";
}

std::string Algebra::validate() const {
  std::string err = check_associativity();
  if (err.empty()) err = check_radical();
  if (err.empty()) err = check_idempotents();
  return err;
}

AlgebraPtr Algebra::opposite() const {
  std::lock_guard lock(op_mutex_);
  if (op_strong_) return op_strong_;
  if (auto back = op_weak_.lock()) return back;
  Spec s = spec();
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) s.products[i][j] = products_[j][i];
  std::swap(s.left_vertex, s.right_vertex);
  auto op = create(std::move(s));
  std::const_pointer_cast<Algebra>(op)->op_weak_ = shared_from_this();
  op_strong_ = op;
  return op;
}

bool Algebra::same_structure(const Algebra& o) const {
  return this == &o || (field_ == o.field_ && dim_ == o.dim_ && products_ == o.products_ &&
                        idempotents_ == o.idempotents_ && left_vertex_ == o.left_vertex_ &&
                        right_vertex_ == o.right_vertex_);
}

Algebra::Spec Algebra::spec() const {
  return {field_, labels_, products_, idempotents_, left_vertex_, right_vertex_, path_length_};
}

// ---------------------------------------------------------------------------
// Path algebras.

namespace {

struct PathTable {
  std::vector<std::vector<int>> arrows;  // arrow indices
  std::vector<int> start, end;
  std::map<std::pair<std::vector<int>, int>, std::size_t> index;  // (arrows, start vertex) -> id

  std::size_t add(std::vector<int> p, int s, int e) {
    auto key = std::make_pair(p, s);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    std::size_t id = arrows.size();
    arrows.push_back(std::move(p));
    start.push_back(s);
    end.push_back(e);
    index.emplace(std::move(key), id);
    return id;
  }
};

PathTable enumerate_paths(const Quiver& q, int max_len) {
  PathTable t;
  for (int v = 0; v < q.vertices; ++v) t.add({}, v, v);
  std::vector<std::size_t> frontier;
  for (std::size_t i = 0; i < t.arrows.size(); ++i) frontier.push_back(i);
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::size_t> next;
    for (auto p : frontier)
      for (std::size_t a = 0; a < q.arrows.size(); ++a)
        if (q.arrows[a].from == t.end[p]) {
          auto arr = t.arrows[p];
          arr.push_back(static_cast<int>(a));
          next.push_back(t.add(std::move(arr), t.start[p], q.arrows[a].to));
        }
    frontier = std::move(next);
  }
  return t;
}

struct ResolvedRelation {
  int start = 0, end = 0;
  std::vector<std::pair<Scalar, std::vector<int>>> terms;
};

std::vector<ResolvedRelation> resolve_relations(const Quiver& q, const std::vector<Relation>& rels,
                                                const Field& f) {
  std::map<std::string, int> by_label;
  for (std::size_t a = 0; a < q.arrows.size(); ++a) by_label[q.arrows[a].label] = static_cast<int>(a);
  std::vector<ResolvedRelation> out;
  for (std::size_t ri = 0; ri < rels.size(); ++ri) {
    std::map<std::pair<int, int>, ResolvedRelation> parts;
    for (const auto& term : rels[ri]) {
      if (term.path.size() < 2)
        throw AlgebraError(Code::InconsistentRelations,
                           "relation " + std::to_string(ri + 1) + " has a term of length < 2");
      std::vector<int> arr;
      for (const auto& lab : term.path) {
        auto it = by_label.find(lab);
        if (it == by_label.end())
          throw AlgebraError(Code::InconsistentRelations, "relation uses unknown arrow '" + lab + "'");
        if (!arr.empty() && q.arrows[static_cast<std::size_t>(arr.back())].to != q.arrows[static_cast<std::size_t>(it->second)].from)
          throw AlgebraError(Code::InconsistentRelations, "relation term is not a path");
        arr.push_back(it->second);
      }
      int s = q.arrows[static_cast<std::size_t>(arr.front())].from;
      int e = q.arrows[static_cast<std::size_t>(arr.back())].to;
      auto& part = parts[{s, e}];
      part.start = s;
      part.end = e;
      part.terms.emplace_back(f.reduce(term.coeff), std::move(arr));
    }
    for (auto& [key, part] : parts) out.push_back(std::move(part));
  }
  return out;
}

}  // namespace

AlgebraPtr algebra_from_quiver(const Quiver& q, const std::vector<Relation>& relations, Field f,
                               int nilpotency_bound) {
  if (q.vertices <= 0) throw AlgebraError(Code::InvalidStructure, "quiver has no vertices");
  {
    std::map<std::string, int> seen;
    for (const auto& a : q.arrows) {
      if (a.from < 0 || a.from >= q.vertices || a.to < 0 || a.to >= q.vertices)
        throw AlgebraError(Code::IndexOutOfRange, "arrow '" + a.label + "' has an invalid endpoint");
      if (seen[a.label]++) throw AlgebraError(Code::InvalidStructure, "duplicate arrow label '" + a.label + "'");
    }
  }
  auto rels = resolve_relations(q, relations, f);

  auto attempt = [&](int bound) -> AlgebraPtr {
    PathTable paths = enumerate_paths(q, bound);
    std::size_t np = paths.arrows.size();
    // Column order: long paths first so that leading terms are long paths and
    // basis representatives are short ones.
    std::vector<std::size_t> order(np);
    for (std::size_t i = 0; i < np; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return paths.arrows[a].size() > paths.arrows[b].size();
    });
    std::vector<std::size_t> col_of(np);
    for (std::size_t c = 0; c < np; ++c) col_of[order[c]] = c;

    auto concat_id = [&](std::size_t p, const std::vector<int>& mid, std::size_t s) -> std::optional<std::size_t> {
      std::vector<int> arr = paths.arrows[p];
      arr.insert(arr.end(), mid.begin(), mid.end());
      arr.insert(arr.end(), paths.arrows[s].begin(), paths.arrows[s].end());
      if (static_cast<int>(arr.size()) > bound) return std::nullopt;
      return paths.index.at({arr, paths.start[p]});
    };

    std::vector<Mat> ideal_rows;
    for (const auto& rel : rels)
      for (std::size_t p = 0; p < np; ++p) {
        if (paths.end[p] != rel.start) continue;
        for (std::size_t s = 0; s < np; ++s) {
          if (paths.start[s] != rel.end) continue;
          Mat row(f, 1, np);
          for (const auto& [c, mid] : rel.terms)
            if (auto id = concat_id(p, mid, s)) row(0, col_of[*id]) = f.add(row(0, col_of[*id]), c);
          if (!row.is_zero()) ideal_rows.push_back(std::move(row));
        }
      }
    Echelon ech = row_echelon(vstack(f, np, ideal_rows));
    std::vector<bool> pivot(np, false);
    std::vector<std::size_t> pivot_row(np, 0);
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
      pivot[ech.pivots[r]] = true;
      pivot_row[ech.pivots[r]] = r;
    }
    // Admissibility: every path of length `bound` lies in the ideal.
    for (std::size_t p = 0; p < np; ++p)
      if (static_cast<int>(paths.arrows[p].size()) == bound && !pivot[col_of[p]]) return nullptr;

    std::vector<std::size_t> basis_paths;
    for (std::size_t p = 0; p < np; ++p)
      if (!pivot[col_of[p]]) basis_paths.push_back(p);
    std::stable_sort(basis_paths.begin(), basis_paths.end(), [&](std::size_t a, std::size_t b) {
      if (paths.arrows[a].size() != paths.arrows[b].size()) return paths.arrows[a].size() < paths.arrows[b].size();
      if (paths.start[a] != paths.start[b]) return paths.start[a] < paths.start[b];
      return paths.arrows[a] < paths.arrows[b];
    });
    std::size_t n = basis_paths.size();
    std::vector<std::size_t> basis_of_col(np, n);
    for (std::size_t i = 0; i < n; ++i) basis_of_col[col_of[basis_paths[i]]] = i;

    auto normal_form = [&](const std::vector<int>& arr, int start) -> SparseVec {
      if (static_cast<int>(arr.size()) > bound) return {};
      std::size_t id = paths.index.at({arr, start});
      std::size_t c = col_of[id];
      if (!pivot[c]) return {{basis_of_col[c], Scalar(1)}};
      SparseVec out;
      const Mat& rr = ech.rref;
      std::size_t r = pivot_row[c];
      for (std::size_t cc = 0; cc < np; ++cc)
        if (cc != c && rr(r, cc) != 0) out.emplace_back(basis_of_col[cc], f.neg(rr(r, cc)));
      std::sort(out.begin(), out.end());
      return out;
    };

    Algebra::Spec spec;
    spec.field = f;
    spec.idempotents.resize(static_cast<std::size_t>(q.vertices));
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t p = basis_paths[i];
      std::string label;
      if (paths.arrows[p].empty()) {
        label = "e" + std::to_string(paths.start[p] + 1);
        spec.idempotents[static_cast<std::size_t>(paths.start[p])] = i;
      } else {
        for (std::size_t k = 0; k < paths.arrows[p].size(); ++k)
          label += (k ? "*" : "") + q.arrows[static_cast<std::size_t>(paths.arrows[p][k])].label;
      }
      spec.labels.push_back(label);
      spec.left_vertex.push_back(paths.start[p]);
      spec.right_vertex.push_back(paths.end[p]);
      spec.path_length.push_back(static_cast<int>(paths.arrows[p].size()));
    }
    spec.products.assign(n, std::vector<SparseVec>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t a = basis_paths[i], b = basis_paths[j];
        if (paths.end[a] != paths.start[b]) continue;
        std::vector<int> arr = paths.arrows[a];
        arr.insert(arr.end(), paths.arrows[b].begin(), paths.arrows[b].end());
        spec.products[i][j] = normal_form(arr, paths.start[a]);
      }
    return Algebra::create(std::move(spec));
  };

  if (nilpotency_bound > 0) {
    auto a = attempt(nilpotency_bound);
    if (!a)
      throw AlgebraError(Code::NonAdmissible,
                         "paths of length " + std::to_string(nilpotency_bound) + " do not vanish modulo the relations");
    return a;
  }
  for (int bound = 1; bound <= 16; ++bound)
    if (auto a = attempt(bound)) return a;
  throw AlgebraError(Code::NonAdmissible, "relations do not define an admissible ideal (bound search up to 16)");
}

// ---------------------------------------------------------------------------
// Modules.

Module::Module(AlgebraPtr alg, std::size_t dim, std::vector<Mat> action)
    : alg_(std::move(alg)), dim_(dim), action_(std::move(action)) {
  if (action_.size() != alg_->dim()) throw AlgebraError(Code::InvalidStructure, "module needs one action matrix per basis element");
  for (const auto& m : action_)
    if (m.rows() != dim_ || m.cols() != dim_) throw AlgebraError(Code::InvalidStructure, "action matrix has wrong shape");
  int r = alg_->vertices();
  vertex_.assign(dim_, -1);
  by_vertex_.assign(static_cast<std::size_t>(r), {});
  for (int v = 0; v < r; ++v) {
    const Mat& e = action_[alg_->idempotent(v)];
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) {
        const Scalar& x = e(i, j);
        if (i != j && x != 0) throw AlgebraError(Code::InvalidStructure, "module basis is not vertex-homogeneous");
        if (i == j && x != 0) {
          if (x != 1 || vertex_[i] != -1) throw AlgebraError(Code::InvalidStructure, "module basis is not vertex-homogeneous");
          vertex_[i] = v;
        }
      }
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    if (vertex_[i] < 0) throw AlgebraError(Code::InvalidStructure, "unit does not act as the identity");
    by_vertex_[static_cast<std::size_t>(vertex_[i])].push_back(i);
  }
}

std::pair<Module, Mat> Module::rebased(AlgebraPtr alg, std::size_t dim, std::vector<Mat> action) {
  const Field& f = alg->field();
  std::vector<Mat> parts;
  for (int v = 0; v < alg->vertices(); ++v) {
    Mat b = row_basis(action[alg->idempotent(v)]);
    if (b.rows()) parts.push_back(b);
  }
  Mat change = vstack(f, dim, parts);
  auto inv = inverse(change);
  if (!inv) throw AlgebraError(Code::InvalidStructure, "idempotent images do not decompose the module");
  std::vector<Mat> act;
  act.reserve(action.size());
  for (const auto& m : action) act.push_back(change * m * *inv);
  return {Module(std::move(alg), dim, std::move(act)), change};
}

Module Module::zero(AlgebraPtr alg) {
  std::vector<Mat> act(alg->dim(), Mat(alg->field(), 0, 0));
  return Module(std::move(alg), 0, std::move(act));
}

Mat Module::act_element(const Mat& x) const {
  const Field& f = alg_->field();
  Mat r(f, dim_, dim_);
  for (std::size_t b = 0; b < alg_->dim(); ++b)
    if (x(0, b) != 0) r = r + action_[b].scaled(x(0, b));
  return r;
}

std::vector<int> Module::dimension_vector() const {
  std::vector<int> d;
  for (const auto& v : by_vertex_) d.push_back(static_cast<int>(v.size()));
  return d;
}

std::string Module::check() const {
  const Field& f = alg_->field();
  if (!(act_element(alg_->unit()) == Mat::identity(f, dim_))) return "unit does not act as identity";
  for (std::size_t i = 0; i < alg_->dim(); ++i)
    for (std::size_t j = 0; j < alg_->dim(); ++j) {
      Mat lhs = action_[i] * action_[j];
      Mat rhs(f, dim_, dim_);
      for (const auto& [k, c] : alg_->product(i, j)) rhs = rhs + action_[k].scaled(c);
      if (!(lhs == rhs)) return "action is not multiplicative on (" + alg_->labels()[i] + ", " + alg_->labels()[j] + ")";
    }
  return {};
}

bool operator==(const Module& a, const Module& b) {
  return a.alg_->same_structure(*b.alg_) && a.dim_ == b.dim_ && a.action_ == b.action_;
}

Module simple_module(const AlgebraPtr& a, int v) {
  if (v < 0 || v >= a->vertices()) throw AlgebraError(Code::IndexOutOfRange, "vertex out of range");
  std::vector<Mat> act;
  for (std::size_t b = 0; b < a->dim(); ++b) {
    Mat m(a->field(), 1, 1);
    if (b == a->idempotent(v)) m(0, 0) = 1;
    act.push_back(m);
  }
  return Module(a, 1, std::move(act));
}

Module projective_module(const AlgebraPtr& a, int v) {
  if (v < 0 || v >= a->vertices()) throw AlgebraError(Code::IndexOutOfRange, "vertex out of range");
  std::vector<std::size_t> basis;
  std::vector<long> pos(a->dim(), -1);
  for (std::size_t b = 0; b < a->dim(); ++b)
    if (a->left_vertex(b) == v) {
      pos[b] = static_cast<long>(basis.size());
      basis.push_back(b);
    }
  std::vector<Mat> act;
  for (std::size_t c = 0; c < a->dim(); ++c) {
    Mat m(a->field(), basis.size(), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (const auto& [k, s] : a->product(basis[i], c)) m(i, static_cast<std::size_t>(pos[k])) = s;
    act.push_back(std::move(m));
  }
  return Module(a, basis.size(), std::move(act));
}

Module injective_module(const AlgebraPtr& a, int v) {
  if (v < 0 || v >= a->vertices()) throw AlgebraError(Code::IndexOutOfRange, "vertex out of range");
  // Dual basis of A e_v; (phi_j . c)(b_k) = phi_j(c b_k).
  std::vector<std::size_t> basis;
  std::vector<long> pos(a->dim(), -1);
  for (std::size_t b = 0; b < a->dim(); ++b)
    if (a->right_vertex(b) == v) {
      pos[b] = static_cast<long>(basis.size());
      basis.push_back(b);
    }
  std::vector<Mat> act;
  for (std::size_t c = 0; c < a->dim(); ++c) {
    Mat m(a->field(), basis.size(), basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k)
      for (const auto& [j, s] : a->product(c, basis[k])) m(static_cast<std::size_t>(pos[j]), k) = s;
    act.push_back(std::move(m));
  }
  return Module(a, basis.size(), std::move(act));
}

Module regular_module(const AlgebraPtr& a) {
  Module m = projective_module(a, 0);
  for (int v = 1; v < a->vertices(); ++v) m = direct_sum(m, projective_module(a, v));
  return m;
}

Module dualize(const Module& m, AlgebraPtr target) {
  if (!target) target = m.algebra()->opposite();
  std::vector<Mat> act;
  for (const auto& x : m.actions()) act.push_back(x.transpose());
  return Module(std::move(target), m.dim(), std::move(act));
}

Module direct_sum(const Module& a, const Module& b) {
  if (!a.algebra()->same_structure(*b.algebra())) throw AlgebraError(Code::AlgebraMismatch, "direct sum over different algebras");
  std::vector<Mat> act;
  for (std::size_t k = 0; k < a.actions().size(); ++k) act.push_back(block_diag(a.act(k), b.act(k)));
  return Module(a.algebra(), a.dim() + b.dim(), std::move(act));
}

bool is_module_map(const Module& src, const Module& dst, const Mat& f) {
  if (f.rows() != src.dim() || f.cols() != dst.dim()) return false;
  for (auto g : src.algebra()->generators())
    if (!(src.act(g) * f == f * dst.act(g))) return false;
  return true;
}

HomSpace::HomSpace(const Module& src, const Module& dst)
    : rows_(src.dim()), cols_(dst.dim()), field_(src.algebra()->field()) {
  const auto& alg = *src.algebra();
  // Unknowns: entries F(i, j) with i, j at the same vertex.
  std::vector<std::pair<std::size_t, std::size_t>> vars;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> var_id;
  for (int v = 0; v < alg.vertices(); ++v)
    for (auto i : src.basis_at(v))
      for (auto j : dst.basis_at(v)) {
        var_id[{i, j}] = vars.size();
        vars.emplace_back(i, j);
      }
  if (vars.empty()) return;
  std::vector<Mat> eqs;
  for (auto g : alg.arrow_generators()) {
    int s = alg.left_vertex(g), t = alg.right_vertex(g);
    const Mat& rm = src.act(g);
    const Mat& rn = dst.act(g);
    for (auto i : src.basis_at(s))
      for (auto j : dst.basis_at(t)) {
        Mat eq(field_, 1, vars.size());
        for (auto k : src.basis_at(t))
          if (rm(i, k) != 0) {
            auto id = var_id.at({k, j});
            eq(0, id) = field_.add(eq(0, id), rm(i, k));
          }
        for (auto l : dst.basis_at(s))
          if (rn(l, j) != 0) {
            auto id = var_id.at({i, l});
            eq(0, id) = field_.sub(eq(0, id), rn(l, j));
          }
        if (!eq.is_zero()) eqs.push_back(std::move(eq));
      }
  }
  Mat sys = vstack(field_, vars.size(), eqs);
  Mat ker = sys.rows() ? kernel_basis(sys) : Mat::identity(field_, vars.size());
  std::vector<Mat> flat;
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    Mat f(field_, rows_, cols_);
    Mat fl(field_, 1, rows_ * cols_);
    for (std::size_t k = 0; k < vars.size(); ++k)
      if (ker(k, c) != 0) {
        f(vars[k].first, vars[k].second) = ker(k, c);
        fl(0, vars[k].first * cols_ + vars[k].second) = ker(k, c);
      }
    basis_.push_back(std::move(f));
    flat.push_back(std::move(fl));
  }
  if (!flat.empty()) coords_ = RowCoordinates(vstack(field_, rows_ * cols_, flat));
}

Mat HomSpace::coordinates(const Mat& f) const {
  if (basis_.empty()) return Mat(field_, 1, 0);
  Mat fl(field_, 1, rows_ * cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) fl(0, i * cols_ + j) = f(i, j);
  return coords_.coords(fl);
}

Mat HomSpace::combine(const Mat& c) const {
  Mat f(field_, rows_, cols_);
  for (std::size_t k = 0; k < basis_.size(); ++k)
    if (c(0, k) != 0) f = f + basis_[k].scaled(c(0, k));
  return f;
}

std::vector<Mat> hom_basis_bruteforce(const Module& src, const Module& dst) {
  const Field& f = src.algebra()->field();
  std::size_t dm = src.dim(), dn = dst.dim(), nv = dm * dn;
  if (nv == 0) return {};
  std::vector<Mat> eqs;
  for (std::size_t b = 0; b < src.algebra()->dim(); ++b) {
    const Mat& rm = src.act(b);
    const Mat& rn = dst.act(b);
    for (std::size_t i = 0; i < dm; ++i)
      for (std::size_t j = 0; j < dn; ++j) {
        Mat eq(f, 1, nv);
        for (std::size_t k = 0; k < dm; ++k) eq(0, k * dn + j) = f.add(eq(0, k * dn + j), rm(i, k));
        for (std::size_t l = 0; l < dn; ++l) eq(0, i * dn + l) = f.sub(eq(0, i * dn + l), rn(l, j));
        eqs.push_back(std::move(eq));
      }
  }
  Mat ker = kernel_basis(vstack(f, nv, eqs));
  std::vector<Mat> out;
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    Mat m(f, dm, dn);
    for (std::size_t k = 0; k < nv; ++k) m(k / dn, k % dn) = ker(k, c);
    out.push_back(std::move(m));
  }
  return out;
}

std::pair<Module, Mat> submodule(const Module& m, const Mat& span) {
  const auto& alg = m.algebra();
  const Field& f = alg->field();
  std::vector<Mat> parts;
  if (span.rows() > 0)
    for (int v = 0; v < alg->vertices(); ++v) {
      Mat b = row_basis(span * m.act(alg->idempotent(v)));
      if (b.rows()) parts.push_back(b);
    }
  Mat basis = vstack(f, m.dim(), parts);
  std::size_t d = basis.rows();
  RowCoordinates rc(basis);
  std::vector<Mat> act;
  for (std::size_t b = 0; b < alg->dim(); ++b) {
    if (d == 0) {
      act.emplace_back(f, 0, 0);
      continue;
    }
    Mat img = basis * m.act(b);
    if (!rc.contains(img)) throw AlgebraError(Code::InvalidStructure, "span is not a submodule");
    act.push_back(rc.coords(img));
  }
  return {Module(alg, d, std::move(act)), basis};
}

std::pair<Module, Mat> quotient_module(const Module& m, const Mat& span) {
  const auto& alg = m.algebra();
  const Field& f = alg->field();
  auto [sub, incl] = submodule(m, span);
  std::vector<Mat> comp_parts;
  for (int v = 0; v < alg->vertices(); ++v) {
    const auto& idx = m.basis_at(v);
    Mat std_rows(f, idx.size(), m.dim());
    for (std::size_t k = 0; k < idx.size(); ++k) std_rows(k, idx[k]) = 1;
    std::vector<std::size_t> sub_idx(sub.basis_at(v).begin(), sub.basis_at(v).end());
    Mat sub_v = incl.select_rows(sub_idx);
    for (auto r : complement_rows(sub_v, std_rows)) comp_parts.push_back(std_rows.row_mat(r));
  }
  Mat comp = vstack(f, m.dim(), comp_parts);
  std::size_t ds = incl.rows(), dq = comp.rows();
  Mat full = vstack(incl, comp);
  auto inv = inverse(full);
  if (!inv) throw AlgebraError(Code::InvalidStructure, "quotient basis is singular");
  Mat proj = inv->block(0, ds, m.dim(), dq);
  std::vector<Mat> act;
  for (std::size_t b = 0; b < alg->dim(); ++b) act.push_back(comp * m.act(b) * proj);
  return {Module(alg, dq, std::move(act)), proj};
}

Mat radical_span(const Module& m) {
  const Field& f = m.algebra()->field();
  std::vector<Mat> rows;
  for (auto j : m.algebra()->radical_basis()) {
    const Mat& a = m.act(j);
    if (!a.is_zero()) rows.push_back(a);
  }
  return row_basis(vstack(f, m.dim(), rows));
}

Mat projective_map_from_generator(const Module& m, int v, const Mat& gen) {
  const auto& alg = *m.algebra();
  std::vector<Mat> rows;
  for (std::size_t b = 0; b < alg.dim(); ++b)
    if (alg.left_vertex(b) == v) rows.push_back(gen * m.act(b));
  return vstack(alg.field(), m.dim(), rows);
}

ProjectiveCover projective_cover(const Module& m) {
  const auto& alg = m.algebra();
  const Field& f = alg->field();
  Mat rad = radical_span(m);
  ProjectiveCover pc;
  std::vector<Mat> blocks;
  for (int v = 0; v < alg->vertices(); ++v) {
    const auto& idx = m.basis_at(v);
    if (idx.empty()) continue;
    Mat rad_v = rad.rows() ? row_basis(rad * m.act(alg->idempotent(v))) : Mat(f, 0, m.dim());
    Mat std_rows(f, idx.size(), m.dim());
    for (std::size_t k = 0; k < idx.size(); ++k) std_rows(k, idx[k]) = 1;
    for (auto r : complement_rows(rad_v, std_rows)) {
      pc.vertices.push_back(v);
      blocks.push_back(projective_map_from_generator(m, v, std_rows.row_mat(r)));
    }
  }
  pc.map = vstack(f, m.dim(), blocks);
  return pc;
}

Module nakayama_projective(const AlgebraPtr& a, int v) { return injective_module(a, v); }
Module nakayama_inverse_injective(const AlgebraPtr& a, int v) { return projective_module(a, v); }

namespace {

// Element x in e_v A e_u of the map P_u -> P_v (image of e_u).
Mat element_of_projective_map(const AlgebraPtr& a, int u, int v, const Mat& f) {
  std::size_t eu_pos = 0;
  for (std::size_t b = 0; b < a->idempotent(u); ++b)
    if (a->left_vertex(b) == u) ++eu_pos;
  Mat x(a->field(), 1, a->dim());
  std::size_t k = 0;
  for (std::size_t b = 0; b < a->dim(); ++b)
    if (a->left_vertex(b) == v) x(0, b) = f(eu_pos, k++);
  return x;
}

Mat left_mult_projective_map(const AlgebraPtr& a, int u, int v, const Mat& x) {
  Module pv = projective_module(a, v);
  std::vector<Mat> rows;
  for (std::size_t b = 0; b < a->dim(); ++b)
    if (a->left_vertex(b) == u) {
      Mat y = a->mul(x, a->basis_vector(b));
      Mat r(a->field(), 1, pv.dim());
      std::size_t k = 0;
      for (std::size_t c = 0; c < a->dim(); ++c) {
        if (a->left_vertex(c) == v) r(0, k++) = y(0, c);
        else if (y(0, c) != 0) throw AlgebraError(Code::WrongModuleForm, "element does not lie in e_v A");
      }
      rows.push_back(r);
    }
  return vstack(a->field(), pv.dim(), rows);
}

Mat injective_map_of_element(const AlgebraPtr& a, int u, int v, const Mat& x) {
  std::vector<std::size_t> bu, bv;
  for (std::size_t b = 0; b < a->dim(); ++b) {
    if (a->right_vertex(b) == u) bu.push_back(b);
    if (a->right_vertex(b) == v) bv.push_back(b);
  }
  Mat g(a->field(), bu.size(), bv.size());
  for (std::size_t k = 0; k < bv.size(); ++k) {
    Mat y = a->mul(a->basis_vector(bv[k]), x);
    for (std::size_t j = 0; j < bu.size(); ++j) g(j, k) = y(0, bu[j]);
  }
  return g;
}

}  // namespace

Mat nakayama_projective_map(const AlgebraPtr& a, int u, int v, const Mat& f) {
  return injective_map_of_element(a, u, v, element_of_projective_map(a, u, v, f));
}

Mat nakayama_inverse_injective_map(const AlgebraPtr& a, int u, int v, const Mat& g) {
  const Field& f = a->field();
  auto corner = a->corner_basis(v, u);
  std::size_t n = g.rows() * g.cols();
  auto flatten = [&](const Mat& m) {
    Mat r(f, 1, n);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) r(0, i * m.cols() + j) = m(i, j);
    return r;
  };
  std::vector<Mat> rows;
  for (auto b : corner) rows.push_back(flatten(injective_map_of_element(a, u, v, a->basis_vector(b))));
  Mat x(f, 1, a->dim());
  if (!corner.empty()) {
    auto c = solve_left(vstack(f, n, rows), flatten(g));
    if (!c) throw AlgebraError(Code::WrongModuleForm, "map between injectives is not a module map");
    for (std::size_t k = 0; k < corner.size(); ++k) x(0, corner[k]) = (*c)(0, k);
  } else if (!g.is_zero()) {
    throw AlgebraError(Code::WrongModuleForm, "nonzero map between injectives with no corner elements");
  }
  return left_mult_projective_map(a, u, v, x);
}

std::optional<Scalar> residue_scalar(const Field& f, const Mat& x, const Mat& one,
                                     const std::function<Mat(const Mat&, const Mat&)>& mul) {
  // Minimal polynomial of x via its powers.
  std::vector<Mat> powers{one};
  Mat acc = one;
  std::vector<Scalar> coeffs;
  for (std::size_t k = 1; k <= one.cols() + 1; ++k) {
    Mat next = mul(powers.back(), x);
    auto c = solve_left(vstack(f, one.cols(), powers), next);
    if (c) {
      for (std::size_t i = 0; i < c->cols(); ++i) coeffs.push_back((*c)(0, i));
      break;
    }
    powers.push_back(next);
  }
  std::size_t k = coeffs.size();
  if (k == 0) return std::nullopt;
  // mu(t) = t^k - sum c_i t^i = (t - lambda)^k. The smallest j > 0 with
  // binom(k, j) nonzero in the field is a power of the characteristic, on
  // which Frobenius fixes lambda, so c_{k-j} = binom(k, j) * lambda.
  std::size_t j = 1;
  mpz_class binom;
  for (; j <= k; ++j) {
    mpz_bin_uiui(binom.get_mpz_t(), k, j);
    if (f.reduce(Scalar(binom)) != 0) break;
  }
  Scalar lambda = f.div(coeffs[k - j], f.reduce(Scalar(binom)));
  Mat y = x - one.scaled(lambda);
  Mat p = y;
  for (std::size_t i = 1; i < k; ++i) p = mul(p, y);
  if (!p.is_zero()) return std::nullopt;
  return lambda;
}

std::optional<Mat> corner_radical(const AlgebraPtr& a, int v) {
  auto corner = a->corner_basis(v, v);
  Mat e = a->basis_vector(a->idempotent(v));
  auto mul = [&](const Mat& x, const Mat& y) { return a->mul(x, y); };
  std::vector<Mat> rows;
  for (auto b : corner) {
    if (b == a->idempotent(v)) continue;
    Mat x = a->basis_vector(b);
    auto lambda = residue_scalar(a->field(), x, e, mul);
    if (!lambda || *lambda != 0) return std::nullopt;
    rows.push_back(x);
  }
  return vstack(a->field(), a->dim(), rows);
}

}  // namespace tilt
