#include "tilt/presentation.hpp"

#include <map>

namespace tilt {

namespace {

struct Path {
  std::vector<std::size_t> arrows;  // indices into the arrow list
  int from = 0, to = 0;
  Mat value;
};

}  // namespace

std::string Presentation::describe_arrows() const {
  std::string s;
  for (const auto& a : quiver.arrows) {
    if (!s.empty()) s += " ";
    s += a.label + ":" + std::to_string(a.from + 1) + "->" + std::to_string(a.to + 1);
  }
  return s.empty() ? "none" : s;
}

std::string Presentation::describe_relations(const Field& f) const {
  std::string s;
  for (const auto& r : relations) {
    if (!s.empty()) s += "; ";
    bool first = true;
    for (const auto& t : r) {
      Scalar c = f.reduce(t.coeff);
      bool neg = !f.is_prime() && c < 0;
      if (neg) c = -c;
      std::string word;
      for (std::size_t i = 0; i < t.path.size(); ++i) word += (i ? "*" : "") + t.path[i];
      std::string coef = c == 1 ? "" : f.format(c) + "*";
      if (first) s += (neg ? "-" : "") + coef + word;
      else s += (neg ? " - " : " + ") + coef + word;
      first = false;
    }
  }
  return s.empty() ? "none" : s;
}

Presentation present_algebra(const AlgebraPtr& a) {
  const Field& f = a->field();
  Presentation p;
  p.quiver.vertices = a->vertices();
  const auto& gens = a->arrow_generators();
  for (std::size_t k = 0; k < gens.size(); ++k)
    p.quiver.arrows.push_back({a->left_vertex(gens[k]), a->right_vertex(gens[k]), "x" + std::to_string(k + 1)});

  // Paths by length until every path of some length vanishes.
  std::vector<std::vector<Path>> by_len(2);
  for (std::size_t k = 0; k < gens.size(); ++k)
    by_len[1].push_back({{k}, a->left_vertex(gens[k]), a->right_vertex(gens[k]), a->basis_vector(gens[k])});
  int top = by_len[1].empty() ? 0 : 1;
  while (!by_len.back().empty()) {
    std::vector<Path> next;
    bool nonzero = false;
    for (const auto& q : by_len.back())
      for (std::size_t k = 0; k < gens.size(); ++k) {
        if (a->left_vertex(gens[k]) != q.to) continue;
        Path r = q;
        r.arrows.push_back(k);
        r.to = a->right_vertex(gens[k]);
        r.value = q.value.is_zero() ? q.value : a->mul(q.value, a->basis_vector(gens[k]));
        if (!r.value.is_zero()) nonzero = true;
        // keep zero paths only one step past the last nonzero length
        if (!q.value.is_zero()) next.push_back(std::move(r));
      }
    if (next.empty()) break;
    by_len.push_back(std::move(next));
    if (!nonzero) break;
    top = static_cast<int>(by_len.size()) - 1;
    if (by_len.size() > a->dim() + 2) throw std::runtime_error("radical is not nilpotent");
  }
  p.max_path_length = top;

  // Candidate relations: kernel of evaluation on paths of length >= 2.
  std::vector<const Path*> paths;
  for (std::size_t l = 2; l < by_len.size(); ++l)
    for (const auto& q : by_len[l]) paths.push_back(&q);
  std::map<std::vector<std::size_t>, std::size_t> col;
  for (std::size_t i = 0; i < paths.size(); ++i) col[paths[i]->arrows] = i;
  std::size_t np = paths.size();
  auto as_relation = [&](const Mat& row) {
    Relation r;
    for (std::size_t i = 0; i < np; ++i) {
      if (row(0, i) == 0) continue;
      PathTerm t;
      t.coeff = row(0, i);
      for (std::size_t k : paths[i]->arrows) t.path.push_back(p.quiver.arrows[k].label);
      r.push_back(std::move(t));
    }
    return r;
  };
  // Multiplying a combination of paths by an arrow on either side; terms
  // beyond the tracked lengths vanish.
  auto extend = [&](const Mat& row, std::size_t k, bool left) {
    Mat out(f, 1, np);
    for (std::size_t i = 0; i < np; ++i) {
      if (row(0, i) == 0) continue;
      std::vector<std::size_t> w = paths[i]->arrows;
      if (left) w.insert(w.begin(), k);
      else w.push_back(k);
      auto it = col.find(w);
      if (it != col.end()) out(0, it->second) = f.add(out(0, it->second), row(0, i));
    }
    return out;
  };
  Mat ideal(f, 0, np);
  std::size_t len_cap = by_len.size() - 1;
  for (std::size_t l = 2; l <= len_cap; ++l) {
    std::vector<std::size_t> upto;
    for (std::size_t i = 0; i < np; ++i)
      if (paths[i]->arrows.size() <= l) upto.push_back(i);
    if (upto.empty()) continue;
    std::vector<Mat> vals;
    for (std::size_t i : upto) vals.push_back(paths[i]->value);
    Mat ev = vstack(f, a->dim(), vals);
    Mat ker = left_kernel(ev);
    for (std::size_t r = 0; r < ker.rows(); ++r) {
      Mat row(f, 1, np);
      for (std::size_t k = 0; k < upto.size(); ++k) row(0, upto[k]) = ker(r, k);
      if (ideal.rows() && RowCoordinates(row_basis(ideal)).contains(row)) continue;
      p.relations.push_back(as_relation(row));
      // close the new generator under multiplication by arrows
      std::vector<Mat> frontier{row};
      ideal = vstack(ideal, row);
      while (!frontier.empty()) {
        std::vector<Mat> next;
        for (const auto& g : frontier)
          for (std::size_t k = 0; k < gens.size(); ++k)
            for (bool left : {true, false}) {
              Mat h = extend(g, k, left);
              if (!h.is_zero()) next.push_back(h);
            }
        for (const auto& h : next) ideal = vstack(ideal, h);
        frontier = std::move(next);
      }
      ideal = row_basis(ideal);
    }
  }

  try {
    auto b = algebra_from_quiver(p.quiver, p.relations, f);
    std::vector<std::vector<int>> ca = a->cartan(), cb = b->cartan();
    p.verified = b->dim() == a->dim() && ca == cb;
  } catch (const std::exception&) {
    p.verified = false;
  }
  return p;
}

}  // namespace tilt
