#pragma once

// Small algebras shared by the unit tests.

#include <random>

#include "tilt/algebra.hpp"
#include "tilt/complex.hpp"

namespace fixture {

using namespace tilt;

// 1 -> 2
inline AlgebraPtr a2(Field f = Field::prime(7)) {
  Quiver q{2, {{0, 1, "a"}}};
  return algebra_from_quiver(q, {}, f);
}

// 1 -> 2 -> 3 with optional ab = 0
inline AlgebraPtr a3(bool zero_relation, Field f = Field::rational()) {
  Quiver q{3, {{0, 1, "a"}, {1, 2, "b"}}};
  std::vector<Relation> rel;
  if (zero_relation) rel.push_back({{Scalar(1), {"a", "b"}}});
  return algebra_from_quiver(q, rel, f);
}

// K[x]/(x^2)
inline AlgebraPtr dual_numbers(Field f = Field::prime(3)) {
  Quiver q{1, {{0, 0, "x"}}};
  return algebra_from_quiver(q, {{{Scalar(1), {"x", "x"}}}}, f);
}

// Two-cycle 1 <-> 2 with both length-2 paths zero (self-injective Nakayama).
inline AlgebraPtr two_cycle(Field f = Field::rational()) {
  Quiver q{2, {{0, 1, "a"}, {1, 0, "b"}}};
  return algebra_from_quiver(q, {{{Scalar(1), {"a", "b"}}}, {{Scalar(1), {"b", "a"}}}}, f);
}

// Kronecker-like commutative square 1 -> 2, 1 -> 3, 2 -> 4, 3 -> 4 with ac = bd.
inline AlgebraPtr square(Field f = Field::prime(5)) {
  Quiver q{4, {{0, 1, "a"}, {0, 2, "b"}, {1, 3, "c"}, {2, 3, "d"}}};
  return algebra_from_quiver(q, {{{Scalar(1), {"a", "c"}}, {Scalar(-1), {"b", "d"}}}}, f);
}

inline std::vector<AlgebraPtr> zoo() {
  return {a2(), a3(false), a3(true), dual_numbers(), two_cycle(), square()};
}

// Random quotient of a random projective by the submodule generated by a few
// random elements.
inline Module random_module(const AlgebraPtr& a, std::mt19937& rng) {
  int v = static_cast<int>(rng() % static_cast<unsigned>(a->vertices()));
  Module p = projective_module(a, v);
  if (rng() % 4 == 0 && a->vertices() > 1) {
    int w = static_cast<int>(rng() % static_cast<unsigned>(a->vertices()));
    p = direct_sum(p, projective_module(a, w));
  }
  std::size_t gens = rng() % 3;
  Mat span(a->field(), gens, p.dim());
  std::uniform_int_distribution<int> d(-2, 2);
  for (std::size_t g = 0; g < gens; ++g) {
    for (std::size_t j = 0; j < p.dim(); ++j) span.set(g, j, Scalar(d(rng)));
  }
  if (gens == 0) return p;
  // close the span under the action
  Mat cur = span;
  for (std::size_t it = 0; it < p.dim(); ++it) {
    std::vector<Mat> next{cur};
    for (std::size_t b = 0; b < a->dim(); ++b) next.push_back(cur * p.act(b));
    cur = row_basis(vstack(a->field(), p.dim(), next));
  }
  return quotient_module(p, cur).first;
}

// Random bounded complex with summands of the given kind (P or I), built
// degree by degree with each differential drawn from the maps killed by the
// previous one.
inline Complex random_complex(const AlgebraPtr& a, std::mt19937& rng, SummandKind kind = SummandKind::P,
                              int lo = -1, int len = 3) {
  const Field& f = a->field();
  std::vector<std::vector<Summand>> ss;
  for (int k = 0; k < len; ++k) {
    std::vector<Summand> s;
    std::size_t count = 1 + rng() % 2;
    for (std::size_t i = 0; i < count; ++i)
      s.push_back(make_summand(a, kind, static_cast<int>(rng() % static_cast<unsigned>(a->vertices()))));
    ss.push_back(std::move(s));
  }
  std::vector<Module> terms;
  for (const auto& s : ss) {
    Module m = Module::zero(a);
    for (const auto& x : s) m = direct_sum(m, x.module);
    terms.push_back(m);
  }
  std::uniform_int_distribution<int> d(-2, 2);
  std::vector<Mat> ds;
  for (int k = 0; k + 1 < len; ++k) {
    HomSpace hs(terms[static_cast<std::size_t>(k)], terms[static_cast<std::size_t>(k + 1)]);
    // coordinates c with prev * combine(c) = 0
    std::vector<Mat> cols;
    Mat prev = ds.empty() ? Mat(f, 0, terms[static_cast<std::size_t>(k)].dim()) : ds.back();
    std::size_t n = hs.dim();
    Mat constraint(f, n, prev.rows() * terms[static_cast<std::size_t>(k + 1)].dim());
    for (std::size_t i = 0; i < n; ++i) {
      Mat img = prev * hs.basis()[i];
      for (std::size_t r = 0; r < img.rows(); ++r)
        for (std::size_t c = 0; c < img.cols(); ++c) constraint(i, r * img.cols() + c) = img(r, c);
    }
    Mat allowed = left_kernel(constraint);
    Mat coeff(f, 1, allowed.rows());
    for (std::size_t i = 0; i < allowed.rows(); ++i) coeff.set(0, i, Scalar(d(rng)));
    Mat c = allowed.rows() ? coeff * allowed : Mat(f, 1, n);
    ds.push_back(n ? hs.combine(c) : Mat(f, terms[static_cast<std::size_t>(k)].dim(), terms[static_cast<std::size_t>(k + 1)].dim()));
  }
  return Complex(a, lo, std::move(ss), std::move(ds));
}

}  // namespace fixture
