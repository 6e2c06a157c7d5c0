#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "tilt/derived.hpp"

using namespace tilt;

namespace {

Complex stalkS(const AlgebraPtr& a, int v, int deg = 0) { return Complex::stalk(make_summand(a, SummandKind::S, v), deg); }
Complex stalkP(const AlgebraPtr& a, int v, int deg = 0) { return Complex::stalk(make_summand(a, SummandKind::P, v), deg); }

// Ext^1 from the syzygy sequence 0 -> Omega M -> P0 -> M -> 0.
std::size_t ext1_by_syzygy(const Module& m, const Module& n) {
  const auto& a = m.algebra();
  auto pc = projective_cover(m);
  Module p0 = Module::zero(a);
  for (auto v : pc.vertices) p0 = direct_sum(p0, projective_module(a, v));
  Module omega = submodule(p0, left_kernel(pc.map)).first;
  return HomSpace(omega, n).dim() + HomSpace(m, n).dim() - HomSpace(p0, n).dim();
}

}  // namespace

TEST_CASE("projective resolutions of the specification examples") {
  auto a = fixture::a2();
  auto r = projective_resolution(stalkP(a, 0), 3);
  CHECK(r.genuine());
  CHECK(r.res == stalkP(a, 0));

  auto s1 = projective_resolution(stalkS(a, 0), 3);
  CHECK(s1.genuine());
  CHECK(s1.res.lo() == -1);
  CHECK(s1.res.hi() == 0);
  CHECK(s1.res.describe() == "[P2 -> P1] (-1..0)");
  CHECK(s1.quasi.check().empty());

  auto k = fixture::dual_numbers();
  auto rs = projective_resolution(stalkS(k, 0), 3);
  CHECK_FALSE(rs.genuine());
  CHECK(*rs.bound == -3);
  CHECK(rs.res.lo() == -3);
  CHECK(rs.res.hi() == 0);
  for (int n = -3; n <= 0; ++n) CHECK(rs.res.dim(n) == 2);
  for (int n = -3; n < 0; ++n) CHECK(rank(rs.res.d(n)) == 1);
}

TEST_CASE("derived Hom examples over A2") {
  auto a = fixture::a2();
  auto t = derived_hom(stalkS(a, 0), stalkS(a, 1), 4);
  CHECK(t.complete);
  CHECK(t.dims == std::map<int, std::size_t>{{1, 1}});
  auto e = derived_hom(stalkS(a, 0), stalkS(a, 0), 4);
  CHECK(e.dims == std::map<int, std::size_t>{{0, 1}});
  CHECK(derived_hom(stalkS(a, 0), Complex(a), 4).dims.empty());
}

TEST_CASE("Euler data") {
  auto a = fixture::a2();
  auto e = euler_matrix({stalkS(a, 0), stalkS(a, 1)}, 4);
  CHECK(e.classes == IntMat{{1, 0}, {0, 1}});
  REQUIRE(e.euler);
  CHECK(*e.euler == IntMat{{1, -1}, {0, 1}});
  auto apr = euler_matrix({stalkP(a, 0), stalkS(a, 1, -1)}, 4);
  CHECK(apr.classes == IntMat{{1, 1}, {0, -1}});
  auto z = euler_matrix({Complex(a)}, 4);
  CHECK(z.classes == IntMat{{0, 0}});
  auto k = fixture::dual_numbers();
  auto ek = euler_matrix({stalkS(k, 0)}, 3);
  CHECK_FALSE(ek.euler);
  CHECK_FALSE(ek.note.empty());
}

TEST_CASE("simple-minded validation examples") {
  auto a = fixture::a2();
  auto simples = validate_simple_minded({stalkS(a, 0), stalkS(a, 1)}, 4, 50);
  CHECK(simples.cond1);
  CHECK(simples.cond2);
  CHECK(simples.cond3 == Cond3::Verified);
  auto apr = validate_simple_minded({stalkP(a, 0), stalkS(a, 1, -1)}, 4, 50);
  CHECK(apr.cond1);
  CHECK(apr.cond2);
  CHECK(apr.cond3 == Cond3::Verified);
  auto bad = validate_simple_minded({stalkS(a, 0), stalkS(a, 1, -1)}, 4, 50);
  CHECK_FALSE(bad.cond2);
  REQUIRE(bad.cond2_witnesses.size() == 1);
  CHECK(bad.cond2_witnesses[0].i == 0);
  CHECK(bad.cond2_witnesses[0].j == 1);
  auto k = fixture::dual_numbers();
  auto ks = validate_simple_minded({stalkS(k, 0)}, 3, 10);
  CHECK(ks.passes());
  CHECK(ks.cond3 == Cond3::Verified);
}

TEST_CASE("dualizing projectives gives injectives") {
  for (const auto& a : fixture::zoo())
    for (int v = 0; v < a->vertices(); ++v) {
      CHECK(dualize(projective_module(a, v)) == injective_module(a->opposite(), v));
      CHECK(dualize(projective_module(a->opposite(), v), a) == injective_module(a, v));
    }
}

TEST_CASE("derived Hom agrees with module Hom and syzygy Ext^1") {
  std::mt19937 rng(41);
  auto algebras = fixture::zoo();
  for (int trial = 0; trial < 200; ++trial) {
    const auto& a = algebras[static_cast<std::size_t>(trial) % algebras.size()];
    Module m = fixture::random_module(a, rng), n = fixture::random_module(a, rng);
    auto t = derived_hom(Complex::stalk(m, 0), Complex::stalk(n, 0), 3);
    REQUIRE(t.certified(1));
    CHECK(t.at(0) == HomSpace(m, n).dim());
    CHECK(t.at(1) == ext1_by_syzygy(m, n));
    CHECK(t.at(-1) == 0);
  }
}

TEST_CASE("derived Hom is stable in the length and compatible with shifts") {
  std::mt19937 rng(43);
  auto algebras = fixture::zoo();
  for (int trial = 0; trial < 200; ++trial) {
    const auto& a = algebras[static_cast<std::size_t>(trial) % algebras.size()];
    Complex x = fixture::random_complex(a, rng, SummandKind::P, -1, 2);
    Complex y = trial % 2 ? Complex::stalk(fixture::random_module(a, rng), 0) : fixture::random_complex(a, rng, SummandKind::I, 0, 2);
    int len = 2 + static_cast<int>(rng() % 2);
    auto t1 = derived_hom(x, y, len), t2 = derived_hom(x, y, len + 2);
    for (int m = t1.zero_below - 1; m <= t1.valid_hi; ++m) CHECK(t1.at(m) == t2.at(m));
    CHECK(t2.valid_hi >= t1.valid_hi);
    int k = static_cast<int>(rng() % 3) - 1;
    auto t3 = derived_hom(x, shift(y, k), len + 2);
    for (int m = t3.zero_below; m <= std::min(t3.valid_hi, t2.valid_hi - k); ++m) CHECK(t3.at(m) == t2.at(m + k));
  }
}

TEST_CASE("injective coresolutions are quasi-isomorphisms below the bound") {
  std::mt19937 rng(47);
  auto algebras = fixture::zoo();
  for (int trial = 0; trial < 200; ++trial) {
    const auto& a = algebras[static_cast<std::size_t>(trial) % algebras.size()];
    Complex x = trial % 2 ? Complex::stalk(fixture::random_module(a, rng), 0) : fixture::random_complex(a, rng, SummandKind::P, -1, 2);
    auto r = injective_coresolution(x, 3);
    CHECK(r.res.all_of_kind(SummandKind::I));
    CHECK(r.res.check().empty());
    REQUIRE(r.quasi.check().empty());
    Complex c = cone(r.quasi).cone;
    for (int n = c.lo(); n <= c.hi(); ++n)
      if (r.genuine() || n < *r.bound - 1) CHECK(cohomology_dim(c, n) == 0);
    auto p = projective_resolution(x, 3);
    CHECK(p.res.all_of_kind(SummandKind::P));
    REQUIRE(p.quasi.check().empty());
    Complex cp = cone(p.quasi).cone;
    for (int n = cp.lo(); n <= cp.hi(); ++n)
      if (p.genuine() || n > *p.bound) CHECK(cohomology_dim(cp, n) == 0);
  }
}

TEST_CASE("Euler form is additive on triangles") {
  std::mt19937 rng(53);
  std::vector<AlgebraPtr> algebras{fixture::a2(), fixture::a3(false), fixture::a3(true), fixture::square()};
  for (int trial = 0; trial < 200; ++trial) {
    const auto& a = algebras[static_cast<std::size_t>(trial) % algebras.size()];
    Complex w = Complex::stalk(fixture::random_module(a, rng), 0);
    Complex x = fixture::random_complex(a, rng, SummandKind::P, -1, 2);
    Complex y = fixture::random_complex(a, rng, SummandKind::P, -1, 2);
    HomComplex hc(x, y, 0, 0);
    auto reps = hc.cohomology_basis(0);
    ChainMap f{x, y, reps.empty() ? std::map<int, Mat>{} : reps[0].comp};
    Complex c = cone(f).cone;
    auto chi = [&](const Complex& p, const Complex& q) {
      auto t = derived_hom(p, q, 8);
      REQUIRE(t.complete);
      long s = 0;
      for (const auto& [m, d] : t.dims) s += (m % 2 == 0 ? 1 : -1) * static_cast<long>(d);
      return s;
    };
    CHECK(chi(w, c) == chi(w, y) - chi(w, x));
  }
}
