#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "tilt/ainf.hpp"
#include "tilt/derived.hpp"
#include "tilt/rickard.hpp"

using namespace tilt;

namespace {

Complex stalkS(const AlgebraPtr& a, int v, int deg = 0) { return Complex::stalk(make_summand(a, SummandKind::S, v), deg); }

// 1 -> 2 -> 3 -> 4 with abc = 0.
AlgebraPtr a4_abc(Field f = Field::rational()) {
  Quiver q{4, {{0, 1, "a"}, {1, 2, "b"}, {2, 3, "c"}}};
  return algebra_from_quiver(q, {{{Scalar(1), {"a", "b", "c"}}}}, f);
}

AlgebraPtr semisimple(Field f = Field::rational()) { return algebra_from_quiver(Quiver{1, {}}, {}, f); }

std::vector<Complex> simples(const AlgebraPtr& a) {
  std::vector<Complex> xs;
  for (int v = 0; v < a->vertices(); ++v) xs.push_back(stalkS(a, v));
  return xs;
}

void check_structure(const AInfAlgebra& x, int cap) {
  CHECK(x.check_stasheff(cap) == "");
  CHECK(x.check_strict_unit() == "");
}

std::optional<std::map<int, std::size_t>> gamma_tilde_dims(const std::vector<Complex>& xs) {
  auto r = rickard_construct(xs, {});
  auto t = check_tilting(r);
  if (t.verdict == Verdict::Inconclusive) return std::nullopt;
  return endomorphism_dg(t.nu_inv_parts, true)->cohomology_dims();
}

}  // namespace

TEST_CASE("Ext algebra of the simples of A2") {
  auto a = fixture::a2(Field::rational());
  auto x = collection_ainf(simples(a), 4, 6);
  CHECK(x.graded_dims() == std::map<int, std::size_t>{{0, 2}, {1, 1}});
  CHECK(x.top_arity() <= 2);
  CHECK(x.check_positive() == "");
  check_structure(x, 4);
}

TEST_CASE("shifted collection {S2, S1[1]} over A2") {
  auto a = fixture::a2(Field::rational());
  auto x = collection_ainf({stalkS(a, 1), stalkS(a, 0, -1)}, 4, 6);
  CHECK(x.graded_dims() == std::map<int, std::size_t>{{0, 2}, {2, 1}});
  check_structure(x, 4);
}

TEST_CASE("semisimple algebra") {
  auto x = collection_ainf(simples(semisimple()), 4, 2);
  CHECK(x.graded_dims() == std::map<int, std::size_t>{{0, 1}});
  CHECK(x.m.size() == 1);
  check_structure(x, 4);
}

TEST_CASE("Massey product on A4 with abc = 0") {
  for (Field f : {Field::rational(), Field::prime(2), Field::prime(5)}) {
    auto a = a4_abc(f);
    auto x = collection_ainf(simples(a), 4, 8);
    CHECK(x.graded_dims() == std::map<int, std::size_t>{{0, 4}, {1, 3}, {2, 1}});
    CHECK(x.top_arity() == 3);
    check_structure(x, 4);
  }
}

TEST_CASE("positivity violation and infinite resolutions") {
  auto a = fixture::a2(Field::rational());
  // Hom(S1, Sigma S2) is Ext^1(S1, S2) in degree 0.
  try {
    collection_ainf({stalkS(a, 0), stalkS(a, 1, -1)}, 3, 6);
    FAIL("expected PositivityViolation");
  } catch (const AInfError& e) {
    CHECK(e.code() == AInfError::Code::PositivityViolation);
  }
  auto dn = fixture::dual_numbers(Field::rational());
  try {
    collection_ainf(simples(dn), 3, 6);
    FAIL("expected ResolutionNotFinite");
  } catch (const AInfError& e) {
    CHECK(e.code() == AInfError::Code::ResolutionNotFinite);
  }
}

TEST_CASE("minimal models of random endomorphism algebras: 200 instances") {
  std::mt19937 rng(4242);
  std::vector<AlgebraPtr> algs = {fixture::a2(Field::rational()), fixture::a3(true), fixture::a3(false),
                                  fixture::square(), a4_abc(Field::prime(3))};
  int done = 0, higher = 0;
  while (done < 200) {
    const auto& a = algs[static_cast<std::size_t>(done) % algs.size()];
    std::vector<Complex> parts;
    std::size_t count = 1 + rng() % 2;
    for (std::size_t i = 0; i < count; ++i) {
      Complex c = minimized(fixture::random_complex(a, rng, SummandKind::P, -1, 2 + static_cast<int>(rng() % 2)));
      if (is_acyclic(c)) break;
      parts.push_back(c);
    }
    if (parts.size() != count) continue;
    auto e = endomorphism_dg(parts, false);
    auto mm = kadeishvili_minimal_model(e, 3);
    CHECK(mm.alg.graded_dims() == e->cohomology_dims());
    check_structure(mm.alg, 3);
    // m_2 agrees with the product on cohomology.
    RowCoordinates boundaries(row_basis(e->d()));
    for (const auto& [t, v] : mm.alg.m) {
      if (t.size() != 2) continue;
      Mat prod = e->mul(mm.reps.row_mat(t[0]), mm.reps.row_mat(t[1]));
      Mat img(e->field(), 1, e->dim());
      for (const auto& [k, c] : v) img = img + mm.reps.row_mat(k).scaled(c);
      Mat diff = prod - img;
      CHECK((diff.is_zero() || boundaries.contains(diff)));
    }
    if (mm.alg.top_arity() >= 3) ++higher;
    ++done;
  }
  MESSAGE("instances with nonzero m_3: " << higher);
}

TEST_CASE("simple and projective A-infinity modules") {
  for (const auto& a : {fixture::a2(Field::rational()), a4_abc(Field::rational()), fixture::square(Field::rational())}) {
    auto x = collection_ainf(simples(a), 4, 8);
    auto ss = simple_ainf_modules(x);
    std::size_t total = 0;
    for (const auto& s : ss) {
      CHECK(s.check_stasheff(4) == "");
      CHECK(s.check_strict_unit() == "");
      total += s.dim();
    }
    CHECK(total == x.graded_dims()[0]);
    for (int i = 0; i < x.vertices(); ++i) {
      auto p = projective_ainf_module(x, i);
      CHECK(p.check_stasheff(4) == "");
      CHECK(p.check_strict_unit() == "");
    }
  }
}

TEST_CASE("dual bar construction on the basic examples") {
  auto a = fixture::a2(Field::rational());
  {
    auto x = collection_ainf(simples(a), 4, 6, 8);
    auto cap = tensor_cap_for(x, 2);
    REQUIRE(cap);
    auto db = dual_bar_dg(x, 2, *cap);
    CHECK(db.alg->check() == "");
    REQUIRE(db.window);
    CHECK(*db.window == 2);
    CHECK(db.cohomology == std::map<int, std::size_t>{{0, 3}});
  }
  {
    auto x = collection_ainf({stalkS(a, 1), stalkS(a, 0, -1)}, 4, 6, 8);
    auto cap = tensor_cap_for(x, 2);
    REQUIRE(cap);
    auto db = dual_bar_dg(x, 2, *cap);
    CHECK(db.alg->check() == "");
    CHECK(db.cohomology == std::map<int, std::size_t>{{-1, 1}, {0, 2}});
  }
  {
    auto x = collection_ainf(simples(a), 4, 6);
    auto db = dual_bar_dg(x, 2, 0);
    CHECK_FALSE(db.window);
    CHECK(db.cohomology.empty());
  }
}

TEST_CASE("dual bar cohomology matches the truncated endomorphism algebra") {
  // Koszul duality between the collection and the silting object nu^{-1}T
  // holds whether or not nu^{-1}T is tilting.
  std::vector<AlgebraPtr> algs = {fixture::a2(Field::rational()), fixture::a3(true), fixture::a3(false),
                                  a4_abc(Field::rational())};
  int compared = 0, skipped = 0;
  for (const auto& a : algs) {
    int r = a->vertices();
    // All shift vectors with entries in {0, -1, -2}.
    std::size_t combos = 1;
    for (int i = 0; i < r; ++i) combos *= 3;
    for (std::size_t c = 0; c < combos; ++c) {
      std::size_t k = c;
      std::vector<Complex> xs;
      for (int v = 0; v < r; ++v) {
        xs.push_back(stalkS(a, v, -static_cast<int>(k % 3)));
        k /= 3;
      }
      AInfAlgebra x;
      try {
        x = collection_ainf(xs, 4, 10);
      } catch (const AInfError& e) {
        CHECK(e.code() == AInfError::Code::PositivityViolation);
        continue;
      }
      check_structure(x, 4);
      auto cap = tensor_cap_for(x, 1);
      REQUIRE(cap);
      if (*cap > x.arity_cap) x = collection_ainf(xs, 4, 10, *cap);
      auto db = dual_bar_dg(x, 1, *cap);
      REQUIRE(db.window);
      auto gto = gamma_tilde_dims(xs);
      if (!gto) {
        ++skipped;
        continue;
      }
      const auto& gt = *gto;
      for (int m = -*db.window; m <= 0; ++m) {
        std::size_t lhs = db.cohomology.count(m) ? db.cohomology.at(m) : 0;
        std::size_t rhs = gt.count(m) ? gt.at(m) : 0;
        CHECK(lhs == rhs);
      }
      ++compared;
    }
  }
  CHECK(compared >= 30);
  CHECK(skipped == 0);
  MESSAGE("collections compared: " << compared);
}
