#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "tilt/derived.hpp"
#include "tilt/rickard.hpp"

using namespace tilt;

TEST_CASE("homotopy Hom oracle on stalks") {
  auto a = fixture::a2(Field::rational());
  auto s = [&](SummandKind k, int v, int deg = 0) { return Complex::stalk(make_summand(a, k, v), deg); };
  // Ext^1(S1, S2) = K through the injective I2 -> I1 coresolution of S2.
  Complex i2 = s(SummandKind::I, 1);
  CHECK(oracle::homotopy_hom_dim(s(SummandKind::S, 0), i2, 0) == 0);
  CHECK(oracle::homotopy_hom_dim(s(SummandKind::P, 0), i2, 0) == 1);
  CHECK(oracle::homotopy_hom_dim(s(SummandKind::P, 0), s(SummandKind::P, 0), 0) == 1);
  CHECK(oracle::homotopy_hom_dim(s(SummandKind::P, 1), s(SummandKind::P, 0), 0) == 1);
  CHECK(oracle::homotopy_hom_dim(s(SummandKind::P, 0), s(SummandKind::P, 1), 0) == 0);
  CHECK(oracle::homotopy_hom_dim(s(SummandKind::P, 0), s(SummandKind::P, 0, -1), -1) == 1);
}

TEST_CASE("homotopy Hom oracle agrees with derived Hom: 200 instances") {
  std::mt19937 rng(99);
  auto zoo = fixture::zoo();
  for (int it = 0; it < 200; ++it) {
    const auto& a = zoo[static_cast<std::size_t>(it) % zoo.size()];
    Complex p = fixture::random_complex(a, rng, SummandKind::P, -1, 2 + static_cast<int>(rng() % 2));
    Complex y = it % 2 ? fixture::random_complex(a, rng, SummandKind::I, -1, 2)
                       : Complex::stalk(fixture::random_module(a, rng), static_cast<int>(rng() % 3) - 1);
    auto h = derived_hom(p, y, 8);
    for (int m = -2; m <= 2; ++m) {
      REQUIRE(h.certified(m));
      CHECK(oracle::homotopy_hom_dim(p, y, m) == h.at(m));
    }
    // Hom(P_v, M) = M e_v.
    Module mod = fixture::random_module(a, rng);
    int v = static_cast<int>(rng() % static_cast<unsigned>(a->vertices()));
    CHECK(oracle::homotopy_hom_dim(Complex::stalk(make_summand(a, SummandKind::P, v), 0), Complex::stalk(mod, 0), 0) ==
          mod.basis_at(v).size());
  }
}
