#include "doctest.h"
#include "fixtures.hpp"
#include "tilt/presentation.hpp"

using namespace tilt;

TEST_CASE("presentations of path algebras") {
  auto p = present_algebra(fixture::a2(Field::rational()));
  CHECK(p.describe_arrows() == "x1:1->2");
  CHECK(p.relations.empty());
  CHECK(p.verified);
  CHECK(p.max_path_length == 1);

  auto a3 = fixture::a3(true);
  p = present_algebra(a3);
  CHECK(p.quiver.arrows.size() == 2);
  CHECK(p.relations.size() == 1);
  CHECK(p.describe_relations(a3->field()) == "x1*x2");
  CHECK(p.verified);

  p = present_algebra(fixture::a3(false));
  CHECK(p.relations.empty());
  CHECK(p.max_path_length == 2);
}

TEST_CASE("presentations with loops and cycles") {
  auto dn = fixture::dual_numbers(Field::rational());
  auto p = present_algebra(dn);
  CHECK(p.describe_arrows() == "x1:1->1");
  CHECK(p.describe_relations(dn->field()) == "x1*x1");
  CHECK(p.verified);

  auto tc = fixture::two_cycle();
  p = present_algebra(tc);
  CHECK(p.quiver.arrows.size() == 2);
  CHECK(p.verified);
  CHECK(algebra_from_quiver(p.quiver, p.relations, tc->field())->dim() == tc->dim());
}

TEST_CASE("commutative square") {
  auto sq = fixture::square();
  auto p = present_algebra(sq);
  CHECK(p.quiver.arrows.size() == 4);
  CHECK(p.relations.size() == 1);
  CHECK(p.verified);
  auto b = algebra_from_quiver(p.quiver, p.relations, sq->field());
  CHECK(b->cartan() == sq->cartan());
}

TEST_CASE("semisimple and field") {
  auto k = algebra_from_quiver(Quiver{3, {}}, {}, Field::prime(2));
  auto p = present_algebra(k);
  CHECK(p.quiver.vertices == 3);
  CHECK(p.describe_arrows() == "none");
  CHECK(p.describe_relations(k->field()) == "none");
  CHECK(p.verified);
}
