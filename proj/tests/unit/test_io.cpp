#include "doctest.h"
#include "tilt/io.hpp"

using namespace tilt;

namespace {

const char* kA2 = R"({"name": "A2", "field": "rational",
  "quiver": {"vertices": 2, "arrows": [{"from": 1, "to": 2, "label": "a"}]}})";

template <class F>
std::string parse_error(F f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("algebra files") {
  std::string name;
  auto a = parse_algebra_text(kA2, &name);
  CHECK(name == "A2");
  CHECK(a->dim() == 3);
  CHECK(a->cartan() == std::vector<std::vector<int>>{{1, 1}, {0, 1}});

  auto dn = parse_algebra_text(R"({"field": {"prime": 3}, "quiver": {"vertices": 1,
    "arrows": [{"from": 1, "to": 1, "label": "x"}]},
    "relations": [{"terms": [{"coeff": "2/1", "path": ["x", "x"]}]}]})");
  CHECK(dn->dim() == 2);
  CHECK(dn->field().characteristic() == 3);

  CHECK(parse_error([] { parse_algebra_text("{"); }).find("malformed JSON") != std::string::npos);
  CHECK(parse_error([] { parse_algebra_text(R"({"field": {"prime": 4}, "quiver": {"vertices": 1}})"); })
            .find("not prime") != std::string::npos);
  CHECK(parse_error([] {
          parse_algebra_text(R"({"field": "rational", "quiver": {"vertices": 1,
            "arrows": [{"from": 1, "to": 1, "label": "x"}]},
            "relations": [{"terms": [{"coeff": 1, "path": ["y"]}]}]})");
        }).find("unknown arrow") != std::string::npos);
  CHECK(parse_error([] {
          parse_algebra_text(R"({"field": "rational", "quiver": {"vertices": 2,
            "arrows": [{"from": 1, "to": 3, "label": "x"}]}})");
        }).find("out of range") != std::string::npos);
}

TEST_CASE("scalars") {
  CHECK(parse_scalar("-3/4", Field::rational()) == Scalar(-3, 4));
  CHECK(parse_scalar("3", Field::prime(5)) == Scalar(3));
  CHECK(parse_scalar("-1", Field::prime(5)) == Scalar(4));
  CHECK(parse_scalar("1/2", Field::prime(5)) == Scalar(3));
  CHECK_THROWS_AS(parse_scalar("1/0", Field::rational()), ParseError);
  CHECK_THROWS_AS(parse_scalar("x", Field::rational()), ParseError);
}

TEST_CASE("collections and shift semantics") {
  auto a = parse_algebra_text(kA2);
  std::vector<std::string> names;
  auto xs = parse_collection_text(R"("simples")", a, &names);
  REQUIRE(xs.size() == 2);
  CHECK(names == std::vector<std::string>{"S1", "S2"});
  CHECK(xs[0].lo() == 0);

  // "shift": s places the stalk in degree -s.
  xs = parse_collection_text(R"([{"module": "P", "vertex": 1}, {"module": "S", "vertex": 2, "shift": 1}])", a, &names);
  CHECK(names == std::vector<std::string>{"P1", "S2[1]"});
  CHECK(xs[1].lo() == -1);
  CHECK(xs[1].hi() == -1);

  xs = parse_collection_text(R"({"preset": "shifted", "shifts": [0, 2]})", a);
  CHECK(xs[1].lo() == -2);

  // P2 -> P1 in degrees -1..0; P2 = S2 embeds in P1 = e1 A.
  xs = parse_collection_text(R"([{"terms": {"-1": [{"module": "P", "vertex": 2}], "0": [{"module": "P", "vertex": 1}]},
    "differentials": {"-1": [[0, 1]]}}])", a, &names);
  REQUIRE(xs.size() == 1);
  CHECK(cohomology_dims(xs[0]) == std::map<int, std::size_t>{{0, 1}});

  CHECK(parse_error([&] { parse_collection_text(R"({"preset": "shifted", "shifts": [0]})", a); })
            .find("one integer per vertex") != std::string::npos);
  CHECK(parse_error([&] { parse_collection_text(R"([{"module": "Q", "vertex": 1}])", a); })
            .find("module must be") != std::string::npos);
  CHECK(parse_error([&] {
          parse_collection_text(R"([{"terms": {"0": [{"module": "P", "vertex": 1}]},
            "differentials": {"0": [[1]]}}])", a);
        }).find("outside the support") != std::string::npos);
  CHECK(parse_error([&] { parse_collection_text("[]", a); }).find("empty collection") != std::string::npos);
}

TEST_CASE("jobs, overrides and policy") {
  std::string text = std::string(R"({"name": "j", "algebra": )") + kA2 +
                     R"(, "collection": "simples", "window": 2, "policy": "strict"})";
  JobSpec job = parse_job_text(text, ".");
  CHECK(job.name == "j");
  CHECK(job.window == 2);
  CHECK(job.budget == 8);
  CHECK(job.policy == Policy::Strict);
  JobOverrides o;
  o.window = 5;
  o.policy = Policy::Proceed;
  apply_overrides(job, o);
  CHECK(job.window == 5);
  CHECK(job.policy == Policy::Proceed);
  job.window = 0;
  CHECK_THROWS_AS(validate_job(job), ParseError);

  CHECK_THROWS_AS(parse_policy("lenient"), ParseError);
  CHECK(parse_error([] { parse_job_text(R"({"collection": "simples"})", "."); }).find("algebra") != std::string::npos);
  CHECK(parse_error([] { parse_job_text(R"({"algebra": "no/such/file.json", "collection": "simples"})", "."); }) != "");
  CHECK(parse_error([] { load_job("no/such/job.json"); }) != "");
}

TEST_CASE("dg algebra files") {
  auto d = parse_dg_algebra_text(R"({"field": "rational", "vertices": 1,
    "basis": [{"label": "e", "degree": 0, "from": 1, "to": 1},
              {"label": "h", "degree": -1, "from": 1, "to": 1}],
    "idempotents": ["e"],
    "d": [{"from": "h", "to": [{"coeff": 1, "label": "e"}]}]})");
  CHECK(d->dim() == 2);
  CHECK(d->cohomology_dims().empty());
  // x x = y with d(y) = x but d(x x) = 0.
  CHECK_THROWS_AS(parse_dg_algebra_text(R"({"field": "rational", "vertices": 1,
    "basis": [{"label": "e", "degree": 0, "from": 1, "to": 1},
              {"label": "x", "degree": -1, "from": 1, "to": 1},
              {"label": "y", "degree": -2, "from": 1, "to": 1}],
    "idempotents": ["e"],
    "d": [{"from": "y", "to": [{"coeff": 1, "label": "x"}]}],
    "products": [{"left": "x", "right": "x", "result": [{"coeff": 1, "label": "y"}]}]})"),
                  ParseError);
}
