#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "tilt/pipeline.hpp"

using namespace tilt;
namespace fs = std::filesystem;

namespace {

const fs::path kCorpus = TILT_CORPUS_DIR;

Report run_job(const std::string& stem) { return run_pipeline(load_job(kCorpus / (stem + ".job.json"))); }

std::string get(const Report& r, const std::string& path) { return r.value(path).value_or("<missing>"); }

// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("tilt_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("reports for the A2 examples") {
  auto r = run_job("identity_a2");
  CHECK(r.outcome == Outcome::Pass);
  CHECK(get(r, "tilt.verdict") == "TILTING");
  CHECK(get(r, "gamma.cartan") == "[[1,1],[0,1]]");
  CHECK(get(r, "ainf.cross_check") == "MATCH");

  r = run_job("negative_a2");
  CHECK(r.outcome == Outcome::Fail);
  CHECK(r.outcome_stage == "tilt");
  CHECK(get(r, "tilt.witness") == "-1");
  CHECK(get(r, "tilt.gamma_tilde_cohomology") == "-1:1 0:2");
  CHECK(get(r, "ainf.cross_check") == "MATCH");

  r = run_job("not_smo_a2");
  CHECK(r.outcome == Outcome::Fail);
  CHECK(r.outcome_stage == "validate");
  CHECK_FALSE(r.section("rickard"));
}

TEST_CASE("stage selection and field order") {
  JobSpec job = load_job(kCorpus / "apr_a2.job.json");
  auto r = run_pipeline(job, Stage::Rickard);
  CHECK(r.section("rickard"));
  CHECK_FALSE(r.section("tilt"));
  std::vector<std::string> names;
  for (const auto& s : run_pipeline(job).sections) names.push_back(s.name);
  CHECK(names == std::vector<std::string>{"params", "validate", "rickard", "tilt", "gamma", "ainf"});
  std::string text = run_pipeline(job).render();
  CHECK(text.find("tool: ") == 0);
  CHECK(text.find("[outcome]\nresult: PASS") != std::string::npos);
}

TEST_CASE("reports are deterministic") {
  JobSpec job = load_job(kCorpus / "a4_abc_simples.job.json");
  CHECK(run_pipeline(job).verdict_text() == run_pipeline(job).verdict_text());
}

TEST_CASE("strict policy stops when generation is not certified") {
  // No devissage steps: S2[1] is a shifted simple but S1 is not reached.
  JobSpec job = load_job(kCorpus / "apr_a2.job.json");
  job.budget = 0;
  auto proceed = run_pipeline(job, Stage::Validate);
  CHECK(get(proceed, "validate.verdict") == "PASS_NECESSARY");
  CHECK(proceed.outcome == Outcome::Pass);
  job.policy = Policy::Strict;
  auto strict = run_pipeline(job, Stage::Tilt);
  CHECK(strict.outcome == Outcome::Inconclusive);
  CHECK(strict.outcome_stage == "validate");
  CHECK_FALSE(strict.section("rickard"));
}

TEST_CASE("honesty on a larger window") {
  for (const char* stem : {"identity_a2", "negative_a2", "a3_shifted"}) {
    auto v = honesty_violations(load_job(kCorpus / (std::string(stem) + ".job.json")));
    CHECK_MESSAGE(v.empty(), stem << ": " << (v.empty() ? "" : v.front()));
  }
}

TEST_CASE("dg-reduce report") {
  auto r = dg_reduce_report(load_dg_algebra(kCorpus / "dg" / "contractible_vertex.json"), "x");
  CHECK(r.outcome == Outcome::Pass);
  CHECK(get(r, "morita.stripped") == "2");
  CHECK(get(r, "h0.dim") == "1");
}

TEST_CASE("corpus runner") {
  SUBCASE("empty corpus") {
    fs::path d = scratch("empty");
    CHECK_THROWS_AS(corpus_run(d), EmptyCorpus);
    CHECK_THROWS_AS(corpus_run(d / "missing"), EmptyCorpus);
  }
  SUBCASE("bless, pass and a corrupted expectation") {
    fs::path d = scratch("corpus");
    fs::copy(kCorpus / "algebras", d / "algebras");
    for (const char* stem : {"identity_a2", "negative_a2", "apr_a2"})
      fs::copy_file(kCorpus / (std::string(stem) + ".job.json"), d / (std::string(stem) + ".job.json"));
    auto missing = corpus_run(d);
    CHECK_FALSE(missing.all_ok());
    auto blessed = corpus_run(d, {}, true);
    CHECK(blessed.all_ok());
    auto again = corpus_run(d);
    CHECK(again.all_ok());
    REQUIRE(again.entries.size() == 3);
    CHECK(again.entries[0].name == "apr_a2");
    CHECK(again.entries[2].name == "negative_a2");

    fs::path exp = d / "expected" / "negative_a2.txt";
    std::string text = read_file(exp);
    auto pos = text.find("tilt.verdict = NOT_TILTING");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, std::string("tilt.verdict = NOT_TILTING").size(), "tilt.verdict = TILTING");
    std::ofstream(exp) << text;
    auto bad = corpus_run(d);
    CHECK_FALSE(bad.all_ok());
    CHECK(bad.failing() == std::vector<std::string>{"negative_a2"});
    const auto& e = bad.entries[2];
    CHECK(e.detail.find("tilt.verdict = TILTING") != std::string::npos);
    CHECK(bad.render().find("negative_a2: MISMATCH") != std::string::npos);
  }
  SUBCASE("the shipped corpus matches") {
    auto res = corpus_run(kCorpus);
    CHECK_MESSAGE(res.all_ok(), res.render());
    CHECK(res.entries.size() >= 8);
  }
}
