// Command-line front end. Exit status: 0 pass, 1 internal error,
// 2 parse or configuration error, 3 mathematical FAIL, 4 INCONCLUSIVE.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "tilt/pipeline.hpp"

namespace {

enum Exit { Ok = 0, Internal = 1, Config = 2, MathFail = 3, Inconclusive = 4 };

int exit_for(tilt::Outcome o) {
  switch (o) {
    case tilt::Outcome::Pass: return Ok;
    case tilt::Outcome::Fail: return MathFail;
    case tilt::Outcome::Inconclusive: return Inconclusive;
    case tilt::Outcome::InternalError: return Internal;
  }
  return Internal;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw tilt::ParseError("cannot write " + out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rickard tilting complexes from simple-minded collections"};
  app.set_version_flag("--version", tilt::tool_version());
  app.require_subcommand(1);

  tilt::JobOverrides ov;
  std::string policy, out, input;
  bool bless = false;

  auto add_common = [&](CLI::App* sub, const char* what) {
    sub->add_option("input", input, what)->required();
    sub->add_option("--out", out, "write the report to this file");
  };
  auto add_job_flags = [&](CLI::App* sub) {
    sub->add_option("--window", ov.window, "window W of shift degrees")->check(CLI::PositiveNumber);
    sub->add_option("--budget", ov.budget, "step budget per index")->check(CLI::PositiveNumber);
    sub->add_option("--length", ov.length, "projective resolution length")->check(CLI::PositiveNumber);
    sub->add_option("--arity-cap", ov.arity_cap, "highest A-infinity arity")->check(CLI::Range(2, 12));
    sub->add_option("--policy", policy, "proceed | strict")->check(CLI::IsMember({"proceed", "strict"}));
  };

  std::vector<std::pair<CLI::App*, tilt::Stage>> stages;
  for (auto [name, stage, help] : {std::tuple{"validate", tilt::Stage::Validate, "check the simple-minded conditions"},
                                   std::tuple{"rickard", tilt::Stage::Rickard, "construct T_1..T_r"},
                                   std::tuple{"tilt", tilt::Stage::Tilt, "apply nu^-1 and decide tilting"},
                                   std::tuple{"gamma", tilt::Stage::Gamma, "present Gamma = End(nu^-1 T)"},
                                   std::tuple{"ainf-check", tilt::Stage::AInf, "A-infinity and Koszul cross-check"}}) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, "job file (*.job.json)");
    add_job_flags(sub);
    stages.emplace_back(sub, stage);
  }
  auto* dg = app.add_subcommand("dg-reduce", "Morita reduction and H^0 of a dg algebra");
  add_common(dg, "dg algebra file");
  auto* corpus = app.add_subcommand("corpus", "run every job in a directory against its expectations");
  add_common(corpus, "corpus directory");
  add_job_flags(corpus);
  corpus->add_flag("--bless", bless, "rewrite the expectation files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? Ok : Config;
  }

  try {
    if (!policy.empty()) ov.policy = tilt::parse_policy(policy);
    for (auto [sub, stage] : stages) {
      if (!sub->parsed()) continue;
      tilt::JobSpec job = tilt::load_job(input);
      tilt::apply_overrides(job, ov);
      tilt::validate_job(job);
      tilt::Report rep = tilt::run_pipeline(job, stage);
      emit(rep.render(), out);
      return exit_for(rep.outcome);
    }
    if (dg->parsed()) {
      tilt::Report rep = tilt::dg_reduce_report(tilt::load_dg_algebra(input), input);
      emit(rep.render(), out);
      return exit_for(rep.outcome);
    }
    if (corpus->parsed()) {
      tilt::CorpusResult res = tilt::corpus_run(input, ov, bless);
      emit(res.render(), out);
      return res.all_ok() ? Ok : MathFail;
    }
  } catch (const tilt::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Config;
  } catch (const tilt::EmptyCorpus& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Config;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return Internal;
  }
  return Config;
}
