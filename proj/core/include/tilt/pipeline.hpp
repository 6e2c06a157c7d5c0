#pragma once

// Job orchestration: validate -> construct -> nu^{-1} -> tilting verdict ->
// Gamma -> A-infinity cross-check, with structured text reports and the
// example corpus runner.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tilt/io.hpp"

namespace tilt {

enum class Stage { Validate, Rickard, Tilt, Gamma, AInf };
std::string to_string(Stage s);

enum class Outcome { Pass, Fail, Inconclusive, InternalError };
std::string to_string(Outcome o);

struct ReportField {
  std::string key;
  std::string value;
  bool verdict = true;    // part of the corpus comparison
  bool certified = true;  // exact for the parameters used
};

struct ReportSection {
  std::string name;
  std::vector<ReportField> fields;
  void add(const std::string& key, const std::string& value, bool verdict = true, bool certified = true);
};

struct Report {
  std::string tool_version;
  std::vector<ReportSection> sections;
  std::vector<std::pair<std::string, double>> timings_ms;
  Outcome outcome = Outcome::Pass;
  std::string outcome_stage;
  std::string outcome_reason;

  std::string render() const;
  // "section.key = value" for verdict fields, in report order.
  std::string verdict_text() const;
  std::optional<std::string> value(const std::string& path) const;
  const ReportSection* section(const std::string& name) const;
};

Report run_pipeline(const JobSpec& job, Stage until = Stage::AInf);

// Standalone report for dg-reduce.
Report dg_reduce_report(const DgAlgebraPtr& a, const std::string& name);

// Runs the job with the given parameters and with a longer resolution and a
// wider window; returns the certified fields whose values differ.
std::vector<std::string> honesty_violations(const JobSpec& job, int extra_length = 2, int extra_window = 1);

class EmptyCorpus : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CorpusEntry {
  std::string name;
  bool ok = false;
  std::string detail;  // first mismatch or error
  Report report;
};

struct CorpusResult {
  std::vector<CorpusEntry> entries;  // sorted by name
  bool all_ok() const;
  std::vector<std::string> failing() const;
  std::string render() const;
};

// Jobs are the files "*.job.json" in `dir`; expectations live in
// dir/expected/<name>.txt. With bless, expectation files are (re)written.
CorpusResult corpus_run(const std::filesystem::path& dir, const JobOverrides& overrides = {}, bool bless = false);

std::string tool_version();

}  // namespace tilt
