#pragma once

// Input files. All formats are JSON; vertices are 1-based in files and
// 0-based in memory.
//
// Algebra:
//   {"name": "A2", "field": "rational" | {"prime": p},
//    "quiver": {"vertices": 2, "arrows": [{"from": 1, "to": 2, "label": "a"}]},
//    "relations": [{"terms": [{"coeff": 1, "path": ["a", "b"]}]}]}
// Coefficients are integers or strings such as "-3/4".
//
// Collections ("collection" field of a job):
//   "simples" | {"preset": "simples"} | {"preset": "shifted", "shifts": [0, 1]}
//   or a list of objects, each either
//   {"module": "P"|"I"|"S", "vertex": v, "shift": s}      (stalk in degree -s)
//   {"terms": {"-1": [{"module": "P", "vertex": 2}], "0": [...]},
//    "differentials": {"-1": [[...], ...]}, "shift": s}
// Differential d^n is a dim X^n x dim X^{n+1} matrix acting on row vectors,
// in the basis obtained by concatenating the standard bases of the summands.
//
// Job:
//   {"name": ..., "algebra": "a2.json" | {...}, "collection": ...,
//    "window": 4, "budget": 8, "length": 0, "arity_cap": 4, "policy": "proceed"}
//
// dg algebra (for dg-reduce):
//   {"field": ..., "vertices": r,
//    "basis": [{"label": "x", "degree": -1, "from": 1, "to": 1}],
//    "idempotents": ["e1", ...],
//    "d": [{"from": "x", "to": [{"coeff": 1, "label": "e1"}]}],
//    "products": [{"left": "x", "right": "y", "result": [{"coeff": 1, "label": "z"}]}]}
// Products with idempotents follow from the vertex data and may be omitted.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tilt/dg.hpp"

namespace tilt {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Policy { Proceed, Strict };
std::string to_string(Policy p);
Policy parse_policy(const std::string& s);

struct JobSpec {
  std::string name;
  std::filesystem::path source;       // job file, empty for inline jobs
  std::string algebra_name;
  AlgebraPtr algebra;
  std::vector<Complex> collection;
  std::vector<std::string> collection_names;
  int window = 4;
  int budget = 8;
  int length = 0;  // 0: default for the algebra and collection
  int arity_cap = 4;
  Policy policy = Policy::Proceed;
};

// Command-line overrides; unset fields keep the job values.
struct JobOverrides {
  std::optional<int> window, budget, length, arity_cap;
  std::optional<Policy> policy;
};

Scalar parse_scalar(const std::string& s, const Field& f);

AlgebraPtr parse_algebra_text(const std::string& text, std::string* name = nullptr);
AlgebraPtr load_algebra(const std::filesystem::path& path, std::string* name = nullptr);

std::vector<Complex> parse_collection_text(const std::string& text, const AlgebraPtr& a,
                                           std::vector<std::string>* names = nullptr);

JobSpec parse_job_text(const std::string& text, const std::filesystem::path& base_dir);
JobSpec load_job(const std::filesystem::path& path);
void apply_overrides(JobSpec& job, const JobOverrides& o);
// Parameters must be positive (length may be 0 for the default).
void validate_job(const JobSpec& job);

DgAlgebraPtr parse_dg_algebra_text(const std::string& text);
DgAlgebraPtr load_dg_algebra(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace tilt
