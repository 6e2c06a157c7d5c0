#pragma once

// Rickard's construction of the complexes T_i from a simple-minded
// collection, the inverse Nakayama functor on complexes of injectives, the
// tilting test and the endomorphism algebra Gamma.
//
// The iteration is run on injective models. X_i^{(n)} is kept as a minimized
// complex of injectives that agrees with the true object up to a cutoff
// degree M: the comparison map has a cone with cohomology only in degrees
// >= M. Hom(Sigma^m X_j, X_i^{(n)}) is then exact whenever
// M - 1 - (hi(X_j) - m) >= 0, and after each step the model is cut at M.
//
// A bounded complex of injectives T with Hom(X_j, Sigma^m T) = delta_ij
// delta_m0 for every m is isomorphic to T_i, and for such complexes the
// property can be checked in all degrees. Each stage offers its brutal
// truncations as candidates; the lowest one with the full property is the
// certified T_i of that stage.

#include <optional>
#include <string>
#include <vector>

#include "tilt/derived.hpp"

namespace tilt {

class RickardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RickardParams {
  int window = 4;     // W: shifts -W <= m < 0 are killed
  int budget = 8;     // N: maximal number of steps
  int length = 0;     // resolution length; 0 selects a default
};

enum class StepStatus { Running, Terminated, WindowStable, BudgetExceeded };
std::string to_string(StepStatus s);

struct BasisEntry {
  std::size_t j = 0;
  int m = 0;
  std::size_t count = 0;  // |B(j, m, i)|
};

struct StepRecord {
  int n = 0;
  std::vector<BasisEntry> basis;   // nonempty B(j, m, i) only
  std::string z;                   // description of Z_i^{(n-1)}
  std::string result;              // minimized cone X_i^{(n)}
  std::size_t result_dim = 0;
};

struct IndexTrace {
  std::vector<StepRecord> steps;
  StepStatus status = StepStatus::Running;
  int status_step = 0;
  std::optional<int> cutoff;  // M; nullopt: exact model
  bool certified = false;     // T_i has the full defining property
  std::optional<int> truncated_at;  // T_i is the stage cut above this degree
};

struct RickardResult {
  std::vector<Complex> t;  // T_i, injective form
  std::vector<IndexTrace> trace;
  RickardParams params;
  int length = 0;
  bool all_finished() const;  // every index Terminated or WindowStable
  bool all_certified() const;
};

// Bases B(j, m, i) of Hom(Sigma^m X_j, cur) for -W <= m < 0, as chain maps.
struct KillBasis {
  std::vector<BasisEntry> entries;  // nonempty B(j, m, i) only
  std::vector<Complex> sources;     // Sigma^m X_j, one per basis element
  std::vector<GradedMap> maps;
};
KillBasis kill_basis(const std::vector<Complex>& xs, const Complex& cur, std::optional<int> cutoff, int window);

// One step of the iteration on an injective model `cur` (with cutoff M).
struct StepOutput {
  Complex next;
  StepRecord record;
  std::optional<int> cutoff;
  ChainMap alpha;
};
StepOutput rickard_step(const std::vector<Complex>& xs, const Complex& cur, std::optional<int> cutoff,
                        int window, int length);
StepOutput rickard_step(const KillBasis& kb, const Complex& cur, std::optional<int> cutoff, int length);

RickardResult rickard_construct(const std::vector<Complex>& xs, const RickardParams& params);

// Lowest brutal truncation of `stage` that satisfies the full defining
// property for index i, with the degree it was cut at.
std::optional<std::pair<Complex, int>> certified_truncation(const std::vector<Complex>& xs, std::size_t i,
                                                            const Complex& stage);

// Checks Hom(X_j, Sigma^m T_i) = delta_ij delta_m0 for m_lo <= m <= m_hi.
struct DefiningCheck {
  bool ok = true;
  int m_lo = 0, m_hi = 0;  // certified range checked
  std::vector<SmoWitness> violations;
};
DefiningCheck check_defining_property(const std::vector<Complex>& xs, const RickardResult& r, int m_lo, int m_hi);

// nu^{-1} on a complex whose summands are all injective.
Complex nu_inverse_complex(const Complex& t);
// nu on a complex whose summands are all projective.
Complex nu_complex(const Complex& p);

enum class Verdict { Tilting, NotTilting, Inconclusive };
std::string to_string(Verdict v);

struct TiltingReport {
  Complex t, nu_inv_t;  // sums of the T_i and of the nu^{-1} T_i
  std::vector<Complex> nu_inv_parts;
  std::map<int, std::size_t> gamma_tilde_dims;  // H^m(Gamma~) nonzero entries
  Verdict verdict = Verdict::Inconclusive;
  int witness = 0;  // degree m < 0 with H^m != 0 when NotTilting
  std::string note;
  std::optional<AlgebraPtr> gamma;
  std::vector<std::vector<std::size_t>> cartan;  // dim Hom(nu^-1 T_j, nu^-1 T_i)
};

class InternalInvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

TiltingReport check_tilting(const RickardResult& r);

// Gamma = H^0 End(P) for P = sum of parts, with idempotents the identities of
// the parts. Basis of e_i Gamma e_j: classes of maps P_j -> P_i; the product
// x y is "y then x".
AlgebraPtr gamma_algebra(const std::vector<Complex>& parts);

// --- self-injective case

class SelfInjectiveError : public std::runtime_error {
 public:
  enum class Code { NotSelfInjective, NotNuStable };
  SelfInjectiveError(Code c, const std::string& what, std::size_t witness = 0)
      : std::runtime_error(what), code_(c), witness_(witness) {}
  Code code() const { return code_; }
  std::size_t witness() const { return witness_; }

 private:
  Code code_;
  std::size_t witness_;
};

// P_i = I_{perm[i]} for every i, or nullopt when A is not self-injective.
std::optional<std::vector<int>> projective_injective_permutation(const AlgebraPtr& a);

// Nakayama functor D Hom_A(-, A) on modules and maps; exact when A is
// self-injective, where it is applied degreewise to complexes.
Module nakayama_module(const Module& m);
Mat nakayama_map(const Module& src, const Module& dst, const Mat& f);
Complex nakayama_module_complex(const Complex& x);

// Decides x = y in the derived category when possible: true with a
// quasi-isomorphism x -> y or y -> x found among chain maps, false when the
// cohomology dimensions differ, nullopt otherwise.
std::optional<bool> find_quasi_iso(const Complex& x, const Complex& y, int attempts = 24);

// Symmetric algebra test: a trace form t with t(ab) = t(ba) whose Gram
// matrix t(b_i b_j) is invertible. false when A has no nonzero trace form or
// is not self-injective; nullopt when the search fails.
std::optional<bool> has_symmetric_form(const AlgebraPtr& a);

struct SelfInjectiveReport {
  std::vector<int> projective_to_injective;  // P_i = I_{perm(i)}
  std::optional<bool> symmetric;
  std::vector<std::size_t> nu_perm;  // nu(X_i) = X_{nu_perm[i]}
  std::optional<bool> t_iso_nu_inv_t;  // nullopt: UNKNOWN
};

// Throws SelfInjectiveError when A is not self-injective or when some nu(X_i)
// matches no X_j (witness i; also when the match is undecided).
SelfInjectiveReport self_injective_check(const std::vector<Complex>& xs, const RickardResult* r);

}  // namespace tilt
