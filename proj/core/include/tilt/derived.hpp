#pragma once

// Resolutions, derived Hom tables with validity bookkeeping, Grothendieck
// group data and the simple-minded collection checks.

#include <optional>
#include <string>
#include <vector>

#include "tilt/complex.hpp"

namespace tilt {

struct Resolution {
  Complex res;
  ChainMap quasi;  // projective: res -> X; injective: X -> res
  // Projective: quasi induces isomorphisms on H^m for m > bound.
  // Injective: isomorphisms on H^m for m < bound.
  // nullopt: the resolution terminated and quasi is a quasi-isomorphism.
  std::optional<int> bound;
  bool genuine() const { return !bound.has_value(); }
};

// Minimal projective resolution built degree by degree down to lo - length.
Resolution projective_resolution(const Complex& x, int length);
// Injective coresolution up to hi + length, computed through duality and a
// projective resolution over the opposite algebra.
Resolution injective_coresolution(const Complex& x, int length);

// D applied to a complex: D(X)^n = D(X^{-n}) over the opposite algebra
// (or `target`), differentials transposed. P and I tags are exchanged.
Complex dualize(const Complex& x, AlgebraPtr target = nullptr);

// Graded dimensions of Hom(X, Sigma^m Y).
struct HomTable {
  std::map<int, std::size_t> dims;  // nonzero entries only
  // Degrees m < zero_below are zero for degree reasons; values for
  // zero_below <= m <= valid_hi are exact. When complete, degrees above
  // valid_hi are zero as well.
  int zero_below = 0;
  int valid_hi = 0;
  bool complete = false;

  std::size_t at(int m) const;
  bool certified(int m) const { return complete || m <= valid_hi; }
};

HomTable derived_hom(const Complex& x, const Complex& y, int length);
// Same, with a resolution of x computed by the caller.
HomTable derived_hom(const Resolution& px, const Complex& x, const Complex& y);

// Smallest resolution length that certifies derived_hom(x, y) up to degree m.
int length_for(const Complex& x, const Complex& y, int m);
int default_length(const AlgebraPtr& a, const std::vector<Complex>& xs);

struct EulerData {
  IntMat classes;  // row i: class of X_i in the basis of simples
  std::optional<IntMat> euler;
  std::string note;  // reason when euler is missing
};
EulerData euler_matrix(const std::vector<Complex>& xs, int length);
std::vector<long> class_vector(const Complex& x);

enum class Cond3 { Verified, PassNecessary, Fail };
std::string to_string(Cond3 c);

struct SmoWitness {
  std::size_t i = 0, j = 0;
  int m = 0;
  std::size_t dim = 0;
};

struct SmoReport {
  std::size_t r = 0;
  int length = 0;   // resolution length used
  bool cond1 = true;
  std::vector<SmoWitness> cond1_witnesses;
  bool cond2 = true;
  std::vector<SmoWitness> cond2_witnesses;
  Cond3 cond3 = Cond3::Fail;
  std::vector<mpz_class> smith;
  std::string cond3_note;
  std::size_t devissage_steps = 0;
  bool certified = true;  // false when some needed degree was not certified

  bool passes() const { return cond1 && cond2 && cond3 != Cond3::Fail; }
};

SmoReport validate_simple_minded(const std::vector<Complex>& xs, int length, std::size_t devissage_budget);

// True when x is quasi-isomorphic to S_v[s]; returns (v, s).
std::optional<std::pair<int, int>> as_shifted_simple(const Complex& x);

}  // namespace tilt
