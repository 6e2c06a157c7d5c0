#pragma once

// Minimal A-infinity algebras on Ext algebras, their simple modules and the
// truncated dual bar construction.
//
// Sign convention for the Stasheff identities (m_n of degree 2 - n):
//   sum_{j+k+l=n} (-1)^{jk+l} m_{j+1+l}(1^j (x) m_k (x) 1^l) = 0,
// with the Koszul rule (f (x) g)(a (x) b) = (-1)^{|g||a|} f(a) (x) g(b).
// A dg algebra has m_1 = d and m_2 = multiplication in this convention.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tilt/dg.hpp"

namespace tilt {

class AInfError : public std::runtime_error {
 public:
  enum class Code { ContractionFailure, PositivityViolation, ResolutionNotFinite, InvalidStructure };
  AInfError(Code c, const std::string& what) : std::runtime_error(what), code_(c) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

using Tuple = std::vector<std::size_t>;

struct AInfAlgebra {
  Field field = Field::rational();
  std::vector<std::string> labels;
  std::vector<int> degree;
  std::vector<int> left_vertex, right_vertex;
  std::vector<std::size_t> idempotents;  // strict unit = sum of these
  int arity_cap = 4;
  // Beyond arity_cap, m_n is known on tuples of positive degree elements up
  // to this arity (the other values vanish by strict unitality).
  int positive_cap = 0;
  // m_n on composable basis tuples of length n; absent tuples map to zero.
  std::map<Tuple, SparseVec> m;

  std::size_t dim() const { return degree.size(); }
  int vertices() const { return static_cast<int>(idempotents.size()); }
  Mat apply(const Tuple& args) const;  // 1 x dim
  bool composable(const Tuple& args) const;
  std::map<int, std::size_t> graded_dims() const;
  // Largest n with some nonzero m_n.
  int top_arity() const;

  // Empty strings on success.
  std::string check_stasheff(int cap) const;
  std::string check_strict_unit() const;
  std::string check_positive() const;
};

// Minimal model of a dg algebra by homotopy transfer along a contraction that
// respects the idempotent decomposition and keeps the identities as
// representatives; the result is strictly unital.
struct MinimalModel {
  AInfAlgebra alg;
  Mat reps;  // dim H x dim E: cocycle representatives
};
MinimalModel kadeishvili_minimal_model(const DgAlgebraPtr& e, int arity_cap, int positive_cap = 0);

// dg endomorphism algebra of the sum of projective resolutions of the X_i.
// Throws ResolutionNotFinite when a resolution does not terminate within
// `length`.
DgAlgebraPtr resolution_endomorphisms(const std::vector<Complex>& xs, int length);

// The A-infinity algebra of a simple-minded collection: minimal model of
// resolution_endomorphisms, checked to be positive.
AInfAlgebra collection_ainf(const std::vector<Complex>& xs, int arity_cap, int length, int positive_cap = 0);

struct AInfModule {
  const AInfAlgebra* alg = nullptr;
  std::vector<int> degree;
  std::vector<int> right_vertex;
  int vertex = -1;  // top vertex
  // m_n(x, a_2, ..., a_n) keyed by (x, a_2, ..., a_n).
  std::map<Tuple, SparseVec> m;

  std::size_t dim() const { return degree.size(); }
  Mat apply(const Tuple& args) const;
  std::string check_stasheff(int cap) const;
  std::string check_strict_unit() const;
};

// P_i = e_i A with the restricted structure, and the one-dimensional
// S_i = P_i / e_i A^{>0}.
AInfModule projective_ainf_module(const AInfAlgebra& a, int i);
std::vector<AInfModule> simple_ainf_modules(const AInfAlgebra& a);

struct DualBar {
  DgAlgebraPtr alg;       // T(D(s A^{>0})) over K^r modulo tensors longer than the cap
  int tensor_cap = 0;     // cap actually used
  std::optional<int> longest_degree0_path;  // nullopt: oriented cycle
  // Degrees -window <= m <= 0 are certified (and all m > 0, where both sides
  // vanish); nullopt when no degree can be certified.
  std::optional<int> window;
  std::map<int, std::size_t> cohomology;  // certified degrees only, nonzero
  bool certified(int m) const { return m > 0 || (window && m >= -*window && m <= 0); }
};
DualBar dual_bar_dg(const AInfAlgebra& a, int degree_window, int tensor_cap);

// Smallest tensor cap certifying the given window, or nullopt when the
// degree 0 generators contain an oriented cycle.
std::optional<int> tensor_cap_for(const AInfAlgebra& a, int degree_window);

}  // namespace tilt
