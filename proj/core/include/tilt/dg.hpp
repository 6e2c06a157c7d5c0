#pragma once

// Finite-dimensional dg algebras and dg modules given by structure constants.
//
// Conventions:
//  * Basis elements are homogeneous: each has a degree and lies in
//    e_{left} A e_{right}. The differential has degree +1 and is stored as a
//    matrix acting on row vectors, d(x) = x * d.
//  * Leibniz: d(xy) = d(x) y + (-1)^{|x|} x d(y).
//  * Right modules: m.a = m * rho(a), d(m a) = d(m) a + (-1)^{|m|} m d(a).
//    Left modules: a.m = m * lambda(a), d(a m) = d(a) m + (-1)^{|a|} a d(m).
//  * Hom complexes: (df) = d f - (-1)^{|f|} f d, and for row matrices
//    dF = F d_L - (-1)^n d_N F.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tilt/complex.hpp"

namespace tilt {

class DgError : public std::runtime_error {
 public:
  enum class Code { InvalidStructure, NotNonpositive, CohomologyNotConcentrated, CertificateMissing, NotBasic };
  DgError(Code c, const std::string& what, int witness = 0) : std::runtime_error(what), code_(c), witness_(witness) {}
  Code code() const { return code_; }
  int witness() const { return witness_; }

 private:
  Code code_;
  int witness_;
};

class DgAlgebra {
 public:
  struct Spec {
    Field field = Field::rational();
    std::vector<std::string> labels;
    std::vector<int> degree;
    std::vector<int> left_vertex, right_vertex;
    std::vector<std::size_t> idempotents;  // one per vertex, degree 0
    Mat d;                                  // dim x dim
    std::vector<std::vector<SparseVec>> products;
  };

  // Checks shapes and homogeneity of products and differential. The
  // identities (d^2 = 0, Leibniz, associativity, unit) are checked by check().
  static std::shared_ptr<const DgAlgebra> create(Spec spec);

  const Field& field() const { return spec_.field; }
  std::size_t dim() const { return spec_.degree.size(); }
  int vertices() const { return static_cast<int>(spec_.idempotents.size()); }
  int degree(std::size_t b) const { return spec_.degree[b]; }
  int left_vertex(std::size_t b) const { return spec_.left_vertex[b]; }
  int right_vertex(std::size_t b) const { return spec_.right_vertex[b]; }
  std::size_t idempotent(int v) const { return spec_.idempotents.at(static_cast<std::size_t>(v)); }
  const std::vector<std::string>& labels() const { return spec_.labels; }
  const Mat& d() const { return spec_.d; }
  const SparseVec& product(std::size_t i, std::size_t j) const { return spec_.products[i][j]; }
  const Spec& spec() const { return spec_; }

  Mat basis_vector(std::size_t b) const;
  Mat unit() const;
  Mat mul(const Mat& x, const Mat& y) const;
  // y -> y b and y -> b y on A.
  const Mat& right_mult(std::size_t b) const { return right_mult_[b]; }
  const Mat& left_mult(std::size_t b) const { return left_mult_[b]; }
  std::vector<std::size_t> basis_in_degree(int n) const;
  int min_degree() const;
  int max_degree() const;
  bool nonpositive() const;
  std::map<int, std::size_t> cohomology_dims() const;

  // Empty string when d^2 = 0, Leibniz, associativity and unit laws hold on
  // all basis tuples.
  std::string check() const;

 private:
  DgAlgebra() = default;
  Spec spec_;
  std::vector<Mat> right_mult_, left_mult_;
};

using DgAlgebraPtr = std::shared_ptr<const DgAlgebra>;

// An ordinary algebra in degree 0 with zero differential.
DgAlgebraPtr dg_from_algebra(const AlgebraPtr& a);

// Endomorphism dg algebra of P = sum of parts: basis of e_i E e_j consists of
// graded maps parts[j] -> parts[i]; x y is "y then x". With nonpositive set,
// the truncation tau_{<=0} (negative degrees and degree 0 cocycles).
DgAlgebraPtr endomorphism_dg(const std::vector<Complex>& parts, bool nonpositive);

// H^0(A) as a basic algebra, with the representatives (rows over A) of its
// basis and the projection of degree 0 cocycles onto it.
struct H0Data {
  AlgebraPtr algebra;
  Mat reps;               // dim H^0 x dim A
  RowCoordinates coords;  // over reps followed by a basis of B^0
  std::size_t rep_count = 0;
  // Class of a degree 0 cocycle (1 x dim A) in the basis of H^0.
  Mat project(const Mat& z) const;
};
H0Data h0_algebra(const DgAlgebraPtr& a);

struct MoritaResult {
  DgAlgebraPtr reduced;
  std::vector<int> kept, stripped;  // vertices of the input
};
// Strips the vertices whose idempotent lies in the image of d.
MoritaResult morita_reduce(const DgAlgebraPtr& a);

// ---------------------------------------------------------------------------

struct DgModule {
  DgAlgebraPtr alg;
  std::size_t dim = 0;
  std::vector<int> degree;
  Mat d;
  std::vector<Mat> action;  // per algebra basis element
  bool left = false;

  std::string check() const;
  std::map<int, std::size_t> cohomology_dims() const;
  std::vector<std::size_t> basis_in_degree(int n) const;
};

// A_A as a right module.
DgModule regular_dg_module(const DgAlgebraPtr& a);

// Submodule spanned by homogeneous rows (closed under d and the action) and
// the quotient by it, with the inclusion / projection matrices.
std::pair<DgModule, Mat> dg_submodule(const DgModule& m, const Mat& span);
std::pair<DgModule, Mat> dg_quotient(const DgModule& m, const Mat& span);

struct Truncation {
  DgModule le0, ge1;
  Mat inc;   // le0 -> M
  Mat proj;  // M -> ge1
};
// tau_{<=0} M = (... -> M^{-1} -> ker d^0 -> 0) and
// tau_{>=1} M = (0 -> M^1 / im d^0 -> M^2 -> ...); A must be nonpositive.
Truncation truncate(const DgModule& m);

// H^0(M) as a module over H^0(A) when M has cohomology only in degree 0.
Module heart_to_h0(const DgModule& m, const H0Data& h0);
// An H^0(A)-module viewed as a dg module in degree 0 via A -> H^0(A).
DgModule pullback(const Module& n, const DgAlgebraPtr& a, const H0Data& h0);

// Dual D(M) = Hom_K(M, K): right modules become left modules and back.
DgModule dg_dual(const DgModule& m);

// Hom complex between two right dg modules.
struct DgHom {
  VecComplex vec;
  std::vector<std::vector<Mat>> basis;  // basis[n - vec.lo]: maps of degree n
};
DgHom dg_hom(const DgModule& n, const DgModule& l);

// ---------------------------------------------------------------------------

// Strictly perfect dg module: sum of Sigma^{s_p} e_{v_p} A with differential
// d_int + delta, where delta_{qp} in e_{v_q} A e_{v_p} acts by left
// multiplication from summand p to summand q and has degree s_q - s_p + 1.
struct TwistedComplex {
  DgAlgebraPtr alg;
  std::vector<std::pair<int, int>> summands;  // (vertex, shift)
  std::map<std::pair<std::size_t, std::size_t>, Mat> delta;  // (q, p) -> element

  DgModule module() const;
  std::string check() const;
  // delta has no component along idempotents and its support is acyclic.
  bool is_minimal() const;
};

// A bounded complex of standard projectives over an ordinary algebra as a
// twisted complex over dg_from_algebra (or any dg algebra `a` with the same
// degree 0 structure); degree k becomes shift -k.
TwistedComplex twisted_from_complex(const DgAlgebraPtr& a, const Complex& p);

struct MinimalPerfect {
  TwistedComplex min;
  Mat proj;  // module(input) -> module(min)
  Mat inc;   // module(min) -> module(input)
};
MinimalPerfect minimal_perfect_resolution(const TwistedComplex& x);
// Perfectness is certified only by a twisted complex presentation.
MinimalPerfect minimal_perfect_resolution(const DgModule& m);

// Right linear degree 0 map that commutes with d and induces isomorphisms on
// cohomology.
bool is_quasi_iso(const DgModule& src, const DgModule& dst, const Mat& f);

// One-dimensional degree 0 module at vertex i (via A -> H^0(A) -> top).
DgModule dg_simple(const DgAlgebraPtr& a, int i);
// Vertices whose simple exists (idempotent not in the image of d).
std::vector<int> dg_simple_vertices(const DgAlgebraPtr& a);

// Nakayama functor D Hom_A(M, A) on a strictly perfect module.
DgModule dg_nakayama(const TwistedComplex& m);
// D(A e_i) as a right module.
DgModule dual_left_projective(const DgAlgebraPtr& a, int i);

}  // namespace tilt
