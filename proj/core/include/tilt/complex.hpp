#pragma once

// Bounded complexes of right modules, chain maps, and the standard
// constructions on them.
//
// Conventions (row vectors, maps act on the right):
//  * d^n : X^n -> X^{n+1} is a dim X^n x dim X^{n+1} matrix; d^n d^{n+1} = 0.
//  * (Sigma^m X)^n = X^{n+m} with differential (-1)^m d.
//  * cone(f: X -> Y)^n = X^{n+1} + Y^n with differential
//        (x, y) -> (-x d_X, x f + y d_Y),
//    i.e. [[-d_X, 0], [f, d_Y]] in column form.
//  * Each degree is an ordered list of summands; the basis of X^n is the
//    concatenation of the summand bases.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tilt/algebra.hpp"

namespace tilt {

class ComplexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SummandKind { P, I, S, Other };

struct Summand {
  SummandKind kind = SummandKind::Other;
  int vertex = -1;  // meaningful for P, I, S
  Module module;

  std::string name() const;  // "P1", "I2", "S1" or "M"
};

Summand make_summand(const AlgebraPtr& a, SummandKind kind, int vertex);
Summand other_summand(Module m);

class Complex {
 public:
  Complex() = default;
  explicit Complex(AlgebraPtr alg) : alg_(std::move(alg)) {}
  // Degrees lo .. lo + terms.size() - 1; diffs[k] is d^{lo+k} and there must
  // be terms.size() - 1 of them (the last differential is zero).
  Complex(AlgebraPtr alg, int lo, std::vector<std::vector<Summand>> terms, std::vector<Mat> diffs);

  static Complex stalk(const Summand& s, int degree);
  static Complex stalk(const Module& m, int degree);

  const AlgebraPtr& algebra() const { return alg_; }
  bool is_zero() const;
  // Support bounds; for the zero complex lo() > hi().
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(terms_.size()) - 1; }
  std::size_t dim(int n) const;
  std::size_t total_dim() const;
  const Module& term(int n) const;
  const std::vector<Summand>& summands(int n) const;
  // d^n (zero-sized or zero when outside the support).
  Mat d(int n) const;

  // d^2 = 0 and every differential a module map; empty string when valid.
  std::string check() const;
  // Drops zero terms at both ends.
  Complex trimmed() const;
  // True if every term is a sum of P (resp. I) summands.
  bool all_of_kind(SummandKind k) const;
  std::string describe() const;  // e.g. "[P2 -> P1] (-1..0)"

  friend bool operator==(const Complex& a, const Complex& b);

 private:
  AlgebraPtr alg_;
  int lo_ = 0;
  std::vector<std::vector<Summand>> summands_;
  std::vector<Module> terms_;
  std::vector<Mat> diffs_;
};

// Chain map components f^n : X^n -> Y^n for n in the union of supports.
struct ChainMap {
  Complex src, dst;
  std::map<int, Mat> comp;

  Mat at(int n) const;  // zero matrix when absent
  std::string check() const;
};

ChainMap identity_map(const Complex& x);
ChainMap compose(const ChainMap& f, const ChainMap& g);  // f then g

Complex shift(const Complex& x, int m);
ChainMap shift(const ChainMap& f, int m);

struct ConeResult {
  Complex cone;
  ChainMap to_cone;    // Y -> C
  ChainMap from_cone;  // C -> Sigma X
};
ConeResult cone(const ChainMap& f);

struct SumResult {
  Complex sum;
  std::vector<ChainMap> inj, proj;
};
SumResult direct_sum(const AlgebraPtr& alg, const std::vector<Complex>& xs);

// Homotopy equivalence produced by minimize: inc then proj is the identity of
// the minimized complex, and id - proj inc = d h + h d on the original, with
// h^n : X^n -> X^{n-1}.
struct MinimizeResult {
  Complex min;
  ChainMap inc;   // min -> X
  ChainMap proj;  // X -> min
  std::map<int, Mat> h;
};
MinimizeResult minimize(const Complex& x);
// Same elimination without building witnesses.
Complex minimized(const Complex& x);
// Verifies the homotopy data of a MinimizeResult against the original complex.
std::string check_homotopy(const Complex& x, const MinimizeResult& r);

// Dimensions and modules of cohomology.
std::size_t cohomology_dim(const Complex& x, int n);
std::map<int, std::size_t> cohomology_dims(const Complex& x);
Module cohomology_module(const Complex& x, int n);
bool is_acyclic(const Complex& x);

// Complex of vector spaces given by dims and differentials.
struct VecComplex {
  Field field = Field::rational();
  int lo = 0;
  std::vector<std::size_t> dims;
  std::vector<Mat> d;  // d[k] : degree lo+k -> lo+k+1 (dims[k] x dims[k+1])

  std::size_t dim(int n) const;
  Mat diff(int n) const;
  std::size_t cohomology(int n) const;
  // Rows: cocycles in degree n whose classes form a basis of H^n.
  Mat cohomology_basis(int n) const;
  // Coordinates of the class of a cocycle z (1 x dim) in cohomology_basis(n);
  // nullopt when z is not a cocycle.
  std::optional<Mat> class_of(int n, const Mat& z) const;
};

// Graded map of degree p: components P^k -> Y^{k+p}.
struct GradedMap {
  int degree = 0;
  std::map<int, Mat> comp;
};

// Hom complex Hom_A(P, Y): degree n is the product over k of Hom(P^k, Y^{k+n}),
// with differential f -> d_Y f - (-1)^n f d_P. Computes H^m(Hom(P, Y)), i.e.
// homotopy classes of graded maps.
class HomComplex {
 public:
  HomComplex(const Complex& p, const Complex& y);
  HomComplex(const Complex& p, const Complex& y, int deg_lo, int deg_hi);

  const VecComplex& vec() const { return vec_; }
  int deg_lo() const { return vec_.lo; }
  int deg_hi() const { return vec_.lo + static_cast<int>(vec_.dims.size()) - 1; }
  std::size_t cohomology(int n) const;
  std::map<int, std::size_t> cohomology_dims() const;

  GradedMap to_map(int n, const Mat& coords) const;
  Mat coords(const GradedMap& f) const;
  // Representatives of a basis of H^n as graded maps.
  std::vector<GradedMap> cohomology_basis(int n) const;

 private:
  struct Block {
    int k;  // source degree
    std::size_t offset;
    HomSpace space;
  };
  Complex p_, y_;
  VecComplex vec_;
  std::vector<std::vector<Block>> blocks_;  // per degree
  Mat pad_in_, pad_out_;  // differentials entering deg_lo and leaving deg_hi
  void build(int deg_lo, int deg_hi);
};

// Applies a graded map (degree p) of the Hom complex differential directly.
GradedMap hom_differential(const Complex& p, const Complex& y, const GradedMap& f);
// Composition of graded maps: f then g, degrees add; sign-free.
GradedMap compose(const GradedMap& f, const GradedMap& g);
ChainMap as_chain_map(const Complex& src, const Complex& dst, const GradedMap& f);

}  // namespace tilt
