#pragma once

// Finite-dimensional basic algebras given by structure constants, together
// with their right modules.
//
// Conventions:
//  * Path composition: for an arrow a: s -> t we have a = e_s a e_t, and the
//    product p*q of paths means "p then q".
//  * Modules are right modules. Elements are row vectors and the action of an
//    algebra element b is the matrix rho(b) acting on the right: v.b = v*rho(b).
//  * Module maps are matrices F with v -> v*F, so F then G is the product F*G.
//  * Every module basis is vertex-homogeneous: each basis vector v satisfies
//    v e_x = v for exactly one vertex x.

#include <functional>
#include <memory>
#include <optional>
#include <mutex>
#include <string>
#include <vector>

#include "tilt/linalg.hpp"

namespace tilt {

class AlgebraError : public std::runtime_error {
 public:
  enum class Code {
    NonAdmissible,
    InconsistentRelations,
    IndexOutOfRange,
    NotBasic,
    InvalidStructure,
    WrongModuleForm,
    AlgebraMismatch,
  };
  AlgebraError(Code c, const std::string& what) : std::runtime_error(what), code_(c) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

struct Arrow {
  int from = 0;  // 0-based vertex
  int to = 0;
  std::string label;
};

struct Quiver {
  int vertices = 0;
  std::vector<Arrow> arrows;
};

struct PathTerm {
  Scalar coeff;
  std::vector<std::string> path;  // arrow labels, "p then q" order
};
using Relation = std::vector<PathTerm>;

// Sparse vector of basis coordinates.
using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

class Algebra : public std::enable_shared_from_this<Algebra> {
 public:
  struct Spec {
    Field field = Field::rational();
    std::vector<std::string> labels;
    // products[i][j] = b_i * b_j
    std::vector<std::vector<SparseVec>> products;
    std::vector<std::size_t> idempotents;  // basis index of e_v, one per vertex
    // Per basis element: e_{left} b e_{right} = b.
    std::vector<int> left_vertex;
    std::vector<int> right_vertex;
    std::vector<int> path_length;  // optional grading; -1 when unknown
  };

  // Validates the structure (basis split into idempotents and radical,
  // vertex-homogeneous basis, unit law). Primitivity and associativity are
  // separate checks, see validate().
  static std::shared_ptr<const Algebra> create(Spec spec);

  const Field& field() const { return field_; }
  std::size_t dim() const { return dim_; }
  int vertices() const { return static_cast<int>(idempotents_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t idempotent(int v) const { return idempotents_.at(static_cast<std::size_t>(v)); }
  const std::vector<std::size_t>& idempotents() const { return idempotents_; }
  const std::vector<std::size_t>& radical_basis() const { return radical_; }
  bool is_radical(std::size_t b) const { return is_radical_[b]; }
  int left_vertex(std::size_t b) const { return left_vertex_[b]; }
  int right_vertex(std::size_t b) const { return right_vertex_[b]; }
  int path_length(std::size_t b) const { return path_length_[b]; }
  // Idempotents plus radical basis elements spanning J modulo J^2.
  const std::vector<std::size_t>& generators() const { return generators_; }
  const std::vector<std::size_t>& arrow_generators() const { return arrow_generators_; }

  const SparseVec& product(std::size_t i, std::size_t j) const { return products_[i][j]; }
  // Products of general elements given as 1 x dim rows.
  Mat mul(const Mat& x, const Mat& y) const;
  Mat basis_vector(std::size_t b) const;
  Mat unit() const;
  // Matrix of y -> y * b on the regular representation.
  const Mat& right_mult(std::size_t b) const { return right_mult_[b]; }
  // Matrix of y -> b * y.
  const Mat& left_mult(std::size_t b) const { return left_mult_[b]; }

  // Basis indices of e_x A e_y.
  std::vector<std::size_t> corner_basis(int x, int y) const;
  // Cartan matrix C(x, y) = dim e_x A e_y.
  std::vector<std::vector<int>> cartan() const;

  // Exhaustive checks. Each returns an empty string on success, otherwise a
  // description of the first violation.
  std::string check_associativity() const;
  std::string check_idempotents() const;
  std::string check_radical() const;
  std::string validate() const;

  // Opposite algebra (same basis, reversed products). Cached; the opposite of
  // the opposite is this object while it is alive.
  std::shared_ptr<const Algebra> opposite() const;

  bool same_structure(const Algebra& other) const;

  Spec spec() const;

 private:
  Algebra() = default;

  Field field_ = Field::rational();
  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<std::vector<SparseVec>> products_;
  std::vector<std::size_t> idempotents_;
  std::vector<std::size_t> radical_;
  std::vector<bool> is_radical_;
  std::vector<int> left_vertex_, right_vertex_, path_length_;
  std::vector<std::size_t> generators_, arrow_generators_;
  std::vector<Mat> right_mult_, left_mult_;

  mutable std::mutex op_mutex_;
  mutable std::shared_ptr<const Algebra> op_strong_;
  mutable std::weak_ptr<const Algebra> op_weak_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

// Path algebra of `q` modulo the ideal generated by `relations`. Vertices and
// arrow endpoints in `q` are 0-based. With nilpotency_bound = 0 the smallest
// admissible bound up to 16 is searched.
AlgebraPtr algebra_from_quiver(const Quiver& q, const std::vector<Relation>& relations,
                               Field field, int nilpotency_bound = 0);

// ---------------------------------------------------------------------------

class Module {
 public:
  Module() = default;
  // action[b] is rho(b) for every algebra basis element b. The basis must be
  // vertex-homogeneous; use Module::rebased for arbitrary input.
  Module(AlgebraPtr alg, std::size_t dim, std::vector<Mat> action);
  // Re-chooses a vertex-homogeneous basis; returns the module and the change
  // of basis (rows = new basis vectors in old coordinates).
  static std::pair<Module, Mat> rebased(AlgebraPtr alg, std::size_t dim, std::vector<Mat> action);
  static Module zero(AlgebraPtr alg);

  const AlgebraPtr& algebra() const { return alg_; }
  std::size_t dim() const { return dim_; }
  const Mat& act(std::size_t b) const { return action_[b]; }
  const std::vector<Mat>& actions() const { return action_; }
  // rho(x) for a general element x (1 x dim A row).
  Mat act_element(const Mat& x) const;
  int vertex_of(std::size_t i) const { return vertex_[i]; }
  // Basis indices lying in M e_v.
  const std::vector<std::size_t>& basis_at(int v) const { return by_vertex_[static_cast<std::size_t>(v)]; }
  std::vector<int> dimension_vector() const;

  // Exhaustive module axioms check; empty string when valid.
  std::string check() const;

  friend bool operator==(const Module& a, const Module& b);

 private:
  AlgebraPtr alg_;
  std::size_t dim_ = 0;
  std::vector<Mat> action_;
  std::vector<int> vertex_;
  std::vector<std::vector<std::size_t>> by_vertex_;
};

Module simple_module(const AlgebraPtr& a, int v);
Module projective_module(const AlgebraPtr& a, int v);
Module injective_module(const AlgebraPtr& a, int v);
// Right regular module A_A (= sum of the P_v in vertex order).
Module regular_module(const AlgebraPtr& a);

// D(M) = Hom_K(M, K) as a module over the opposite algebra (or over `target`
// when given, which must have the opposite structure).
Module dualize(const Module& m, AlgebraPtr target = nullptr);

Module direct_sum(const Module& a, const Module& b);

// Module maps. Checks F commutes with all actions.
bool is_module_map(const Module& src, const Module& dst, const Mat& f);

// Basis of Hom_A(M, N), each element a dim M x dim N matrix, with coordinate
// extraction for arbitrary module maps.
class HomSpace {
 public:
  HomSpace(const Module& src, const Module& dst);
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Mat>& basis() const { return basis_; }
  // Coordinates of a module map in this basis (1 x dim row).
  Mat coordinates(const Mat& f) const;
  Mat combine(const Mat& coeffs) const;  // inverse of coordinates

 private:
  std::size_t rows_ = 0, cols_ = 0;
  Field field_ = Field::rational();
  std::vector<Mat> basis_;
  RowCoordinates coords_;
};

// Hom space computed by the plain stacked linear system over every algebra
// basis element, without exploiting idempotents. Slow; used as an oracle.
std::vector<Mat> hom_basis_bruteforce(const Module& src, const Module& dst);

// Submodule spanned by the rows of `span` (closed under the action). Returns
// the submodule and its inclusion (rows = new basis in ambient coordinates).
std::pair<Module, Mat> submodule(const Module& m, const Mat& span);
// Quotient M/U where U is spanned by rows of `span`; returns the quotient and
// the projection map M -> M/U.
std::pair<Module, Mat> quotient_module(const Module& m, const Mat& span);
// Rows spanning M*J.
Mat radical_span(const Module& m);

// Projective cover: the vertices of the summands of P (in order) and the map
// P -> M where P = sum of e_v A over the listed vertices.
struct ProjectiveCover {
  std::vector<int> vertices;
  Mat map;  // dim P x dim M
};
ProjectiveCover projective_cover(const Module& m);

// Map e_v A -> M sending e_v to the vector `gen` (which must lie in M e_v).
Mat projective_map_from_generator(const Module& m, int v, const Mat& gen);

// Nakayama functor on indecomposable projectives/injectives.
Module nakayama_projective(const AlgebraPtr& a, int v);
Module nakayama_inverse_injective(const AlgebraPtr& a, int v);
// nu on a map P_u -> P_v (given as a module map) is the map I_u -> I_v.
Mat nakayama_projective_map(const AlgebraPtr& a, int u, int v, const Mat& f);
// nu^{-1} on a map I_u -> I_v returns the map P_u -> P_v.
Mat nakayama_inverse_injective_map(const AlgebraPtr& a, int u, int v, const Mat& f);

// Local endomorphism-style helpers for basic algebras: the radical of the
// corner algebra e_v A e_v computed as the nilpotent elements, or an error
// when the corner is not local with residue field K.
std::optional<Mat> corner_radical(const AlgebraPtr& a, int v);

// Value lambda with x - lambda*1 nilpotent in a local algebra whose products
// are given by `mul`; nullopt if no such scalar exists.
std::optional<Scalar> residue_scalar(const Field& f, const Mat& x, const Mat& one,
                                     const std::function<Mat(const Mat&, const Mat&)>& mul);

}  // namespace tilt
