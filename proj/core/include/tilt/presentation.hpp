#pragma once

// Quiver with relations of a basic algebra, read off from its radical
// filtration: arrows are basis elements spanning J / J^2 and relations
// generate the kernel of the map from the path algebra.

#include <string>
#include <vector>

#include "tilt/algebra.hpp"

namespace tilt {

struct Presentation {
  Quiver quiver;
  std::vector<Relation> relations;
  int max_path_length = 0;  // longest nonzero path
  // algebra_from_quiver(quiver, relations) has the dimension and Cartan
  // matrix of the input.
  bool verified = false;

  std::string describe_arrows() const;      // "x1:1->2 x2:2->3"
  std::string describe_relations(const Field& f) const;  // "x1*x2; x3*x4 - x5*x6"
};

Presentation present_algebra(const AlgebraPtr& a);

}  // namespace tilt
