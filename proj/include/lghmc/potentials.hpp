#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lghmc/rng.hpp"
#include "lghmc/spaces.hpp"

namespace lghmc {

// Potential on the ambient manifold point y = Q * p0. The lift to the group
// is V(Q) = f(Q * p0), so f and its ambient gradient are all a user supplies.
struct Potential {
  std::string name;
  std::string description;
  std::function<double(const std::vector<double>&)> value;
  std::function<std::vector<double>(const std::vector<double>&)> gradient;

  bool is_zero() const { return name == "none"; }
};

// Registry of built-in potentials. Expressions read the first three ambient
// coordinates as (x, y, z); gradients are zero-padded for larger n.
Potential find_potential(const std::string& name);
std::vector<std::string> potential_names();

// Max relative deviation between the registered gradient and central finite
// differences of the value at random manifold points.
double validate_gradient(const Potential& pot, const HomogeneousSpaceSpec& spec, Rng& rng,
                         int points = 100);

}  // namespace lghmc
