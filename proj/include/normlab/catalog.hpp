#pragma once

#include <string>
#include <vector>

#include "normlab/fenchel.hpp"
#include "normlab/functions.hpp"
#include "normlab/spaces.hpp"

namespace normlab {

/// Named function catalog addressable from the CLI:
///   "quadratic:<matrix-json>"   f(x) = (1/2) x^T Q x   (analytic grad/hess)
///   "pnorm-squared:<p>"         f(x) = (1/2) ||x||_p^2 (analytic grad for p in (1, inf))
///   "logsumexp"                 f(x) = log sum_i exp(x_i)
///   "expsum"                    f(x) = sum_i exp(x_i)
///   "softplus"                  f(x) = sum_i log(1 + exp(x_i))
/// Unknown names raise config_error.
SmoothFunction make_function(const std::string& spec, int dim);

/// Operator catalog:
///   "linear:<matrix-json>"      T(x) = M x (with linear_matrix shortcut)
///   "grad:<function-spec>"      gradient field of a catalog function
MonotoneOperator make_operator(const std::string& spec, int dim);

struct NamedSpace {
  std::string name;
  NormedSpace space;
};

/// Small fixed set of desk-scale spaces used by the preset studies.
std::vector<NamedSpace> catalog_spaces();

struct NamedGrid {
  std::string name;
  GridFunction grid;
  bool convex = false;
};

/// 1-D grid functions with documented grids; convex entries are the inputs
/// for the biconjugate identity checks.
std::vector<NamedGrid> catalog_grids();

}  // namespace normlab
