// TGV values of atoms, the conic upper bound, and an exact grid oracle for
// sparse functions.
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

#include "tgv1d/function_space.hpp"

namespace tgv1d {

/// TGV of the unit shape S_x or K_x (no 1/alpha, 1/beta scaling).
double tgv_atom(AtomKind kind, double position, const TgvParams& p);
/// TGV of the scaled atom sign*S_x/alpha or sign*K_x/beta; 1 for extremal atoms.
double tgv_scaled_atom(const ExtremalAtom& atom, const TgvParams& p);
/// Sum of the weights.
double tgv_upper(std::span<const double> weights);

struct OracleOptions {
  std::size_t grid_n = 20000;
  double tol = 1e-6;
  std::size_t max_iter = 2'000'000;
};

struct OracleResult {
  double value = 0.0;       // primal value of the discretized problem
  double dual_value = 0.0;  // value of a feasible dual point
  double gap = 0.0;
  double singular_cost = 0.0;
  std::size_t cells = 0;         // cells of the augmented grid
  std::size_t lumped_cells = 0;  // after merging runs of equal density
  std::size_t iterations = 0;
};

class OracleFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Discretized inner minimization
//   min_w alpha (sum |jump masses| + sum_i |d_i - w_i| h_i) + beta sum |w_{i+1} - w_i|
// over cell-wise constant w on a uniform grid refined by all atom positions.
// The primal value is computed exactly; a primal-dual iteration supplies the
// certificate. Throws OracleFailure when the gap stays above tol.
OracleResult tgv_grid_oracle(const SparseFunction& u, const OracleOptions& opts = {});

}  // namespace tgv1d
