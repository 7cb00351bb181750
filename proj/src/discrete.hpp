#ifndef BDMAP_DISCRETE_HPP
#define BDMAP_DISCRETE_HPP

#include <vector>

#include "boundary.hpp"
#include "potential.hpp"
#include "types.hpp"

namespace bdmap {

// Symmetric tridiagonal second-difference discretization on the mesh
// x_j = j h, h = R/(n+1). Robin endpoints keep their boundary node via
// symmetric ghost-point elimination (half-cell row, then a diagonal
// similarity); Dirichlet endpoints drop the node.
struct DiscreteHamiltonian {
  int n = 0;                    // interior node count
  double h = 0.0;
  std::vector<double> diag;
  std::vector<double> offdiag;  // size diag.size() - 1
  std::vector<double> nodes;    // coordinates of retained nodes
  bool robin0 = false, robinR = false;
  double theta0 = 0.0, thetaR = 0.0;  // representatives in [0, pi)

  std::size_t dim() const { return diag.size(); }
  // Number of eigenvalues below z (Sturm pivot count).
  int count_below(double z) const;
};

DiscreteHamiltonian discretize(const Potential& pot,
                               const BoundaryAngles& angles, int n);

// det(I - (H'-z)^{1/2}[(H'-z)^{-1} - (H-z)^{-1}](H'-z)^{1/2}) evaluated via
// the diagonal-difference rank structure; exact zero when the base operator
// lives on a strictly smaller node set (dropped Dirichlet endpoints).
cx sym_det_discrete(const DiscreteHamiltonian& base,
                    const DiscreteHamiltonian& primed, double z, double tol);

// Continuum evaluation of the same determinant through the boundary data map
// and the Gram matrix of the primed-angle solution pair.
cx sym_det_closed_form(const Potential& pot, cx z, const BoundaryAngles& base,
                       const BoundaryAngles& primed, double tol);

// Gram matrix B*B of the correction factor, from the primed-angle solutions.
Mat2 form_gram_matrix(const Potential& pot, cx z, const BoundaryAngles& base,
                      const BoundaryAngles& primed, double tol);

struct ConvergenceRow {
  int n;
  cx value;
  double error;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  cx reference;
  double fitted_order;
};

ConvergenceStudy convergence_study(const Potential& pot, double z,
                                   const BoundaryAngles& base,
                                   const BoundaryAngles& primed,
                                   const std::vector<int>& n_list, double tol);

// k smallest singular values of (H'-z)^{1/2} (H-z)^{-1} (H'-z)^{1/2}, the
// base inverse zero-extended to the primed node set when dimensions differ.
std::vector<double> kernel_dimension_probe(const DiscreteHamiltonian& base,
                                           const DiscreteHamiltonian& primed,
                                           double z, int k);

}  // namespace bdmap

#endif
