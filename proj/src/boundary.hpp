#ifndef BDMAP_BOUNDARY_HPP
#define BDMAP_BOUNDARY_HPP

#include "ode.hpp"
#include "potential.hpp"
#include "types.hpp"

namespace bdmap {

// Characteristic determinant of the two-point boundary problem; its zeros are
// exactly the eigenvalues of H_{theta0,thetaR}.
struct CharDet {
  LogScaled value;
};

// [cos(theta0) u(0) + sin(theta0) u'(0); cos(thetaR) u(R) - sin(thetaR) u'(R)]
BoundaryVector trace_map(const BoundaryAngles& angles, const SolutionPath& p);

CharDet char_det(const Potential& pot, cx z, const BoundaryAngles& angles,
                 double tol);

// The 2x2 boundary data map taking (from)-traces of a solution to its
// (to)-traces; built from one propagation of the fundamental system.
Mat2 lambda_map(const Potential& pot, cx z, const BoundaryAngles& from,
                const BoundaryAngles& to, double tol);

cx lambda_det(const Potential& pot, cx z, const BoundaryAngles& from,
              const BoundaryAngles& to, double tol);

// Recover Lambda for the (theta, theta') angle pair from a reference map for
// the (delta, delta') pair by the linear fractional transformation.
Mat2 lft_transfer(const Mat2& lambda_ref, const BoundaryAngles& theta,
                  const BoundaryAngles& theta_p, const BoundaryAngles& delta,
                  const BoundaryAngles& delta_p);

// Smallest eigenvalue of Im(Lambda * S_{to-from}) at Im z > 0; positive for
// real V and admissible real angles.
double herglotz_check(const Potential& pot, cx z, const BoundaryAngles& from,
                      const BoundaryAngles& to, double tol);

// Leading term of det Lambda for z -> -infinity along the negative real axis;
// the case split follows which of the (from)-angles are Dirichlet.
cx lambda_asymptotic_leading(const BoundaryAngles& from,
                             const BoundaryAngles& to, double z);

}  // namespace bdmap

#endif
