#ifndef BDMAP_ERRORS_HPP
#define BDMAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bdmap {

// Error taxonomy used across the library. Each type maps 1:1 onto a C API
// status code in capi.cpp.

struct at_eigenvalue_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct tolerance_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct nonfinite_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct grid_mismatch_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct domain_violation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct bracketing_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct tail_too_large_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct phase_tracking_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct singular_transfer_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct singular_lambda_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct unsupported_case_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct not_below_spectrum_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct not_positive_type_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct not_pd_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct quadrature_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bdmap

#endif
