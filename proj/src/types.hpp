#ifndef BDMAP_TYPES_HPP
#define BDMAP_TYPES_HPP

#include <cmath>
#include <complex>
#include <string>

#include "errors.hpp"

namespace bdmap {

using cx = std::complex<double>;

constexpr double kAngleModTol = 1e-9;       // mod-pi angle comparisons
constexpr double kSingularFloor = 1e-12;    // relative 2x2 singularity floor

inline bool finite(cx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// Complex value stored as mantissa * exp(log_scale); |mantissa| in [1,e)
// unless the value is zero. Keeps products of exponentially growing solution
// data representable.
struct LogScaled {
  cx mantissa{0.0, 0.0};
  double log_scale = 0.0;

  LogScaled() = default;
  LogScaled(cx m, double ls) : mantissa(m), log_scale(ls) { normalize(); }
  explicit LogScaled(cx v) : LogScaled(v, 0.0) {}

  void normalize() {
    double a = std::abs(mantissa);
    if (a == 0.0) {
      log_scale = 0.0;
      return;
    }
    double k = std::floor(std::log(a));
    mantissa *= std::exp(-k);
    log_scale += k;
  }

  cx value() const { return mantissa * std::exp(log_scale); }
  double log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }
  bool is_zero() const { return mantissa == cx(0.0, 0.0); }

  LogScaled operator*(const LogScaled& o) const {
    if (is_zero() || o.is_zero()) return LogScaled();
    return LogScaled(mantissa * o.mantissa, log_scale + o.log_scale);
  }
  LogScaled operator/(const LogScaled& o) const {
    return LogScaled(mantissa / o.mantissa, log_scale - o.log_scale);
  }
};

// Pair of Robin boundary angles. Complex angles are accepted by the ODE and
// boundary-map layers; spectral-level code calls require_real().
struct BoundaryAngles {
  cx theta0{0.0, 0.0};
  cx thetaR{0.0, 0.0};

  BoundaryAngles() = default;
  BoundaryAngles(cx t0, cx tR) : theta0(t0), thetaR(tR) {}
  BoundaryAngles(double t0, double tR) : theta0(t0, 0.0), thetaR(tR, 0.0) {}

  bool is_real() const { return theta0.imag() == 0.0 && thetaR.imag() == 0.0; }
  void require_real(const char* who) const {
    if (!is_real())
      throw std::invalid_argument(std::string(who) + ": real boundary angles required");
  }
  double t0() const { return theta0.real(); }
  double tR() const { return thetaR.real(); }
};

inline bool is_multiple_of_pi(double x, double tol = kAngleModTol) {
  double r = std::remainder(x, M_PI);
  return std::abs(r) < tol;
}

// sin(theta) == 0 marks a Dirichlet endpoint (theta in {0, pi} mod 2pi).
inline bool dirichlet_angle(cx theta, double tol = kAngleModTol) {
  return theta.imag() == 0.0 && is_multiple_of_pi(theta.real(), tol);
}

struct BoundaryVector {
  cx c0{0.0, 0.0};
  cx cR{0.0, 0.0};
};

// Dense complex 2x2 matrix.
struct Mat2 {
  cx a11{0.0, 0.0}, a12{0.0, 0.0}, a21{0.0, 0.0}, a22{0.0, 0.0};

  static Mat2 identity() { return {cx(1.0), cx(0.0), cx(0.0), cx(1.0)}; }
  static Mat2 diag(cx d1, cx d2) { return {d1, cx(0.0), cx(0.0), d2}; }

  cx det() const { return a11 * a22 - a12 * a21; }
  double row_norm_product() const {
    double r1 = std::abs(a11) + std::abs(a12);
    double r2 = std::abs(a21) + std::abs(a22);
    return r1 * r2;
  }
  bool singular(double floor = kSingularFloor) const {
    double scale = row_norm_product();
    return std::abs(det()) <= floor * (scale > 0.0 ? scale : 1.0);
  }
  Mat2 inverse() const {
    if (singular()) throw singular_lambda_error("2x2 matrix numerically singular");
    cx d = det();
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }
  Mat2 operator*(const Mat2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  Mat2 operator+(const Mat2& o) const {
    return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
  }
  Mat2 operator-(const Mat2& o) const {
    return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
  }
  BoundaryVector operator*(const BoundaryVector& v) const {
    return {a11 * v.c0 + a12 * v.cR, a21 * v.c0 + a22 * v.cR};
  }
  Mat2 adjoint() const {
    return {std::conj(a11), std::conj(a21), std::conj(a12), std::conj(a22)};
  }
  double max_norm() const {
    return std::max(std::max(std::abs(a11), std::abs(a12)),
                    std::max(std::abs(a21), std::abs(a22)));
  }
  cx trace() const { return a11 + a22; }

  // (M - M^*)/(2i) is Hermitian; returns its smaller eigenvalue.
  double min_eig_imag_part() const {
    Mat2 im;
    im.a11 = (a11 - std::conj(a11)) / cx(0.0, 2.0);
    im.a22 = (a22 - std::conj(a22)) / cx(0.0, 2.0);
    im.a12 = (a12 - std::conj(a21)) / cx(0.0, 2.0);
    im.a21 = std::conj(im.a12);
    double p = im.a11.real(), q = im.a22.real();
    double off = std::abs(im.a12);
    double mid = 0.5 * (p + q);
    double rad = std::sqrt(0.25 * (p - q) * (p - q) + off * off);
    return mid - rad;
  }
};

inline Mat2 s_matrix(cx delta0, cx deltaR) {
  return Mat2::diag(std::sin(delta0), std::sin(deltaR));
}

}  // namespace bdmap

#endif
