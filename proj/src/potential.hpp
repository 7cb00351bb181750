#ifndef BDMAP_POTENTIAL_HPP
#define BDMAP_POTENTIAL_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdmap {

// Real-valued potential V on [0, R]: a built-in family or piecewise-linear
// sampled data. Integrable by construction.
class Potential {
 public:
  enum class Kind { zero, constant, cosine, samples };

  static Potential zero(double R) { return Potential(R, Kind::zero); }

  static Potential constant(double R, double c) {
    Potential p(R, Kind::constant);
    p.c_ = c;
    return p;
  }

  // V(x) = amplitude * cos(2*pi*frequency*x/R + phase); frequency counts
  // whole cycles over [0, R].
  static Potential cosine(double R, double amplitude, double frequency, double phase) {
    Potential p(R, Kind::cosine);
    p.amplitude_ = amplitude;
    p.frequency_ = frequency;
    p.phase_ = phase;
    return p;
  }

  static Potential samples(double R, std::vector<double> xs, std::vector<double> vs) {
    Potential p(R, Kind::samples);
    if (xs.size() < 2 || xs.size() != vs.size())
      throw std::invalid_argument("Potential::samples: need matching arrays of length >= 2");
    if (xs.front() != 0.0 || xs.back() != R)
      throw std::invalid_argument("Potential::samples: abscissae must start at 0 and end at R");
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (!(xs[i] > xs[i - 1]))
        throw std::invalid_argument("Potential::samples: abscissae must be strictly increasing");
    p.xs_ = std::move(xs);
    p.vs_ = std::move(vs);
    return p;
  }

  double R() const { return R_; }
  Kind kind() const { return kind_; }
  bool real_valued() const { return true; }
  double constant_value() const { return c_; }
  double amplitude() const { return amplitude_; }
  double frequency() const { return frequency_; }
  double phase() const { return phase_; }
  const std::vector<double>& sample_x() const { return xs_; }
  const std::vector<double>& sample_v() const { return vs_; }

  double operator()(double x) const {
    switch (kind_) {
      case Kind::zero:
        return 0.0;
      case Kind::constant:
        return c_;
      case Kind::cosine:
        return amplitude_ * std::cos(2.0 * M_PI * frequency_ * x / R_ + phase_);
      case Kind::samples: {
        if (x <= xs_.front()) return vs_.front();
        if (x >= xs_.back()) return vs_.back();
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
        double t = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
        return vs_[i] + t * (vs_[i + 1] - vs_[i]);
      }
    }
    return 0.0;
  }

  // Integration steppers align with these to preserve local order across
  // kinks of the piecewise-linear interpolant.
  const std::vector<double>& breakpoints() const { return xs_; }

  double sup_abs() const {
    switch (kind_) {
      case Kind::zero:
        return 0.0;
      case Kind::constant:
        return std::abs(c_);
      case Kind::cosine:
        return std::abs(amplitude_);
      case Kind::samples: {
        double m = 0.0;
        for (double v : vs_) m = std::max(m, std::abs(v));
        return m;
      }
    }
    return 0.0;
  }

 private:
  Potential(double R, Kind k) : R_(R), kind_(k) {
    if (!(R > 0.0)) throw std::invalid_argument("Potential: R must be positive");
  }

  double R_;
  Kind kind_;
  double c_ = 0.0;
  double amplitude_ = 0.0, frequency_ = 0.0, phase_ = 0.0;
  std::vector<double> xs_, vs_;
};

}  // namespace bdmap

#endif
