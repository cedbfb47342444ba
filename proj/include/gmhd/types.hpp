#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace gmhd {

using Real = double;
using Complex = std::complex<double>;

/// Real samples on the n x n grid, indexed (i1, i2) <-> x = (i1 h, i2 h).
using PhysicalField = Eigen::ArrayXXd;

/// Fourier coefficients on the n x n mode lattice, FFT ordering on both axes.
using Coefficients = Eigen::ArrayXXcd;

inline constexpr Real kPi = 3.14159265358979323846;
inline constexpr Real kTwoPi = 2.0 * kPi;

/// Base class for every recoverable error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gmhd
