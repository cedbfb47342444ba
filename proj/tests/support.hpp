#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "gmhd/fields.hpp"
#include "gmhd/spectral.hpp"

namespace gmhd::test {

/// Samples fn(x1, x2) on the grid.
template <class Fn>
PhysicalField sample(const GridPtr& grid, Fn&& fn) {
  const int n = grid->n();
  PhysicalField f(n, n);
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) f(i1, i2) = fn(grid->coordinate(i1), grid->coordinate(i2));
  }
  return f;
}

template <class Fn>
SpectralField spectral(const GridPtr& grid, Fn&& fn) {
  return forward_transform(grid, sample(grid, fn));
}

template <class Derived>
Real max_abs(const Eigen::ArrayBase<Derived>& a) {
  return a.abs().maxCoeff();
}

/// Divergence-free, mean-free, dealiased vector field with curl on [k_min, k_max].
inline SpectralVector random_solenoidal(const GridPtr& grid, std::uint64_t seed, int k_min,
                                        int k_max) {
  return biot_savart(random_bandlimited_field(grid, seed, k_min, k_max));
}

/// Physical samples of a uniform(-1, 1) field.
inline PhysicalField random_samples(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> dist(-1.0, 1.0);
  PhysicalField f(n, n);
  for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = dist(rng);
  return f;
}

/// Empty scratch directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "gmhd_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace gmhd::test
