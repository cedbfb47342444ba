#pragma once

#include <cstdint>
#include <string>

#include "gmhd/dynamics.hpp"

namespace gmhd {

/// Binary restart file, all little-endian:
///
///   offset  size  field
///        0     7  magic "GMHD2D\0"
///        7     4  version (u32, currently 1)
///       11     8  n (u64)
///       19     8  box_length (f64)
///       27     8  time (f64)
///       35     8  nu (f64)
///       43     8  alpha (f64)
///       51     8  kappa (f64)
///       59     8  beta (f64)
///       67     -  payload: omega_hat then j_hat, n*n complex values each,
///                 row-major over (i1, i2), each as (re, im) f64 pairs
struct Checkpoint {
  static constexpr char kMagic[7] = {'G', 'M', 'H', 'D', '2', 'D', '\0'};
  static constexpr std::uint32_t kVersion = 1;
  static constexpr std::size_t kHeaderBytes = 67;

  std::uint32_t version = kVersion;
  int n = 0;
  Real box_length = 0.0;
  Real time = 0.0;
  PhysicsParams params;
  Coefficients omega;
  Coefficients current;

  static Checkpoint from_state(const FlowState& state, const PhysicsParams& params);
};

void write_checkpoint(const std::string& path, const Checkpoint& ck);

/// Throws gmhd::Error naming the offending header field and its byte offset.
Checkpoint read_checkpoint(const std::string& path);

}  // namespace gmhd
