#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace gmhd::detail {
namespace {

// The FFTW planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per shape and never destroyed.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan c2c_plan(int n, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto* a = fftw_alloc_complex(static_cast<size_t>(n) * n);
  auto* b = fftw_alloc_complex(static_cast<size_t>(n) * n);
  // ESTIMATE keeps the algorithm choice independent of timing noise, so a
  // given n always yields bitwise-identical transforms.
  fftw_plan p = fftw_plan_dft_2d(n, n, a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(a);
  fftw_free(b);
  if (!p) throw Error("fft: failed to create plan for n=" + std::to_string(n));
  cache.emplace(key, p);
  return p;
}

fftw_plan dct_plan(int m) {
  static std::map<int, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  auto* a = fftw_alloc_real(static_cast<size_t>(m) * m);
  fftw_plan p = fftw_plan_r2r_2d(m, m, a, a, FFTW_REDFT00, FFTW_REDFT00,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(a);
  if (!p) throw Error("fft: failed to create DCT plan for m=" + std::to_string(m));
  cache.emplace(m, p);
  return p;
}

}  // namespace

void fft2(const Coefficients& in, Coefficients& out, int sign) {
  const int n = static_cast<int>(in.rows());
  out.resize(n, n);
  fftw_plan p = c2c_plan(n, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  // fftw_execute_dft does not write to its input for out-of-place plans.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(p, src, dst);
}

void dct1_2d(Eigen::ArrayXXd& data) {
  const int m = static_cast<int>(data.rows());
  fftw_plan p = dct_plan(m);
  fftw_execute_r2r(p, data.data(), data.data());
}

PhysicalField to_physical(const Coefficients& F, const Grid2D& grid) {
  Coefficients out;
  fft2(F, out, +1);
  return out.real() / (grid.box_length() * grid.box_length());
}

Coefficients to_spectral(const PhysicalField& f, const Grid2D& grid) {
  Coefficients in = f.cast<Complex>();
  Coefficients out;
  fft2(in, out, -1);
  out *= grid.cell_area();
  return out;
}

void to_physical_pair(const Coefficients& A, const Coefficients& B, const Grid2D& grid,
                      PhysicalField& a, PhysicalField& b) {
  Coefficients in = A + Complex(0.0, 1.0) * B;
  Coefficients out;
  fft2(in, out, +1);
  const Real norm = 1.0 / (grid.box_length() * grid.box_length());
  a = out.real() * norm;
  b = out.imag() * norm;
}

void to_spectral_pair(const PhysicalField& a, const PhysicalField& b, const Grid2D& grid,
                      Coefficients& A, Coefficients& B) {
  const int n = grid.n();
  Coefficients in(n, n);
  in.real() = a;
  in.imag() = b;
  Coefficients F;
  fft2(in, F, -1);
  A.resize(n, n);
  B.resize(n, n);
  const Real w = 0.5 * grid.cell_area();
  for (int i2 = 0; i2 < n; ++i2) {
    const int r2 = (n - i2) % n;
    for (int i1 = 0; i1 < n; ++i1) {
      const Complex f = F(i1, i2);
      const Complex g = std::conj(F((n - i1) % n, r2));
      A(i1, i2) = w * (f + g);
      B(i1, i2) = Complex(0.0, -w) * (f - g);
    }
  }
}

}  // namespace gmhd::detail
