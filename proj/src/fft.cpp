#include "fracflow/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace fracflow::fft {

std::size_t spectral_size(const GridSpec& grid) {
  std::size_t s = static_cast<std::size_t>(grid.n) / 2 + 1;
  for (int d = 1; d < grid.ndim; ++d) s *= static_cast<std::size_t>(grid.n);
  return s;
}

namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

// Plans are created once per (ndim, n) shape with FFTW_ESTIMATE (deterministic
// algorithm choice) and FFTW_UNALIGNED (new-array execution is then valid for
// any buffers), and reused via fftw_execute_dft_r2c/c2r.
PlanPair& plan_for(const GridSpec& grid) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);

  auto key = std::make_pair(grid.ndim, grid.n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<double> real(grid.size());
  std::vector<std::complex<double>> spec(spectral_size(grid));
  int dims[3] = {grid.n, grid.n, grid.n};
  PlanPair p;
  p.fwd = fftw_plan_dft_r2c(grid.ndim, dims, real.data(),
                            reinterpret_cast<fftw_complex*>(spec.data()),
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_dft_c2r(grid.ndim, dims, reinterpret_cast<fftw_complex*>(spec.data()),
                            real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p.fwd || !p.bwd) throw numeric_error("FFTW plan creation failed");
  return cache.emplace(key, p).first->second;
}

void require_spectral_grid(const GridSpec& grid) {
  if (grid.boundary != Boundary::Periodic)
    throw std::invalid_argument("spectral transforms require a periodic grid");
  if (!is_pow2(grid.n))
    throw std::invalid_argument("spectral transforms require a power-of-two grid, got n=" +
                                std::to_string(grid.n));
}

}  // namespace

void forward(const GridSpec& grid, const std::vector<double>& real,
             std::vector<std::complex<double>>& spec) {
  require_spectral_grid(grid);
  if (real.size() != grid.size())
    throw std::invalid_argument("real buffer size mismatch in fft::forward");
  spec.resize(spectral_size(grid));
  // FFTW does not modify the r2c input for out-of-place 1D/2D/3D transforms.
  fftw_execute_dft_r2c(plan_for(grid).fwd, const_cast<double*>(real.data()),
                       reinterpret_cast<fftw_complex*>(spec.data()));
}

void inverse(const GridSpec& grid, std::vector<std::complex<double>>& spec,
             std::vector<double>& real) {
  require_spectral_grid(grid);
  if (spec.size() != spectral_size(grid))
    throw std::invalid_argument("spectral buffer size mismatch in fft::inverse");
  real.resize(grid.size());
  fftw_execute_dft_c2r(plan_for(grid).bwd, reinterpret_cast<fftw_complex*>(spec.data()),
                       real.data());
  const double norm = 1.0 / static_cast<double>(grid.size());
  for (double& v : real) v *= norm;
}

}  // namespace fracflow::fft
