#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "fracflow/grid.hpp"

namespace fracflow::fft {

// Real-to-complex layout: the last axis is halved to n/2+1 bins, all other
// axes keep n bins, row-major. Forward transforms are unnormalized; the
// inverse applies the 1/n^ndim factor. The inverse destroys its spectral
// input (FFTW c2r semantics).
std::size_t spectral_size(const GridSpec& grid);

void forward(const GridSpec& grid, const std::vector<double>& real,
             std::vector<std::complex<double>>& spec);
void inverse(const GridSpec& grid, std::vector<std::complex<double>>& spec,
             std::vector<double>& real);

// One retained r2c mode: signed integer index per axis, physical wavenumber
// k = 2*pi*j/length, and whether the axis sits on its Nyquist bin (j = n/2,
// which has no signed counterpart on even grids and must carry no odd
// derivative).
struct ModeInfo {
  std::size_t index = 0;
  std::array<int, 3> j{0, 0, 0};
  std::array<double, 3> k{0.0, 0.0, 0.0};
  double ksq = 0.0;
  bool any_nyquist = false;
};

// Invokes fn(const ModeInfo&) for each retained mode in layout order.
template <class Fn>
void for_each_mode(const GridSpec& grid, Fn&& fn) {
  const int n = grid.n;
  const int half = n / 2 + 1;
  const double dk = two_pi / grid.length;
  const int n_outer = grid.ndim >= 2 ? n : 1;
  const int n_mid = grid.ndim >= 3 ? n : 1;

  ModeInfo m;
  std::size_t idx = 0;
  for (int a = 0; a < n_outer; ++a) {
    const int ja = (grid.ndim >= 2 && a > n / 2) ? a - n : a;
    for (int b = 0; b < n_mid; ++b) {
      const int jb = (grid.ndim >= 3 && b > n / 2) ? b - n : b;
      for (int cidx = 0; cidx < half; ++cidx, ++idx) {
        m.index = idx;
        // Axis order matches the row-major layout: x is the slowest axis.
        int jx = 0, jy = 0, jz = 0;
        if (grid.ndim == 1) {
          jx = cidx;
        } else if (grid.ndim == 2) {
          jx = ja;
          jy = cidx;
        } else {
          jx = ja;
          jy = jb;
          jz = cidx;
        }
        m.j = {jx, jy, jz};
        m.k = {jx * dk, jy * dk, jz * dk};
        m.ksq = m.k[0] * m.k[0] + m.k[1] * m.k[1] + m.k[2] * m.k[2];
        m.any_nyquist = false;
        for (int d = 0; d < grid.ndim; ++d)
          if (m.j[d] == n / 2) m.any_nyquist = true;
        fn(static_cast<const ModeInfo&>(m));
      }
    }
  }
}

}  // namespace fracflow::fft
