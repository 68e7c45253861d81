#include "detail/lag_sums.hpp"

#include <algorithm>
#include <cmath>

namespace stablewalk::detail {

namespace {

// |x|^p as exp(p log|x|); the clamp keeps log finite and maps 0 to 0.
inline double abs_pow(double x, double p) {
  const double v = std::fmax(std::fabs(x), 1e-300);
  return std::exp(p * std::log(v));
}

// Single-precision terms are summed in blocks small enough that the float
// partial sums stay accurate, then accumulated in double.
constexpr std::size_t kBlock = 256;

}  // namespace

void lag_power_sums(const double* f, std::size_t n_nodes, double p, std::size_t e_lo,
                    std::size_t e_hi, double* total, double* first, double* last) {
  const std::size_t cells = n_nodes - 1;

  // Differences are formed in double, rescaled so float cannot overflow, and
  // only then rounded; the factor comes back as scale^p.
  double scale = 0.0;
  for (std::size_t a = 0; a < n_nodes; ++a) scale = std::max(scale, std::fabs(f[a]));
  if (scale == 0.0) {
    std::fill(total, total + (e_hi - e_lo + 1), 0.0);
    std::fill(first, first + (e_hi - e_lo + 1), 0.0);
    std::fill(last, last + (e_hi - e_lo + 1), 0.0);
    return;
  }
  const double inv = 1.0 / scale;
  const double back = std::pow(scale, p);
  const float pf = static_cast<float>(p);

  for (std::size_t e = e_lo; e <= e_hi; ++e) {
    const std::size_t count = cells - e + 1;
    const double* rhs = f + e;
    double s = 0.0;
    for (std::size_t a0 = 0; a0 < count; a0 += kBlock) {
      const std::size_t a1 = std::min(count, a0 + kBlock);
      float block = 0.0f;
#pragma omp simd reduction(+ : block)
      for (std::size_t a = a0; a < a1; ++a) {
        const float d = static_cast<float>((rhs[a] - f[a]) * inv);
        const float x = std::fmax(std::fabs(d), 1e-30f);
        block += std::exp(pf * std::log(x));
      }
      s += block;
    }
    total[e - e_lo] = s * back;
    first[e - e_lo] = abs_pow(f[e] - f[0], p);
    last[e - e_lo] = abs_pow(f[cells] - f[cells - e], p);
  }
}

}  // namespace stablewalk::detail
