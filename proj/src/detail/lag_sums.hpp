#pragma once

#include <cstddef>

namespace stablewalk::detail {

// For each lag e in [e_lo, e_hi], with N = n_nodes - 1:
//   total[e - e_lo] = sum_{a=0}^{N-e} |f[a+e] - f[a]|^p
//   first[e - e_lo] = |f[e] - f[0]|^p
//   last[e - e_lo]  = |f[N] - f[N-e]|^p
// Built in its own translation unit with vectorized math enabled.
void lag_power_sums(const double* f, std::size_t n_nodes, double p, std::size_t e_lo,
                    std::size_t e_hi, double* total, double* first, double* last);

}  // namespace stablewalk::detail
