#include "stablewalk/sobolev.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "detail/lag_sums.hpp"
#include "stablewalk/errors.hpp"
#include "stablewalk/quadrature.hpp"

namespace stablewalk {

void SobolevParams::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) {
    std::ostringstream msg;
    msg << "Sobolev regularity must satisfy 0 < eta < 1 (got " << eta << ")";
    throw DomainError(msg.str());
  }
  if (!(p >= 1.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "Sobolev integrability must satisfy p >= 1 (got " << p << ")";
    throw DomainError(msg.str());
  }
}

namespace {

constexpr int kOrder = 8;

// Closed form of int_0^1 int_0^1 |sigma - tau|^{q-1}.
double unit_square_kernel(double q) { return 2.0 / (q * (q + 1.0)); }

// True when the affine map (u, v) -> c + a u + b v changes sign on [0,1]^2.
bool crosses_zero(double c, double a, double b) {
  const double v00 = c;
  const double v10 = c + a;
  const double v01 = c + b;
  const double v11 = c + a + b;
  const double lo = std::min(std::min(v00, v10), std::min(v01, v11));
  const double hi = std::max(std::max(v00, v10), std::max(v01, v11));
  return lo < 0.0 && hi > 0.0;
}

}  // namespace

double lp_part(const DyadicPath& path, double p) {
  if (!(p >= 1.0)) throw DomainError("Lp part needs p >= 1");
  const auto f = path.nodes();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) s += mean_abs_pow(f[i], f[i + 1] - f[i], p);
  return s * path.step();
}

namespace {

// `split` subdivides the rho range for close pairs and sign changes; the
// banded evaluator skips it, its error budget being set by the far field.
double pair_integral(std::size_t lag, double gap, double a_left, double a_right,
                     const SobolevParams& params, bool split) {
  const double p = params.p;
  const double beta = params.kernel_exponent();
  const double q = params.reduced_exponent();
  const double shift = static_cast<double>(lag) - 1.0;
  const double slope = a_left - a_right;
  const GaussRule& rule = gauss_legendre(kOrder);

  // Integral of |.|^p along the segment u + v = rho, parametrised by xi with
  // u = rho xi, v = rho (1 - xi).
  auto line = [&](double rho) {
    const double xi_lo = rho <= 1.0 ? 0.0 : 1.0 - 1.0 / rho;
    const double xi_hi = rho <= 1.0 ? 1.0 : 1.0 / rho;
    const double len = xi_hi - xi_lo;
    const double start = gap + rho * a_right + rho * slope * xi_lo;
    return len * mean_abs_pow(start, rho * slope * len, p);
  };
  auto integrand = [&](double rho) {
    return rho * std::pow(shift + rho, -beta) * line(rho);
  };

  // x = x0 + (x1 - x0) t^3 flattens the |x - x0|^p behaviour at a root of
  // the integrand, which plain Gauss resolves only to a few digits.
  auto from_root = [&](double x0, double x1) {
    const double w = x1 - x0;
    auto mapped = [&](double t) {
      return 3.0 * std::fabs(w) * t * t * integrand(x0 + w * t * t * t);
    };
    return integrate(rule, mapped, 0.0, 1.0);
  };

  // Integrates over [lo, lo + 1]. With `split`, the range is cut where a
  // segment endpoint crosses zero (kinks of the integrand) and near pairs get
  // extra pieces besides.
  auto span = [&](double lo, double c_first, double a_first, double c_second, double a_second) {
    if (!split) return integrate(rule, integrand, lo, lo + 1.0);
    std::array<double, 8> cuts{};
    std::array<double, 2> roots{-1.0, -1.0};
    std::size_t n = 0;
    const int pieces = lag <= 2 || crosses_zero(gap, a_left, a_right) ? 4 : 1;
    for (int k = 0; k <= pieces; ++k) cuts[n++] = double(k) / pieces;
    std::size_t r = 0;
    for (auto [c, a] : {std::pair{c_first, a_first}, std::pair{c_second, a_second}}) {
      if (a == 0.0) continue;
      const double t = -c / a;
      if (t > 0.0 && t < 1.0) {
        cuts[n++] = t;
        roots[r++] = t;
      }
    }
    std::sort(cuts.begin(), cuts.begin() + n);
    auto is_root = [&](double t) { return t == roots[0] || t == roots[1]; };
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double x0 = cuts[k];
      const double x1 = cuts[k + 1];
      if (!(x1 > x0)) continue;
      const bool left = is_root(x0);
      const bool right = is_root(x1);
      if (left && right) {
        const double mid = 0.5 * (x0 + x1);
        s += from_root(lo + x0, lo + mid) + from_root(lo + x1, lo + mid);
      } else if (left) {
        s += from_root(lo + x0, lo + x1);
      } else if (right) {
        s += from_root(lo + x1, lo + x0);
      } else {
        s += integrate(rule, integrand, lo + x0, lo + x1);
      }
    }
    return s;
  };

  double inner = 0.0;
  if (lag == 1) {
    // Shared node: the integrand factors as rho^q times a constant.
    inner = mean_abs_pow(a_right, slope, p) / (q + 1.0);
  } else {
    inner = span(0.0, gap, a_right, gap, a_left);
  }
  const double outer = span(1.0, gap + a_right, a_left, gap + a_left, a_right);
  return inner + outer;
}

}  // namespace

double cell_pair_integral(std::size_t lag, double gap, double a_left, double a_right,
                          const SobolevParams& params) {
  return pair_integral(lag, gap, a_left, a_right, params, true);
}

SeminormParts seminorm_parts(const DyadicPath& path, const SobolevParams& params) {
  params.validate();
  const auto f = path.nodes();
  const std::size_t n = path.cells();
  const double p = params.p;
  const double scale = std::pow(path.step(), 2.0 - params.kernel_exponent());

  std::vector<double> inc(n);
  for (std::size_t i = 0; i < n; ++i) inc[i] = f[i + 1] - f[i];

  SeminormParts parts;
  const double diag = unit_square_kernel(params.reduced_exponent());
  for (std::size_t i = 0; i < n; ++i) parts.same_cell += std::pow(std::fabs(inc[i]), p) * diag;

  // Row-major over i < j.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t lag = j - i;
      const double v = cell_pair_integral(lag, f[j] - f[i + 1], inc[i], inc[j], params);
      if (lag == 1) {
        parts.adjacent += v;
      } else {
        parts.far += v;
      }
    }
  }
  parts.same_cell *= scale;
  parts.adjacent *= 2.0 * scale;
  parts.far *= 2.0 * scale;
  return parts;
}

double seminorm_p(const DyadicPath& path, const SobolevParams& params) {
  return seminorm_parts(path, params).total();
}

double norm(const DyadicPath& path, const SobolevParams& params) {
  params.validate();
  return std::pow(lp_part(path, params.p) + seminorm_p(path, params), 1.0 / params.p);
}

double diff_norm(const DyadicPath& p1, const DyadicPath& p2, const SobolevParams& params) {
  return norm(p1 - p2, params);
}

// ---------------------------------------------------------------------------
// Banded evaluator

std::array<double, 4> corner_kernel_moments(std::size_t lag, double beta) {
  if (lag == 0) throw DomainError("corner kernel moments need lag >= 1");
  const double d = static_cast<double>(lag);
  const GaussRule& g3 = gauss_legendre(3);

  // Integral of the corner function along tau - sigma = r; cubic in r.
  auto along = [&](int corner, double r) {
    const double lo = std::max(0.0, -r);
    const double hi = std::min(1.0, 1.0 - r);
    if (hi <= lo) return 0.0;
    return integrate(
        g3,
        [&](double s) {
          const double t = s + r;
          switch (corner) {
            case 0: return (1.0 - s) * (1.0 - t);
            case 1: return s * (1.0 - t);
            case 2: return (1.0 - s) * t;
            default: return s * t;
          }
        },
        lo, hi);
  };

  std::array<double, 4> w{};
  const GaussRule& g16 = gauss_legendre(16);
  for (int c = 0; c < 4; ++c) {
    auto f = [&](double r) { return std::pow(d + r, -beta) * along(c, r); };
    double right = integrate(g16, f, 0.0, 1.0);
    double left = 0.0;
    if (lag >= 2) {
      left = integrate(g16, f, -1.0, 0.0);
    } else {
      // x = 1 + r in [0, 1]; along() vanishes at x = 0, so it is
      // c1 x + c2 x^2 + c3 x^3 and each monomial integrates in closed form.
      const double xs[3] = {1.0 / 3.0, 2.0 / 3.0, 1.0};
      double m[3][4];
      for (int k = 0; k < 3; ++k) {
        m[k][0] = xs[k];
        m[k][1] = xs[k] * xs[k];
        m[k][2] = xs[k] * xs[k] * xs[k];
        m[k][3] = along(c, xs[k] - 1.0);
      }
      for (int col = 0; col < 3; ++col) {
        for (int row = col + 1; row < 3; ++row) {
          const double factor = m[row][col] / m[col][col];
          for (int k = col; k < 4; ++k) m[row][k] -= factor * m[col][k];
        }
      }
      double coef[3];
      for (int row = 2; row >= 0; --row) {
        double s = m[row][3];
        for (int k = row + 1; k < 3; ++k) s -= m[row][k] * coef[k];
        coef[row] = s / m[row][row];
      }
      for (int k = 0; k < 3; ++k) left += coef[k] / (k + 2.0 - beta);
    }
    w[c] = left + right;
  }
  return w;
}

BandedSeminorm::BandedSeminorm(int level, SobolevParams params, std::size_t band)
    : level_(level), params_(params), band_(band) {
  params_.validate();
  if (level < 0 || level > DyadicPath::kMaxLevel) throw DomainError("invalid level");
  if (band < 1) throw DomainError("band must be at least 1");
  const std::size_t n = std::size_t{1} << level;
  weights_.resize(n);
  const double beta = params_.kernel_exponent();
  for (std::size_t d = band_ + 1; d < n; ++d) {
    const auto w = corner_kernel_moments(d, beta);
    weights_[d] = {w[0], w[1], w[2], w[3]};
  }
}

double BandedSeminorm::seminorm_p(std::span<const double> f) const {
  const std::size_t n = std::size_t{1} << level_;
  if (f.size() != n + 1) throw ShapeError("node count does not match evaluator level");
  const double p = params_.p;
  const double scale = std::pow(1.0 / static_cast<double>(n), 2.0 - params_.kernel_exponent());

  double same = 0.0;
  const double diag = unit_square_kernel(params_.reduced_exponent());
  for (std::size_t i = 0; i < n; ++i) same += std::pow(std::fabs(f[i + 1] - f[i]), p) * diag;

  double near = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t lag = 1; lag <= band_ && i + lag < n; ++lag) {
      const std::size_t j = i + lag;
      near += pair_integral(lag, f[j] - f[i + 1], f[i + 1] - f[i], f[j + 1] - f[j], params_,
                            false);
    }
  }

  double far = 0.0;
  if (band_ + 1 < n) {
    const std::size_t e_lo = band_;
    const std::size_t e_hi = n;
    const std::size_t count = e_hi - e_lo + 1;
    std::vector<double> total(count), first(count), last(count);
    detail::lag_power_sums(f.data(), f.size(), p, e_lo, e_hi, total.data(), first.data(),
                           last.data());
    auto T = [&](std::size_t e) { return total[e - e_lo]; };
    auto head = [&](std::size_t e) { return first[e - e_lo]; };
    auto tail = [&](std::size_t e) { return last[e - e_lo]; };

    // Cell midpoints: the centre of cell pair (i, i + d) sees m[i + d] - m[i].
    std::vector<double> mid(n);
    for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (f[i] + f[i + 1]);
    const std::size_t c_lo = band_ + 1;
    const std::size_t c_count = n - 1 - c_lo + 1;
    std::vector<double> centre(c_count), unused_a(c_count), unused_b(c_count);
    detail::lag_power_sums(mid.data(), n, p, c_lo, n - 1, centre.data(), unused_a.data(),
                           unused_b.data());

    for (std::size_t d = band_ + 1; d < n; ++d) {
      const CornerWeights& w = weights_[d];
      const double c00 = T(d) - tail(d);
      const double c11 = T(d) - head(d);
      const double c10 = T(d - 1) - head(d - 1) - tail(d - 1);
      const double c01 = T(d + 1);
      far += w.w00 * c00 + w.w11 * c11 + w.w10 * c10 + w.w01 * c01;
      // The bilinear rule misses a term shaped like a^2 u(1-u) + b^2 v(1-v);
      // matching it at the centre adds 2/3 of the centre defect.
      const double mass = w.w00 + w.w10 + w.w01 + w.w11;
      const double defect = centre[d - c_lo] - 0.25 * (c00 + c11 + c10 + c01);
      far += (2.0 / 3.0) * mass * defect;
    }
  }
  return scale * (same + 2.0 * (near + far));
}

double BandedSeminorm::seminorm_p(const DyadicPath& path) const {
  if (path.level() != level_) throw ShapeError("path level does not match evaluator level");
  return seminorm_p(path.nodes());
}

double BandedSeminorm::norm_p(const DyadicPath& path) const {
  return lp_part(path, params_.p) + seminorm_p(path);
}

}  // namespace stablewalk
