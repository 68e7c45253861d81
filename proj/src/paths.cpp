#include "stablewalk/paths.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "stablewalk/errors.hpp"
#include "stablewalk/format.hpp"

namespace stablewalk {

namespace {

std::size_t cells_at(int level) { return std::size_t{1} << level; }

void check_level(int level) {
  if (level < 0 || level > DyadicPath::kMaxLevel) {
    std::ostringstream msg;
    msg << "path level must lie in [0, " << DyadicPath::kMaxLevel << "] (got " << level << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

DyadicPath::DyadicPath(int level, std::vector<double> node_values)
    : level_(level), nodes_(std::move(node_values)) {
  check_level(level);
  if (nodes_.size() != cells_at(level) + 1) {
    std::ostringstream msg;
    msg << "level-" << level << " path needs " << cells_at(level) + 1
        << " node values (got " << nodes_.size() << ")";
    throw ShapeError(msg.str());
  }
}

DyadicPath DyadicPath::zero(int level) {
  check_level(level);
  return DyadicPath(level, std::vector<double>(cells_at(level) + 1, 0.0));
}

DyadicPath DyadicPath::from_function(int level, const std::function<double(double)>& f) {
  check_level(level);
  const std::size_t n = cells_at(level);
  std::vector<double> v(n + 1);
  for (std::size_t k = 0; k <= n; ++k) v[k] = f(static_cast<double>(k) / static_cast<double>(n));
  return DyadicPath(level, std::move(v));
}

double DyadicPath::eval(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    std::ostringstream msg;
    msg << "path evaluation needs t in [0, 1] (got " << t << ")";
    throw DomainError(msg.str());
  }
  const double x = t * static_cast<double>(cells());
  const double cell = std::floor(x);
  auto k = static_cast<std::size_t>(cell);
  if (k >= cells()) return nodes_.back();
  const double frac = x - cell;
  if (frac == 0.0) return nodes_[k];
  return nodes_[k] + frac * (nodes_[k + 1] - nodes_[k]);
}

DyadicPath DyadicPath::refined(int level) const {
  if (level < level_) throw DomainError("cannot refine a path to a coarser level");
  if (level == level_) return *this;
  check_level(level);
  const std::size_t ratio = std::size_t{1} << (level - level_);
  const std::size_t n = cells_at(level);
  std::vector<double> v(n + 1);
  for (std::size_t c = 0; c < cells(); ++c) {
    const double a = nodes_[c];
    const double b = nodes_[c + 1];
    for (std::size_t r = 0; r < ratio; ++r) {
      v[c * ratio + r] = a + (b - a) * (static_cast<double>(r) / static_cast<double>(ratio));
    }
  }
  v[n] = nodes_.back();
  return DyadicPath(level, std::move(v));
}

DyadicPath& DyadicPath::operator+=(const DyadicPath& other) {
  if (other.level_ > level_) *this = refined(other.level_);
  const DyadicPath rhs = other.refined(level_);
  for (std::size_t k = 0; k < nodes_.size(); ++k) nodes_[k] += rhs.nodes_[k];
  return *this;
}

DyadicPath& DyadicPath::operator-=(const DyadicPath& other) {
  if (other.level_ > level_) *this = refined(other.level_);
  const DyadicPath rhs = other.refined(level_);
  for (std::size_t k = 0; k < nodes_.size(); ++k) nodes_[k] -= rhs.nodes_[k];
  return *this;
}

DyadicPath& DyadicPath::operator*=(double a) {
  for (double& v : nodes_) v *= a;
  return *this;
}

DyadicPath operator+(const DyadicPath& a, const DyadicPath& b) {
  DyadicPath r = a;
  r += b;
  return r;
}

DyadicPath operator-(const DyadicPath& a, const DyadicPath& b) {
  DyadicPath r = a;
  r -= b;
  return r;
}

DyadicPath operator*(double a, const DyadicPath& p) {
  DyadicPath r = p;
  r *= a;
  return r;
}

DyadicPath build_walk(std::span<const double> increments, double alpha, int n) {
  check_level(n);
  if (increments.size() != cells_at(n)) {
    std::ostringstream msg;
    msg << "level-" << n << " walk needs " << cells_at(n) << " increments (got "
        << increments.size() << ")";
    throw ShapeError(msg.str());
  }
  const double scale = std::exp2(-static_cast<double>(n) / alpha);
  std::vector<double> v(increments.size() + 1);
  double sum = 0.0;
  v[0] = 0.0;
  for (std::size_t k = 0; k < increments.size(); ++k) {
    sum += increments[k];
    v[k + 1] = scale * sum;
  }
  return DyadicPath(n, std::move(v));
}

DyadicPath project(const DyadicPath& path, int m) {
  if (m < 0 || m > path.level()) {
    std::ostringstream msg;
    msg << "projection level must satisfy 0 <= m <= " << path.level() << " (got " << m << ")";
    throw DomainError(msg.str());
  }
  const std::size_t stride = std::size_t{1} << (path.level() - m);
  const std::size_t n = cells_at(m);
  std::vector<double> v(n + 1);
  const auto nodes = path.nodes();
  for (std::size_t k = 0; k <= n; ++k) v[k] = nodes[k * stride];
  return DyadicPath(m, std::move(v));
}

std::vector<double> block_sums(std::span<const double> increments, int n, int m,
                               double alpha) {
  check_level(n);
  if (m < 0 || m > n) throw DomainError("block level must satisfy 0 <= m <= n");
  if (increments.size() != cells_at(n)) throw ShapeError("block_sums needs 2^n increments");
  const std::size_t block = std::size_t{1} << (n - m);
  const double scale = std::exp2(-static_cast<double>(n - m) / alpha);
  std::vector<double> out(cells_at(m));
  for (std::size_t j = 0; j < out.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = j * block; i < (j + 1) * block; ++i) s += increments[i];
    out[j] = scale * s;
  }
  return out;
}

DyadicPath sample_stable_path(const StableLaw& law, int level, RngStream& stream) {
  check_level(level);
  const std::size_t n = cells_at(level);
  const double scale = std::exp2(-static_cast<double>(level) / law.alpha());
  std::vector<double> v(n + 1);
  double sum = 0.0;
  v[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += sample_stable(law, stream);
    v[k + 1] = scale * sum;
  }
  return DyadicPath(level, std::move(v));
}

DyadicPath sample_walk_path(const HeavyTailLaw& law, int level, RngStream& stream) {
  check_level(level);
  std::vector<double> y(cells_at(level));
  for (double& v : y) v = sample(law, stream);
  return build_walk(y, alpha_of(law), level);
}

std::vector<double> hat_coefficients(const DyadicPath& path) {
  const double root = std::sqrt(static_cast<double>(path.cells()));
  const auto nodes = path.nodes();
  std::vector<double> c(path.cells());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = root * (nodes[j + 1] - nodes[j]);
  return c;
}

void write_path_csv(std::ostream& out, const DyadicPath& path) {
  out << "t,value\n";
  const auto nodes = path.nodes();
  const double n = static_cast<double>(path.cells());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    out << format_real(static_cast<double>(k) / n) << ',' << format_real(nodes[k]) << '\n';
  }
}

DyadicPath read_path_csv(std::istream& in) {
  std::string line;
  std::vector<double> ts;
  std::vector<double> vs;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && std::isalpha(static_cast<unsigned char>(line[0]))) continue;  // header
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("path CSV line " + std::to_string(line_no) + ": expected 't,value'");
    }
    try {
      std::size_t used = 0;
      const std::string a = line.substr(0, comma);
      const std::string b = line.substr(comma + 1);
      const double t = std::stod(a, &used);
      if (used != a.size()) throw std::invalid_argument("trailing characters");
      const double v = std::stod(b, &used);
      if (used != b.size()) throw std::invalid_argument("trailing characters");
      ts.push_back(t);
      vs.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("path CSV line " + std::to_string(line_no) + ": malformed number");
    }
  }
  if (vs.size() < 2) throw ConfigError("path CSV needs at least two nodes");
  const std::size_t cells = vs.size() - 1;
  if ((cells & (cells - 1)) != 0) throw ConfigError("path CSV node count must be 2^n + 1");
  int level = 0;
  while ((std::size_t{1} << level) < cells) ++level;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double expect = static_cast<double>(k) / static_cast<double>(cells);
    if (k > 0 && !(ts[k] > ts[k - 1])) throw ConfigError("path CSV abscissae must increase strictly");
    if (std::fabs(ts[k] - expect) > 1e-12) {
      throw ConfigError("path CSV abscissae must be the dyadic nodes k/2^n");
    }
  }
  return DyadicPath(level, std::move(vs));
}

}  // namespace stablewalk
