#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bkc {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline std::string to_string(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << p.x << ", " << p.y << ')';
  return os.str();
}

/// Portable draws from mt19937_64; the standard distributions are
/// implementation-defined, these are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)) % n; }
  bool coin() { return (gen_() >> 63) != 0; }

 private:
  std::mt19937_64 gen_;
};

/// Pseudo-random points in a rectangle, kept at least `z_exclusion` away
/// from the singular locus x = 0.
struct Sampler {
  double x_min = -3.0;
  double x_max = 3.0;
  double y_min = -3.0;
  double y_max = 3.0;
  double z_exclusion = 0.1;
  bool positive_only = false;
  /// Draw |x| log-uniformly from [z_exclusion, max |x|]; the first points sit
  /// exactly at |x| = z_exclusion on each admissible side.
  bool log_spaced_x = false;
  int count = 64;
  std::uint64_t seed = 0;

  /// Generic identity checks: |x| >= 0.1 on [-3, 3]^2.
  static Sampler generic(std::uint64_t seed = 0) {
    Sampler s;
    s.seed = seed;
    return s;
  }

  /// Both half-planes, reaching |x| = 1e-4.
  static Sampler near_z(std::uint64_t seed = 0) {
    Sampler s;
    s.z_exclusion = 1e-4;
    s.log_spaced_x = true;
    s.seed = seed;
    return s;
  }

  static Sampler right_half(double x_lo = 0.1, double x_hi = 10.0, std::uint64_t seed = 0) {
    Sampler s;
    s.x_min = x_lo;
    s.x_max = x_hi;
    s.z_exclusion = x_lo;
    s.positive_only = true;
    s.seed = seed;
    return s;
  }

  bool admits(double x) const {
    if (x < x_min || x > x_max) return false;
    if (std::abs(x) < z_exclusion) return false;
    return !positive_only || x > 0.0;
  }

  std::vector<Point> points() const {
    if (count <= 0) return {};
    if (x_min > x_max || y_min > y_max) throw std::invalid_argument("Sampler: empty rectangle");
    Rng rng(seed);
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(count));

    if (log_spaced_x) {
      const double hi = std::max(std::abs(x_min), std::abs(x_max));
      if (hi < z_exclusion) throw std::invalid_argument("Sampler: no admissible x");
      for (double side : {1.0, -1.0}) {
        if (static_cast<int>(out.size()) < count && admits(side * z_exclusion))
          out.push_back({side * z_exclusion, rng.uniform(y_min, y_max)});
      }
      const double lo_log = std::log(z_exclusion);
      const double hi_log = std::log(hi);
      int guard = 0;
      while (static_cast<int>(out.size()) < count) {
        if (++guard > 1000 * count) throw std::invalid_argument("Sampler: admissible set too small");
        const double mag = std::exp(rng.uniform(lo_log, hi_log));
        const double x = (!positive_only && rng.coin()) ? -mag : mag;
        const double y = rng.uniform(y_min, y_max);
        if (admits(x)) out.push_back({x, y});
      }
      return out;
    }

    int guard = 0;
    while (static_cast<int>(out.size()) < count) {
      if (++guard > 1000 * count) throw std::invalid_argument("Sampler: admissible set too small");
      const double x = rng.uniform(x_min, x_max);
      const double y = rng.uniform(y_min, y_max);
      if (admits(x)) out.push_back({x, y});
    }
    return out;
  }

  /// Points on the singular locus {0} x [y_min, y_max].
  std::vector<Point> z_points(int n = 16) const {
    Rng rng(seed ^ 0x5a5a5a5aULL);
    std::vector<Point> out;
    for (int k = 0; k < n; ++k) out.push_back({0.0, rng.uniform(y_min, y_max)});
    return out;
  }
};

/// Regular inclusive grid, as written on the command line "a:b:step,c:d:step".
struct Grid {
  double x_min = 0.0, x_max = 0.0, x_step = 1.0;
  double y_min = 0.0, y_max = 0.0, y_step = 1.0;

  static Grid parse(const std::string& spec) {
    Grid g;
    char c1, c2, comma, c3, c4;
    std::istringstream is(spec);
    if (!(is >> g.x_min >> c1 >> g.x_max >> c2 >> g.x_step >> comma >> g.y_min >> c3 >> g.y_max >> c4 >> g.y_step) ||
        c1 != ':' || c2 != ':' || comma != ',' || c3 != ':' || c4 != ':') {
      throw std::invalid_argument("grid must look like xmin:xmax:step,ymin:ymax:step, got '" + spec + "'");
    }
    if (g.x_step <= 0 || g.y_step <= 0 || g.x_min > g.x_max || g.y_min > g.y_max)
      throw std::invalid_argument("grid steps must be positive and ranges nonempty");
    return g;
  }

  std::vector<Point> points() const {
    std::vector<Point> out;
    const auto steps = [](double lo, double hi, double h) {
      return static_cast<int>(std::floor((hi - lo) / h + 1e-9));
    };
    const int nx = steps(x_min, x_max, x_step);
    const int ny = steps(y_min, y_max, y_step);
    for (int i = 0; i <= nx; ++i)
      for (int j = 0; j <= ny; ++j) out.push_back({x_min + i * x_step, y_min + j * y_step});
    return out;
  }
};

/// Fixed point list.
struct PointList {
  std::vector<Point> pts;
  const std::vector<Point>& points() const { return pts; }
};

}  // namespace bkc
