#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace interlace {

using cplx = std::complex<double>;

// Uniform discretization of [x_min, x_max].
struct Grid {
  double x_min = -1.0;
  double x_max = 1.0;
  int n_points = 3;

  Grid() = default;
  Grid(double xmin, double xmax, int n) : x_min(xmin), x_max(xmax), n_points(n) {
    if (!(x_min < x_max)) throw std::invalid_argument("Grid: x_min must be < x_max");
    if (n_points < 3) throw std::invalid_argument("Grid: n_points must be >= 3");
  }

  double spacing() const { return (x_max - x_min) / (n_points - 1); }
  double x(int i) const { return x_min + spacing() * i; }
  double center() const { return 0.5 * (x_min + x_max); }
  double width() const { return x_max - x_min; }

  std::vector<double> points() const {
    std::vector<double> xs(n_points);
    for (int i = 0; i < n_points; ++i) xs[i] = x(i);
    return xs;
  }

  // Nearest node index, clamped to the grid.
  int index_near(double xq) const {
    int i = static_cast<int>(std::lround((xq - x_min) / spacing()));
    if (i < 0) i = 0;
    if (i >= n_points) i = n_points - 1;
    return i;
  }

  bool contains(double xq) const { return xq >= x_min && xq <= x_max; }

  bool operator==(const Grid& o) const {
    return x_min == o.x_min && x_max == o.x_max && n_points == o.n_points;
  }
};

// Composite Simpson rule on uniformly spaced samples. An even interval count
// uses plain Simpson; a leftover interval is handled with the 3/8 rule on the
// last three intervals so accuracy stays O(h^4).
template <typename T>
T simpson(const std::vector<T>& f, double h) {
  const int n = static_cast<int>(f.size());
  if (n < 2) return T{};
  if (n == 2) return (f[0] + f[1]) * (h / 2.0);
  int m = n - 1;  // interval count
  T total{};
  int last = m;
  if (m % 2 != 0) {
    total += (f[m - 3] + 3.0 * f[m - 2] + 3.0 * f[m - 1] + f[m]) * (3.0 * h / 8.0);
    last = m - 3;
  }
  for (int i = 0; i + 2 <= last; i += 2)
    total += (f[i] + 4.0 * f[i + 1] + f[i + 2]) * (h / 3.0);
  return total;
}

inline int sign_of(double v, double eps = 0.0) {
  if (v > eps) return 1;
  if (v < -eps) return -1;
  return 0;
}

}  // namespace interlace
