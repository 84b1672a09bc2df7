#pragma once

#include <strongconv/core.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace strongconv {

/// Roughly uniform unit directions in R^n: an angle grid in 2D, a Fibonacci
/// lattice in 3D, seeded Gaussian samples above that. The coordinate axes are
/// always included.
inline PointList direction_grid(int n, int count) {
  PointList dirs;
  for (int i = 0; i < n; ++i) {
    dirs.push_back(unit_vec(n, i));
    dirs.push_back(-unit_vec(n, i));
  }
  if (n == 1) return dirs;
  if (n == 2) {
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * std::numbers::pi * (k + 0.5) / count;
      dirs.push_back(make_vec({std::cos(a), std::sin(a)}));
    }
  } else if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * k;
      dirs.push_back(make_vec({r * std::cos(a), r * std::sin(a), z}));
    }
  } else {
    std::mt19937_64 rng(0x5eed5eedULL + static_cast<unsigned>(n));
    std::normal_distribution<double> gauss;
    for (int k = 0; k < count; ++k) {
      Vec v(n);
      for (int i = 0; i < n; ++i) v(i) = gauss(rng);
      dirs.push_back(v.normalized());
    }
  }
  return dirs;
}

/// Typical angular spacing of `direction_grid(n, count)`.
inline double grid_spacing(int n, int count) {
  if (n <= 1) return 1.0;
  return 2.0 * std::pow(static_cast<double>(count), -1.0 / (n - 1));
}

}  // namespace strongconv
