#pragma once

// Allocation-free extremal queries on an intersection of planar disks. Used
// in the inner loop of cone-gauge searches, where each slice of the translate
// set is such an intersection.

#include <cmath>
#include <limits>
#include <vector>

namespace strongconv::disk2d {

struct Disk {
  double x, y, r;
};

struct Point {
  double x, y;
};

inline bool inside_all(const std::vector<Disk>& disks, double px, double py, double eps) {
  for (const Disk& d : disks)
    if (std::hypot(px - d.x, py - d.y) > d.r + eps) return false;
  return true;
}

/// Calls fn(x, y) for every candidate extreme point: the extreme point of each
/// disk in direction (wx, wy) and every pairwise boundary crossing.
template <class Fn>
void for_each_candidate(const std::vector<Disk>& disks, double wx, double wy, Fn&& fn) {
  const double wn = std::hypot(wx, wy);
  for (const Disk& d : disks) {
    if (wn > 0)
      fn(d.x + d.r * wx / wn, d.y + d.r * wy / wn);
    else
      fn(d.x, d.y - d.r);
  }
  for (std::size_t i = 0; i < disks.size(); ++i) {
    for (std::size_t j = i + 1; j < disks.size(); ++j) {
      const Disk& a = disks[i];
      const Disk& b = disks[j];
      const double dx = b.x - a.x, dy = b.y - a.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 <= 1e-24) continue;
      const double d = std::sqrt(d2);
      const double along = (d2 + a.r * a.r - b.r * b.r) / (2 * d);
      double h2 = a.r * a.r - along * along;
      if (h2 < -1e-12 * (1 + a.r * a.r)) continue;
      const double h = std::sqrt(std::max(0.0, h2));
      const double mx = a.x + along * dx / d, my = a.y + along * dy / d;
      fn(mx - h * dy / d, my + h * dx / d);
      fn(mx + h * dy / d, my - h * dx / d);
    }
  }
}

/// Maximizer of w.z over the intersection; false when it is empty.
inline bool argmax(const std::vector<Disk>& disks, double wx, double wy, double eps, Point& out) {
  double best = -std::numeric_limits<double>::infinity();
  bool found = false;
  for_each_candidate(disks, wx, wy, [&](double px, double py) {
    const double v = wx * px + wy * py;
    if (v > best && inside_all(disks, px, py, eps)) {
      best = v;
      out = {px, py};
      found = true;
    }
  });
  return found;
}

inline bool nonempty(const std::vector<Disk>& disks, double eps) {
  Point p{};
  return argmax(disks, 0.0, 1.0, eps, p);
}

}  // namespace strongconv::disk2d
