#pragma once

// Right-angle Sierpinski fixtures for the Euclidean lane. The reference set
// is built by plain loops (no library calls): exact Hutchinson steps of the
// three dyadic similarities applied to the fixed corner vertices. All
// coordinates are dyadic, so doubles carry them exactly and duplicate points
// are bitwise equal.

#include <algorithm>
#include <memory>
#include <utility>
#include <vector>

#include "fractal/euclidean.hpp"
#include "fractal/hutchinson.hpp"

namespace sierpinski {

inline fractal::IFSystem<fractal::EuclideanSpace> system() {
  auto space = std::make_shared<const fractal::EuclideanSpace>(2);
  std::vector<fractal::AffineMap> maps{
      fractal::affine_scale_shift(2, 0.5, fractal::vec2(0.0, 0.0)),
      fractal::affine_scale_shift(2, 0.5, fractal::vec2(0.5, 0.0)),
      fractal::affine_scale_shift(2, 0.5, fractal::vec2(0.0, 0.5)),
  };
  return fractal::IFSystem<fractal::EuclideanSpace>(space, std::move(maps));
}

inline std::vector<fractal::Vec> reference(int level) {
  std::vector<std::pair<double, double>> pts{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  for (int step = 0; step < level; ++step) {
    std::vector<std::pair<double, double>> next;
    next.reserve(pts.size() * 3);
    for (auto [x, y] : pts) {
      next.emplace_back(x / 2.0, y / 2.0);
      next.emplace_back(x / 2.0 + 0.5, y / 2.0);
      next.emplace_back(x / 2.0, y / 2.0 + 0.5);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    pts = std::move(next);
  }
  std::vector<fractal::Vec> out;
  out.reserve(pts.size());
  for (auto [x, y] : pts) out.push_back(fractal::vec2(x, y));
  return out;
}

}  // namespace sierpinski
