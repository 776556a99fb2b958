// sphere_search.hpp
// Deterministic maximization of smooth functions of one or two unit directions:
// a coarse grid over the upper hemisphere (objectives here are invariant under
// v -> -v) followed by successive coordinate parabolic steps in tangent coordinates.

#pragma once

#include "core_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace geodiscord {

/// Grid resolution: `azimuthal` points on [0, 2pi), `polar` points on [0, pi/2] (pole included).
struct SphereGrid {
  int azimuthal = 64;
  int polar = 32;
};

struct RefineOptions {
  double initial_step = 0.05;
  double min_step = 1e-9;
  double value_tol = 1e-12;  // stop once a sweep gains less than this at min_step scale
  int max_sweeps = 2000;
};

/// Upper-hemisphere grid points in scan order. The pole appears once.
inline std::vector<Vec3> hemisphere_points(const SphereGrid& grid) {
  if (grid.azimuthal < 1 || grid.polar < 2) throw std::invalid_argument("sphere grid too small");
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(grid.azimuthal) * grid.polar);
  pts.emplace_back(0.0, 0.0, 1.0);
  for (int j = 1; j < grid.polar; ++j) {
    const double theta = 0.5 * std::numbers::pi * j / (grid.polar - 1);
    for (int i = 0; i < grid.azimuthal; ++i) {
      const double phi = 2.0 * std::numbers::pi * i / grid.azimuthal;
      pts.emplace_back(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
    }
  }
  return pts;
}

/// Two unit vectors completing v to an orthonormal frame.
inline std::pair<Vec3, Vec3> tangent_frame(const Vec3& v) {
  const Vec3 seed = (std::abs(v.x()) < 0.9) ? Vec3::UnitX() : Vec3::UnitY();
  Vec3 e1 = (seed - seed.dot(v) * v).normalized();
  Vec3 e2 = v.cross(e1);
  return {e1, e2};
}

template <int Dirs>
struct SphereOptimum {
  double value = 0.0;
  std::array<Vec3, Dirs> directions{};
};

namespace detail {

// Coordinate-wise parabolic ascent on a product of spheres. Each tangent
// coordinate is probed at -h, 0, +h; the parabola vertex (clamped to 2h) is
// accepted if it beats the best probe. The step shrinks when a sweep stalls.
template <int Dirs, typename F>
SphereOptimum<Dirs> refine(F&& f, SphereOptimum<Dirs> start, const RefineOptions& opt) {
  auto eval = [&](const std::array<Vec3, Dirs>& d) {
    if constexpr (Dirs == 1)
      return f(d[0]);
    else
      return f(d[0], d[1]);
  };
  SphereOptimum<Dirs> cur = start;
  cur.value = eval(cur.directions);
  double h = opt.initial_step;
  for (int sweep = 0; sweep < opt.max_sweeps && h >= opt.min_step; ++sweep) {
    const double before = cur.value;
    for (int which = 0; which < Dirs; ++which) {
      const auto [e1, e2] = tangent_frame(cur.directions[which]);
      for (const Vec3& e : {e1, e2}) {
        auto moved = [&](double s) {
          auto d = cur.directions;
          d[which] = (d[which] + s * e).normalized();
          return d;
        };
        const auto dp = moved(h), dm = moved(-h);
        const double fp = eval(dp), fm = eval(dm), f0 = cur.value;
        double best_val = f0;
        std::array<Vec3, Dirs> best_dir = cur.directions;
        if (fp > best_val) best_val = fp, best_dir = dp;
        if (fm > best_val) best_val = fm, best_dir = dm;
        const double curvature = fp + fm - 2.0 * f0;
        if (curvature < 0.0) {
          const double s = std::clamp(0.5 * h * (fm - fp) / curvature, -2.0 * h, 2.0 * h);
          const auto ds = moved(s);
          const double fs = eval(ds);
          if (fs > best_val) best_val = fs, best_dir = ds;
        }
        if (best_val > cur.value) {
          cur.value = best_val;
          cur.directions = best_dir;
        }
      }
    }
    if (cur.value - before <= opt.value_tol) h *= 0.5;
  }
  return cur;
}

}  // namespace detail

/// Maximize f(v) over unit v with f(v) == f(-v).
template <typename F>
SphereOptimum<1> maximize_on_sphere(F&& f, const SphereGrid& grid = {}, const RefineOptions& opt = {}) {
  const auto pts = hemisphere_points(grid);
  SphereOptimum<1> best;
  best.value = -std::numeric_limits<double>::infinity();
  for (const Vec3& p : pts) {
    const double v = f(p);
    if (v > best.value) {  // strict: ties keep the first point in scan order
      best.value = v;
      best.directions[0] = p;
    }
  }
  RefineOptions o = opt;
  o.initial_step = std::min(opt.initial_step, std::numbers::pi / grid.azimuthal);
  auto refined = detail::refine<1>(f, best, o);
  return refined.value >= best.value ? refined : best;
}

/// Maximize f(k, l) over pairs of unit vectors, f invariant under k -> -k and l -> -l.
/// Exhaustive scan of the product grid followed by joint refinement.
template <typename F>
SphereOptimum<2> maximize_on_sphere_pair(F&& f, const SphereGrid& grid = {}, const RefineOptions& opt = {}) {
  const auto pts = hemisphere_points(grid);
  SphereOptimum<2> best;
  best.value = -std::numeric_limits<double>::infinity();
  for (const Vec3& k : pts)
    for (const Vec3& l : pts) {
      const double v = f(k, l);
      if (v > best.value) {
        best.value = v;
        best.directions = {k, l};
      }
    }
  RefineOptions o = opt;
  o.initial_step = std::min(opt.initial_step, std::numbers::pi / grid.azimuthal);
  auto refined = detail::refine<2>(f, best, o);
  return refined.value >= best.value ? refined : best;
}

}  // namespace geodiscord
