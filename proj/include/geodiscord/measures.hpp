// measures.hpp
// Hilbert-Schmidt distances, measurement-induced projections and the one- and
// two-sided geometric correlation measures, plus the brute-force oracle that
// minimizes over both measurement directions directly.

#pragma once

#include "core_state.hpp"
#include "lambda.hpp"
#include "sphere_search.hpp"
#include "xstate_analytic.hpp"

#include <algorithm>
#include <limits>

namespace geodiscord {

/// D^2(a, b) = 1/4 [|x_a - x_b|^2 + |y_a - y_b|^2 + ||T_a - T_b||^2].
inline double hs_distance_sq(const RMatrix& a, const RMatrix& b) {
  return 0.25 * ((a.x - b.x).squaredNorm() + (a.y - b.y).squaredNorm() + (a.t - b.t).squaredNorm());
}

/// R matrix of the classical-classical state left by projective measurements along k and l.
inline RMatrix micc_project(const RMatrix& r, const MeasurementDirections& m) {
  const Mat3 kk = m.k_projector(), ll = m.l_projector();
  RMatrix out;
  out.x = kk * r.x;
  out.y = ll * r.y;
  out.t = kk * r.t * ll;
  return out;
}

/// D^2(rho, chi) = 1/4 [Tr(X + Y + T T^T) - Tr(X K + Y L + T L T^T K)].
inline double d2_to_micc(const RMatrix& r, const MeasurementDirections& m) {
  const double xk = r.x.dot(m.k), yl = r.y.dot(m.l), ktl = m.k.dot(r.t * m.l);
  return 0.25 * (r.norm_sq() - (xk * xk + yl * yl + ktl * ktl));
}

/// R matrix of the classical-quantum state after measuring A along k.
inline RMatrix cq_project(const RMatrix& r, const Vec3& k) {
  const Mat3 kk = k * k.transpose();
  RMatrix out;
  out.x = kk * r.x;
  out.y = r.y;
  out.t = kk * r.t;
  return out;
}

/// D^2(rho, rho->) = 1/4 [Tr(X + T T^T) - Tr(X K + T T^T K)].
inline double d2_to_cq(const RMatrix& r, const Vec3& k) {
  const Mat3 kk = k * k.transpose();
  const Mat3 a = r.x_projector() + r.t * r.t.transpose();
  return 0.25 * (a.trace() - (a * kk).trace());
}

namespace detail {

inline MeasureResult one_sided(const Mat3& a) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(a);
  MeasureResult res;
  res.value = clamp_measure(0.25 * (a.trace() - es.eigenvalues()(2)));
  res.method = Method::AnalyticSpecial;
  res.branch = "one-sided";
  return res;
}

}  // namespace detail

/// G-> : measurement on A. value = 1/4 [Tr(X + T T^T) - lambda_max(X + T T^T)].
inline MeasureResult one_sided_measure_a(const RMatrix& r) {
  const Mat3 a = r.x_projector() + r.t * r.t.transpose();
  auto res = detail::one_sided(a);
  res.k_opt = detail::top_eigenvector_lexicographic(a);
  return res;
}

/// G<- : measurement on B. value = 1/4 [Tr(Y + T^T T) - kappa_max(Y + T^T T)].
inline MeasureResult one_sided_measure_b(const RMatrix& r) {
  const Mat3 b = r.y_projector() + r.t.transpose() * r.t;
  auto res = detail::one_sided(b);
  res.l_opt = detail::top_eigenvector_lexicographic(b);
  return res;
}

inline constexpr double kZeroMarginal = 1e-12;

/// Symmetric geometric measure G = min over (k, l) of D^2(rho, chi).
///
/// Dispatch: both marginals maximally mixed (top singular value of T);
/// exactly one maximally mixed (top eigenvalue of Y + T^T T or X + T T^T);
/// X state with |x3| = |y3| (closed-form candidates); otherwise numeric
/// maximization of lambda_M over l.
inline MeasureResult two_sided_measure(const RMatrix& r, const SphereGrid& grid = {}) {
  const double total = r.norm_sq();
  const bool x_zero = r.x.norm() <= kZeroMarginal, y_zero = r.y.norm() <= kZeroMarginal;
  MeasureResult res;
  res.method = Method::AnalyticSpecial;

  if (x_zero && y_zero) {
    Eigen::JacobiSVD<Mat3> svd(r.t, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double s = svd.singularValues()(0);
    res.value = clamp_measure(0.25 * (total - s * s));
    res.k_opt = svd.matrixU().col(0);
    res.l_opt = svd.matrixV().col(0);
    res.branch = "both-marginals-mixed";
    return res;
  }
  if (x_zero) {
    const Mat3 n = r.y_projector() + r.t.transpose() * r.t;
    const Vec3 l = detail::top_eigenvector_lexicographic(n);
    res.value = clamp_measure(0.25 * (total - lambda_m(r, l)));
    res.l_opt = l;
    res.k_opt = detail::top_eigenvector_lexicographic(m_matrix(r, l));
    res.branch = "a-marginal-mixed";
    return res;
  }
  if (y_zero) {
    const Mat3 m = r.x_projector() + r.t * r.t.transpose();
    const Vec3 k = detail::top_eigenvector_lexicographic(m);
    res.value = clamp_measure(0.25 * (total - lambda_n(r, k)));
    res.k_opt = k;
    res.l_opt = detail::top_eigenvector_lexicographic(n_matrix(r, k));
    res.branch = "b-marginal-mixed";
    return res;
  }
  if (detail::r_has_x_structure(r, tol::x_structure) &&
      std::abs(std::abs(r.x(2)) - std::abs(r.y(2))) <= tol::identical_purity) {
    const auto canon = detail::canonicalize_block(r);
    const auto lm = lambda_max_x_state(canon.params, grid);
    // Back to the input frame: l = O_B^T l_canonical.
    const Vec3 l = canon.rotation_b().transpose() * lm.l_opt;
    res.value = clamp_measure(g_x_state(canon.params, grid).value);
    res.l_opt = l;
    res.k_opt = detail::top_eigenvector_lexicographic(m_matrix(r, l));
    res.method = is_analytic(lm.branch) ? Method::AnalyticSpecial : Method::ReducedNumeric;
    res.branch = to_string(lm.branch);
    return res;
  }
  const auto num = maximize_lambda_m(r, grid);
  res.value = clamp_measure(0.25 * (total - num.value));
  res.l_opt = num.direction;
  res.k_opt = detail::top_eigenvector_lexicographic(m_matrix(r, num.direction));
  res.method = Method::ReducedNumeric;
  res.branch = "numeric";
  return res;
}

inline constexpr int kMinOracleResolution = 16;

/// Independent oracle: exhaustive scan of D^2(rho, chi) over a product of
/// hemisphere grids for k and l, then joint local refinement of both directions.
inline MeasureResult brute_force_g(const RMatrix& r, const SphereGrid& grid = {}) {
  if (grid.azimuthal < kMinOracleResolution || grid.polar < kMinOracleResolution)
    throw std::invalid_argument("brute-force grid needs at least 16 points per angle");
  const auto pts = hemisphere_points(grid);
  // Scan with precomputed per-direction pieces: (x.k)^2, (y.l)^2, k^T T.
  std::vector<double> yl2(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) yl2[j] = std::pow(r.y.dot(pts[j]), 2);
  double best = -1.0;
  std::size_t best_i = 0, best_j = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double xk2 = std::pow(r.x.dot(pts[i]), 2);
    const Vec3 kt = r.t.transpose() * pts[i];
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double c = kt.dot(pts[j]);
      const double v = xk2 + yl2[j] + c * c;
      if (v > best) {
        best = v;
        best_i = i;
        best_j = j;
      }
    }
  }
  auto objective = [&](const Vec3& k, const Vec3& l) {
    const double xk = r.x.dot(k), yl = r.y.dot(l), ktl = k.dot(r.t * l);
    return xk * xk + yl * yl + ktl * ktl;
  };
  SphereOptimum<2> start;
  start.value = best;
  start.directions = {pts[best_i], pts[best_j]};
  RefineOptions opt;
  opt.initial_step = std::numbers::pi / grid.azimuthal;
  const auto refined = detail::refine<2>(objective, start, opt);
  const auto& top = refined.value >= start.value ? refined : start;

  MeasureResult res;
  res.value = clamp_measure(0.25 * (r.norm_sq() - top.value));
  res.k_opt = top.directions[0];
  res.l_opt = top.directions[1];
  res.method = Method::BruteForce;
  res.branch = "brute-force";
  return res;
}

/// Oracle for lambda_M^max alone: grid scan plus refinement of lambda_M(l).
inline double brute_force_lambda_max(const RMatrix& r, const SphereGrid& grid = {}) {
  if (grid.azimuthal < kMinOracleResolution || grid.polar < kMinOracleResolution)
    throw std::invalid_argument("brute-force grid needs at least 16 points per angle");
  return maximize_lambda_m(r, grid).value;
}

}  // namespace geodiscord
