// lambda.hpp
// The reduced two-sided problem: top eigenvalue of |a><a| + |b><b|, the
// l-dependent eigenvalue lambda_M(l) of M = X + T L T^T + <l|Y|l> 1 (and its
// mirror lambda_N), and numeric maximization of lambda_M over the sphere.

#pragma once

#include "core_state.hpp"
#include "sphere_search.hpp"

#include <optional>
#include <string>

namespace geodiscord {

enum class Method { AnalyticSpecial, ReducedNumeric, BruteForce };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::AnalyticSpecial: return "analytic-special";
    case Method::ReducedNumeric: return "reduced-numeric";
    case Method::BruteForce: return "brute-force";
  }
  return "unknown";
}

/// Squared HS distance to the closest measurement-induced classical state
/// together with the optimal directions, when known.
struct MeasureResult {
  double value = 0.0;
  std::optional<Vec3> k_opt;
  std::optional<Vec3> l_opt;
  Method method = Method::AnalyticSpecial;
  std::string branch;  // which closed form or dispatch route produced the value
};

/// Values in [-1e-12, 0) are residue and become exactly 0.
inline double clamp_measure(double v) { return (v < 0.0 && v >= -1e-12) ? 0.0 : v; }

struct TopEigen {
  double value = 0.0;
  std::optional<Vec3> vector;  // absent when a = b = 0
};

namespace detail {

/// Deterministic representative of the top eigenspace of a symmetric 3x3 matrix:
/// the normalized projection of the first standard basis vector with a nonzero
/// projection, sign fixed so the first nonzero component is positive.
inline Vec3 top_eigenvector_lexicographic(const Mat3& m, double degeneracy_tol = 1e-12) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(m);
  const auto& vals = es.eigenvalues();  // ascending
  const double top = vals(2);
  const double scale = std::max(1.0, std::abs(top));
  Eigen::Matrix<double, 3, Eigen::Dynamic> basis(3, 0);
  for (int i = 2; i >= 0; --i) {
    if (top - vals(i) > degeneracy_tol * scale) break;
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = es.eigenvectors().col(i);
  }
  Vec3 v = es.eigenvectors().col(2);
  if (basis.cols() > 1) {
    for (int e = 0; e < 3; ++e) {
      const Vec3 proj = basis * (basis.transpose() * Vec3::Unit(e));
      if (proj.norm() > 1e-8) {
        v = proj.normalized();
        break;
      }
    }
  }
  for (int i = 0; i < 3; ++i)
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  return v;
}

}  // namespace detail

/// Largest eigenvalue of |a><a| + |b><b| in closed form, with the closed-form
/// eigenvector (alpha e_a + beta e_b). Falls back to a direct eigensolver with
/// lexicographic tie-breaking when the closed form degenerates.
inline TopEigen rank_two_top_eigen(const Vec3& a, const Vec3& b) {
  const double a2 = a.squaredNorm(), b2 = b.squaredNorm(), ab = a.dot(b);
  const double root = std::sqrt((a2 - b2) * (a2 - b2) + 4.0 * ab * ab);
  TopEigen out;
  out.value = 0.5 * (a2 + b2 + root);
  if (a2 == 0.0 && b2 == 0.0) return out;

  const double an = std::sqrt(a2), bn = std::sqrt(b2);
  const double scale = std::max(a2, b2);
  const double alpha = a2 - b2 + root;
  const bool degenerate = an <= 1e-12 * std::sqrt(scale) || bn <= 1e-12 * std::sqrt(scale) ||
                          (std::abs(ab) <= 1e-12 * scale && std::abs(a2 - b2) <= 1e-12 * scale);
  if (!degenerate) {
    const Vec3 v = alpha * (a / an) + (2.0 * bn / an) * ab * (b / bn);
    if (v.norm() > 1e-10 * scale) {
      Vec3 u = v.normalized();
      for (int i = 0; i < 3; ++i)
        if (std::abs(u(i)) > 1e-12) {
          if (u(i) < 0.0) u = -u;
          break;
        }
      out.vector = u;
      return out;
    }
  }
  out.vector = detail::top_eigenvector_lexicographic(a * a.transpose() + b * b.transpose());
  return out;
}

/// M(l) = X + T l l^T T^T + <l|Y|l> 1.
inline Mat3 m_matrix(const RMatrix& r, const Vec3& l) {
  const Vec3 lp = r.t * l;
  return r.x_projector() + lp * lp.transpose() + std::pow(r.y.dot(l), 2) * Mat3::Identity();
}

/// N(k) = Y + T^T k k^T T + <k|X|k> 1.
inline Mat3 n_matrix(const RMatrix& r, const Vec3& k) {
  const Vec3 kp = r.t.transpose() * k;
  return r.y_projector() + kp * kp.transpose() + std::pow(r.x.dot(k), 2) * Mat3::Identity();
}

/// Largest eigenvalue of M(l), from the closed form with l' = T l.
inline double lambda_m(const RMatrix& r, const Vec3& l) {
  const Vec3 lp = r.t * l;
  const double x2 = r.x.squaredNorm(), lp2 = lp.squaredNorm(), xl = r.x.dot(lp);
  const double yl = r.y.dot(l);
  return 0.5 * (2.0 * yl * yl + x2 + lp2 + std::sqrt((x2 - lp2) * (x2 - lp2) + 4.0 * xl * xl));
}

/// Largest eigenvalue of N(k), from the closed form with k' = T^T k.
inline double lambda_n(const RMatrix& r, const Vec3& k) {
  const Vec3 kp = r.t.transpose() * k;
  const double y2 = r.y.squaredNorm(), kp2 = kp.squaredNorm(), yk = r.y.dot(kp);
  const double xk = r.x.dot(k);
  return 0.5 * (2.0 * xk * xk + y2 + kp2 + std::sqrt((y2 - kp2) * (y2 - kp2) + 4.0 * yk * yk));
}

struct DirectionalMax {
  double value = 0.0;
  Vec3 direction = Vec3::UnitZ();
};

inline DirectionalMax maximize_lambda_m(const RMatrix& r, const SphereGrid& grid = {}) {
  const auto best = maximize_on_sphere([&](const Vec3& l) { return lambda_m(r, l); }, grid);
  return {best.value, best.directions[0]};
}

inline DirectionalMax maximize_lambda_n(const RMatrix& r, const SphereGrid& grid = {}) {
  const auto best = maximize_on_sphere([&](const Vec3& k) { return lambda_n(r, k); }, grid);
  return {best.value, best.directions[0]};
}

}  // namespace geodiscord
