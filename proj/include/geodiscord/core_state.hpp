// core_state.hpp
// Two-qubit states: density matrices, the Bloch/correlation (R matrix) form,
// validation and canonical X-state parameters.
//
// Conventions: basis order |00>,|01>,|10>,|11>; sigma_z|0> = +|0>.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace geodiscord {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;

namespace tol {
inline constexpr double hermiticity = 1e-12;
inline constexpr double trace = 1e-12;
inline constexpr double min_eigenvalue = -1e-10;
inline constexpr double unit_vector = 1e-12;
inline constexpr double x_structure = 1e-12;
inline constexpr double identical_purity = 1e-10;
}  // namespace tol

/// Thrown when a density matrix violates one of its invariants.
class InvalidStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an operation restricted to X states receives something else.
class NotXStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 4x4 two-qubit density matrix. Construction does not validate; see validate().
struct DensityMatrix4 {
  Mat4c entries = Mat4c::Zero();

  DensityMatrix4() = default;
  explicit DensityMatrix4(const Mat4c& m) : entries(m) {}

  static DensityMatrix4 maximally_mixed() { return DensityMatrix4(Mat4c::Identity() / 4.0); }

  /// |psi><psi| for an (unnormalized) amplitude vector.
  static DensityMatrix4 pure(const Eigen::Vector4cd& psi) {
    const Eigen::Vector4cd v = psi / psi.norm();
    return DensityMatrix4(v * v.adjoint());
  }

  double purity() const { return (entries * entries).trace().real(); }
};

/// Bloch vectors of both parties and the correlation matrix:
/// x_i = Tr[rho (s_i x 1)], y_j = Tr[rho (1 x s_j)], t_ij = Tr[rho (s_i x s_j)].
struct RMatrix {
  Vec3 x = Vec3::Zero();
  Vec3 y = Vec3::Zero();
  Mat3 t = Mat3::Zero();

  double norm_sq() const { return x.squaredNorm() + y.squaredNorm() + t.squaredNorm(); }
  Mat3 x_projector() const { return x * x.transpose(); }
  Mat3 y_projector() const { return y * y.transpose(); }
};

/// Canonical X-state parameters: x = (0,0,x3), y = (0,0,y3), T = diag(t1,t2,t3).
struct XStateParams {
  double x3 = 0.0;
  double y3 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;

  bool identical_purity() const {
    return std::abs(std::abs(x3) - std::abs(y3)) <= tol::identical_purity;
  }
  /// r^2 for identical-purity states, symmetrized so x3^2 + y3^2 - 2 r^2 == 0 exactly.
  double r_sq() const { return 0.5 * (x3 * x3 + y3 * y3); }

  RMatrix to_r_matrix() const {
    RMatrix r;
    r.x = Vec3(0.0, 0.0, x3);
    r.y = Vec3(0.0, 0.0, y3);
    r.t = Vec3(t1, t2, t3).asDiagonal();
    return r;
  }
};

/// Unit measurement directions for parties A (k) and B (l).
struct MeasurementDirections {
  Vec3 k = Vec3::UnitZ();
  Vec3 l = Vec3::UnitZ();

  MeasurementDirections() = default;
  MeasurementDirections(const Vec3& k_dir, const Vec3& l_dir) : k(k_dir), l(l_dir) {
    if (std::abs(k.norm() - 1.0) > tol::unit_vector || std::abs(l.norm() - 1.0) > tol::unit_vector)
      throw std::invalid_argument("measurement directions must be unit vectors");
  }
  /// Normalizes arbitrary nonzero vectors.
  static MeasurementDirections normalized(const Vec3& k_dir, const Vec3& l_dir) {
    if (k_dir.norm() == 0.0 || l_dir.norm() == 0.0)
      throw std::invalid_argument("measurement direction must be nonzero");
    return {k_dir.normalized(), l_dir.normalized()};
  }

  Mat3 k_projector() const { return k * k.transpose(); }
  Mat3 l_projector() const { return l * l.transpose(); }
};

// ---------------------------------------------------------------------------
// Pauli algebra

inline const std::array<Mat2c, 4>& pauli() {
  static const std::array<Mat2c, 4> s = [] {
    const cplx i{0.0, 1.0};
    std::array<Mat2c, 4> p;
    p[0] << 1, 0, 0, 1;
    p[1] << 0, 1, 1, 0;
    p[2] << 0, -i, i, 0;
    p[3] << 1, 0, 0, -1;
    return p;
  }();
  return s;
}

template <typename A, typename B>
Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic> kron(const A& a, const B& b) {
  Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = cplx(a(i, j)) * b.template cast<cplx>();
  return out;
}

/// sigma_mu (x) sigma_nu, cached.
inline const Mat4c& pauli_product(int mu, int nu) {
  static const std::array<Mat4c, 16> table = [] {
    std::array<Mat4c, 16> t;
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) t[m * 4 + n] = kron(pauli()[m], pauli()[n]);
    return t;
  }();
  return table[mu * 4 + nu];
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
  double hermiticity_defect = 0.0;  // max |rho - rho^dagger|
  double trace_defect = 0.0;        // |Tr rho - 1|
  double min_eigenvalue = 0.0;

  bool hermitian() const { return hermiticity_defect <= tol::hermiticity; }
  bool unit_trace() const { return trace_defect <= tol::trace; }
  bool positive() const { return min_eigenvalue >= tol::min_eigenvalue; }
  bool ok() const { return hermitian() && unit_trace() && positive(); }

  /// Empty when ok(); otherwise names every violated invariant.
  std::string violations() const {
    std::ostringstream os;
    if (!hermitian()) os << "not Hermitian (defect " << hermiticity_defect << "); ";
    if (!unit_trace()) os << "trace differs from 1 by " << trace_defect << "; ";
    if (!positive()) os << "negative eigenvalue " << min_eigenvalue << "; ";
    std::string s = os.str();
    if (!s.empty()) s.resize(s.size() - 2);
    return s;
  }
};

template <int N>
ValidationReport validate_matrix(const Eigen::Matrix<cplx, N, N>& m) {
  ValidationReport rep;
  rep.hermiticity_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  rep.trace_defect = std::abs(m.trace() - cplx(1.0, 0.0));
  const Eigen::Matrix<cplx, N, N> herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<cplx, N, N>> es(herm, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  return rep;
}

inline ValidationReport validate(const DensityMatrix4& rho) { return validate_matrix<4>(rho.entries); }

inline void require_valid(const DensityMatrix4& rho) {
  const auto rep = validate(rho);
  if (!rep.ok()) throw InvalidStateError("invalid density matrix: " + rep.violations());
}

// ---------------------------------------------------------------------------
// Conversions

/// Pauli expectation values without validating the input.
inline RMatrix bloch_components(const Mat4c& rho) {
  RMatrix r;
  for (int i = 1; i < 4; ++i) {
    r.x(i - 1) = (rho * pauli_product(i, 0)).trace().real();
    r.y(i - 1) = (rho * pauli_product(0, i)).trace().real();
    for (int j = 1; j < 4; ++j) r.t(i - 1, j - 1) = (rho * pauli_product(i, j)).trace().real();
  }
  return r;
}

/// Throws InvalidStateError naming the violated invariant.
inline RMatrix to_r_matrix(const DensityMatrix4& rho) {
  require_valid(rho);
  return bloch_components(rho.entries);
}

/// rho = 1/4 sum R_{mu nu} sigma_mu (x) sigma_nu. Positivity is not guaranteed.
inline DensityMatrix4 from_r_matrix(const RMatrix& r) {
  Mat4c rho = pauli_product(0, 0);
  for (int i = 1; i < 4; ++i) {
    rho += r.x(i - 1) * pauli_product(i, 0);
    rho += r.y(i - 1) * pauli_product(0, i);
    for (int j = 1; j < 4; ++j) rho += r.t(i - 1, j - 1) * pauli_product(i, j);
  }
  return DensityMatrix4(rho / 4.0);
}

inline RMatrix swap_parties(const RMatrix& r) {
  RMatrix s;
  s.x = r.y;
  s.y = r.x;
  s.t = r.t.transpose();
  return s;
}

/// Local rotations acting as x -> O_A x, y -> O_B y, T -> O_A T O_B^T.
inline RMatrix rotate_locally(const RMatrix& r, const Mat3& o_a, const Mat3& o_b) {
  RMatrix out;
  out.x = o_a * r.x;
  out.y = o_b * r.y;
  out.t = o_a * r.t * o_b.transpose();
  return out;
}

/// Rotation by angle about the z axis.
inline Mat3 z_rotation(double angle) {
  return Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix();
}

// ---------------------------------------------------------------------------
// X states

/// Result of canonicalization: the parameters plus the z rotations that produce them,
/// i.e. T_canonical = Rz(angle_a)^T T Rz(angle_b).
struct CanonicalXState {
  XStateParams params;
  double angle_a = 0.0;
  double angle_b = 0.0;

  Mat3 rotation_a() const { return z_rotation(-angle_a); }
  Mat3 rotation_b() const { return z_rotation(-angle_b); }
};

/// Entries (row, col) outside the diagonal and skew diagonal with magnitude above tolerance.
inline std::vector<std::pair<int, int>> x_pattern_violations(const Mat4c& rho, double tolerance = tol::x_structure) {
  std::vector<std::pair<int, int>> bad;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && i + j != 3 && std::abs(rho(i, j)) > tolerance) bad.emplace_back(i, j);
  return bad;
}

namespace detail {

inline bool r_has_x_structure(const RMatrix& r, double tolerance) {
  return std::abs(r.x(0)) <= tolerance && std::abs(r.x(1)) <= tolerance && std::abs(r.y(0)) <= tolerance &&
         std::abs(r.y(1)) <= tolerance && std::abs(r.t(0, 2)) <= tolerance && std::abs(r.t(1, 2)) <= tolerance &&
         std::abs(r.t(2, 0)) <= tolerance && std::abs(r.t(2, 1)) <= tolerance;
}

// Write the 2x2 block B as u R(phi1) + v R(phi2) Z with u, v >= 0. Then
// B = R(a) diag(u+v, u-v) R(b)^T with a = (phi1+phi2)/2, b = (phi2-phi1)/2.
inline CanonicalXState canonicalize_block(const RMatrix& r) {
  CanonicalXState c;
  c.params.x3 = r.x(2);
  c.params.y3 = r.y(2);
  c.params.t3 = r.t(2, 2);
  const double a = r.t(0, 0), b = r.t(0, 1), cc = r.t(1, 0), d = r.t(1, 1);
  if (std::abs(b) <= tol::x_structure && std::abs(cc) <= tol::x_structure) {
    c.params.t1 = a;
    c.params.t2 = d;
    return c;
  }
  const double rot_c = 0.5 * (a + d), rot_s = 0.5 * (cc - b);
  const double ref_c = 0.5 * (a - d), ref_s = 0.5 * (b + cc);
  const double u = std::hypot(rot_c, rot_s), v = std::hypot(ref_c, ref_s);
  const double phi1 = (u > 0.0) ? std::atan2(rot_s, rot_c) : 0.0;
  const double phi2 = (v > 0.0) ? std::atan2(ref_s, ref_c) : 0.0;
  c.params.t1 = u + v;
  c.params.t2 = u - v;
  c.angle_a = 0.5 * (phi1 + phi2);
  c.angle_b = 0.5 * (phi2 - phi1);
  return c;
}

}  // namespace detail

/// Canonical form of an X state given in R form. Throws NotXStateError listing
/// the offending components.
inline CanonicalXState canonicalize_x_state(const RMatrix& r) {
  if (!detail::r_has_x_structure(r, 2.0 * tol::x_structure)) {
    std::ostringstream os;
    os << "not an X state: nonzero components";
    const char* names[] = {"x1", "x2", "y1", "y2", "t13", "t23", "t31", "t32"};
    const double vals[] = {r.x(0), r.x(1), r.y(0), r.y(1), r.t(0, 2), r.t(1, 2), r.t(2, 0), r.t(2, 1)};
    for (int i = 0; i < 8; ++i)
      if (std::abs(vals[i]) > 2.0 * tol::x_structure) os << ' ' << names[i] << '=' << vals[i];
    throw NotXStateError(os.str());
  }
  return detail::canonicalize_block(r);
}

/// Canonical form of an X-state density matrix. The local z rotations that
/// diagonalize the transverse block of T are recorded in the result.
inline CanonicalXState canonicalize_x_state(const DensityMatrix4& rho) {
  const auto bad = x_pattern_violations(rho.entries);
  if (!bad.empty()) {
    std::ostringstream os;
    os << "not an X state: entries outside diagonal/skew diagonal:";
    for (auto [i, j] : bad) os << " (" << i << ',' << j << ")=" << std::abs(rho.entries(i, j));
    throw NotXStateError(os.str());
  }
  return detail::canonicalize_block(bloch_components(rho.entries));
}

inline DensityMatrix4 to_density(const XStateParams& p) { return from_r_matrix(p.to_r_matrix()); }

// ---------------------------------------------------------------------------
// Seeded random states

/// Normalized G G^dagger for a complex Ginibre matrix G.
template <typename Rng>
DensityMatrix4 random_density_matrix(Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Mat4c g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = cplx(n01(rng), n01(rng));
  Mat4c rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix4(0.5 * (rho + rho.adjoint()));
}

/// Uniform rotation from a random unit quaternion.
template <typename Rng>
Mat3 random_rotation(Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::Quaterniond q(n01(rng), n01(rng), n01(rng), n01(rng));
  q.normalize();
  return q.toRotationMatrix();
}

template <typename Rng>
Vec3 random_unit_vector(Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Vec3 v(n01(rng), n01(rng), n01(rng));
  while (v.norm() < 1e-12) v = Vec3(n01(rng), n01(rng), n01(rng));
  return v.normalized();
}

/// Random physical X state with |x3| = |y3| and every |t_i| > min_abs_t.
template <typename Rng>
XStateParams random_identical_purity_x_state(Rng& rng, double min_abs_t = 1e-6) {
  std::uniform_real_distribution<double> unit(0.0, 1.0), sym(-1.0, 1.0);
  for (;;) {
    XStateParams p;
    const double r = unit(rng);
    p.x3 = r;
    p.y3 = (unit(rng) < 0.5) ? r : -r;
    if (unit(rng) < 0.5) {
      p.x3 = -p.x3;
      p.y3 = -p.y3;
    }
    p.t1 = sym(rng);
    p.t2 = sym(rng);
    p.t3 = sym(rng);
    if (std::abs(p.t1) <= min_abs_t || std::abs(p.t2) <= min_abs_t || std::abs(p.t3) <= min_abs_t) continue;
    if (validate(to_density(p)).positive()) return p;
  }
}

}  // namespace geodiscord
