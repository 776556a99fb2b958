// channels.hpp
// Single-qubit Kraus channels, amplitude damping, independent product channels
// on two qubits, and the dilation onto one environment qubit per side.
//
// Four-qubit ordering is A (x) B (x) A' (x) B', index = 8a + 4b + 2a' + b'.

#pragma once

#include "core_state.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace geodiscord {

using Mat16c = Eigen::Matrix<cplx, 16, 16>;

class KrausChannel {
 public:
  /// Throws std::invalid_argument if sum K^dagger K differs from the identity by more than 1e-12.
  explicit KrausChannel(std::vector<Mat2c> operators) : ops_(std::move(operators)) {
    if (ops_.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
    if (trace_preservation_defect() > 1e-12)
      throw std::invalid_argument("Kraus operators are not trace preserving");
  }

  const std::vector<Mat2c>& operators() const { return ops_; }

  /// max |sum K^dagger K - 1|.
  double trace_preservation_defect() const {
    Mat2c s = Mat2c::Zero();
    for (const auto& k : ops_) s += k.adjoint() * k;
    return (s - Mat2c::Identity()).cwiseAbs().maxCoeff();
  }

  /// max |sum K K^dagger - 1|.
  double unitality_defect() const {
    Mat2c s = Mat2c::Zero();
    for (const auto& k : ops_) s += k * k.adjoint();
    return (s - Mat2c::Identity()).cwiseAbs().maxCoeff();
  }

  Mat2c apply(const Mat2c& rho) const {
    Mat2c out = Mat2c::Zero();
    for (const auto& k : ops_) out += k * rho * k.adjoint();
    return out;
  }

 private:
  std::vector<Mat2c> ops_;
};

/// gamma(t) = exp(-kappa t / 2).
inline double gamma_of_t(double kappa, double t) {
  if (!(kappa >= 0.0) || !(t >= 0.0)) throw std::domain_error("gamma_of_t needs kappa >= 0 and t >= 0");
  return std::exp(-0.5 * kappa * t);
}

/// K0 = diag(1, gamma), K1 = [[0, sqrt(1 - gamma^2)], [0, 0]]; ground state |0>.
inline KrausChannel amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("amplitude damping needs gamma in [0, 1]");
  Mat2c k0, k1;
  k0 << 1.0, 0.0, 0.0, gamma;
  k1 << 0.0, std::sqrt(1.0 - gamma * gamma), 0.0, 0.0;
  return KrausChannel({k0, k1});
}

inline bool is_unital(const KrausChannel& ch) { return ch.unitality_defect() <= 1e-12; }

/// sum_ij (K_i (x) K_j) rho (K_i (x) K_j)^dagger.
inline DensityMatrix4 apply_product_channel(const DensityMatrix4& rho, const KrausChannel& ch_a,
                                            const KrausChannel& ch_b) {
  Mat4c out = Mat4c::Zero();
  for (const auto& ka : ch_a.operators())
    for (const auto& kb : ch_b.operators()) {
      const Mat4c k = kron(ka, kb);
      out += k * rho.entries * k.adjoint();
    }
  return DensityMatrix4(out);
}

struct FourQubitState {
  Mat16c entries = Mat16c::Zero();
};

inline ValidationReport validate(const FourQubitState& s) { return validate_matrix<16>(s.entries); }

/// Unitary on (system, environment) extending |0,0> -> |0,0>,
/// |1,0> -> gamma |1,0> + sqrt(1 - gamma^2) |0,1>. Basis index 2s + e.
inline Mat4c damping_unitary(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("amplitude damping needs gamma in [0, 1]");
  const double s = std::sqrt(1.0 - gamma * gamma);
  Mat4c u = Mat4c::Zero();
  u(0, 0) = 1.0;     // |00> -> |00>
  u(2, 2) = gamma;   // |10> -> gamma |10>
  u(1, 2) = s;       //        + s |01>
  u(2, 1) = -s;      // |01> -> -s |10>
  u(1, 1) = gamma;   //        + gamma |01>
  u(3, 3) = 1.0;     // |11> -> |11>
  return u;
}

/// rho (x) |00><00| on A'B', evolved by U_AA' (x) U_BB'.
inline FourQubitState dilate_and_evolve(const DensityMatrix4& rho, double gamma_a, double gamma_b) {
  const Mat4c ua = damping_unitary(gamma_a), ub = damping_unitary(gamma_b);
  Mat16c u = Mat16c::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ea = 0; ea < 2; ++ea)
        for (int eb = 0; eb < 2; ++eb) {
          const int col = 8 * a + 4 * b + 2 * ea + eb;
          for (int a2 = 0; a2 < 2; ++a2)
            for (int b2 = 0; b2 < 2; ++b2)
              for (int ea2 = 0; ea2 < 2; ++ea2)
                for (int eb2 = 0; eb2 < 2; ++eb2) {
                  const int row = 8 * a2 + 4 * b2 + 2 * ea2 + eb2;
                  u(row, col) = ua(2 * a2 + ea2, 2 * a + ea) * ub(2 * b2 + eb2, 2 * b + eb);
                }
        }
  Mat16c initial = Mat16c::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) initial(4 * i, 4 * j) = rho.entries(i, j);  // environments in |00>
  FourQubitState out;
  out.entries = u * initial * u.adjoint();
  return out;
}

inline FourQubitState dilate_and_evolve(const DensityMatrix4& rho, double gamma) {
  return dilate_and_evolve(rho, gamma, gamma);
}

enum class Subsystem { A = 0, B = 1, EnvA = 2, EnvB = 3 };

/// Reduced state of the two kept subsystems, in the order given.
inline DensityMatrix4 partial_trace(const FourQubitState& total, std::array<Subsystem, 2> keep) {
  const int k0 = static_cast<int>(keep[0]), k1 = static_cast<int>(keep[1]);
  if (k0 == k1 || k0 < 0 || k0 > 3 || k1 < 0 || k1 > 3)
    throw std::domain_error("partial_trace must keep two distinct subsystems");
  int traced[2], n = 0;
  for (int s = 0; s < 4; ++s)
    if (s != k0 && s != k1) traced[n++] = s;
  auto bit_index = [](const std::array<int, 4>& bits) { return 8 * bits[0] + 4 * bits[1] + 2 * bits[2] + bits[3]; };
  Mat4c out = Mat4c::Zero();
  for (int i0 = 0; i0 < 2; ++i0)
    for (int i1 = 0; i1 < 2; ++i1)
      for (int j0 = 0; j0 < 2; ++j0)
        for (int j1 = 0; j1 < 2; ++j1) {
          cplx acc = 0.0;
          for (int m0 = 0; m0 < 2; ++m0)
            for (int m1 = 0; m1 < 2; ++m1) {
              std::array<int, 4> row{}, col{};
              row[k0] = i0;
              row[k1] = i1;
              col[k0] = j0;
              col[k1] = j1;
              row[traced[0]] = col[traced[0]] = m0;
              row[traced[1]] = col[traced[1]] = m1;
              acc += total.entries(bit_index(row), bit_index(col));
            }
          out(2 * i0 + i1, 2 * j0 + j1) = acc;
        }
  return DensityMatrix4(out);
}

/// rho^{A'B'} = Tr_AB of the dilated evolution.
inline DensityMatrix4 environment_state(const DensityMatrix4& rho, double gamma) {
  return partial_trace(dilate_and_evolve(rho, gamma), {Subsystem::EnvA, Subsystem::EnvB});
}

}  // namespace geodiscord
