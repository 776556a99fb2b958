#include "geodiscord/channels.hpp"
#include "geodiscord/core_state.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace geodiscord;

namespace {

double max_abs(const Mat4c& m) { return m.cwiseAbs().maxCoeff(); }

DensityMatrix4 bell_phi_plus() { return DensityMatrix4::pure(Eigen::Vector4cd(1, 0, 0, 1)); }

}  // namespace

TEST(AmplitudeDamping, KrausOperatorsAreTracePreserving) {
  for (double g : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    const auto ch = amplitude_damping(g);
    EXPECT_LE(ch.trace_preservation_defect(), 1e-12);
    // Direct check: sum K^dagger K = I.
    Mat2c sum = Mat2c::Zero();
    for (const auto& k : ch.operators()) sum += k.adjoint() * k;
    EXPECT_LE((sum - Mat2c::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(is_unital(ch), g == 1.0) << "gamma=" << g;
  }
}

TEST(AmplitudeDamping, DomainChecks) {
  EXPECT_THROW(amplitude_damping(-0.1), std::domain_error);
  EXPECT_THROW(amplitude_damping(1.1), std::domain_error);
  EXPECT_THROW(gamma_of_t(0.02, -1.0), std::domain_error);
  EXPECT_DOUBLE_EQ(gamma_of_t(0.02, 0.0), 1.0);
  EXPECT_NEAR(gamma_of_t(0.02, 100.0), std::exp(-1.0), 1e-15);
  EXPECT_THROW(KrausChannel({Mat2c::Identity(), Mat2c::Identity()}), std::invalid_argument);
}

TEST(AmplitudeDamping, BellStateAtHalfAmplitude) {
  const auto ad = amplitude_damping(0.5);
  const auto r = to_r_matrix(apply_product_channel(bell_phi_plus(), ad, ad));
  EXPECT_NEAR(r.x(2), 0.75, 1e-14);
  EXPECT_NEAR(r.y(2), 0.75, 1e-14);
  EXPECT_LE(r.x.head<2>().norm(), 1e-14);
  EXPECT_LE((r.t - Mat3(Vec3(0.25, -0.25, 0.625).asDiagonal())).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(AmplitudeDamping, MatchesBlochTransferMap) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    const auto rho = random_density_matrix(rng);
    const double ga = u(rng), gb = u(rng);
    const auto out = apply_product_channel(rho, amplitude_damping(ga), amplitude_damping(gb));
    const auto want = from_r_matrix(oracle::damp_bloch(bloch_components(rho.entries), ga, gb));
    EXPECT_LE(max_abs(out.entries - want.entries), 1e-12);
    EXPECT_TRUE(validate(out).ok());
  }
}

TEST(AmplitudeDamping, SemigroupProperty) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const auto rho = random_density_matrix(rng);
    const double g1 = u(rng), g2 = u(rng);
    const auto a1 = amplitude_damping(g1), a2 = amplitude_damping(g2), a12 = amplitude_damping(g1 * g2);
    const auto twice = apply_product_channel(apply_product_channel(rho, a1, a1), a2, a2);
    EXPECT_LE(max_abs(twice.entries - apply_product_channel(rho, a12, a12).entries), 1e-12);
  }
  // In time: gamma(t + s) = gamma(t) gamma(s).
  EXPECT_NEAR(gamma_of_t(0.02, 30.0), gamma_of_t(0.02, 10.0) * gamma_of_t(0.02, 20.0), 1e-15);
}

TEST(AmplitudeDamping, PreservesXStructure) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const auto p = random_identical_purity_x_state(rng);
    const auto ad = amplitude_damping(u(rng));
    const auto out = apply_product_channel(to_density(p), ad, ad);
    EXPECT_TRUE(x_pattern_violations(out.entries).empty());
  }
}

TEST(Dilation, UnitaryAndVacuumPreserving) {
  for (double g : {0.0, 0.3, 1.0}) {
    const Mat4c u = damping_unitary(g);
    EXPECT_LE(max_abs(u.adjoint() * u - Mat4c::Identity()), 1e-12);
    EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-15);
  }
}

TEST(Dilation, SystemMarginalMatchesKrausEvolution) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 50; ++n) {
    const auto rho = random_density_matrix(rng);
    const double ga = u(rng), gb = u(rng);
    const auto total = dilate_and_evolve(rho, ga, gb);
    ASSERT_TRUE(validate(total).ok());
    const Mat16c& e = total.entries;
    // The joint evolution is unitary, so the global purity is unchanged.
    EXPECT_NEAR((e * e).trace().real(), rho.purity(), 1e-12);
    const auto sys = partial_trace(total, {Subsystem::A, Subsystem::B});
    const auto kraus = apply_product_channel(rho, amplitude_damping(ga), amplitude_damping(gb));
    EXPECT_LE(max_abs(sys.entries - kraus.entries), 1e-12);
  }
}

TEST(Dilation, EnvironmentSeesComplementaryDamping) {
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 50; ++n) {
    const auto rho = random_density_matrix(rng);
    const double g = u(rng), c = std::sqrt(1.0 - g * g);
    const auto env = environment_state(rho, g);
    const auto want = from_r_matrix(oracle::damp_bloch(bloch_components(rho.entries), c, c));
    EXPECT_LE(max_abs(env.entries - want.entries), 1e-12);
  }
}

TEST(Dilation, BellCorrelationsMoveToEnvironment) {
  const auto start = environment_state(bell_phi_plus(), 1.0);
  Mat4c vacuum = Mat4c::Zero();
  vacuum(0, 0) = 1.0;
  EXPECT_LE(max_abs(start.entries - vacuum), 1e-15);
  const auto end = environment_state(bell_phi_plus(), 0.0);
  EXPECT_LE(max_abs(end.entries - bell_phi_plus().entries), 1e-15);
}

TEST(PartialTrace, OrderingAndErrors) {
  std::mt19937_64 rng(36);
  const auto rho = random_density_matrix(rng);
  const auto total = dilate_and_evolve(rho, 1.0);
  const auto ab = partial_trace(total, {Subsystem::A, Subsystem::B});
  const auto ba = partial_trace(total, {Subsystem::B, Subsystem::A});
  EXPECT_LE(max_abs(ab.entries - rho.entries), 1e-14);
  const auto r = bloch_components(ba.entries);
  const auto s = swap_parties(bloch_components(rho.entries));
  EXPECT_LE((r.t - s.t).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(partial_trace(total, {Subsystem::A, Subsystem::A}), std::domain_error);
}
