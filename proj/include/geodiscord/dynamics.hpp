// dynamics.hpp
// Time series of the two-sided measure for the system pair and for the
// environment pair under identical independent amplitude damping, detection of
// sudden changes (switches of the maximizing closed-form branch), and the
// system/environment correspondence and asymptotic-decay checks.

#pragma once

#include "channels.hpp"
#include "core_state.hpp"
#include "xstate_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace geodiscord {

enum class Curve { System, Environment };

/// Initial state and damping rate; enough to re-evaluate either curve at any time.
struct DynamicsModel {
  XStateParams initial;
  double kappa = 0.02;
};

struct CurvePoint {
  double g = 0.0;
  Branch branch = Branch::L10;
};

struct CorrelationSeries {
  std::vector<double> times;
  std::vector<double> g_sys;
  std::vector<double> g_env;
  std::vector<Branch> branch_sys;  // empty when the series carries no branch information
  std::vector<Branch> branch_env;
  std::vector<double> critical_sys;
  std::vector<double> critical_env;
  std::optional<DynamicsModel> model;

  std::size_t size() const { return times.size(); }
  double t_max() const { return times.empty() ? 0.0 : times.back(); }

  /// Throws std::logic_error on inconsistent lengths or non-increasing times.
  void check_invariants() const {
    const auto n = times.size();
    if (g_sys.size() != n || g_env.size() != n) throw std::logic_error("series lists differ in length");
    if (!branch_sys.empty() && branch_sys.size() != n) throw std::logic_error("branch_sys length mismatch");
    if (!branch_env.empty() && branch_env.size() != n) throw std::logic_error("branch_env length mismatch");
    for (std::size_t i = 1; i < n; ++i)
      if (!(times[i] > times[i - 1])) throw std::logic_error("times must be strictly increasing");
    for (const auto* crit : {&critical_sys, &critical_env})
      for (double t : *crit)
        if (!(t > times.front() && t < times.back())) throw std::logic_error("critical time outside range");
  }
};

/// Two-qubit state of the chosen pair at time t.
inline DensityMatrix4 evolved_state(const DynamicsModel& model, Curve curve, double t) {
  const double gamma = gamma_of_t(model.kappa, t);
  const DensityMatrix4 rho0 = to_density(model.initial);
  if (curve == Curve::System) {
    const auto ad = amplitude_damping(gamma);
    return apply_product_channel(rho0, ad, ad);
  }
  return environment_state(rho0, gamma);
}

namespace detail {

inline constexpr double kBranchTie = 1e-12;

inline XStateParams canonical_params(const DensityMatrix4& rho) {
  auto p = canonicalize_x_state(bloch_components(rho.entries)).params;
  if (!p.identical_purity()) throw DispatchError("evolved state lost identical local purity");
  return p;
}

// Winning branch, keeping `previous` when it is still within the tie tolerance.
inline CurvePoint evaluate_params(const XStateParams& p, std::optional<Branch> previous) {
  const bool closed_form = std::abs(p.t1) > kNonzeroT && std::abs(p.t2) > kNonzeroT && std::abs(p.t3) > kNonzeroT;
  if (!closed_form) {
    const auto res = g_x_state(p);
    return {res.value, Branch::Numeric};
  }
  const auto set = candidates(p);
  const Candidate* chosen = &set.best();
  if (previous && *previous != chosen->label) {
    const Candidate* prev = set.find(*previous);
    if (prev != nullptr && prev->admissible && prev->value >= chosen->value - kBranchTie) chosen = prev;
  }
  const double t1s = p.t1 * p.t1, t2s = p.t2 * p.t2, t3s = p.t3 * p.t3;
  double g = (chosen->label == Branch::L10 || chosen->label == Branch::L4)
                 ? 0.25 * (t1s + t2s)
                 : 0.25 * (2.0 * p.r_sq() + t1s + t2s + t3s - chosen->value);
  return {clamp_measure(g), chosen->label};
}

}  // namespace detail

inline CurvePoint evaluate_curve(const DynamicsModel& model, Curve curve, double t,
                                 std::optional<Branch> previous = std::nullopt) {
  return detail::evaluate_params(detail::canonical_params(evolved_state(model, curve, t)), previous);
}

struct SuddenChanges {
  std::vector<double> system;
  std::vector<double> environment;
};

namespace detail {

// Kinks from the three-point second difference when no branch labels exist:
// |d2_i| above 10x the median |d2| and a local maximum of |d2|.
inline std::vector<double> kink_times(const std::vector<double>& times, const std::vector<double>& g) {
  std::vector<double> out;
  const std::size_t n = g.size();
  if (n < 5) return out;
  std::vector<double> d2(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) d2[i] = std::abs(g[i + 1] - 2.0 * g[i] + g[i - 1]);
  std::vector<double> inner(d2.begin() + 1, d2.end() - 1);
  std::nth_element(inner.begin(), inner.begin() + inner.size() / 2, inner.end());
  const double median = inner[inner.size() / 2];
  const double scale = *std::max_element(g.begin(), g.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  const double floor = 1e-12 * std::max(1.0, std::abs(scale));
  const double threshold = std::max(10.0 * median, floor);
  // Interior local maxima only; the end points have one-sided neighbourhoods.
  for (std::size_t i = 2; i + 2 < n; ++i)
    if (d2[i] > threshold && d2[i] >= d2[i - 1] && d2[i] > d2[i + 1]) out.push_back(times[i]);
  return out;
}

inline std::vector<double> branch_switch_times(const CorrelationSeries& s, Curve curve) {
  const auto& labels = curve == Curve::System ? s.branch_sys : s.branch_env;
  std::vector<double> out;
  std::optional<std::size_t> last;
  const double resolution = 1e-6 * s.t_max();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!is_analytic(labels[i])) continue;
    if (last && labels[i] != labels[*last]) {
      double lo = s.times[*last], hi = s.times[i];
      if (s.model) {
        const Branch old_label = labels[*last];
        while (hi - lo > resolution) {
          const double mid = 0.5 * (lo + hi);
          const auto p = evaluate_curve(*s.model, curve, mid, old_label);
          if (p.branch == old_label)
            lo = mid;
          else
            hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    last = i;
  }
  return out;
}

}  // namespace detail

/// Critical times per curve. With branch labels: every switch of the analytic
/// branch, refined by bisection to 1e-6 t_max when the model is attached.
/// Without labels: second-difference kink detection.
inline SuddenChanges detect_sudden_changes(const CorrelationSeries& series) {
  SuddenChanges out;
  out.system = series.branch_sys.empty() ? detail::kink_times(series.times, series.g_sys)
                                         : detail::branch_switch_times(series, Curve::System);
  out.environment = series.branch_env.empty() ? detail::kink_times(series.times, series.g_env)
                                              : detail::branch_switch_times(series, Curve::Environment);
  return out;
}

/// Uniform grid of n_points times over [0, t_max]; both curves evaluated in
/// closed form with the active branch recorded, then sudden changes detected.
inline CorrelationSeries sample_dynamics(const XStateParams& initial, double kappa, double t_max, int n_points) {
  if (!(kappa > 0.0) || !(t_max > 0.0)) throw std::invalid_argument("kappa and t_max must be positive");
  if (n_points < 2) throw std::invalid_argument("need at least two time points");
  if (!detail::canonicalize_block(initial.to_r_matrix()).params.identical_purity())
    throw DispatchError("initial state must have identical local purity");
  if (std::abs(initial.x3 - initial.y3) > tol::identical_purity)
    throw DispatchError("amplitude damping keeps |x3| = |y3| only when x3 == y3");

  CorrelationSeries s;
  s.model = DynamicsModel{initial, kappa};
  s.times.resize(n_points);
  s.g_sys.resize(n_points);
  s.g_env.resize(n_points);
  s.branch_sys.resize(n_points);
  s.branch_env.resize(n_points);
  std::optional<Branch> prev_sys, prev_env;
  for (int i = 0; i < n_points; ++i) {
    const double t = t_max * i / (n_points - 1);
    s.times[i] = t;
    const auto ps = evaluate_curve(*s.model, Curve::System, t, prev_sys);
    const auto pe = evaluate_curve(*s.model, Curve::Environment, t, prev_env);
    s.g_sys[i] = ps.g;
    s.g_env[i] = pe.g;
    s.branch_sys[i] = ps.branch;
    s.branch_env[i] = pe.branch;
    if (is_analytic(ps.branch)) prev_sys = ps.branch;
    if (is_analytic(pe.branch)) prev_env = pe.branch;
  }
  const auto crit = detect_sudden_changes(s);
  s.critical_sys = crit.system;
  s.critical_env = crit.environment;
  return s;
}

enum class CheckStatus { Pass, Fail, Inconclusive };

inline std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct CorrespondenceCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  bool passed = false;
};

struct CorrespondenceReport {
  CheckStatus status = CheckStatus::Inconclusive;
  std::vector<CorrespondenceCheck> checks;
};

namespace detail {

inline double value_at(const CorrelationSeries& s, Curve curve, double t) {
  if (s.model) return evaluate_curve(*s.model, curve, t).g;
  const auto& g = curve == Curve::System ? s.g_sys : s.g_env;
  const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
  if (it == s.times.begin()) return g.front();
  if (it == s.times.end()) return g.back();
  const std::size_t i = static_cast<std::size_t>(it - s.times.begin());
  const double w = (t - s.times[i - 1]) / (s.times[i] - s.times[i - 1]);
  return (1.0 - w) * g[i - 1] + w * g[i];
}

}  // namespace detail

/// System/environment correspondence: G(0) = G'(t_max), G(t_max) = G'(0) and,
/// when both curves carry two critical times, G(t1) = G'(t2'), G(t2) = G'(t1').
/// Inconclusive when G has not decayed below tol by t_max.
inline CorrespondenceReport verify_correspondence(const CorrelationSeries& s, double tol) {
  CorrespondenceReport rep;
  if (s.size() < 2) return rep;
  auto add = [&](std::string name, double lhs, double rhs) {
    CorrespondenceCheck c{std::move(name), lhs, rhs, std::abs(lhs - rhs), false};
    c.passed = c.residual <= tol;
    rep.checks.push_back(c);
  };
  add("G(0) = G'(t_max)", s.g_sys.front(), s.g_env.back());
  add("G(t_max) = G'(0)", s.g_sys.back(), s.g_env.front());
  if (s.critical_sys.size() == 2 && s.critical_env.size() == 2) {
    add("G(t1) = G'(t2')", detail::value_at(s, Curve::System, s.critical_sys[0]),
        detail::value_at(s, Curve::Environment, s.critical_env[1]));
    add("G(t2) = G'(t1')", detail::value_at(s, Curve::System, s.critical_sys[1]),
        detail::value_at(s, Curve::Environment, s.critical_env[0]));
  }
  if (s.g_sys.back() > tol) {
    rep.status = CheckStatus::Inconclusive;
    return rep;
  }
  const bool all = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.passed; });
  rep.status = all ? CheckStatus::Pass : CheckStatus::Fail;
  return rep;
}

struct RateReport {
  CheckStatus status = CheckStatus::Inconclusive;
  double slope = 0.0;
  double intercept = 0.0;
  double window_start = 0.0;
  std::size_t samples = 0;
  double max_relative_deviation = 0.0;  // of g(t) e^{kappa t} from its window mean
  std::string note;
};

/// Least-squares slope of log G(t) after the final critical time on the system
/// curve; passes when |slope + kappa| <= 0.02 kappa.
inline RateReport asymptotic_rate(const CorrelationSeries& s, double kappa) {
  RateReport rep;
  if (s.critical_sys.empty()) {
    rep.note = "no critical time on the system curve";
    return rep;
  }
  rep.window_start = s.critical_sys.back();
  std::vector<double> ts, logs, scaled;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.times[i] > rep.window_start && s.g_sys[i] > 0.0) {
      ts.push_back(s.times[i]);
      logs.push_back(std::log(s.g_sys[i]));
      scaled.push_back(s.g_sys[i] * std::exp(kappa * s.times[i]));
    }
  rep.samples = ts.size();
  if (rep.samples < 10) {
    rep.note = "fewer than 10 samples after the final critical time";
    return rep;
  }
  const double n = static_cast<double>(ts.size());
  const double mt = std::accumulate(ts.begin(), ts.end(), 0.0) / n;
  const double ml = std::accumulate(logs.begin(), logs.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sxy += (ts[i] - mt) * (logs[i] - ml);
    sxx += (ts[i] - mt) * (ts[i] - mt);
  }
  rep.slope = sxy / sxx;
  rep.intercept = ml - rep.slope * mt;
  const double mean_scaled = std::accumulate(scaled.begin(), scaled.end(), 0.0) / n;
  for (double v : scaled) rep.max_relative_deviation = std::max(rep.max_relative_deviation, std::abs(v / mean_scaled - 1.0));
  rep.status = std::abs(rep.slope + kappa) <= 0.02 * kappa ? CheckStatus::Pass : CheckStatus::Fail;
  return rep;
}

}  // namespace geodiscord
