// xstate_analytic.hpp
// Closed-form maximum of lambda_M for X states with identical local purity
// (|x3| = |y3| = r), via the finite candidate list lambda^(1) .. lambda^(10).
//
// With T = diag(t1, t2, t3) the objective reads
//   lambda_M(l) = 1/2 [r^2 + l'^2 + sqrt(F)] + r^2 l3^2,
//   F = (r^2 - l'^2)^2 + 4 r^2 t3^2 l3^2,   l'^2 = sum t_i^2 l_i^2.
// When t1 = t2 it depends on l3^2 only; otherwise at least one l_i vanishes at
// a stationary point, which leaves one-parameter families in l3^2 plus the
// endpoint families l3 = 0 and l3 = 1.

#pragma once

#include "core_state.hpp"
#include "lambda.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace geodiscord {

enum class Branch { L1 = 1, L2, L3, L4, L5, L6, L7, L8, L9, L10, Numeric };

inline std::string to_string(Branch b) {
  if (b == Branch::Numeric) return "numeric";
  return "λ" + std::to_string(static_cast<int>(b));
}

inline bool is_analytic(Branch b) { return b != Branch::Numeric; }

/// Raised when an analytic routine is called outside its domain.
class DispatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Candidate {
  Branch label = Branch::L10;
  double value = -std::numeric_limits<double>::infinity();
  Vec3 l_direction = Vec3::UnitZ();
  bool admissible = false;
  std::string condition_note;
};

struct CandidateSet {
  std::vector<Candidate> candidates;

  /// Largest admissible candidate; ties go to the earlier label.
  const Candidate& best() const {
    const Candidate* top = nullptr;
    for (const auto& c : candidates)
      if (c.admissible && (top == nullptr || c.value > top->value)) top = &c;
    if (top == nullptr) throw std::logic_error("candidate set has no admissible entry");
    return *top;
  }

  const Candidate* find(Branch b) const {
    for (const auto& c : candidates)
      if (c.label == b) return &c;
    return nullptr;
  }
};

inline constexpr double kNonzeroT = 1e-12;
inline constexpr double kEqualT = 1e-10;

/// F as a function of l3^2 along the family l'^2 = t1^2 - (t1^2 - t3^2) l3^2.
inline double f_function(const XStateParams& p, double l3sq) {
  if (!p.identical_purity()) throw DispatchError("f_function requires identical local purity");
  if (l3sq < 0.0 || l3sq > 1.0) throw DispatchError("l3^2 must lie in [0, 1]");
  const double r2 = p.r_sq();
  const double lp2 = p.t1 * p.t1 - (p.t1 * p.t1 - p.t3 * p.t3) * l3sq;
  return (r2 - lp2) * (r2 - lp2) + 4.0 * r2 * p.t3 * p.t3 * l3sq;
}

namespace detail {

inline bool in_interval(double v, double a, double b) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  return v >= lo && v <= hi;
}

inline std::string interval_note(const char* what, double a, double b) {
  return std::string(what) + " r^2 in [" + std::to_string(std::min(a, b)) + ", " + std::to_string(std::max(a, b)) +
         "]";
}

// Interior stationary point of the one-parameter family with transverse
// coefficient t (t1 or t2, the other transverse component set to zero).
// `plus` selects the (t + t3) solution used when t t3 < 0.
inline Candidate interior_candidate(Branch label, double r2, double t, double t3, bool plus, int transverse_axis) {
  Candidate c;
  c.label = label;
  const double s = plus ? t + t3 : t - t3;
  const double lo = plus ? -t3 * s : t3 * s;
  const double hi = t * s;
  const bool sign_ok = plus ? (t * t3 < 0.0) : (t * t3 > 0.0);
  c.condition_note = std::string(plus ? "t*t3<0" : "t*t3>0") + ", " + interval_note("", lo, hi);
  if (!sign_ok || std::abs(s) <= kNonzeroT || !in_interval(r2, lo, hi)) return c;
  double l3sq = (t * s - r2) / (s * s);
  if (l3sq < -1e-12 || l3sq > 1.0 + 1e-12) {
    c.condition_note += "; l3^2 outside [0,1]";
    return c;
  }
  l3sq = std::clamp(l3sq, 0.0, 1.0);
  c.value = r2 * (2.0 * t * s - r2) / (s * s);
  c.l_direction = Vec3::Zero();
  c.l_direction(transverse_axis) = std::sqrt(1.0 - l3sq);
  c.l_direction(2) = std::sqrt(l3sq);
  c.admissible = true;
  return c;
}

inline void require_nonzero_t(const XStateParams& p) {
  if (std::abs(p.t1) <= kNonzeroT || std::abs(p.t2) <= kNonzeroT || std::abs(p.t3) <= kNonzeroT)
    throw DispatchError("closed form requires every |t_i| > 1e-12");
}

}  // namespace detail

/// Candidates for t1 == t2: two interior stationary points plus the endpoints
/// l3^2 = 0 (lambda^(3) = max{r^2, t1^2}) and l3^2 = 1 (lambda^(4) = 2 r^2 + t3^2).
inline CandidateSet candidates_equal_t(const XStateParams& p) {
  if (!p.identical_purity()) throw DispatchError("candidates_equal_t requires identical local purity");
  if (std::abs(p.t1 - p.t2) > kEqualT) throw DispatchError("candidates_equal_t requires t1 == t2");
  detail::require_nonzero_t(p);
  const double r2 = p.r_sq(), t1 = p.t1, t3 = p.t3;
  CandidateSet set;
  set.candidates.push_back(detail::interior_candidate(Branch::L1, r2, t1, t3, false, 0));
  set.candidates.push_back(detail::interior_candidate(Branch::L2, r2, t1, t3, true, 0));
  set.candidates.push_back({Branch::L3, std::max(r2, t1 * t1), Vec3::UnitX(), true, "l3^2 = 0"});
  set.candidates.push_back({Branch::L4, 2.0 * r2 + t3 * t3, Vec3::UnitZ(), true, "l3^2 = 1"});
  return set;
}

/// Candidates for t1 != t2: families l1 = 0 (lambda^(5), lambda^(6)), l2 = 0
/// (lambda^(7), lambda^(8)), l3 = 0 (lambda^(9)) and l3 = 1 (lambda^(10)).
/// Admissibility intervals for lambda^(5)/(6) carry t2 in both endpoints' factor.
inline CandidateSet candidates_unequal_t(const XStateParams& p) {
  if (!p.identical_purity()) throw DispatchError("candidates_unequal_t requires identical local purity");
  if (std::abs(p.t1 - p.t2) <= kEqualT) throw DispatchError("candidates_unequal_t requires t1 != t2");
  detail::require_nonzero_t(p);
  const double r2 = p.r_sq(), t1 = p.t1, t2 = p.t2, t3 = p.t3;
  CandidateSet set;
  set.candidates.push_back(detail::interior_candidate(Branch::L5, r2, t2, t3, false, 1));
  set.candidates.push_back(detail::interior_candidate(Branch::L6, r2, t2, t3, true, 1));
  set.candidates.push_back(detail::interior_candidate(Branch::L7, r2, t1, t3, false, 0));
  set.candidates.push_back(detail::interior_candidate(Branch::L8, r2, t1, t3, true, 0));

  // l3 = 0: lambda = max{r^2, l'^2}; l'^2 ranges over [min, max] of t1^2, t2^2.
  Candidate c9{Branch::L9, std::max({r2, t1 * t1, t2 * t2}), Vec3::UnitX(), true, "l3 = 0"};
  if (t2 * t2 > t1 * t1 && t2 * t2 >= r2) c9.l_direction = Vec3::UnitY();
  set.candidates.push_back(c9);
  set.candidates.push_back({Branch::L10, 2.0 * r2 + t3 * t3, Vec3::UnitZ(), true, "l3 = 1"});
  return set;
}

/// Candidate set appropriate to the parameters.
inline CandidateSet candidates(const XStateParams& p) {
  return std::abs(p.t1 - p.t2) <= kEqualT ? candidates_equal_t(p) : candidates_unequal_t(p);
}

struct XLambdaMax {
  double lambda = 0.0;
  Vec3 l_opt = Vec3::UnitZ();
  Branch branch = Branch::L10;
};

/// lambda_M^max for an identical-purity X state. Parameters with a vanishing
/// t_i fall outside the closed form and are maximized numerically.
inline XLambdaMax lambda_max_x_state(const XStateParams& p, const SphereGrid& grid = {}) {
  if (!p.identical_purity()) throw DispatchError("lambda_max_x_state requires identical local purity");
  if (std::abs(p.t1) <= kNonzeroT || std::abs(p.t2) <= kNonzeroT || std::abs(p.t3) <= kNonzeroT) {
    const auto num = maximize_lambda_m(p.to_r_matrix(), grid);
    return {num.value, num.direction, Branch::Numeric};
  }
  const auto set = candidates(p);
  const auto& top = set.best();
  return {top.value, top.l_direction, top.label};
}

/// Two-sided measure of an identical-purity X state from the closed form.
inline MeasureResult g_x_state(const XStateParams& p, const SphereGrid& grid = {}) {
  const auto lm = lambda_max_x_state(p, grid);
  const double r2 = p.r_sq();
  // 1/4 [x3^2 + y3^2 + |T|^2 - lambda]; endpoint branches are expanded so the
  // leading terms cancel exactly instead of in floating point.
  double g = 0.0;
  const double t1s = p.t1 * p.t1, t2s = p.t2 * p.t2, t3s = p.t3 * p.t3;
  if (lm.branch == Branch::L10 || lm.branch == Branch::L4)
    g = 0.25 * (t1s + t2s);
  else
    g = 0.25 * (2.0 * r2 + t1s + t2s + t3s - lm.lambda);
  MeasureResult res;
  res.value = clamp_measure(g);
  res.l_opt = lm.l_opt;
  res.k_opt = detail::top_eigenvector_lexicographic(m_matrix(p.to_r_matrix(), lm.l_opt));
  res.method = is_analytic(lm.branch) ? Method::AnalyticSpecial : Method::ReducedNumeric;
  res.branch = to_string(lm.branch);
  return res;
}

}  // namespace geodiscord
