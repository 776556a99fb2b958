// cli.hpp
// Command implementations behind the geodiscord executable. Each command takes
// a RunConfig and output streams and returns the process exit status.

#pragma once

#include "core_state.hpp"
#include "dynamics.hpp"
#include "io.hpp"
#include "measures.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace geodiscord::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvalidState = 3;
inline constexpr int kExitVerificationFailed = 4;

inline constexpr double kDefaultVerifyTol = 1e-6;
inline constexpr double kDefaultCorrespondenceTol = 1e-3;
inline constexpr int kDefaultSteps = 2000;
inline constexpr int kDefaultSweepCount = 100;

struct RunConfig {
  std::string command;
  std::optional<std::string> input_path;
  std::optional<std::string> inline_json;
  std::optional<double> kappa;
  std::optional<double> t_max;  // defaults to 10 / kappa
  int n_steps = kDefaultSteps;
  SphereGrid grid{64, 32};
  std::optional<std::uint64_t> seed;
  int count = kDefaultSweepCount;
  std::optional<std::string> output_path;
  std::optional<std::string> sidecar_path;
  std::optional<double> tol;
};

/// "64x32" -> {64, 32}. Throws ParseError.
inline SphereGrid parse_grid(const std::string& text) {
  const auto pos = text.find_first_of("xX");
  if (pos == std::string::npos) throw ParseError("grid must look like AxB, e.g. 64x32");
  try {
    std::size_t used_a = 0, used_b = 0;
    const int a = std::stoi(text.substr(0, pos), &used_a);
    const int b = std::stoi(text.substr(pos + 1), &used_b);
    if (used_a != pos || used_b != text.size() - pos - 1 || a < 1 || b < 2) throw ParseError("bad grid");
    return {a, b};
  } catch (const std::logic_error&) {
    throw ParseError("grid must look like AxB with positive integers, e.g. 64x32");
  }
}

namespace detail {

inline StateInput load_state(const RunConfig& cfg) {
  if (cfg.input_path.has_value() == cfg.inline_json.has_value())
    throw ParseError("give exactly one of --input PATH or --inline JSON");
  if (cfg.inline_json) return parse_state(*cfg.inline_json);
  std::ifstream in(*cfg.input_path);
  if (!in) throw ParseError("cannot read " + *cfg.input_path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_state(buf.str());
}

inline void require_physical(const StateInput& s) {
  const auto rep = validate(s.rho);
  if (!rep.ok()) throw InvalidStateError("invalid state: " + rep.violations());
}

// Writes to --out when given, otherwise to `out`.
template <typename Writer>
void emit(const RunConfig& cfg, std::ostream& out, Writer&& write) {
  if (cfg.output_path) {
    std::ofstream f(*cfg.output_path);
    if (!f) throw ParseError("cannot write " + *cfg.output_path);
    write(f);
  } else {
    write(out);
  }
}

inline nlohmann::json optional_vec(const std::optional<Vec3>& v) {
  return v ? to_json(*v) : nlohmann::json(nullptr);
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidStateError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidState;
  } catch (const NotXStateError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidState;
  } catch (const DispatchError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidState;
  }
}

}  // namespace detail

/// JSON report with one-sided and two-sided measures and optimal directions.
inline int cmd_measure(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto state = detail::load_state(cfg);
    detail::require_physical(state);
    const auto a = one_sided_measure_a(state.r);
    const auto b = one_sided_measure_b(state.r);
    const auto g = two_sided_measure(state.r, cfg.grid);
    nlohmann::json rep = {
        {"g_one_sided_a", a.value},
        {"g_one_sided_b", b.value},
        {"g_two_sided", g.value},
        {"method", to_string(g.method)},
        {"branch", g.branch},
        {"k_opt", detail::optional_vec(g.k_opt)},
        {"l_opt", detail::optional_vec(g.l_opt)},
        {"k_opt_one_sided_a", detail::optional_vec(a.k_opt)},
        {"l_opt_one_sided_b", detail::optional_vec(b.l_opt)},
    };
    detail::emit(cfg, out, [&](std::ostream& os) { os << std::setw(2) << rep << '\n'; });
    return kExitOk;
  });
}

/// Dynamics CSV plus critical-time sidecar; correspondence and decay-rate reports on `err`.
inline int cmd_dynamics(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (!cfg.kappa) throw ParseError("dynamics needs --kappa");
    if (!(*cfg.kappa > 0.0)) throw ParseError("--kappa must be positive");
    const double t_max = cfg.t_max.value_or(10.0 / *cfg.kappa);
    if (!(t_max > 0.0)) throw ParseError("--t-max must be positive");
    if (cfg.n_steps < 2) throw ParseError("--steps must be at least 2");
    const auto state = detail::load_state(cfg);
    detail::require_physical(state);
    const auto canon = canonicalize_x_state(state.rho);
    const auto series = sample_dynamics(canon.params, *cfg.kappa, t_max, cfg.n_steps);

    const auto sidecar = critical_times_json(series);
    detail::emit(cfg, out, [&](std::ostream& os) {
      write_series_csv(os, series);
      if (!cfg.sidecar_path) os << sidecar.dump() << '\n';
    });
    if (cfg.sidecar_path) {
      std::ofstream f(*cfg.sidecar_path);
      if (!f) throw ParseError("cannot write " + *cfg.sidecar_path);
      f << sidecar.dump() << '\n';
    }

    const auto corr = verify_correspondence(series, cfg.tol.value_or(kDefaultCorrespondenceTol));
    err << "correspondence: " << to_string(corr.status) << '\n';
    for (const auto& c : corr.checks)
      err << "  " << c.name << ": " << format_g12(c.lhs) << " vs " << format_g12(c.rhs)
          << " residual " << format_g12(c.residual) << (c.passed ? " ok" : " FAIL") << '\n';
    const auto rate = asymptotic_rate(series, *cfg.kappa);
    err << "asymptotic rate: " << to_string(rate.status) << " slope " << format_g12(rate.slope) << " (kappa "
        << format_g12(*cfg.kappa) << ", " << rate.samples << " samples after t=" << format_g12(rate.window_start)
        << ")";
    if (!rate.note.empty()) err << " " << rate.note;
    err << '\n';
    return kExitOk;
  });
}

/// Analytic/numeric two-sided measure against the brute-force oracle.
inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto state = detail::load_state(cfg);
    detail::require_physical(state);
    const double tol = cfg.tol.value_or(kDefaultVerifyTol);
    const auto g = two_sided_measure(state.r);
    nlohmann::json rep = {{"g_two_sided", g.value}, {"method", to_string(g.method)}, {"branch", g.branch},
                          {"grid", std::to_string(cfg.grid.azimuthal) + "x" + std::to_string(cfg.grid.polar)},
                          {"tolerance", tol}};
    int code = kExitOk;
    if (cfg.grid.azimuthal < kMinOracleResolution || cfg.grid.polar < kMinOracleResolution) {
      rep["status"] = "insufficient-resolution";
      rep["g_brute_force"] = nullptr;
      rep["abs_diff"] = nullptr;
    } else {
      const auto bf = brute_force_g(state.r, cfg.grid);
      const double diff = std::abs(g.value - bf.value);
      rep["g_brute_force"] = bf.value;
      rep["abs_diff"] = diff;
      rep["status"] = diff <= tol ? "pass" : "fail";
      if (diff > tol) code = kExitVerificationFailed;
    }
    detail::emit(cfg, out, [&](std::ostream& os) { os << std::setw(2) << rep << '\n'; });
    return code;
  });
}

/// Seeded random states: per-state measures and oracle differences, then a summary row.
inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (!cfg.seed) throw ParseError("sweep needs --seed");
    if (cfg.count < 0) throw ParseError("--count must be non-negative");
    if (cfg.grid.azimuthal < kMinOracleResolution || cfg.grid.polar < kMinOracleResolution)
      throw ParseError("sweep grid needs at least 16 points per angle");
    std::mt19937_64 rng(*cfg.seed);
    std::ostringstream csv;
    csv << "index,g_one_sided_a,g_one_sided_b,g_two_sided,g_brute_force,abs_diff,method\n";
    double max_diff = 0.0;
    for (int i = 0; i < cfg.count; ++i) {
      const auto r = bloch_components(random_density_matrix(rng).entries);
      const auto a = one_sided_measure_a(r), b = one_sided_measure_b(r);
      const auto g = two_sided_measure(r);
      const auto bf = brute_force_g(r, cfg.grid);
      const double diff = std::abs(g.value - bf.value);
      max_diff = std::max(max_diff, diff);
      csv << i << ',' << format_g12(a.value) << ',' << format_g12(b.value) << ',' << format_g12(g.value) << ','
          << format_g12(bf.value) << ',' << format_g12(diff) << ',' << to_string(g.method) << '\n';
    }
    if (cfg.count > 0) csv << "summary,,,,," << format_g12(max_diff) << ",\n";
    detail::emit(cfg, out, [&](std::ostream& os) { os << csv.str(); });
    return kExitOk;
  });
}

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == "measure") return cmd_measure(cfg, out, err);
  if (cfg.command == "dynamics") return cmd_dynamics(cfg, out, err);
  if (cfg.command == "verify") return cmd_verify(cfg, out, err);
  if (cfg.command == "sweep") return cmd_sweep(cfg, out, err);
  err << "error: unknown command '" << cfg.command << "'\n";
  return kExitUsage;
}

}  // namespace geodiscord::cli
