// io.hpp
// JSON state input and CSV/JSON output for correlation series.

#pragma once

#include "core_state.hpp"
#include "dynamics.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace geodiscord {

/// Malformed or ambiguous input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parsed state file. Exactly one of the three accepted forms was present.
struct StateInput {
  enum class Kind { DensityMatrix, RMatrix, XState } kind = Kind::RMatrix;
  DensityMatrix4 rho;
  RMatrix r;
  std::optional<XStateParams> xstate;
};

namespace detail {

inline double number(const nlohmann::json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError(what + " must be a number");
  return j.get<double>();
}

inline Vec3 vec3(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw ParseError(what + " must be an array of 3 numbers");
  return Vec3(number(j[0], what), number(j[1], what), number(j[2], what));
}

}  // namespace detail

/// {"rho": 4x4 of [re, im]} | {"r": {"x", "y", "t"}} | {"xstate": {"x3","y3","t1","t2","t3"}}.
inline StateInput parse_state(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("state must be a JSON object");
  const int present = static_cast<int>(j.contains("rho")) + static_cast<int>(j.contains("r")) +
                      static_cast<int>(j.contains("xstate"));
  if (present != 1) throw ParseError("state must contain exactly one of \"rho\", \"r\", \"xstate\"");
  StateInput in;
  if (j.contains("rho")) {
    const auto& m = j["rho"];
    if (!m.is_array() || m.size() != 4) throw ParseError("\"rho\" must be a 4x4 array");
    Mat4c rho;
    for (int i = 0; i < 4; ++i) {
      if (!m[i].is_array() || m[i].size() != 4) throw ParseError("\"rho\" must be a 4x4 array");
      for (int k = 0; k < 4; ++k) {
        const auto& e = m[i][k];
        if (!e.is_array() || e.size() != 2) throw ParseError("\"rho\" entries must be [re, im] pairs");
        rho(i, k) = cplx(detail::number(e[0], "rho entry"), detail::number(e[1], "rho entry"));
      }
    }
    in.kind = StateInput::Kind::DensityMatrix;
    in.rho = DensityMatrix4(rho);
    in.r = bloch_components(rho);
  } else if (j.contains("r")) {
    const auto& r = j["r"];
    if (!r.is_object() || !r.contains("x") || !r.contains("y") || !r.contains("t"))
      throw ParseError("\"r\" needs \"x\", \"y\" and \"t\"");
    in.kind = StateInput::Kind::RMatrix;
    in.r.x = detail::vec3(r["x"], "r.x");
    in.r.y = detail::vec3(r["y"], "r.y");
    const auto& t = r["t"];
    if (!t.is_array() || t.size() != 3) throw ParseError("r.t must be a 3x3 array");
    for (int i = 0; i < 3; ++i) in.r.t.row(i) = detail::vec3(t[i], "r.t row").transpose();
    in.rho = from_r_matrix(in.r);
  } else {
    const auto& x = j["xstate"];
    if (!x.is_object()) throw ParseError("\"xstate\" must be an object");
    XStateParams p;
    for (const char* key : {"x3", "y3", "t1", "t2", "t3"})
      if (!x.contains(key)) throw ParseError(std::string("\"xstate\" missing \"") + key + "\"");
    p.x3 = detail::number(x["x3"], "x3");
    p.y3 = detail::number(x["y3"], "y3");
    p.t1 = detail::number(x["t1"], "t1");
    p.t2 = detail::number(x["t2"], "t2");
    p.t3 = detail::number(x["t3"], "t3");
    in.kind = StateInput::Kind::XState;
    in.xstate = p;
    in.r = p.to_r_matrix();
    in.rho = to_density(p);
  }
  return in;
}

inline StateInput parse_state(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return parse_state(j);
}

inline nlohmann::json to_json(const Vec3& v) { return nlohmann::json::array({v(0), v(1), v(2)}); }

inline nlohmann::json to_json(const XStateParams& p) {
  return {{"x3", p.x3}, {"y3", p.y3}, {"t1", p.t1}, {"t2", p.t2}, {"t3", p.t3}};
}

inline std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Header `t,g_sys,g_env,branch_sys,branch_env`, 12 significant digits.
inline void write_series_csv(std::ostream& os, const CorrelationSeries& s) {
  os << "t,g_sys,g_env,branch_sys,branch_env\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << format_g12(s.times[i]) << ',' << format_g12(s.g_sys[i]) << ',' << format_g12(s.g_env[i]) << ','
       << (s.branch_sys.empty() ? "" : to_string(s.branch_sys[i])) << ','
       << (s.branch_env.empty() ? "" : to_string(s.branch_env[i])) << '\n';
  }
}

inline nlohmann::json critical_times_json(const CorrelationSeries& s) {
  return {{"critical_sys", s.critical_sys}, {"critical_env", s.critical_env}};
}

}  // namespace geodiscord
