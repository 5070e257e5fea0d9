#pragma once

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "turnfold/compile.hpp"
#include "turnfold/explore.hpp"
#include "turnfold/machine.hpp"
#include "turnfold/shapes.hpp"
#include "turnfold/sim.hpp"

namespace turnfold::io {

using nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline json points_json(std::span<const GridPoint> pts) {
  json a = json::array();
  for (auto p : pts) a.push_back({p.x, p.y});
  return a;
}

inline std::vector<GridPoint> points_from(const json& a, const char* what) {
  if (!a.is_array()) throw FormatError(std::string(what) + " must be an array of [x, y] pairs");
  std::vector<GridPoint> out;
  out.reserve(a.size());
  for (const auto& p : a) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
      throw FormatError(std::string(what) + " entries must be [x, y] integer pairs");
    out.push_back({p[0].get<std::int32_t>(), p[1].get<std::int32_t>()});
  }
  return out;
}

inline std::vector<int> states_from(const json& j) {
  if (!j.contains("states") || !j["states"].is_array()) throw FormatError("missing \"states\" array");
  std::vector<int> out;
  for (const auto& s : j["states"]) {
    if (!s.is_number_integer()) throw FormatError("states must be integers");
    out.push_back(s.get<int>());
  }
  return out;
}

template <typename F>
auto wrap_errors(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

}  // namespace detail

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

// Machines ------------------------------------------------------------------

inline json to_json(const TurningMachine& tm) {
  json j;
  j["states"] = tm.initial_states();
  if (!tm.is_east_line()) j["path"] = detail::points_json(tm.initial_path());
  return j;
}

// Also accepts a state-program file, which describes an east line.
inline TurningMachine machine_from_json(const json& j) {
  return detail::wrap_errors([&] {
    auto states = detail::states_from(j);
    if (j.contains("path")) return TurningMachine(std::move(states), detail::points_from(j["path"], "path"));
    return TurningMachine::line(std::move(states));
  });
}

// Shapes and paths ----------------------------------------------------------

inline json to_json(const Shape& s) { return {{"points", detail::points_json(s.points())}}; }

inline json to_json(const Path& p) { return {{"points", detail::points_json(p.points())}, {"ordered", true}}; }

inline Shape shape_from_json(const json& j) {
  return detail::wrap_errors([&] {
    if (!j.contains("points")) throw FormatError("missing \"points\"");
    return Shape(detail::points_from(j["points"], "points"));
  });
}

inline Path path_from_json(const json& j) {
  return detail::wrap_errors([&] {
    if (!j.contains("points")) throw FormatError("missing \"points\"");
    if (!j.value("ordered", false)) throw FormatError("a path file needs \"ordered\": true");
    return Path(detail::points_from(j["points"], "points"));
  });
}

// State programs ------------------------------------------------------------

inline json to_json(const StateProgram& sp) {
  return {{"states", sp.states}, {"provenance", to_string(sp.provenance)}};
}

inline StateProgram program_from_json(const json& j) {
  return detail::wrap_errors([&] {
    StateProgram sp;
    sp.states = detail::states_from(j);
    sp.provenance = provenance_from_string(j.value("provenance", std::string("General")));
    return sp;
  });
}

inline json to_json(const ValidationReport& r) {
  json v = json::array();
  for (const auto& x : r.violations)
    v.push_back({{"check", std::string(1, x.check)}, {"index", x.index}, {"detail", x.detail}});
  return {{"adjacent_ok", r.adjacent_ok}, {"directions_ok", r.directions_ok},
          {"terminal_ok", r.terminal_ok}, {"passed", r.passed()}, {"violations", v}};
}

// Verdicts ------------------------------------------------------------------

inline json to_json(const ReachReport& r) {
  json j{{"reachable_count", r.reachable_count},
         {"blocked_count", r.blocked_configs.size()},
         {"final_reached", r.final_reached},
         {"truncated", r.truncated}};
  if (r.first_blocked_witness) j["first_blocked_witness"] = *r.first_blocked_witness;
  return j;
}

inline json to_json(const Decision& d) {
  json j{{"verdict", verdict_name(d.verdict)}, {"report", to_json(d.report)}};
  if (auto* u = std::get_if<Unfoldable>(&d.verdict)) {
    j["witness"] = u->witness;
    j["blocked_states"] = u->blocked_states;
  }
  if (auto* i = std::get_if<Inconclusive>(&d.verdict)) j["explored"] = i->explored;
  return j;
}

// Trajectories --------------------------------------------------------------

inline json to_json(const TrajectoryEvent& e) { return {{"t", e.time}, {"i", e.monomer}, {"s", e.state_after}}; }

inline void write_jsonl(std::ostream& os, std::span<const TrajectoryEvent> events) {
  for (const auto& e : events) os << to_json(e).dump() << '\n';
}

inline std::vector<TrajectoryEvent> read_jsonl(std::istream& is) {
  std::vector<TrajectoryEvent> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = json::parse(line);
      out.push_back({j.at("t").get<double>(), j.at("i").get<std::size_t>(), j.at("s").get<int>()});
    } catch (const json::exception& e) {
      throw FormatError("trajectory line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// Timing tables -------------------------------------------------------------

inline void write_csv(std::ostream& os, const ScalingTable& table) {
  os << "n,trials,mean_time,std_time,blocked_fraction,mean_steps\n";
  std::ostringstream line;
  line << std::setprecision(17);
  for (const auto& r : table.rows) {
    const auto& st = r.stats;
    line.str("");
    line << r.n << ',' << st.trials << ',' << st.mean_time << ',' << st.std_time << ','
         << st.blocked_fraction << ',' << st.mean_steps << '\n';
    os << line.str();
  }
}

}  // namespace turnfold::io
