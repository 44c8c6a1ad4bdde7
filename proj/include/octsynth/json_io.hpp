#pragma once

// Canonical serialization: JSON with sorted keys and 17-significant-digit
// floats (so equal documents are byte-identical and doubles round-trip), and
// locale-independent CSV with a mandatory header row.

#include <cstdio>
#include <string>

#include <json.hpp>

#include "octsynth/core.hpp"
#include "octsynth/pmp.hpp"
#include "octsynth/synthesis.hpp"

namespace octsynth {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline void escape_json_string(const std::string& s, std::string& out) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

inline void dump_canonical(const nlohmann::json& j, std::string& out,
                           int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        escape_json_string(it.key(), out);
        out += ": ";
        dump_canonical(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& el : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_canonical(el, out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::string:
      escape_json_string(j.get<std::string>(), out);
      return;
    case nlohmann::json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case nlohmann::json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      return;
    case nlohmann::json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      return;
    case nlohmann::json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += "null";
      return;
  }
}

}  // namespace detail

// Keys arrive sorted because nlohmann::json's default object is an ordered
// map; this dumper adds the pinned float format and stable layout.
inline std::string dump_canonical_json(const nlohmann::json& j) {
  std::string out;
  detail::dump_canonical(j, out, 0);
  out += "\n";
  return out;
}

inline nlohmann::json trajectory_to_json(const Trajectory& tr) {
  nlohmann::json breakpoints = nlohmann::json::array();
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    breakpoints.push_back({tr.times[i], tr.values[i]});
  nlohmann::json control = nlohmann::json::array();
  for (std::size_t i = 0; i < tr.slopes.size(); ++i)
    control.push_back(
        {tr.times[i], tr.times[i + 1], control_value(tr.slopes[i])});
  return {{"breakpoints", breakpoints}, {"control", control}};
}

inline nlohmann::json candidate_set_to_json(const ProblemParams& p,
                                            const CandidateSet& set) {
  nlohmann::json candidates = nlohmann::json::array();
  for (const Candidate& c : set.candidates) {
    nlohmann::json jc = trajectory_to_json(c.trajectory);
    jc["cost"] = total_cost_closed(p, c.trajectory);
    jc["status"] = status_name(c.status);
    candidates.push_back(jc);
  }
  return {{"candidates", candidates},
          {"regime",
           {{"clause", std::string(1, set.regime.clause)},
            {"theorem", theorem_name(set.regime.theorem)}}}};
}

inline nlohmann::json multipliers_to_json(const Multipliers& m) {
  nlohmann::json pieces = nlohmann::json::array();
  for (const P1Piece& piece : m.p1_pieces)
    pieces.push_back({{"c0", piece.c0},
                      {"c1", piece.c1},
                      {"t_hi", piece.t_hi},
                      {"t_lo", piece.t_lo}});
  nlohmann::json atoms = nlohmann::json::array();
  for (const MeasureAtom& a : m.mu.atoms)
    atoms.push_back({{"mass", a.mass}, {"t", a.t}});
  nlohmann::json densities = nlohmann::json::array();
  for (const MeasureDensity& d : m.mu.densities)
    densities.push_back({{"c", d.c}, {"t_hi", d.t_hi}, {"t_lo", d.t_lo}});
  nlohmann::json nus = nlohmann::json::array();
  for (const NuValue& nu : m.nu_per_support_piece) nus.push_back(nu.nu1);
  return {{"gamma", m.gamma},
          {"mu", {{"atoms", atoms}, {"densities", densities}}},
          {"nu_per_support_piece", nus},
          {"p1_pieces", pieces},
          {"p2", m.p2}};
}

inline Multipliers multipliers_from_json(const nlohmann::json& j) {
  Multipliers m;
  m.gamma = j.at("gamma").get<double>();
  m.p2 = j.at("p2").get<double>();
  for (const auto& piece : j.at("p1_pieces"))
    m.p1_pieces.push_back({piece.at("t_lo").get<double>(),
                           piece.at("t_hi").get<double>(),
                           piece.at("c0").get<double>(),
                           piece.at("c1").get<double>()});
  for (const auto& a : j.at("mu").at("atoms"))
    m.mu.atoms.push_back(
        {a.at("t").get<double>(), a.at("mass").get<double>()});
  for (const auto& d : j.at("mu").at("densities"))
    m.mu.densities.push_back({d.at("t_lo").get<double>(),
                              d.at("t_hi").get<double>(),
                              d.at("c").get<double>()});
  for (const auto& nu : j.at("nu_per_support_piece"))
    m.nu_per_support_piece.push_back({nu.get<int>()});
  return m;
}

}  // namespace octsynth
