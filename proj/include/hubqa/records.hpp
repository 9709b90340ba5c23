#pragma once

// One row of an anneal sweep, with CSV and JSON round trips.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hubqa/errors.hpp"

namespace hubqa {

inline constexpr const char* kVersion = "hubqa 1.0.0";

struct SweepRecord {
  int L = 0;
  double U = 0.0;
  double t_H = 1.0;
  std::string schedule = "linear";
  std::string grouping = "xx-yy-zz";
  double T_A = 0.0;
  double tau = 0.025;
  long long steps = 0;
  double final_energy = 0.0;
  double E0 = 0.0;
  double delta_E = 0.0;
  long long gates_1q = 0;
  long long gates_2q = 0;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const SweepRecord&) const = default;
};

inline const char* kCsvHeader =
    "L,U,t_H,schedule,grouping,T_A,tau,steps,final_energy,E0,delta_E,gates_1q,gates_2q,wall_seconds,seed";

/// Shortest text that reads back as the same double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string to_csv_row(const SweepRecord& r) {
  std::ostringstream os;
  os << r.L << ',' << format_double(r.U) << ',' << format_double(r.t_H) << ',' << r.schedule << ',' << r.grouping << ','
     << format_double(r.T_A) << ',' << format_double(r.tau) << ',' << r.steps << ',' << format_double(r.final_energy) << ','
     << format_double(r.E0) << ',' << format_double(r.delta_E) << ',' << r.gates_1q << ',' << r.gates_2q << ','
     << format_double(r.wall_seconds) << ',' << r.seed;
  return os.str();
}

inline SweepRecord from_csv_row(const std::string& line) {
  std::vector<std::string> f;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) f.push_back(cell);
  if (f.size() != 15) throw ArgumentError("CSV row has " + std::to_string(f.size()) + " fields, expected 15");
  try {
    SweepRecord r;
    r.L = std::stoi(f[0]);
    r.U = std::stod(f[1]);
    r.t_H = std::stod(f[2]);
    r.schedule = f[3];
    r.grouping = f[4];
    r.T_A = std::stod(f[5]);
    r.tau = std::stod(f[6]);
    r.steps = std::stoll(f[7]);
    r.final_energy = std::stod(f[8]);
    r.E0 = std::stod(f[9]);
    r.delta_E = std::stod(f[10]);
    r.gates_1q = std::stoll(f[11]);
    r.gates_2q = std::stoll(f[12]);
    r.wall_seconds = std::stod(f[13]);
    r.seed = std::stoull(f[14]);
    return r;
  } catch (const std::logic_error& e) {
    throw ArgumentError(std::string("bad CSV row: ") + e.what());
  }
}

inline nlohmann::ordered_json to_json(const SweepRecord& r) {
  return {{"L", r.L},
          {"U", r.U},
          {"t_H", r.t_H},
          {"schedule", r.schedule},
          {"grouping", r.grouping},
          {"T_A", r.T_A},
          {"tau", r.tau},
          {"steps", r.steps},
          {"final_energy", r.final_energy},
          {"E0", r.E0},
          {"delta_E", r.delta_E},
          {"gates_1q", r.gates_1q},
          {"gates_2q", r.gates_2q},
          {"wall_seconds", r.wall_seconds},
          {"seed", r.seed}};
}

inline SweepRecord record_from_json(const nlohmann::json& j) {
  SweepRecord r;
  j.at("L").get_to(r.L);
  j.at("U").get_to(r.U);
  j.at("t_H").get_to(r.t_H);
  j.at("schedule").get_to(r.schedule);
  j.at("grouping").get_to(r.grouping);
  j.at("T_A").get_to(r.T_A);
  j.at("tau").get_to(r.tau);
  j.at("steps").get_to(r.steps);
  j.at("final_energy").get_to(r.final_energy);
  j.at("E0").get_to(r.E0);
  j.at("delta_E").get_to(r.delta_E);
  j.at("gates_1q").get_to(r.gates_1q);
  j.at("gates_2q").get_to(r.gates_2q);
  j.at("wall_seconds").get_to(r.wall_seconds);
  j.at("seed").get_to(r.seed);
  return r;
}

/// Identity of a sweep point: everything that determines the physics.
inline std::string record_key(const SweepRecord& r) {
  return std::to_string(r.L) + '|' + format_double(r.U) + '|' + format_double(r.t_H) + '|' + r.schedule + '|' + r.grouping +
         '|' + format_double(r.T_A) + '|' + format_double(r.tau);
}

/// FNV-1a of record_key, printed as 16 hex digits.
inline std::string record_key_hash(const SweepRecord& r) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : record_key(r)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Rows of a CSV written by write_csv; lines starting with '#' are metadata.
inline std::vector<SweepRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  std::vector<SweepRecord> out;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw ArgumentError(path + ": unexpected CSV header");
      header_seen = true;
      continue;
    }
    out.push_back(from_csv_row(line));
  }
  return out;
}

inline void write_csv(const std::string& path, const std::vector<SweepRecord>& rows, const std::string& config_line) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ArgumentError("cannot write " + path);
  out << "# " << kVersion << '\n';
  if (!config_line.empty()) out << "# config " << config_line << '\n';
  out << kCsvHeader << '\n';
  for (const auto& r : rows) out << to_csv_row(r) << '\n';
}

}  // namespace hubqa
