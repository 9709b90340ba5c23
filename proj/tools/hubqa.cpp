// hubqa: command-line driver for the Bethe solver, anneal sweeps, fits and export.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hubqa/analysis.hpp"
#include "hubqa/anneal.hpp"
#include "hubqa/bethe.hpp"
#include "hubqa/records.hpp"

namespace fs = std::filesystem;
using namespace hubqa;

namespace {

constexpr int kExitArgument = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitSolver = 4;

/// "a..b" (even step when --filling half), "a,b,c" or a single integer.
std::vector<int> parse_sizes(const std::string& text, bool even_only) {
  std::vector<int> out;
  try {
    if (const auto dots = text.find(".."); dots != std::string::npos) {
      const int lo = std::stoi(text.substr(0, dots)), hi = std::stoi(text.substr(dots + 2));
      if (hi < lo) throw ArgumentError("empty L range " + text);
      for (int L = lo; L <= hi; ++L) {
        if (!even_only || L % 2 == 0) out.push_back(L);
      }
    } else {
      std::stringstream ss(text);
      for (std::string item; std::getline(ss, item, ',');) out.push_back(std::stoi(item));
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ArgumentError*>(&e)) throw;
    throw ArgumentError("cannot parse L list '" + text + "'");
  }
  if (out.empty()) throw ArgumentError("no system sizes in '" + text + "'");
  return out;
}

/// "lo:hi:log10" (log grid, per_decade points per decade) or "a,b,c".
std::vector<double> parse_times(const std::string& text, int per_decade, double tau) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  try {
    if (parts.size() == 3) {
      if (parts[2] != "log10") throw ArgumentError("T_A grid spacing must be log10");
      return log_grid(std::stod(parts[0]), std::stod(parts[1]), per_decade, tau);
    }
    if (parts.size() != 1) throw ArgumentError("T_A must be lo:hi:log10 or a comma list");
    std::vector<double> out;
    std::stringstream list(text);
    for (std::string item; std::getline(list, item, ',');) out.push_back(std::stod(item));
    return out;
  } catch (const std::invalid_argument&) {
    throw ArgumentError("cannot parse T_A grid '" + text + "'");
  }
}

fs::path output_dir() {
  const char* env = std::getenv("HUBQA_OUT_DIR");
  return env && *env ? fs::path(env) : fs::path("hubqa_out");
}

fs::path resolve_output(const std::string& given, const std::string& fallback_name) {
  fs::path p = given.empty() ? output_dir() / fallback_name : fs::path(given);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path.string());
  out << text;
}

HubbardParams make_params(int L, double U, double t_hop, const std::string& filling, int n_up, int n_down) {
  if (filling == "half") return HubbardParams::half_filled(L, U, t_hop);
  HubbardParams p{L, t_hop, U, n_up, n_down};
  p.validate();
  return p;
}

struct Common {
  double U = 4.0;
  double t_hop = 1.0;
  std::string filling = "half";
  int n_up = 1;
  int n_down = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--U", U, "on-site interaction in units of t_H")->capture_default_str();
    cmd->add_option("--t", t_hop, "hopping t_H")->capture_default_str();
    cmd->add_option("--filling", filling, "half (N = L, N_down = L/2) or custom")
        ->check(CLI::IsMember({"half", "custom"}))
        ->capture_default_str();
    cmd->add_option("--n-up", n_up, "spin-up particles (custom filling)");
    cmd->add_option("--n-down", n_down, "spin-down particles (custom filling)");
  }
};

struct AnnealArgs {
  double tau = 0.025;
  std::string schedule = "linear";
  std::string grouping = "xx-yy-zz";
  bool no_merge = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tau", tau, "Trotter step")->capture_default_str();
    cmd->add_option("--schedule", schedule, "linear or sinusoidal")->capture_default_str();
    cmd->add_option("--grouping", grouping, "xx-yy-zz or xy-parity")->capture_default_str();
    cmd->add_flag("--no-merge", no_merge, "keep both half hopping blocks in every step");
  }

  TrotterOptions options() const { return {parse_grouping(grouping), !no_merge}; }
  AnnealSchedule schedule_for(double total_time) const {
    AnnealSchedule s{parse_schedule(schedule), total_time, tau};
    s.validate();
    return s;
  }
  std::string config() const {
    return "tau=" + format_double(tau) + " schedule=" + schedule + " grouping=" + grouping + (no_merge ? " no-merge" : "");
  }
};

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) s += (i > 1 ? " " : "") + std::string(argv[i]);
  return s;
}

// ---- bethe ---------------------------------------------------------------

int cmd_bethe(const std::string& sizes, const Common& c, const std::string& out_path, const std::string& config) {
  const bool half = c.filling == "half";
  if (half && sizes.find("..") == std::string::npos) {
    for (int L : parse_sizes(sizes, false)) {
      if (L % 2 != 0) throw ArgumentError("half filling needs an even L (got " + std::to_string(L) + ")");
    }
  }
  std::ostringstream csv;
  csv << "# " << kVersion << "\n# config " << config << "\n";
  csv << "L,U,N,N_down,E0,residual_norm,solve_time\n";
  for (int L : parse_sizes(sizes, half)) {
    const HubbardParams p = make_params(L, c.U, c.t_hop, c.filling, c.n_up, c.n_down);
    const auto t0 = std::chrono::steady_clock::now();
    const BetheSolution sol = solve_ground_state(p);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char line[256];
    std::snprintf(line, sizeof line, "%d,%s,%d,%d,%.9f,%.3e,%.6f\n", L, format_double(c.U).c_str(), p.n_particles(), p.n_down,
                  sol.energy, sol.residual_norm, secs);
    csv << line;
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_text(resolve_output(out_path, ""), csv.str());
  }
  return 0;
}

// ---- anneal / sweep --------------------------------------------------------

int cmd_anneal(int L, double total_time, const Common& c, const AnnealArgs& a, bool json) {
  const HubbardParams p = make_params(L, c.U, c.t_hop, c.filling, c.n_up, c.n_down);
  const SweepRecord r = run_anneal(p, a.schedule_for(total_time), a.options());
  if (json) {
    auto j = to_json(r);
    j["version"] = kVersion;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << kCsvHeader << "\n" << to_csv_row(r) << "\n";
  }
  return 0;
}

struct SweepPoint {
  HubbardParams params;
  double total_time = 0.0;
  std::string key;
};

int classify(const std::exception& e) {
  if (dynamic_cast<const CapacityError*>(&e)) return kExitCapacity;
  if (dynamic_cast<const ConvergenceError*>(&e) || dynamic_cast<const SolverError*>(&e)) return kExitSolver;
  return kExitArgument;
}

int cmd_sweep(const std::string& sizes, const std::string& times, int per_decade, const Common& c, const AnnealArgs& a,
              unsigned jobs, const std::string& out_arg, const std::string& config) {
  const fs::path out = resolve_output(out_arg, "sweep.csv");
  const TrotterOptions opt = a.options();

  std::vector<SweepRecord> done;
  std::set<std::string> have;
  if (fs::exists(out)) {
    done = read_csv(out.string());
    for (const auto& r : done) have.insert(record_key_hash(r));
  }

  std::vector<SweepPoint> todo;
  for (int L : parse_sizes(sizes, false)) {
    const HubbardParams p = make_params(L, c.U, c.t_hop, c.filling, c.n_up, c.n_down);
    for (double t : parse_times(times, per_decade, a.tau)) {
      const AnnealSchedule s = a.schedule_for(t);
      SweepRecord probe;
      probe.L = L;
      probe.U = p.U;
      probe.t_H = p.t_hop;
      probe.schedule = std::string(schedule_name(s.kind));
      probe.grouping = std::string(grouping_name(opt.grouping));
      probe.T_A = t;
      probe.tau = s.tau;
      const std::string key = record_key_hash(probe);
      if (!have.count(key)) todo.push_back({p, t, key});
    }
  }
  std::cerr << "sweep: " << done.size() << " existing records, " << todo.size() << " to run\n";

  std::map<int, double> e0;
  for (const auto& pt : todo) {
    if (!e0.count(pt.params.L)) e0[pt.params.L] = reference_energy(pt.params);
  }

  // Workers append each finished record under the lock, so an interrupted
  // sweep resumes from whatever reached the file.
  std::mutex lock;
  std::atomic<std::size_t> next{0};
  std::vector<std::string> failures;
  int exit_code = 0;
  {
    std::ofstream append;
    if (!todo.empty()) {
      if (!fs::exists(out)) write_csv(out.string(), {}, config);
      append.open(out, std::ios::app | std::ios::binary);
    }
    auto worker = [&] {
      for (std::size_t i; (i = next++) < todo.size();) {
        const auto& pt = todo[i];
        try {
          const double ref = e0.at(pt.params.L);
          SweepRecord r = run_anneal(pt.params, a.schedule_for(pt.total_time), opt, &ref);
          std::lock_guard g(lock);
          append << to_csv_row(r) << '\n' << std::flush;
          done.push_back(std::move(r));
        } catch (const std::exception& e) {
          std::lock_guard g(lock);
          failures.push_back("L=" + std::to_string(pt.params.L) + " T_A=" + format_double(pt.total_time) + ": " + e.what());
          if (!exit_code) exit_code = classify(e);
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::max(1u, jobs); ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (!todo.empty()) {
    std::sort(done.begin(), done.end(), [](const SweepRecord& x, const SweepRecord& y) {
      return std::tie(x.L, x.U, x.schedule, x.grouping, x.T_A, x.tau) < std::tie(y.L, y.U, y.schedule, y.grouping, y.T_A, y.tau);
    });
    write_csv(out.string(), done, config);
  }
  for (const auto& f : failures) std::cerr << "sweep: failed " << f << "\n";
  std::cout << out.string() << "\n";
  return exit_code;
}

// ---- fit -------------------------------------------------------------------

int cmd_fit(const std::string& in, double p, double tolerance, const std::string& out_arg, const std::string& config) {
  OnsetOptions opt;
  opt.slope_tolerance = tolerance;
  const auto rep = scaling_report(read_csv(in), p, opt);
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["config"] = config;
  j["p"] = p;
  j["sizes"] = nlohmann::json::array();
  std::vector<int> missing;
  for (const auto& s : rep.sizes) {
    nlohmann::ordered_json row;
    row["L"] = s.L;
    row["onset_found"] = s.onset.found;
    if (s.onset.found) {
      row["epsilon"] = s.onset.epsilon;
      row["alpha"] = s.onset.alpha;
      row["onset_time"] = s.onset.onset_time;
      row["points"] = s.onset.points;
      row["slope"] = s.onset.slope;
    } else {
      missing.push_back(s.L);
    }
    j["sizes"].push_back(row);
  }
  j["no-onset"] = missing;
  auto opt_num = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
  j["a"] = opt_num(rep.a);
  j["b"] = opt_num(rep.b);
  j["crossover_exponent"] = opt_num(rep.crossover_exponent);
  j["precision_exponent"] = opt_num(rep.precision_exponent);
  j["gaps"] = rep.gaps;
  const std::string text = j.dump(2) + "\n";
  if (out_arg.empty()) {
    std::cout << text;
  } else {
    write_text(resolve_output(out_arg, ""), text);
  }
  return 0;
}

// ---- export / timing -------------------------------------------------------

int cmd_export(int L, double total_time, const Common& c, const AnnealArgs& a, const std::string& out_arg,
               const std::string& config) {
  const HubbardParams p = make_params(L, c.U, c.t_hop, c.filling, c.n_up, c.n_down);
  const Circuit circ = build_anneal_circuit(p, a.schedule_for(total_time), a.options());
  std::string text = export_qasm(circ);
  const auto tally = count_gates(circ);
  const auto trotter = count_segment_gates(circ, "trotter[");
  std::ostringstream header;
  header << "// " << kVersion << "\n// config " << config << "\n// gates " << tally.total() << " (trotter " << trotter.total()
         << ", prep " << count_segment_gates(circ, "prep").total() << ")\n";
  const auto at = text.find("qreg");
  text.insert(at, header.str());
  const fs::path out = resolve_output(out_arg, "anneal_L" + std::to_string(L) + ".qasm");
  write_text(out, text);
  std::cout << out.string() << "\n";
  return 0;
}

int cmd_timing(const std::string& sizes, double U, int repeats) {
  const auto samples = timing_study(parse_sizes(sizes, false), U, 1.0, repeats);
  std::cout << "L,seconds,E0\n";
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : samples) {
    std::printf("%d,%.6f,%.9f\n", s.L, s.seconds, s.energy);
    pts.emplace_back(s.L, s.seconds);
  }
  if (pts.size() >= 3) std::printf("# fitted exponent %.3f\n", fit_power_law(pts).exponent);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gate-based quantum annealing of the open Hubbard chain"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  const std::string config = command_line(argc, argv);

  Common common;
  AnnealArgs anneal;
  std::string sizes = "2", out, times = "5:40:log10", in;
  int L = 2, per_decade = 10, repeats = 5;
  double total_time = 10.0, p = 2.0, tolerance = 0.25;
  unsigned jobs = 1;
  bool json = false;

  auto* bethe = app.add_subcommand("bethe", "exact ground energies from the Bethe ansatz");
  bethe->add_option("--L", sizes, "size, list a,b,c or range a..b")->required();
  common.attach(bethe);
  bethe->add_option("--out", out, "CSV path (default stdout)");

  auto* run = app.add_subcommand("anneal", "one anneal, printed as a record");
  run->add_option("--L", L)->required();
  run->add_option("--TA", total_time, "total anneal time")->required();
  common.attach(run);
  anneal.attach(run);
  run->add_flag("--json", json, "print JSON instead of CSV");

  auto* sweep = app.add_subcommand("sweep", "resumable anneal sweep over L and T_A");
  sweep->add_option("--L", sizes, "sizes, list or range")->required();
  sweep->add_option("--TA", times, "lo:hi:log10 or a comma list")->capture_default_str();
  sweep->add_option("--per-decade", per_decade, "grid points per decade")->capture_default_str();
  sweep->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  sweep->add_option("--out", out, "records CSV (default $HUBQA_OUT_DIR/sweep.csv)");
  common.attach(sweep);
  anneal.attach(sweep);

  auto* fit = app.add_subcommand("fit", "onset detection and L-scaling fits");
  fit->add_option("--in", in, "records CSV")->required();
  fit->add_option("--p", p, "expected power (2 linear, 4 sinusoidal)")->capture_default_str();
  fit->add_option("--tolerance", tolerance, "allowed slope deviation")->capture_default_str();
  fit->add_option("--out", out, "report path (default stdout)");

  auto* exp = app.add_subcommand("export", "write the anneal circuit as OpenQASM 2.0");
  exp->add_option("--L", L)->required();
  exp->add_option("--TA", total_time)->required();
  exp->add_option("--out", out, "QASM path (default $HUBQA_OUT_DIR/anneal_L<L>.qasm)");
  common.attach(exp);
  anneal.attach(exp);

  auto* timing = app.add_subcommand("timing", "Bethe solve time against L");
  timing->add_option("--L", sizes, "sizes")->default_val("20,40,60,80,100,120,140,160,180,200");
  timing->add_option("--U", common.U)->capture_default_str();
  timing->add_option("--repeats", repeats)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitArgument;
  }

  try {
    if (*bethe) return cmd_bethe(sizes, common, out, config);
    if (*run) return cmd_anneal(L, total_time, common, anneal, json);
    if (*sweep) return cmd_sweep(sizes, times, per_decade, common, anneal, jobs, out, config);
    if (*fit) return cmd_fit(in, p, tolerance, out, config);
    if (*exp) return cmd_export(L, total_time, common, anneal, out, config);
    if (*timing) return cmd_timing(sizes, common.U, repeats);
  } catch (const std::exception& e) {
    std::cerr << "hubqa: " << e.what() << "\n";
    return classify(e);
  }
  return 0;
}
