// Command-line front end: single-case verification, grid scans, pencil branch
// tracking, and report conversion. Output files are written atomically
// (temp + rename). Exit codes: 0 all checks pass, 1 confirmed violation,
// 2 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "specheck/explorer.hpp"
#include "specheck/json_io.hpp"
#include "specheck/pencil.hpp"

namespace {

using specheck::InvalidInput;

int worker_threads() {
  const char* env = std::getenv("SPECHECK_THREADS");
  if (!env || !*env) return 1;
  const long v = std::strtol(env, nullptr, 10);
  if (v < 0) throw InvalidInput("SPECHECK_THREADS must be >= 0");
  if (v == 0) return std::max(1u, std::thread::hardware_concurrency());
  return static_cast<int>(v);
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write to " + tmp);
    out << content;
    if (!out.flush()) throw InvalidInput("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw InvalidInput("cannot rename " + tmp + ": " + std::strerror(errno));
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

// "start:stop:step" with inclusive endpoints (reachable within 1e-12),
// or a plain comma list of values.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double start, stop, step;
    char c1, c2;
    std::istringstream in(text);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':')
      throw InvalidInput("grid must be start:stop:step");
    if (!(step > 0.0)) throw InvalidInput("grid step must be positive");
    for (double v = start; v <= stop + 1e-12; v += step) out.push_back(std::min(v, stop));
    return out;
  }
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw InvalidInput("empty grid");
  return out;
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw InvalidInput("empty dimension list");
  return out;
}

void validate_t_grid(const std::vector<double>& grid) {
  for (double t : grid) {
    if (!(t > -2.0)) throw InvalidInput("t must exceed -2");
    if (!(t <= 2.0)) throw InvalidInput("t must not exceed 2");
  }
}

int cmd_verify(const std::string& check, int n, double r, double t, int trials,
               uint64_t seed, const std::string& family, const std::string& out_path,
               bool allow_unproven) {
  specheck::CampaignSpec spec;
  spec.check = check;
  spec.family = family;
  spec.master_seed = seed;
  spec.allow_unproven = allow_unproven;
  const std::optional<double> ro =
      specheck::check_uses_r(check) ? std::optional<double>(r) : std::nullopt;
  const std::optional<double> to =
      specheck::check_uses_t(check) ? std::optional<double>(t) : std::nullopt;
  if (to) validate_t_grid({*to});

  nlohmann::json records = nlohmann::json::array();
  bool confirmed_violation = false;
  for (int trial = 0; trial < trials; ++trial) {
    const uint64_t trial_seed = specheck::trial_seed_for(seed, 0, trial);
    specheck::ShrinkableCase c = specheck::make_case(spec, n, ro, to, trial_seed);
    const auto recs = specheck::run_named_check(c, {}, allow_unproven);
    bool any_fail = false;
    for (auto rec : recs) {
      rec.seed = static_cast<int64_t>(trial_seed);
      any_fail = any_fail || !rec.pass;
      records.push_back(rec);
    }
    if (any_fail && specheck::confirm_violation(c, allow_unproven))
      confirmed_violation = true;
  }
  write_atomic(out_path, records.dump(2) + "\n");
  return confirmed_violation ? 1 : 0;
}

int cmd_scan(specheck::CampaignSpec spec, const std::string& out_path,
             const std::string& csv_path) {
  validate_t_grid(spec.t_grid);
  const specheck::CampaignReport report = specheck::run_campaign(spec, worker_threads());
  write_atomic(out_path, nlohmann::json(report).dump(2) + "\n");
  if (!csv_path.empty()) write_atomic(csv_path, specheck::report_to_csv(report));
  for (const auto& v : report.violations)
    if (v.recheck_status == "confirmed") return 1;
  return 0;
}

int cmd_track(const std::string& pencil_path, double t_min, double t_max, int steps,
              double gap_tol, int refine_depth, const std::string& out_path) {
  if (steps < 1) throw InvalidInput("steps must be >= 1");
  if (!(t_max > t_min)) throw InvalidInput("t-max must exceed t-min");
  const nlohmann::json j = read_json_file(pencil_path);
  if (!j.contains("M0") || !j.contains("M1"))
    throw InvalidInput("pencil json must contain M0 and M1");
  const specheck::HermitianPencil pencil{
      specheck::HermitianMatrix(specheck::matrix_from_json(j["M0"])),
      specheck::HermitianMatrix(specheck::matrix_from_json(j["M1"]))};

  std::vector<double> grid(steps + 1);
  for (int k = 0; k <= steps; ++k)
    grid[k] = t_min + (t_max - t_min) * k / steps;
  const specheck::EigenBranchSet set =
      specheck::track_branches(pencil, grid, gap_tol, refine_depth);

  std::ostringstream csv;
  csv << "t";
  for (int j2 = 1; j2 <= pencil.n(); ++j2) csv << ",branch_" << j2;
  csv << ",flags\n";
  for (size_t k = 0; k < set.grid.size(); ++k) {
    csv << specheck::format_double(set.grid[k]);
    for (int j2 = 0; j2 < pencil.n(); ++j2)
      csv << ',' << specheck::format_double(set.branches[j2][k]);
    csv << ',';
    for (size_t f = 0; f < set.exceptional_flags[k].size(); ++f) {
      const auto& [first, mult] = set.exceptional_flags[k][f];
      if (f) csv << ';';
      csv << (first + 1) << '-' << (first + mult);
    }
    csv << '\n';
  }
  write_atomic(out_path, csv.str());
  return 0;
}

int cmd_report(const std::string& from_path, const std::string& to_path) {
  const nlohmann::json j = read_json_file(from_path);
  if (j.is_object() && j.contains("cells")) {
    const auto report = j.get<specheck::CampaignReport>();
    write_atomic(to_path, specheck::report_to_csv(report));
    return 0;
  }
  if (j.is_array()) {
    std::ostringstream csv;
    csv << "check,n,r,t,k,min_margin,pass,proven,tol,seed\n";
    for (const auto& rj : j) {
      const auto rec = rj.get<specheck::VerificationRecord>();
      csv << rec.check << ',' << rec.n << ','
          << (rec.r ? specheck::format_double(*rec.r) : "") << ','
          << (rec.t ? specheck::format_double(*rec.t) : "") << ','
          << (rec.k ? std::to_string(*rec.k) : "") << ','
          << specheck::format_double(rec.min_margin()) << ','
          << (rec.pass ? "true" : "false") << ',' << (rec.proven ? "true" : "false")
          << ',' << specheck::format_double(rec.tol) << ','
          << (rec.seed ? std::to_string(*rec.seed) : "") << '\n';
    }
    write_atomic(to_path, csv.str());
    return 0;
  }
  throw InvalidInput("unrecognized report format in " + from_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verifiers for singular-value inequalities of matrix means"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "Run one check on random cases");
  std::string v_check = "zhan", v_family = "generic", v_out = "out.json";
  int v_n = 4, v_trials = 200;
  double v_r = 1.0, v_t = 0.0;
  uint64_t v_seed = 0;
  bool v_allow = false;
  verify->add_option("--check", v_check, "zhan|zhan_norm|ag_mean|bhatia_kittaneh|drury|mean_comparison|corollary2");
  verify->add_option("--n", v_n, "matrix dimension");
  verify->add_option("--r", v_r, "exponent r in [0, 2]");
  verify->add_option("--t", v_t, "parameter t in (-2, 2]");
  verify->add_option("--trials", v_trials, "random cases to run");
  verify->add_option("--seed", v_seed, "master seed");
  verify->add_option("--family", v_family, "generic|diagonal|rank_deficient|near_commuting");
  verify->add_option("--out", v_out, "output JSON path")->required();
  verify->add_flag("--allow-unproven", v_allow, "permit r outside the proven hypothesis");

  // scan
  auto* scan = app.add_subcommand("scan", "Randomized campaign over (n, r, t) cells");
  std::string s_check = "zhan", s_family = "generic", s_dims = "2,3,4,5,6";
  std::string s_rgrid, s_tgrid, s_out = "report.json", s_csv;
  int s_trials = 200;
  uint64_t s_seed = 0;
  bool s_allow = false, s_norecheck = false;
  scan->add_option("--check", s_check, "check to drive");
  scan->add_option("--n-list", s_dims, "comma list of dimensions");
  scan->add_option("--r-grid", s_rgrid, "start:stop:step or comma list");
  scan->add_option("--t-grid", s_tgrid, "start:stop:step or comma list");
  scan->add_option("--trials", s_trials, "trials per cell");
  scan->add_option("--seed", s_seed, "master seed");
  scan->add_option("--family", s_family, "matrix family");
  scan->add_option("--out", s_out, "output JSON path");
  scan->add_option("--csv", s_csv, "also write CSV here");
  scan->add_flag("--allow-unproven", s_allow, "permit r outside the proven hypothesis");
  scan->add_flag("--no-recheck", s_norecheck, "skip the high-precision re-check");

  // track
  auto* track = app.add_subcommand("track", "Track eigenvalue branches of a pencil");
  std::string t_pencil, t_out = "branches.csv";
  double t_min = -1.9, t_max = 2.0, t_gap = 0.0;
  int t_steps = 200, t_refine = 0;
  track->add_option("--pencil", t_pencil, "pencil JSON {\"M0\":..., \"M1\":...}")->required();
  track->add_option("--t-min", t_min, "grid start");
  track->add_option("--t-max", t_max, "grid end");
  track->add_option("--steps", t_steps, "number of grid intervals");
  track->add_option("--gap-tol", t_gap, "degeneracy threshold (0 = auto)");
  track->add_option("--refine-depth", t_refine, "dyadic refinement depth near flagged points (max 8)");
  track->add_option("--out", t_out, "output CSV path")->required();

  // report
  auto* report = app.add_subcommand("report", "Convert a JSON report to CSV");
  std::string r_from, r_to;
  report->add_option("--from", r_from, "input JSON")->required();
  report->add_option("--to", r_to, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*verify)
      return cmd_verify(v_check, v_n, v_r, v_t, v_trials, v_seed, v_family, v_out, v_allow);
    if (*scan) {
      specheck::CampaignSpec spec;
      spec.check = s_check;
      spec.dims = parse_dims(s_dims);
      if (!s_rgrid.empty()) spec.r_grid = parse_grid(s_rgrid);
      if (!s_tgrid.empty()) spec.t_grid = parse_grid(s_tgrid);
      spec.trials_per_cell = s_trials;
      spec.master_seed = s_seed;
      spec.family = s_family;
      spec.allow_unproven = s_allow;
      spec.high_precision_recheck = !s_norecheck;
      return cmd_scan(std::move(spec), s_out, s_csv);
    }
    if (*track) return cmd_track(t_pencil, t_min, t_max, t_steps, t_gap, t_refine, t_out);
    if (*report) return cmd_report(r_from, r_to);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
