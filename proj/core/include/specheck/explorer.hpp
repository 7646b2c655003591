#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "specheck/inequalities.hpp"

namespace specheck {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Checks a campaign can drive. "zhan" and "zhan_norm" take r and t grids,
// "mean_comparison" and "corollary2" take t only, the rest take neither.
bool check_uses_r(const std::string& check);
bool check_uses_t(const std::string& check);

struct CampaignSpec {
  std::string check = "zhan";
  std::vector<int> dims;
  std::vector<double> r_grid;
  std::vector<double> t_grid;
  int trials_per_cell = 200;
  // generic | diagonal | rank_deficient | near_commuting
  std::string family = "generic";
  uint64_t master_seed = 0;
  std::optional<double> tol_override;
  bool high_precision_recheck = true;
  bool allow_unproven = false;  // let zhan_norm run outside its hypothesis
};

struct CellAggregate {
  int n = 0;
  std::optional<double> r;
  std::optional<double> t;
  int trials = 0;
  int failures = 0;       // numerical failures, recorded but never aborting
  int retracted = 0;      // near-violations that vanished under re-check
  double min_margin = 0.0;
  std::string argmin_digest;  // "seed:<trial seed>" of the minimizing trial
  bool proven = true;
  bool overlap = false;   // set by aggregate_report on duplicated cells
};

struct CampaignViolation {
  std::string check;
  int n = 0;
  std::optional<double> r;
  std::optional<double> t;
  uint64_t seed = 0;  // reproduction seed for this trial
  nlohmann::json a;
  nlohmann::json b;
  nlohmann::json x;   // null when the check has no X
  std::vector<double> margins;
  double recheck_min_margin = 0.0;
  std::string recheck_status;  // confirmed | unconfirmed
};

struct CampaignReport {
  CampaignSpec spec;
  std::vector<CellAggregate> cells;
  std::vector<CampaignViolation> violations;
  double wall_time_sec = 0.0;
  std::string version = kToolkitVersion;

  int total_trials() const;
};

// Deterministic given the master seed: per-cell sub-seeds come from a fixed
// splitting rule, so scheduling across threads cannot change the report.
CampaignReport run_campaign(const CampaignSpec& spec, int threads = 1);

CampaignReport aggregate_report(const std::vector<CampaignReport>& reports);

// One case in shrinkable form. The matrices are plain (A, B stay PSD because
// every shrink step is a compression or an eigenvalue rounding).
struct ShrinkableCase {
  std::string check = "zhan";
  MatrixC a;
  MatrixC b;
  std::optional<MatrixC> x;
  std::optional<double> r;
  std::optional<double> t;
  std::optional<int> k;
};

// Returns true while the violation (or any predicate of interest) persists.
using ShrinkPredicate = std::function<bool(const ShrinkableCase&)>;

struct ShrinkOutcome {
  ShrinkableCase shrunk;
  bool changed = false;  // false = no-op (input was not violating or already minimal)
};

// Greedy minimization: principal submatrices on the joint eigenframe of A+B,
// eigenvalue rounding to coarse rationals, then t/r snapping. Idempotent.
ShrinkOutcome shrink_counterexample(const ShrinkableCase& c, const ShrinkPredicate& pred);

// Default predicate: min margin of the named check below -tol.
ShrinkPredicate violation_predicate(const CheckOptions& opts = {});

// Run the named check on a shrinkable case; pair-producing checks return two records.
std::vector<VerificationRecord> run_named_check(const ShrinkableCase& c,
                                                const CheckOptions& opts = {},
                                                bool allow_unproven = false);

// Deterministic trial-case construction from the campaign's splitting rule.
ShrinkableCase make_case(const CampaignSpec& spec, int n, std::optional<double> r,
                         std::optional<double> t, uint64_t trial_seed);

// The seed the campaign assigns to (cell_index, trial).
uint64_t trial_seed_for(uint64_t master_seed, size_t cell_index, int trial);

// True when the case still violates after the tightened solver and, for
// n <= 4, the high-precision re-check.
bool confirm_violation(const ShrinkableCase& c, bool allow_unproven = false);

void to_json(nlohmann::json& j, const CampaignSpec& s);
void from_json(const nlohmann::json& j, CampaignSpec& s);
void to_json(nlohmann::json& j, const CampaignReport& r);
void from_json(const nlohmann::json& j, CampaignReport& r);

// CSV: check,n,r,t,trials,min_margin,violations
std::string report_to_csv(const CampaignReport& r);

}  // namespace specheck
