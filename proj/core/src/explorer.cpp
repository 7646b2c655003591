#include "specheck/explorer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "specheck/errors.hpp"
#include "specheck/highprec.hpp"
#include "specheck/json_io.hpp"
#include "specheck/random.hpp"

namespace specheck {

namespace {

const std::set<std::string> kChecks = {
    "zhan", "zhan_norm", "ag_mean", "bhatia_kittaneh",
    "drury", "mean_comparison", "corollary2"};

PsdMatrix clamp_to_psd(const HermitianMatrix& h) {
  Spectrum s = eigh(h);
  const int n = h.n();
  MatrixC out(n);
  for (int k = 0; k < n; ++k) {
    const double lam = std::max(s.values[k], 0.0);
    if (lam == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const std::complex<double> col = lam * s.frame(i, k);
      for (int j = 0; j < n; ++j) out(i, j) += col * std::conj(s.frame(j, k));
    }
  }
  return PsdMatrix(HermitianMatrix(hermitian_part(out)));
}

MatrixC random_diag_psd(int n, SplitRng& rng) {
  MatrixC m(n);
  for (int i = 0; i < n; ++i) m(i, i) = rng.uniform(0.0, 2.0);
  return m;
}

ShrinkableCase make_trial_case(const CampaignSpec& spec, int n, std::optional<double> r,
                               std::optional<double> t, uint64_t trial_seed);

ShrinkableCase make_trial_case(const CampaignSpec& spec, int n, std::optional<double> r,
                               std::optional<double> t, uint64_t trial_seed) {
  ShrinkableCase c;
  c.check = spec.check;
  c.r = r;
  c.t = t;
  SplitRng rng(trial_seed);
  const uint64_t seed_a = rng.next_u64();
  const uint64_t seed_b = rng.next_u64();

  if (spec.check == "ag_mean") {
    // Arbitrary matrices: the AG-mean inequality has no PSD hypothesis.
    SplitRng ra(seed_a), rb(seed_b);
    c.a = spec.family == "diagonal" ? random_diag_psd(n, ra)
                                    : random_complex_gaussian(n, ra);
    c.b = spec.family == "diagonal" ? random_diag_psd(n, rb)
                                    : random_complex_gaussian(n, rb);
    return c;
  }

  const SpectrumSpec generic{.explicit_values = {}, .lo = 0.0, .hi = 2.0, .zeros = 0};
  if (spec.family == "diagonal") {
    c.a = random_diag_psd(n, rng);
    c.b = random_diag_psd(n, rng);
  } else if (spec.family == "rank_deficient") {
    SpectrumSpec def = generic;
    def.zeros = n == 1 ? 1 : 1 + static_cast<int>(rng.next_u64() % (n - 1));
    c.a = random_psd(n, def, seed_a).mat();
    c.b = random_psd(n, def, seed_b).mat();
  } else if (spec.family == "near_commuting") {
    const PsdMatrix a = random_psd(n, generic, seed_a);
    const double eps = (rng.next_u64() & 1) ? 1e-1 : 1e-3;
    const HermitianMatrix e = random_hermitian(n, rng);
    c.a = a.mat();
    c.b = clamp_to_psd(HermitianMatrix(a.mat() + eps * e.mat())).mat();
  } else if (spec.family == "generic") {
    c.a = random_psd(n, generic, seed_a).mat();
    c.b = random_psd(n, generic, seed_b).mat();
  } else {
    throw InvalidInput("unknown matrix family '" + spec.family + "'");
  }

  if (spec.check == "zhan_norm") c.x = random_complex_gaussian(n, rng);
  return c;
}

struct TrialOutcome {
  double min_margin = std::numeric_limits<double>::infinity();
  double tol = 0.0;
  bool proven = true;
  VerificationRecord worst;  // record achieving the minimum margin
};

TrialOutcome evaluate(const std::vector<VerificationRecord>& records) {
  TrialOutcome out;
  for (const auto& rec : records) {
    out.proven = out.proven && rec.proven;
    out.tol = std::max(out.tol, rec.tol);
    const double m = rec.min_margin();
    if (m < out.min_margin) {
      out.min_margin = m;
      out.worst = rec;
    }
  }
  return out;
}

struct Cell {
  int n;
  std::optional<double> r;
  std::optional<double> t;
};

std::vector<Cell> enumerate_cells(const CampaignSpec& spec) {
  if (!kChecks.count(spec.check))
    throw InvalidInput("unknown check '" + spec.check + "'");
  const bool uses_r = check_uses_r(spec.check);
  const bool uses_t = check_uses_t(spec.check);
  if (!uses_r && !spec.r_grid.empty())
    throw InvalidInput("check '" + spec.check + "' takes no r grid");
  if (!uses_t && !spec.t_grid.empty())
    throw InvalidInput("check '" + spec.check + "' takes no t grid");
  std::vector<std::optional<double>> rs, ts;
  if (uses_r)
    for (double r : spec.r_grid) {
      if (!(r >= 0.0 && r <= 2.0)) throw InvalidInput("r grid value outside [0, 2]");
      rs.emplace_back(r);
    }
  else
    rs.emplace_back(std::nullopt);
  if (uses_t)
    for (double t : spec.t_grid) {
      if (!(t > -2.0 && t <= 2.0)) throw InvalidInput("t grid value outside (-2, 2]");
      ts.emplace_back(t);
    }
  else
    ts.emplace_back(std::nullopt);
  if (spec.trials_per_cell < 0) throw InvalidInput("trials per cell must be >= 0");

  std::vector<Cell> cells;
  for (int n : spec.dims) {
    if (n < 1) throw InvalidInput("dimension must be >= 1");
    if ((uses_r && spec.r_grid.empty()) || (uses_t && spec.t_grid.empty())) continue;
    for (const auto& r : rs)
      for (const auto& t : ts) cells.push_back({n, r, t});
  }
  return cells;
}

void run_cell(const CampaignSpec& spec, size_t cell_index, const Cell& cell,
              CellAggregate& agg, std::vector<CampaignViolation>& violations) {
  agg = CellAggregate{};
  agg.n = cell.n;
  agg.r = cell.r;
  agg.t = cell.t;
  agg.min_margin = std::numeric_limits<double>::infinity();

  for (int trial = 0; trial < spec.trials_per_cell; ++trial) {
    const uint64_t trial_seed = trial_seed_for(spec.master_seed, cell_index, trial);
    ShrinkableCase c;
    TrialOutcome out;
    try {
      c = make_trial_case(spec, cell.n, cell.r, cell.t, trial_seed);
      out = evaluate(run_named_check(c, CheckOptions{}, spec.allow_unproven));
    } catch (const NumericalFailure&) {
      ++agg.failures;
      continue;
    }
    ++agg.trials;
    agg.proven = agg.proven && out.proven;
    if (out.min_margin < agg.min_margin) {
      agg.min_margin = out.min_margin;
      agg.argmin_digest = "seed:" + std::to_string(trial_seed);
    }
    const double tol = spec.tol_override.value_or(out.tol);
    if (out.min_margin >= -tol) continue;

    // Near-violation protocol: tightened solver first, never the fast path alone.
    CheckOptions tight;
    tight.eigh.threshold = 1e-16;
    TrialOutcome retried;
    try {
      retried = evaluate(run_named_check(c, tight, spec.allow_unproven));
    } catch (const NumericalFailure&) {
      ++agg.failures;
      continue;
    }
    const double tight_tol = spec.tol_override.value_or(retried.tol);
    if (retried.min_margin >= -tight_tol) {
      ++agg.retracted;
      continue;
    }

    CampaignViolation v;
    v.check = retried.worst.check;
    v.n = cell.n;
    v.r = cell.r;
    v.t = cell.t;
    v.seed = trial_seed;
    v.a = matrix_to_json(c.a);
    v.b = matrix_to_json(c.b);
    v.x = c.x ? matrix_to_json(*c.x) : nlohmann::json(nullptr);
    v.margins = retried.worst.margins;
    if (spec.high_precision_recheck) {
      const auto re = highprec::recheck_margins(retried.worst.check, c.a, c.b, c.x,
                                                retried.worst.r, retried.worst.t,
                                                retried.worst.k);
      v.recheck_min_margin = re.min_margin;
      if (re.min_margin >= -tight_tol) {
        ++agg.retracted;
        continue;
      }
      v.recheck_status =
          (re.charpoly_available && re.charpoly_agreed) ? "confirmed" : "unconfirmed";
    } else {
      v.recheck_min_margin = retried.min_margin;
      v.recheck_status = "unconfirmed";
    }
    violations.push_back(std::move(v));
  }
  if (agg.trials == 0) agg.min_margin = 0.0;
}

std::string csv_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

bool check_uses_r(const std::string& check) {
  return check == "zhan" || check == "zhan_norm";
}

bool check_uses_t(const std::string& check) {
  return check == "zhan" || check == "zhan_norm" || check == "mean_comparison" ||
         check == "corollary2";
}

int CampaignReport::total_trials() const {
  int s = 0;
  for (const auto& c : cells) s += c.trials;
  return s;
}

std::vector<VerificationRecord> run_named_check(const ShrinkableCase& c,
                                                const CheckOptions& opts,
                                                bool allow_unproven) {
  const std::string& name = c.check;
  if (name == "ag_mean") return {ag_mean_check(c.a, c.b, opts)};

  PsdMatrix a{HermitianMatrix(c.a)};
  PsdMatrix b{HermitianMatrix(c.b)};
  if (name == "zhan") {
    InequalityCase ic(a, b, c.r.value_or(1.0), c.t.value_or(0.0));
    return {zhan_singular_value_check(ic, opts)};
  }
  if (name == "zhan_norm") {
    InequalityCase ic(a, b, c.r.value_or(1.0), c.t.value_or(0.0), c.x);
    std::vector<VerificationRecord> recs;
    if (c.k) {
      recs.push_back(zhan_norm_check(ic, *c.k, allow_unproven, opts));
    } else {
      for (int k = 1; k <= a.n(); ++k)
        recs.push_back(zhan_norm_check(ic, k, allow_unproven, opts));
    }
    return recs;
  }
  if (name == "bhatia_kittaneh") return {bhatia_kittaneh_check(a, b, opts)};
  if (name == "drury") return {drury_check(a, b, opts)};
  if (name == "mean_comparison") {
    auto [r1, r2] = mean_comparison_check(a, b, c.t.value_or(0.0), opts);
    return {std::move(r1), std::move(r2)};
  }
  if (name == "corollary2") {
    auto [r1, r2] = corollary2_check(a, b, c.t.value_or(0.0), opts);
    return {std::move(r1), std::move(r2)};
  }
  throw InvalidInput("unknown check '" + name + "'");
}

ShrinkableCase make_case(const CampaignSpec& spec, int n, std::optional<double> r,
                         std::optional<double> t, uint64_t trial_seed) {
  return make_trial_case(spec, n, r, t, trial_seed);
}

uint64_t trial_seed_for(uint64_t master_seed, size_t cell_index, int trial) {
  SplitRng tr = SplitRng(master_seed).split(cell_index + 1).split(static_cast<uint64_t>(trial) + 1);
  return tr.next_u64();
}

bool confirm_violation(const ShrinkableCase& c, bool allow_unproven) {
  CheckOptions tight;
  tight.eigh.threshold = 1e-16;
  TrialOutcome retried;
  try {
    retried = evaluate(run_named_check(c, tight, allow_unproven));
  } catch (const NumericalFailure&) {
    return false;
  }
  if (retried.min_margin >= -retried.tol) return false;
  const auto re = highprec::recheck_margins(retried.worst.check, c.a, c.b, c.x,
                                            retried.worst.r, retried.worst.t,
                                            retried.worst.k);
  return re.min_margin < -retried.tol;
}

CampaignReport run_campaign(const CampaignSpec& spec, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Cell> cells = enumerate_cells(spec);

  CampaignReport report;
  report.spec = spec;
  report.cells.resize(cells.size());
  std::vector<std::vector<CampaignViolation>> cell_violations(cells.size());

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(cells.size()) > 0
                                                             ? static_cast<int>(cells.size())
                                                             : 1));
  if (workers <= 1) {
    for (size_t i = 0; i < cells.size(); ++i)
      run_cell(spec, i, cells[i], report.cells[i], cell_violations[i]);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (size_t i = w; i < cells.size(); i += workers)
          run_cell(spec, i, cells[i], report.cells[i], cell_violations[i]);
      });
    }
    for (auto& th : pool) th.join();
  }
  // Deterministic fold in cell order regardless of scheduling.
  for (auto& vs : cell_violations)
    for (auto& v : vs) report.violations.push_back(std::move(v));

  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

CampaignReport aggregate_report(const std::vector<CampaignReport>& reports) {
  if (reports.empty()) throw InvalidInput("aggregate_report: no reports");
  CampaignReport out = reports.front();
  if (reports.size() == 1) return out;

  using Key = std::tuple<int, double, double>;
  const auto key_of = [](const CellAggregate& c) {
    return Key{c.n, c.r.value_or(std::numeric_limits<double>::quiet_NaN()),
               c.t.value_or(std::numeric_limits<double>::quiet_NaN())};
  };
  // NaN keys must compare equal to themselves, so encode them.
  const auto enc = [](Key k) {
    auto fix = [](double v) { return std::isnan(v) ? -1e308 : v; };
    return std::tuple<int, double, double>{std::get<0>(k), fix(std::get<1>(k)),
                                           fix(std::get<2>(k))};
  };

  std::map<std::tuple<int, double, double>, size_t> index;
  for (size_t i = 0; i < out.cells.size(); ++i) index[enc(key_of(out.cells[i]))] = i;
  std::set<uint64_t> seen_seeds;
  for (const auto& v : out.violations) seen_seeds.insert(v.seed);

  for (size_t ri = 1; ri < reports.size(); ++ri) {
    const CampaignReport& r = reports[ri];
    if (r.spec.check != out.spec.check)
      throw InvalidInput("aggregate_report: reports verify different checks");
    for (const auto& c : r.cells) {
      const auto k = enc(key_of(c));
      auto it = index.find(k);
      if (it == index.end()) {
        index[k] = out.cells.size();
        out.cells.push_back(c);
      } else {
        CellAggregate& dst = out.cells[it->second];
        dst.trials += c.trials;
        dst.failures += c.failures;
        dst.retracted += c.retracted;
        if (c.min_margin < dst.min_margin) {
          dst.min_margin = c.min_margin;
          dst.argmin_digest = c.argmin_digest;
        }
        dst.proven = dst.proven && c.proven;
        dst.overlap = true;
      }
    }
    for (const auto& v : r.violations)
      if (seen_seeds.insert(v.seed).second) out.violations.push_back(v);
    out.wall_time_sec += r.wall_time_sec;
  }
  return out;
}

namespace {

MatrixC rotate(const MatrixC& m, const MatrixC& q) { return q.adjoint() * m * q; }

MatrixC drop_index(const MatrixC& m, int drop) {
  const int n = m.n();
  MatrixC out(n - 1);
  for (int i = 0, oi = 0; i < n; ++i) {
    if (i == drop) continue;
    for (int j = 0, oj = 0; j < n; ++j) {
      if (j == drop) continue;
      out(oi, oj) = m(i, j);
      ++oj;
    }
    ++oi;
  }
  return out;
}

MatrixC round_spectrum(const MatrixC& m, double grid) {
  const Spectrum s = eigh(HermitianMatrix(m));
  const int n = m.n();
  MatrixC out(n);
  for (int k = 0; k < n; ++k) {
    const double lam = std::max(0.0, std::round(s.values[k] / grid) * grid);
    if (lam == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const std::complex<double> col = lam * s.frame(i, k);
      for (int j = 0; j < n; ++j) out(i, j) += col * std::conj(s.frame(j, k));
    }
  }
  return hermitian_part(out);
}

bool holds(const ShrinkPredicate& pred, const ShrinkableCase& c) {
  try {
    return pred(c);
  } catch (...) {
    return false;
  }
}

}  // namespace

ShrinkPredicate violation_predicate(const CheckOptions& opts) {
  return [opts](const ShrinkableCase& c) {
    const auto out = evaluate(run_named_check(c, opts, /*allow_unproven=*/true));
    return out.min_margin < -out.tol;
  };
}

ShrinkOutcome shrink_counterexample(const ShrinkableCase& input, const ShrinkPredicate& pred) {
  if (!holds(pred, input)) return {input, false};

  ShrinkableCase cur = input;
  bool changed = false;
  bool progress = true;
  while (progress) {
    progress = false;

    // Dimension reduction on the joint eigenframe of A + B.
    if (cur.a.n() > 1) {
      const Spectrum joint = eigh(HermitianMatrix(hermitian_part(cur.a + cur.b)));
      for (int drop = 0; drop < cur.a.n() && !progress; ++drop) {
        ShrinkableCase cand = cur;
        cand.a = drop_index(rotate(cur.a, joint.frame), drop);
        cand.b = drop_index(rotate(cur.b, joint.frame), drop);
        if (cur.x) cand.x = drop_index(rotate(*cur.x, joint.frame), drop);
        if (cand.k && *cand.k > cand.a.n()) cand.k = cand.a.n();
        if (holds(pred, cand)) {
          cur = std::move(cand);
          changed = progress = true;
        }
      }
      if (progress) continue;
    }

    // Spectrum rounding, coarsest grid first.
    for (double grid : {1.0, 0.5, 0.25}) {
      for (int which = 0; which < 2 && !progress; ++which) {
        ShrinkableCase cand = cur;
        MatrixC& target = which == 0 ? cand.a : cand.b;
        target = round_spectrum(target, grid);
        const MatrixC& orig = which == 0 ? cur.a : cur.b;
        if ((target - orig).frobenius_norm() <= 1e-12) continue;
        if (holds(pred, cand)) {
          cur = std::move(cand);
          changed = progress = true;
        }
      }
      if (progress) break;
    }
    if (progress) continue;

    // Snap t and r to quarters.
    for (int which = 0; which < 2 && !progress; ++which) {
      std::optional<double>& param = which == 0 ? cur.t : cur.r;
      if (!param) continue;
      const double snapped = std::round(*param * 4.0) / 4.0;
      if (snapped == *param) continue;
      if (which == 0 && !(snapped > -2.0 && snapped <= 2.0)) continue;
      if (which == 1 && !(snapped >= 0.0 && snapped <= 2.0)) continue;
      ShrinkableCase cand = cur;
      (which == 0 ? cand.t : cand.r) = snapped;
      if (holds(pred, cand)) {
        cur = std::move(cand);
        changed = progress = true;
      }
    }
  }
  return {cur, changed};
}

void to_json(nlohmann::json& j, const CampaignSpec& s) {
  j = nlohmann::json{
      {"check", s.check},
      {"dims", s.dims},
      {"r_grid", s.r_grid},
      {"t_grid", s.t_grid},
      {"trials_per_cell", s.trials_per_cell},
      {"family", s.family},
      {"master_seed", s.master_seed},
      {"tol_override", s.tol_override ? nlohmann::json(*s.tol_override) : nlohmann::json(nullptr)},
      {"high_precision_recheck", s.high_precision_recheck},
      {"allow_unproven", s.allow_unproven},
  };
}

void from_json(const nlohmann::json& j, CampaignSpec& s) {
  s = CampaignSpec{};
  s.check = j.at("check").get<std::string>();
  s.dims = j.at("dims").get<std::vector<int>>();
  if (j.contains("r_grid")) s.r_grid = j.at("r_grid").get<std::vector<double>>();
  if (j.contains("t_grid")) s.t_grid = j.at("t_grid").get<std::vector<double>>();
  if (j.contains("trials_per_cell")) s.trials_per_cell = j.at("trials_per_cell").get<int>();
  if (j.contains("family")) s.family = j.at("family").get<std::string>();
  if (j.contains("master_seed")) s.master_seed = j.at("master_seed").get<uint64_t>();
  if (j.contains("tol_override") && !j.at("tol_override").is_null())
    s.tol_override = j.at("tol_override").get<double>();
  if (j.contains("high_precision_recheck"))
    s.high_precision_recheck = j.at("high_precision_recheck").get<bool>();
  if (j.contains("allow_unproven")) s.allow_unproven = j.at("allow_unproven").get<bool>();
}

namespace {

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> opt_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

void to_json(nlohmann::json& j, const CampaignReport& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"n", c.n},
                     {"r", opt_json(c.r)},
                     {"t", opt_json(c.t)},
                     {"trials", c.trials},
                     {"failures", c.failures},
                     {"retracted", c.retracted},
                     {"min_margin", c.min_margin},
                     {"argmin_digest", c.argmin_digest},
                     {"proven", c.proven},
                     {"overlap", c.overlap}});
  }
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"check", v.check},
                          {"n", v.n},
                          {"r", opt_json(v.r)},
                          {"t", opt_json(v.t)},
                          {"seed", v.seed},
                          {"A", v.a},
                          {"B", v.b},
                          {"X", v.x},
                          {"margins", v.margins},
                          {"recheck_min_margin", v.recheck_min_margin},
                          {"recheck_status", v.recheck_status}});
  }
  j = nlohmann::json{{"spec", r.spec},
                     {"cells", cells},
                     {"violations", violations},
                     {"wall_time_sec", r.wall_time_sec},
                     {"version", r.version}};
}

void from_json(const nlohmann::json& j, CampaignReport& r) {
  r = CampaignReport{};
  r.spec = j.at("spec").get<CampaignSpec>();
  for (const auto& c : j.at("cells")) {
    CellAggregate a;
    a.n = c.at("n").get<int>();
    a.r = opt_from(c.at("r"));
    a.t = opt_from(c.at("t"));
    a.trials = c.at("trials").get<int>();
    a.failures = c.at("failures").get<int>();
    a.retracted = c.at("retracted").get<int>();
    a.min_margin = c.at("min_margin").get<double>();
    a.argmin_digest = c.at("argmin_digest").get<std::string>();
    a.proven = c.at("proven").get<bool>();
    a.overlap = c.at("overlap").get<bool>();
    r.cells.push_back(std::move(a));
  }
  for (const auto& vj : j.at("violations")) {
    CampaignViolation v;
    v.check = vj.at("check").get<std::string>();
    v.n = vj.at("n").get<int>();
    v.r = opt_from(vj.at("r"));
    v.t = opt_from(vj.at("t"));
    v.seed = vj.at("seed").get<uint64_t>();
    v.a = vj.at("A");
    v.b = vj.at("B");
    v.x = vj.at("X");
    v.margins = vj.at("margins").get<std::vector<double>>();
    v.recheck_min_margin = vj.at("recheck_min_margin").get<double>();
    v.recheck_status = vj.at("recheck_status").get<std::string>();
    r.violations.push_back(std::move(v));
  }
  r.wall_time_sec = j.at("wall_time_sec").get<double>();
  r.version = j.at("version").get<std::string>();
}

std::string report_to_csv(const CampaignReport& r) {
  std::ostringstream out;
  out << "check,n,r,t,trials,min_margin,violations\n";
  for (const auto& c : r.cells) {
    int nviol = 0;
    for (const auto& v : r.violations) {
      if (v.n != c.n) continue;
      if (v.r.has_value() != c.r.has_value() || (v.r && *v.r != *c.r)) continue;
      if (v.t.has_value() != c.t.has_value() || (v.t && *v.t != *c.t)) continue;
      ++nviol;
    }
    out << r.spec.check << ',' << c.n << ',' << csv_cell(c.r) << ',' << csv_cell(c.t)
        << ',' << c.trials << ',' << format_double(c.min_margin) << ',' << nviol << '\n';
  }
  return out.str();
}

}  // namespace specheck
