// Acceptance suite: runs every criterion at its stated scale and tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria (capped at 1).
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "rsma/agents.hpp"
#include "rsma/centralized.hpp"
#include "rsma/emit.hpp"
#include "rsma/experiments.hpp"

using namespace rsma;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  int id;
  bool pass;
  std::string detail;
};

std::vector<Outcome> g_outcomes;
int g_aggregates_checked = 0;
int g_aggregates_violating = 0;

void report(int id, bool pass, const std::string& detail) {
  g_outcomes.push_back({id, pass, detail});
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

void note(const std::string& s) {
  std::printf("    %s\n", s.c_str());
  std::fflush(stdout);
}

void audit(const SweepTable& t) {
  for (const auto& row : t.rows) {
    ++g_aggregates_checked;
    if (!outage_bounds_hold(row.aggregate)) ++g_aggregates_violating;
  }
}

const SweepRow& row_of(const SweepTable& t, Scheme s, double value) {
  for (const auto& r : t.rows)
    if (r.scheme == s && r.axis_value == value) return r;
  throw std::runtime_error("missing sweep row");
}

// Per-trial samples rate * 1[feasible]; their mean is the effective throughput.
std::vector<double> throughput_samples(const SweepRow& row) {
  std::vector<double> x;
  for (const auto& r : row.records) x.push_back(r.feasible ? r.sum_rate : 0.0);
  return x;
}

double paired_ci(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= n;
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) var += std::pow(a[i] - b[i] - mean, 2);
  var /= (n - 1.0);
  return 1.96 * std::sqrt(var / n);
}

// ---------------------------------------------------------------------------

void criterion_gradient() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int states = 0, skipped = 0;
  const std::array<int, 3> sizes{2, 4, 8};
  for (std::uint64_t draw = 0; states < 100; ++draw) {
    SystemConfig cfg;
    cfg.K = sizes[draw % 3];
    cfg.impairment = Impairment::Practical;
    cfg.seed = 101;
    const TrialSetup setup = prepare_trial(cfg, draw);
    const DownlinkProblem& prob = setup.problem;
    const UtilityWeights w = utility_weights(cfg);
    Rng rng = make_stream(cfg.seed, draw, StreamTag::Test);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const double pt = p_total(cfg);
    PowerAllocation p{u(rng) * pt / (cfg.K + 1), RVector(cfg.K)};
    for (int k = 0; k < cfg.K; ++k) p.private_powers[k] = u(rng) * pt / (cfg.K + 1);
    const int k = static_cast<int>(draw % cfg.K);

    const double h = 1e-6 * p.private_powers[k];
    PowerAllocation lo = p, hi = p;
    lo.private_powers[k] -= h;
    hi.private_powers[k] += h;
    const Evaluation e_lo = evaluate(prob, lo), e_hi = evaluate(prob, hi);
    if (e_lo.dwpr[k] != e_hi.dwpr[k]) {
      ++skipped;
      continue;
    }
    auto utility = [&](const PowerAllocation& at, const Evaluation& e) {
      return agent_utility(k, at, e.report, e.record, e.dwpr[k], prob.fss[k], w, prob.link.tau_p,
                           prob.link.tau_c);
    };
    const double fd = (utility(hi, e_hi) - utility(lo, e_lo)) / (2.0 * h);
    const double an = utility_gradient(k, p, prob.gains, w, prob.link, 0.0);
    worst = std::max(worst, std::abs(an - fd) / std::max(std::abs(an), std::abs(fd)));
    ++states;
  }
  const double secs = seconds_since(t0);
  report(1, worst < 1e-6 && secs < 5.0,
         "max relative error " + fmt("%.3g", worst) + " over 100 states (" +
             std::to_string(skipped) + " indicator-jump states redrawn), " + fmt("%.2f", secs) +
             " s");
}

void criterion_minimax() {
  const auto t0 = Clock::now();
  SystemConfig cfg;
  cfg.K = 2;
  cfg.impairment = Impairment::Practical;
  cfg.seed = 202;
  const double pt = p_total(cfg);
  const double p_c = pt / 3.0;
  const double step = 1e-3 * pt;
  const int n = static_cast<int>(std::floor((pt - p_c) / step + 1e-9));
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const TrialSetup setup = prepare_trial(cfg, trial);
    const DownlinkProblem& prob = setup.problem;
    const MinimaxResult mm = minimax_bisection(prob, p_c);
    double grid_best = kDegeneracyCap;
    PowerAllocation p{p_c, RVector::Zero(2)};
    auto visit = [&](double p1, double p2) {
      p.private_powers << p1, p2;
      const SinrReport r = sinr_report(p, prob.gains, prob.link);
      const double d = std::max(local_degeneracy(prob.link.targets[0], r.private_sinrs[0]),
                                local_degeneracy(prob.link.targets[1], r.private_sinrs[1]));
      grid_best = std::min(grid_best, d);
    };
    // Interior lattice plus its projection onto the budget facet P_1 + P_2 = P_t - P_c.
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; a + b <= n; ++b) visit(a * step, b * step);
      visit(a * step, pt - p_c - a * step);
    }
    worst = std::max(worst, std::abs(mm.dsys - grid_best));
  }
  const double secs = seconds_since(t0);
  report(2, worst <= 2e-3 && secs < 60.0,
         "max |D_sys(bisection) - D_sys(grid)| = " + fmt("%.3g", worst) + " over 50 realizations, " +
             fmt("%.1f", secs) + " s");
}

void criterion_convergence() {
  const auto t0 = Clock::now();
  const std::map<int, double> limit{{2, 10.0}, {4, 30.0}, {8, 60.0}};
  bool pass = true;
  std::string detail;
  for (const auto& [k, lim] : limit) {
    SystemConfig cfg;
    cfg.K = k;
    cfg.trials = 200;
    cfg.seed = 303;
    cfg.stop_on_feasible = true;
    const ConvergenceSummary s = convergence_study(cfg);
    pass = pass && s.median_iterations <= lim && s.nonincreasing_fraction >= 0.95;
    detail += "K=" + std::to_string(k) + " median " + fmt("%.1f", s.median_iterations) +
              " (<= " + fmt("%.0f", lim) + "), final<=initial " +
              fmt("%.3f", s.nonincreasing_fraction) + "; ";

    cfg.stop_on_feasible = false;
    const ConvergenceSummary tol_only = convergence_study(cfg);
    note("K=" + std::to_string(k) + " power-tolerance-only stop: median " +
         fmt("%.1f", tol_only.median_iterations) + ", final<=initial " +
         fmt("%.3f", tol_only.nonincreasing_fraction));
  }
  const double secs = seconds_since(t0);
  report(3, pass && secs < 120.0, detail + fmt("%.1f", secs) + " s");
}

// ---------------------------------------------------------------------------
// Shared SNR sweep: K in {2, 8} x {Ideal, Practical}, 1000 paired trials.

const std::vector<double> kSnr{0, 5, 10, 15, 20};
const std::vector<Scheme> kAllocators{Scheme::AbmGradient, Scheme::AbmHeuristic,
                                      Scheme::AbmNoStructural, Scheme::Centralized};

struct SnrRuns {
  std::map<std::pair<int, Impairment>, SweepTable> tables;
  double seconds = 0.0;
};

SnrRuns run_snr_sweeps(int threads) {
  const auto t0 = Clock::now();
  SnrRuns out;
  for (int k : {2, 8}) {
    for (Impairment imp : {Impairment::Ideal, Impairment::Practical}) {
      SystemConfig cfg;
      cfg.K = k;
      cfg.impairment = imp;
      cfg.trials = 1000;
      cfg.seed = 505;
      cfg.threads = threads;
      out.tables[{k, imp}] = sweep(cfg, SweepAxis::SnrDb, kSnr, kAllocators);
      audit(out.tables[{k, imp}]);
    }
  }
  out.seconds = seconds_since(t0);
  return out;
}

void criterion_outage_ordering(const SnrRuns& runs) {
  bool mono = true, prac = true, users = true;
  std::string detail;
  for (const auto& [key, table] : runs.tables) {
    for (Scheme s : kAllocators) {
      int inversions = 0;
      bool beyond_ci = false;
      std::string curve;
      for (std::size_t i = 0; i < kSnr.size(); ++i) {
        const auto& a = row_of(table, s, kSnr[i]).aggregate;
        curve += fmt("%.3f ", a.outage_sys);
        if (i == 0) continue;
        const auto& prev = row_of(table, s, kSnr[i - 1]).aggregate;
        if (a.outage_sys > prev.outage_sys) {
          ++inversions;
          if (a.outage_sys - prev.outage_sys >
              std::hypot(a.ci_halfwidth, prev.ci_halfwidth))
            beyond_ci = true;
        }
      }
      if (inversions > 1 || beyond_ci) mono = false;
      note("K=" + std::to_string(key.first) + " " + to_string(key.second) + " " + to_string(s) +
           " outage vs SNR: " + curve);
    }
  }
  for (int k : {2, 8}) {
    for (Scheme s : kAllocators) {
      for (double snr : kSnr) {
        const double ideal =
            row_of(runs.tables.at({k, Impairment::Ideal}), s, snr).aggregate.outage_sys;
        const double practical =
            row_of(runs.tables.at({k, Impairment::Practical}), s, snr).aggregate.outage_sys;
        if (practical < ideal) {
          prac = false;
          note("(b) violated: K=" + std::to_string(k) + " " + to_string(s) + fmt(" %.0f dB", snr) +
               fmt(" Practical %.3f", practical) + fmt(" < Ideal %.3f", ideal));
        }
      }
    }
  }
  for (Impairment imp : {Impairment::Ideal, Impairment::Practical}) {
    for (Scheme s : kAllocators) {
      for (double snr : kSnr) {
        if (row_of(runs.tables.at({8, imp}), s, snr).aggregate.outage_sys <
            row_of(runs.tables.at({2, imp}), s, snr).aggregate.outage_sys) {
          users = false;
          note("(c) violated: " + to_string(imp) + " " + to_string(s) + fmt(" %.0f dB", snr));
        }
      }
    }
  }
  detail = std::string("(a) monotone in SNR ") + (mono ? "yes" : "no") +
           ", (b) Practical >= Ideal " + (prac ? "yes" : "no") + ", (c) K=8 >= K=2 " +
           (users ? "yes" : "no") + ", " + fmt("%.1f", runs.seconds) + " s";
  report(5, mono && prac && users && runs.seconds < 600.0, detail);
}

void criterion_sparse_benchmark(const SnrRuns& runs) {
  const SweepTable& t = runs.tables.at({2, Impairment::Ideal});
  bool pass = true;
  std::string detail;
  for (double snr : {10.0, 15.0, 20.0}) {
    const double abm = row_of(t, Scheme::AbmGradient, snr).aggregate.mean_rate;
    const double cen = row_of(t, Scheme::Centralized, snr).aggregate.mean_rate;
    const double gap = (cen - abm) / abm;
    pass = pass && cen >= 0.98 * abm && gap <= 0.15;
    detail += fmt("%.0f dB: ", snr) + fmt("ABM %.3f", abm) + fmt(" vs centralized %.3f", cen) +
              fmt(" (gap %+.2f%%); ", 100.0 * gap);
  }
  report(6, pass, detail);
}

void criterion_ablation(const SnrRuns& runs) {
  const SweepTable& t = runs.tables.at({8, Impairment::Practical});
  const SweepRow& with = row_of(t, Scheme::AbmGradient, 20.0);
  const SweepRow& without = row_of(t, Scheme::AbmNoStructural, 20.0);
  const double diff = with.aggregate.effective_throughput - without.aggregate.effective_throughput;
  const double ci = paired_ci(throughput_samples(with), throughput_samples(without));
  report(7, diff > ci,
         fmt("T_eff with DWPR+FSS %.4f", with.aggregate.effective_throughput) +
             fmt(", without %.4f", without.aggregate.effective_throughput) +
             fmt(", difference %.4f", diff) + fmt(" vs paired 95%% CI half-width %.4f", ci) +
             fmt(" (outage %.3f", with.aggregate.outage_sys) +
             fmt(" / %.3f)", without.aggregate.outage_sys));
}

// ---------------------------------------------------------------------------

const std::vector<double> kPilotFractions{0.01, 0.02, 0.03, 0.05, 0.08, 0.12, 0.20};

SweepTable run_pilot_sweep(int threads) {
  SystemConfig cfg;
  cfg.K = 4;
  cfg.snr_db = 16.0;
  cfg.impairment = Impairment::Practical;
  cfg.pilot.error_mode = PilotDerived{};
  cfg.pilot.pilot_snr_offset_db = -10.0;
  cfg.trials = 500;
  cfg.seed = 808;
  cfg.threads = threads;
  return sweep(cfg, SweepAxis::PilotFraction, kPilotFractions,
               {Scheme::AbmGradient, Scheme::Centralized});
}

void criterion_pilot(const SweepTable& t, double secs) {
  audit(t);
  bool pass = secs < 300.0;
  std::string detail;
  for (Scheme s : {Scheme::AbmGradient, Scheme::Centralized}) {
    std::vector<double> x, y, se;
    for (const auto& r : t.rows) {
      if (r.scheme != s) continue;
      x.push_back(r.axis_value);
      y.push_back(r.aggregate.effective_throughput);
      se.push_back(r.aggregate.throughput_stderr);
    }
    const std::size_t best = std::max_element(y.begin(), y.end()) - y.begin();
    bool unimodal = best > 0 && best + 1 < y.size();
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
      const double noise = 1.96 * std::hypot(se[i], se[i + 1]);
      if (i < best && y[i + 1] < y[i] - noise) unimodal = false;
      if (i >= best && y[i + 1] > y[i] + noise) unimodal = false;
    }
    const bool in_range = x[best] >= 0.02 && x[best] <= 0.10;
    pass = pass && unimodal && in_range;
    std::string curve;
    for (std::size_t i = 0; i < y.size(); ++i) curve += fmt("%.2f:", x[i]) + fmt("%.3f ", y[i]);
    note(to_string(s) + " T_eff vs pilot fraction: " + curve);
    detail += to_string(s) + fmt(" argmax %.2f", x[best]) +
              (unimodal ? " unimodal; " : " not unimodal; ");
  }
  for (const auto& w : t.warnings) note("skipped: " + w);
  report(8, pass, detail + fmt("%.1f s", secs));
}

void criterion_knee() {
  const auto t0 = Clock::now();
  SystemConfig cfg;
  cfg.M_t = 10;
  cfg.snr_db = 22.0;
  cfg.trials = 500;
  cfg.seed = 909;
  std::vector<double> ks;
  for (int k = 2; k <= 10; ++k) ks.push_back(k);
  const SweepTable t = sweep(cfg, SweepAxis::Users, ks, kAllocators);
  audit(t);
  bool pass = true;
  std::string detail;
  for (Scheme s : kAllocators) {
    const double t2 = row_of(t, s, 2).aggregate.effective_throughput;
    const double t9 = row_of(t, s, 9).aggregate.effective_throughput;
    const double t10 = row_of(t, s, 10).aggregate.effective_throughput;
    pass = pass && t10 < t9 && t9 >= t2;
    std::string curve;
    for (double k : ks) curve += fmt("%.2f ", row_of(t, s, k).aggregate.effective_throughput);
    note(to_string(s) + " T_eff for K=2..10: " + curve);
    detail += to_string(s) + fmt(" K=2 %.2f", t2) + fmt(", K=9 %.2f", t9) +
              fmt(", K=10 %.2f; ", t10);
  }
  report(9, pass, detail + fmt("%.1f s", seconds_since(t0)));
}

bool same_records(const SweepTable& a, const SweepTable& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& ra = a.rows[i].records;
    const auto& rb = b.rows[i].records;
    if (ra.size() != rb.size()) return false;
    for (std::size_t j = 0; j < ra.size(); ++j) {
      if (ra[j].final_dsys != rb[j].final_dsys || ra[j].sum_rate != rb[j].sum_rate ||
          ra[j].iterations != rb[j].iterations || ra[j].per_user_d != rb[j].per_user_d ||
          ra[j].powers.private_powers != rb[j].powers.private_powers ||
          ra[j].powers.common_power != rb[j].powers.common_power)
        return false;
    }
  }
  // The config echo records the worker count; everything else must match.
  auto ja = sweep_json(a), jb = sweep_json(b);
  ja["config"].erase("threads");
  jb["config"].erase("threads");
  return sweep_csv(a) == sweep_csv(b) && ja.dump() == jb.dump();
}

void criterion_determinism(const SweepTable& pilot_serial, const SnrRuns& snr_serial) {
  const auto t0 = Clock::now();
  const SweepTable pilot_repeat = run_pilot_sweep(1);
  const SweepTable pilot_parallel = run_pilot_sweep(4);
  bool pass = same_records(pilot_serial, pilot_repeat) && same_records(pilot_serial, pilot_parallel);

  SystemConfig cfg;
  cfg.K = 8;
  cfg.impairment = Impairment::Practical;
  cfg.trials = 1000;
  cfg.seed = 505;
  cfg.threads = 3;
  const SweepTable snr_parallel = sweep(cfg, SweepAxis::SnrDb, kSnr, kAllocators);
  pass = pass && same_records(snr_serial.tables.at({8, Impairment::Practical}), snr_parallel);

  SystemConfig conv;
  conv.K = 4;
  conv.trials = 200;
  conv.seed = 303;
  conv.stop_on_feasible = true;
  const std::string c1 = convergence_csv({convergence_study(conv)});
  conv.threads = 4;
  pass = pass && c1 == convergence_csv({convergence_study(conv)});

  report(10, pass,
         std::string("pilot sweep (repeat, 4 threads), K=8 Practical SNR sweep (3 threads) and "
                     "convergence study (4 threads) ") +
             (pass ? "bit-identical" : "DIFFER") + fmt(", %.1f s", seconds_since(t0)));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion_gradient();
  criterion_minimax();
  criterion_convergence();

  const SnrRuns snr = run_snr_sweeps(1);
  criterion_outage_ordering(snr);
  criterion_sparse_benchmark(snr);
  criterion_ablation(snr);

  const auto p0 = Clock::now();
  const SweepTable pilot = run_pilot_sweep(1);
  criterion_pilot(pilot, seconds_since(p0));
  criterion_knee();

  report(4, g_aggregates_violating == 0,
         std::to_string(g_aggregates_checked) + " aggregates checked, " +
             std::to_string(g_aggregates_violating) + " violate max_k P_k <= P_sys <= min(1, sum_k P_k)");
  criterion_determinism(pilot, snr);

  int failed = 0;
  for (const auto& o : g_outcomes) failed += o.pass ? 0 : 1;
  std::printf("summary: %d/%zu criteria passed, %.1f s total\n",
              static_cast<int>(g_outcomes.size()) - failed, g_outcomes.size(), seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
