#include "seobs/commands.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "seobs/observer.hpp"
#include "seobs/scenario_io.hpp"
#include "seobs/selftest.hpp"

namespace seobs {

Scenario resolve_scenario(const std::string& source) {
  if (auto s = builtin_scenario(source)) {
    return *s;
  }
  return load_scenario_file(source);
}

Scenario apply_overrides(Scenario s, const RunOverrides& o) {
  if (o.dt) s.dt = *o.dt;
  if (o.duration) s.duration = *o.duration;
  if (o.seed) s.rng_seed = *o.seed;
  if (o.noise) s.noise = *o.noise;
  if (o.bias_law) s.bias_law = *o.bias_law;
  if (o.true_bias) s.true_bias = *o.true_bias;
  if (o.bias_estimate) s.initial_bias_estimate = *o.bias_estimate;
  if (o.true_rotvec || o.true_position) {
    s.initial_true_pose = Pose(o.true_rotvec ? exp_so3(*o.true_rotvec) : s.initial_true_pose.rotation(),
                               o.true_position.value_or(s.initial_true_pose.position()));
  }
  if (o.estimate_rotvec || o.estimate_position) {
    s.initial_estimate = Pose(o.estimate_rotvec ? exp_so3(*o.estimate_rotvec) : s.initial_estimate.rotation(),
                              o.estimate_position.value_or(s.initial_estimate.position()));
  }
  s.validate();
  return s;
}

std::filesystem::path default_output_dir() {
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    return dir;
  }
  return ".";
}

namespace {

template <typename Metric>
std::optional<double> settle_time(const TrajectoryLog& log, Metric metric, double threshold) {
  // Scan backwards for the last violation.
  for (std::size_t k = log.rows.size(); k-- > 0;) {
    if (metric(log.rows[k]) > threshold) {
      if (k + 1 == log.rows.size()) {
        return std::nullopt;
      }
      return log.rows[k + 1].t;
    }
  }
  return log.rows.empty() ? std::nullopt : std::optional<double>(log.rows.front().t);
}

// Six significant digits, for console summaries.
std::string short_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

std::string settle_text(const std::optional<double>& t) {
  return t ? "t=" + short_number(*t) + " s" : "not reached";
}

bool write_file(const std::filesystem::path& path, const std::string& what,
                void (*writer)(std::ostream&, const TrajectoryLog&), const TrajectoryLog& log,
                std::ostream& err) {
  std::ofstream f(path);
  if (!f) {
    err << "error: cannot write " << what << " '" << path.string() << "'\n";
    return false;
  }
  writer(f, log);
  f.flush();
  if (!f) {
    err << "error: failed while writing " << what << " '" << path.string() << "'\n";
    return false;
  }
  return true;
}

struct JobResult {
  int status = kExitOk;
  std::string out;
  std::string err;
};

JobResult run_one(const std::string& source, const RunConfig& cfg) {
  JobResult res;
  std::ostringstream out;
  std::ostringstream err;
  try {
    const Scenario s = apply_overrides(resolve_scenario(source), cfg.overrides);
    const TrajectoryLog log = run_scenario(s);
    const std::filesystem::path csv =
        cfg.out ? *cfg.out : default_output_dir() / (s.name + ".csv");
    if (!write_file(csv, "CSV", &write_trajectory_csv, log, err)) {
      res.status = kExitUsage;
    }
    if (res.status == kExitOk && cfg.plot_data_dir) {
      std::error_code ec;
      std::filesystem::create_directories(*cfg.plot_data_dir, ec);
      const auto base = *cfg.plot_data_dir / s.name;
      if (!write_file(base.string() + "_fig1.csv", "plot data", &write_pose_plot_data, log, err) ||
          !write_file(base.string() + "_fig2.csv", "plot data", &write_bias_plot_data, log, err)) {
        res.status = kExitUsage;
      }
    }
    for (const auto& w : log.warnings) {
      err << "warning: " << s.name << ": " << w << '\n';
    }
    if (res.status == kExitOk) {
      const ConvergenceSummary sum = summarize(log);
      out << s.name << ": " << log.rows.size() << " rows -> " << csv.string() << '\n'
          << "  observability: " << to_string(log.observability.kind)
          << ", bias law: " << to_string(s.bias_law) << '\n'
          << "  final: rot_err=" << short_number(sum.final_rot_err)
          << " rad, pos_err=" << short_number(sum.final_pos_err)
          << " m, |b~_Omega|=" << short_number(sum.final_bias_angular_err)
          << " rad/s, |b~_V|=" << short_number(sum.final_bias_linear_err) << " m/s\n"
          << "  settles: rot<=" << short_number(kRotSettleThreshold) << " "
          << settle_text(sum.rot_settle) << "; pos<=" << short_number(kPosSettleThreshold) << " "
          << settle_text(sum.pos_settle) << "; |b~_Omega|<="
          << short_number(kBiasAngularSettleThreshold) << " "
          << settle_text(sum.bias_angular_settle)
          << "; |b~_V|<=" << short_number(kBiasLinearSettleThreshold) << " "
          << settle_text(sum.bias_linear_settle) << '\n';
    }
  } catch (const NumericalFailure& e) {
    err << "error: " << source << ": " << e.what() << '\n';
    res.status = kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << source << ": " << e.what() << '\n';
    res.status = kExitUsage;
  }
  res.out = out.str();
  res.err = err.str();
  return res;
}

}  // namespace

ConvergenceSummary summarize(const TrajectoryLog& log) {
  ConvergenceSummary s;
  if (log.rows.empty()) {
    return s;
  }
  const LogRow& last = log.rows.back();
  s.final_rot_err = last.rot_err;
  s.final_pos_err = last.pos_err;
  s.final_bias_angular_err = last.bias_angular_err;
  s.final_bias_linear_err = last.bias_linear_err;
  s.rot_settle = settle_time(log, [](const LogRow& r) { return r.rot_err; }, kRotSettleThreshold);
  s.pos_settle = settle_time(log, [](const LogRow& r) { return r.pos_err; }, kPosSettleThreshold);
  s.bias_angular_settle = settle_time(
      log, [](const LogRow& r) { return r.bias_angular_err; }, kBiasAngularSettleThreshold);
  s.bias_linear_settle = settle_time(
      log, [](const LogRow& r) { return r.bias_linear_err; }, kBiasLinearSettleThreshold);
  return s;
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.scenarios.empty()) {
    err << "error: no scenario given\n";
    return kExitUsage;
  }
  if (cfg.out && cfg.scenarios.size() > 1) {
    err << "error: --out applies to a single scenario; use " << kOutputDirEnv
        << " for batches\n";
    return kExitUsage;
  }

  std::vector<JobResult> results(cfg.scenarios.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(cfg.scenarios.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < cfg.scenarios.size(); ++i) {
      results[i] = run_one(cfg.scenarios[i], cfg);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cfg.scenarios.size(); i = next++) {
          results[i] = run_one(cfg.scenarios[i], cfg);
        }
      });
    }
    for (auto& t : pool) {
      t.join();
    }
  }

  int status = kExitOk;
  for (const auto& r : results) {
    out << r.out;
    err << r.err;
    status = std::max(status, r.status);
  }
  return status;
}

int cmd_check(const std::string& source, std::ostream& out, std::ostream& err) {
  Scenario s;
  try {
    s = resolve_scenario(source);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const ObservabilityReport a1 = check_observability_a1(s.reference_points());
  const ObservabilityMatrices a2 = observability_matrices_a2(s.references());

  out << "Assumption 1: " << to_string(a1.kind) << "; Assumption 2: "
      << (a2.full_rank ? "full rank" : "not full rank") << '\n';
  out << "  references: " << s.geometry.size() << " (";
  for (std::size_t i = 0; i < s.geometry.size(); ++i) {
    out << (i ? ", " : "") << (s.geometry[i].kind == ReferenceSpec::Kind::Point ? "point" : "vector");
  }
  out << ")\n";
  out << "  assumption 1 margin: " << short_number(a1.margin)
      << (a1.near_degenerate && a1.kind != ObservabilityCase::NotSatisfied ? " (near-degenerate)"
                                                                           : "")
      << '\n';
  out << "  cond(G) = " << short_number(a2.cond_g) << ", cond(H) = " << short_number(a2.cond_h)
      << '\n';
  if (!a2.diagnostic.empty()) {
    out << "  " << a2.diagnostic << '\n';
  }
  if (a1.near_degenerate && a1.kind != ObservabilityCase::NotSatisfied) {
    err << "warning: reference geometry is close to degenerate\n";
  }
  return (a1.kind != ObservabilityCase::NotSatisfied && a2.full_rank) ? kExitOk : kExitNumerical;
}

int cmd_selftest(std::uint64_t seed, std::size_t samples, bool inject_sign_error,
                 std::ostream& out) {
  SelftestOptions opt;
  opt.seed = seed;
  opt.samples = samples;
  if (inject_sign_error) {
    opt.innovation = [](const Pose& x, const MeasurementSet& m) { return -innovation(x, m); };
  }
  bool all = true;
  for (const auto& r : run_selftest(opt)) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << "  worst=" << short_number(r.worst)
        << "  tol=" << short_number(r.tolerance) << '\n';
    all = all && r.passed;
  }
  return all ? kExitOk : kExitNumerical;
}

}  // namespace seobs
