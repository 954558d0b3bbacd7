#include "blackstart/cli/commands.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <span>

#include "blackstart/kernels/kernels.hpp"

#ifndef BLACKSTART_VERSION
#define BLACKSTART_VERSION "unknown"
#endif

namespace blackstart::cli {

using scenario::ScenarioError;
using scenario::SimulationResult;

const char* version() { return BLACKSTART_VERSION; }

ScenarioFile resolve(const RunConfig& config) {
  if (config.dt_s && !(std::isfinite(*config.dt_s) && *config.dt_s > 0.0)) {
    throw ConfigError(fmt::format("--dt must be a positive time step, got {}", *config.dt_s));
  }
  if (config.duration_s && !(std::isfinite(*config.duration_s) && *config.duration_s > 0.0)) {
    throw ConfigError(fmt::format("--duration must be positive, got {}", *config.duration_s));
  }
  if (config.decimation && *config.decimation < 1) {
    throw ConfigError("--decimate must be at least 1");
  }

  ScenarioFile s = load_scenario(config.scenario);
  auto& run = s.definition.run;
  if (config.dt_s) run.dt_s = *config.dt_s;
  if (config.duration_s) run.duration_s = *config.duration_s;
  if (config.decimation) run.decimation = *config.decimation;
  if (config.no_saturation) run.saturation = false;
  if (config.current_limiter) run.current_limiter = true;
  if (config.enable_resync) {
    s.definition.grid.enabled = true;
    if (s.schedule.count(scenario::Action::SynchrocheckArm) == 0) {
      s.schedule.events.push_back({s.schedule.last_time() + 2.0, scenario::Action::SynchrocheckArm, "", 0.0});
    }
  }
  if (s.schedule.last_time() > run.duration_s) {
    throw ConfigError(fmt::format("duration {} s ends before the last event at {} s", run.duration_s,
                                  s.schedule.last_time()));
  }
  scenario::validate_case(s.definition);
  scenario::validate_schedule(s.schedule, s.definition);
  return s;
}

std::string format_timeseries_csv(const circuit::TimeSeries& series) {
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "time_s");
  for (const auto& ch : series.channels()) fmt::format_to(std::back_inserter(out), ",{}[{}]", ch.name, ch.unit);
  out.push_back('\n');
  const auto& time = series.time();
  std::vector<const std::vector<double>*> columns;
  for (std::size_t c = 0; c < series.channels().size(); ++c) columns.push_back(&series.values(c));
  for (std::size_t k = 0; k < time.size(); ++k) {
    fmt::format_to(std::back_inserter(out), "{:.9g}", time[k]);
    for (const auto* col : columns) fmt::format_to(std::back_inserter(out), ",{:.9g}", (*col)[k]);
    out.push_back('\n');
  }
  return fmt::to_string(out);
}

std::string format_violations(const measure::ViolationReport& report) {
  std::string out = fmt::format("{} violation(s)\n", report.count());
  for (const auto& v : report.violations) {
    out += fmt::format("{} {} in {}: {:.6g} s to {:.6g} s, worst {:.6g} against {:.6g}, {} excursion(s) "
                       "totalling {:.6g} s\n",
                       v.signal, measure::to_string(v.kind), v.stage.empty() ? "-" : v.stage, v.start, v.end,
                       v.worst, v.limit, v.excursions, v.duration_s);
  }
  out += "\n# machine-readable\n";
  out += fmt::format("violation.count = {}\n", report.count());
  for (std::size_t i = 0; i < report.violations.size(); ++i) {
    const auto& v = report.violations[i];
    const auto p = fmt::format("violation.{}", i + 1);
    out += fmt::format("{}.signal = {}\n", p, v.signal);
    out += fmt::format("{}.kind = {}\n", p, measure::to_string(v.kind));
    out += fmt::format("{}.stage = {}\n", p, v.stage);
    out += fmt::format("{}.start_s = {:.9g}\n", p, v.start);
    out += fmt::format("{}.end_s = {:.9g}\n", p, v.end);
    out += fmt::format("{}.worst = {:.9g}\n", p, v.worst);
    out += fmt::format("{}.limit = {:.9g}\n", p, v.limit);
    out += fmt::format("{}.excursions = {}\n", p, v.excursions);
    out += fmt::format("{}.duration_s = {:.9g}\n", p, v.duration_s);
  }
  return out;
}

std::string format_stages(const std::vector<scenario::StageTransition>& stages) {
  std::string out;
  for (const auto& t : stages) out += fmt::format("{:.6g} s: {}\n", t.time, scenario::to_string(t.stage));
  out += "\n# machine-readable\n";
  out += fmt::format("stage.count = {}\n", stages.size());
  for (std::size_t i = 0; i < stages.size(); ++i) {
    out += fmt::format("stage.{}.time_s = {:.9g}\n", i + 1, stages[i].time);
    out += fmt::format("stage.{}.name = {}\n", i + 1, scenario::to_string(stages[i].stage));
  }
  return out;
}

std::string format_events(const std::vector<scenario::LoggedEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    out += fmt::format("{:.6f} {}{}{}\n", e.time, e.what, e.target.empty() ? "" : " ", e.target);
  }
  return out;
}

std::string format_summary(const scenario::Summary& summary) {
  std::string out;
  for (const auto& [k, v] : summary.entries()) out += fmt::format("{} = {:.9g}\n", k, v);
  return out;
}

int exit_code_for(const SimulationResult& result) {
  return result.violations.empty() ? kExitClean : kExitViolations;
}

std::string format_manifest(const ScenarioFile& input, const SimulationResult& result, double wall_time_s,
                            int exit_code) {
  std::string out = fmt::format("# blackstart {}\n", version());
  out += fmt::format("# wall_time_s = {:.3f}\n", wall_time_s);
  out += fmt::format("# exit_code = {}\n", exit_code);
  for (const auto& w : result.warnings) out += fmt::format("# warning: {}\n", w);
  out += "#\n# Input as run; pass this file as --scenario to repeat it.\n";
  out += serialize_scenario(input);
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report_run(std::ostream& log, const ScenarioFile& input, const SimulationResult& r,
                const std::filesystem::path& dir) {
  for (const auto& w : r.warnings) log << "warning: " << w << '\n';
  log << fmt::format("{}: {} violation(s), peak BESS current {:.3f} pu, outputs in {}\n",
                     input.definition.name, r.violations.count(), r.summary.get("peak_bess_i_pu"), dir.string());
}

}  // namespace

void write_run(const std::filesystem::path& dir, const ScenarioFile& input, const SimulationResult& result,
               double wall_time_s) {
  std::filesystem::create_directories(dir);
  write_file(dir / "timeseries.csv", format_timeseries_csv(result.series));
  write_file(dir / "violations.txt", format_violations(result.violations));
  write_file(dir / "stages.txt", format_stages(result.stages));
  write_file(dir / "events.txt", format_events(result.events));
  write_file(dir / "summary.txt", format_summary(result.summary));
  write_file(dir / "manifest.txt", format_manifest(input, result, wall_time_s, exit_code_for(result)));
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    const ScenarioFile input = resolve(config);
    const auto t0 = std::chrono::steady_clock::now();
    const SimulationResult result = scenario::simulate(input.definition, input.schedule);
    write_run(config.out_dir, input, result, seconds_since(t0));
    report_run(log, input, result, config.out_dir);
    return exit_code_for(result);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
  } catch (const ScenarioError& e) {
    log << "scenario error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    log << "run failed: " << e.what() << '\n';
  }
  return kExitFailure;
}

namespace {

// Linear interpolation of (time, x) at t. Grid points within a nanosecond
// of a sample take the sample as is.
double sample_at(const std::vector<double>& time, const std::vector<double>& x, double t) {
  const auto it = std::lower_bound(time.begin(), time.end(), t - 1e-9);
  if (it == time.end()) return x.back();
  const auto k = static_cast<std::size_t>(it - time.begin());
  if (std::abs(*it - t) <= 1e-9 || k == 0) return x[k];
  const double w = (t - time[k - 1]) / (time[k] - time[k - 1]);
  return x[k - 1] + w * (x[k] - x[k - 1]);
}

}  // namespace

ComparisonReport compare(const SimulationResult& a, const SimulationResult& b, double steady_window_s) {
  const auto& ca = a.series.channels();
  const auto& cb = b.series.channels();
  const auto names = [](const std::vector<circuit::Channel>& chs) {
    std::vector<std::string> n;
    for (const auto& c : chs) n.push_back(c.name);
    std::sort(n.begin(), n.end());
    return n;
  };
  if (names(ca) != names(cb)) {
    throw ConfigError(fmt::format("channel mismatch: {} has {} channels, {} has {}", a.case_name, ca.size(),
                                  b.case_name, cb.size()));
  }
  if (a.series.size() < 2 || b.series.size() < 2) throw ConfigError("both runs need at least two samples");

  ComparisonReport rep;
  rep.name_a = a.case_name;
  rep.name_b = b.case_name;
  const auto& ta = a.series.time();
  const auto& tb = b.series.time();
  rep.t_begin = std::max(ta.front(), tb.front());
  rep.t_end = std::min(ta.back(), tb.back());
  if (rep.t_end <= rep.t_begin) throw ConfigError("the runs do not overlap in time");
  const double da = a.series.sample_interval();
  const double db = b.series.sample_interval();
  rep.interval = std::max(da, db);
  if (std::abs(da - db) > 1e-12 * rep.interval) {
    rep.notes.push_back(fmt::format("sample intervals differ ({:.6g} s and {:.6g} s); both resampled to {:.6g} s",
                                    da, db, rep.interval));
  }
  if (ta.back() != tb.back() || ta.front() != tb.front()) {
    rep.notes.push_back(fmt::format("compared over the common span {:.6g} s to {:.6g} s", rep.t_begin, rep.t_end));
  }

  const auto n = static_cast<std::size_t>(std::floor((rep.t_end - rep.t_begin) / rep.interval + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t k = 0; k < n; ++k) grid[k] = rep.t_begin + static_cast<double>(k) * rep.interval;
  std::size_t steady_from = 0;
  while (steady_from + 1 < n && grid[steady_from] < rep.t_end - steady_window_s) ++steady_from;

  std::vector<std::vector<double>> resampled;
  for (const auto& ch : ca) {
    for (const auto* r : {&a, &b}) {
      const auto& x = r->series.values(ch.name);
      std::vector<double> y(n);
      for (std::size_t k = 0; k < n; ++k) y[k] = sample_at(r->series.time(), x, grid[k]);
      resampled.push_back(std::move(y));
    }
  }
  std::vector<std::span<const double>> full;
  std::vector<std::span<const double>> tail;
  for (const auto& y : resampled) {
    full.emplace_back(y);
    tail.emplace_back(std::span<const double>(y).subspan(steady_from));
  }
  const auto peak = kernels::omp::channel_stats(full);
  const auto steady = kernels::omp::channel_stats(tail);
  for (std::size_t c = 0; c < ca.size(); ++c) {
    rep.channels.push_back({ca[c].name, ca[c].unit, peak[2 * c].peak_abs, peak[2 * c + 1].peak_abs,
                            steady[2 * c].mean, steady[2 * c + 1].mean});
  }

  rep.peak_bess_i_a = a.summary.get("peak_bess_i_energisation_pu");
  rep.peak_bess_i_b = b.summary.get("peak_bess_i_energisation_pu");
  rep.worst_v_a = a.summary.get("worst_bess_v_excursion_pu");
  rep.worst_v_b = b.summary.get("worst_bess_v_excursion_pu");
  return rep;
}

std::string format_comparison(const ComparisonReport& r) {
  std::string out = fmt::format("A = {}\nB = {}\n", r.name_a, r.name_b);
  for (const auto& note : r.notes) out += "note: " + note + "\n";
  out += "\n";
  out += fmt::format("{:<36} {:>12} {:>12} {:>10}\n", "", "A", "B", "A/B");
  out += fmt::format("{:<36} {:>12.4f} {:>12.4f} {:>10.2f}\n", "peak BESS current, energisation [pu]",
                     r.peak_bess_i_a, r.peak_bess_i_b, r.peak_ratio());
  out += fmt::format("{:<36} {:>12.4f} {:>12.4f}\n", "worst BESS voltage deviation [pu]", r.worst_v_a, r.worst_v_b);
  out += "\n";
  out += fmt::format("{:<24} {:>8} {:>13} {:>13} {:>13} {:>13} {:>13} {:>13}\n", "channel", "unit", "peak A",
                     "peak B", "peak B-A", "steady A", "steady B", "steady B-A");
  for (const auto& c : r.channels) {
    out += fmt::format("{:<24} {:>8} {:>13.6g} {:>13.6g} {:>13.6g} {:>13.6g} {:>13.6g} {:>13.6g}\n", c.name, c.unit,
                       c.peak_a, c.peak_b, c.peak_b - c.peak_a, c.steady_a, c.steady_b, c.steady_b - c.steady_a);
  }
  return out;
}

int compare_runs(const RunConfig& a, const RunConfig& b, const std::filesystem::path& out_dir, std::ostream& log) {
  try {
    const ScenarioFile in_a = resolve(a);
    const ScenarioFile in_b = resolve(b);
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = scenario::simulate_all({{in_a.definition, in_a.schedule}, {in_b.definition, in_b.schedule}});
    const double wall = seconds_since(t0);
    write_run(out_dir / "a", in_a, results[0], wall);
    write_run(out_dir / "b", in_b, results[1], wall);
    report_run(log, in_a, results[0], out_dir / "a");
    report_run(log, in_b, results[1], out_dir / "b");
    const std::string text = format_comparison(compare(results[0], results[1]));
    write_file(out_dir / "comparison.txt", text);
    log << text;
    return kExitClean;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
  } catch (const ScenarioError& e) {
    log << "scenario error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    log << "compare failed: " << e.what() << '\n';
  }
  return kExitFailure;
}

}  // namespace blackstart::cli
