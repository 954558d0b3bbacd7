#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "blackstart/cli/commands.hpp"
#include "blackstart/cli/scenario_file.hpp"

using namespace blackstart;
using namespace blackstart::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("blackstart_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Soft charge only, 0.8 s.
ScenarioFile short_soft_charge() {
  ScenarioFile s = builtin_scenario("default-blackstart");
  s.schedule.events.resize(2);
  s.definition.run.duration_s = 0.8;
  return s;
}

ScenarioFile short_hard_switch() {
  ScenarioFile s = builtin_scenario("hard-switch");
  s.definition.run.duration_s = 1.3;
  return s;
}

fs::path scenario_on_disk(const fs::path& dir, const ScenarioFile& s) {
  const fs::path p = dir / "scenario.txt";
  write_text(p, serialize_scenario(s));
  return p;
}

// Error message of parse_scenario(text), or "" if it parsed.
template <class E>
std::string parse_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const E& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("built-in scenarios round trip through the file format") {
  for (const char* name : {"default-blackstart", "hard-switch"}) {
    const ScenarioFile s = builtin_scenario(name);
    const std::string text = serialize_scenario(s);
    const ScenarioFile back = parse_scenario(text);
    CHECK(back == s);
    CHECK(serialize_scenario(back) == text);
  }
  CHECK(builtin_scenario("default-blackstart").definition == scenario::build_default_case());
  CHECK(builtin_scenario("default-blackstart").schedule == scenario::default_schedule());
  CHECK_THROWS_AS(builtin_scenario("no-such-case"), scenario::ScenarioError);
}

TEST_CASE("round trip keeps less common settings") {
  ScenarioFile s = builtin_scenario("default-blackstart");
  s.definition.grid.enabled = true;
  s.definition.bess.params.current_limit_pu = 1.15;
  s.definition.run.saturation = false;
  s.definition.run.decimation = 7;
  s.definition.envelope.v_max_pu = 0.1 + 1.0;  // not exactly representable in short form
  s.definition.envelope.frequency_channels = {"island_f", "bess_f"};
  s.definition.wt_params.pll.k_p = 1.0 / 3.0;
  s.schedule.events.push_back({21.0, scenario::Action::SynchrocheckArm, "", 0.0});
  for (auto& e : s.definition.elements) {
    if (auto* tx = std::get_if<circuit::TwoWindingTransformer>(&e.kind); tx && e.id == "tx_400") {
      tx->core = circuit::LinearCore{812.5};
      tx->core_side = circuit::CoreSide::Lv;
    }
  }
  const ScenarioFile back = parse_scenario(serialize_scenario(s));
  CHECK(back == s);
}

TEST_CASE("comments, blank lines and spacing are ignored") {
  const std::string text = serialize_scenario(builtin_scenario("hard-switch"));
  std::string noisy;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) line = "  " + line.substr(0, eq) + "=" + line.substr(eq + 3) + "   # note\r";
    noisy += line + "\n\n";
  }
  CHECK(parse_scenario(noisy) == builtin_scenario("hard-switch"));
}

TEST_CASE("syntax errors carry line and column") {
  const std::string base = serialize_scenario(builtin_scenario("hard-switch"));

  try {
    parse_scenario("case.name = x\n\nbess.bogus_mw = 3\n");
    FAIL("expected an error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 1);
    CHECK(std::string(e.what()).find("bess.bogus_mw") != std::string::npos);
  }

  try {
    parse_scenario("# header\nrun.dt_s = fast\n");
    FAIL("expected an error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 12);
  }

  CHECK(parse_error<SyntaxError>("run.dt_s 5\n").find("line 1") != std::string::npos);
  CHECK(parse_error<SyntaxError>(base + "run.dt_s = 1e-5\n").find("duplicate") != std::string::npos);
  CHECK(parse_error<SyntaxError>(base + "schedule.event = 2 enable_turbine wt1\n").find("enable_turbine") !=
        std::string::npos);
  CHECK(parse_error<SyntaxError>(base + "schedule.event = 2 set_bess_p_ref\n").find("argument") !=
        std::string::npos);
  CHECK(parse_error<SyntaxError>(base + "element.tx_66.x_mag_pu = 400\n").find("x_mag_pu") != std::string::npos);
  CHECK(parse_error<SyntaxError>("grid.enabled = yes\n").find("true or false") != std::string::npos);
  CHECK(parse_error<SyntaxError>(base + "node.extra.colour = red\n").find("node.extra.colour") !=
        std::string::npos);
}

TEST_CASE("semantic errors name the offending id") {
  const std::string base = serialize_scenario(builtin_scenario("hard-switch"));
  const std::string missing_breaker = parse_error<scenario::ScenarioError>(
      base + "schedule.event = 2 close_breaker brk_missing\n");
  CHECK(missing_breaker.find("brk_missing") != std::string::npos);

  std::string dangling = base;
  dangling.replace(dangling.find("element.brk_load.to = load_400"), 30, "element.brk_load.to = load_999");
  CHECK(parse_error<scenario::ScenarioError>(dangling).find("brk_load") != std::string::npos);

  std::string negative = base;
  negative.replace(negative.find("element.load.p_rated_mw = 20"), 28, "element.load.p_rated_mw = -20");
  CHECK(parse_error<scenario::ScenarioError>(negative).find("load") != std::string::npos);
}

TEST_CASE("bad overrides fail before any simulation") {
  const fs::path dir = scratch_dir("config");
  RunConfig config;
  config.out_dir = dir / "out";
  config.dt_s = 0.0;
  std::ostringstream log;
  CHECK(run(config, log) == kExitFailure);
  CHECK(log.str().find("--dt") != std::string::npos);
  CHECK_FALSE(fs::exists(config.out_dir));

  config.dt_s.reset();
  config.decimation = 0;
  CHECK_THROWS_AS(resolve(config), ConfigError);

  config.decimation.reset();
  config.duration_s = 5.0;  // the default schedule runs to 19 s
  CHECK_THROWS_AS(resolve(config), ConfigError);

  config.duration_s.reset();
  config.scenario = (dir / "missing.txt").string();
  CHECK(run(config, log) == kExitFailure);
}

TEST_CASE("overrides and re-sync") {
  RunConfig config;
  config.dt_s = 25e-6;
  config.decimation = 40;
  config.no_saturation = true;
  config.current_limiter = true;
  config.enable_resync = true;
  const ScenarioFile s = resolve(config);
  CHECK(s.definition.run.dt_s == 25e-6);
  CHECK(s.definition.run.decimation == 40);
  CHECK_FALSE(s.definition.run.saturation);
  CHECK(s.definition.run.current_limiter);
  CHECK(s.definition.grid.enabled);
  REQUIRE(s.schedule.count(scenario::Action::SynchrocheckArm) == 1);
  CHECK(s.schedule.events.back().time == 21.0);
}

TEST_CASE("run writes deterministic artifacts and reports exit codes") {
  const fs::path dir = scratch_dir("run");
  const fs::path soft = scenario_on_disk(dir, short_soft_charge());

  RunConfig config;
  config.scenario = soft.string();
  std::ostringstream log;
  config.out_dir = dir / "first";
  CHECK(run(config, log) == kExitClean);
  config.out_dir = dir / "second";
  CHECK(run(config, log) == kExitClean);

  for (const char* f : {"timeseries.csv", "violations.txt", "stages.txt", "events.txt", "summary.txt"}) {
    CAPTURE(f);
    const std::string a = read_file(dir / "first" / f);
    CHECK_FALSE(a.empty());
    CHECK(a == read_file(dir / "second" / f));
  }

  const std::string csv = read_file(dir / "first" / "timeseries.csv");
  CHECK(csv.rfind("time_s,bess_v_rms[pu],", 0) == 0);
  CHECK(read_file(dir / "first" / "violations.txt").rfind("0 violation(s)", 0) == 0);

  // The manifest is a scenario file that repeats the run.
  const std::string manifest = read_file(dir / "first" / "manifest.txt");
  CHECK(manifest.find("# wall_time_s = ") != std::string::npos);
  CHECK(parse_scenario(manifest) == short_soft_charge());
  config.scenario = (dir / "first" / "manifest.txt").string();
  config.out_dir = dir / "again";
  CHECK(run(config, log) == kExitClean);
  CHECK(read_file(dir / "again" / "timeseries.csv") == csv);

  const fs::path hard = dir / "hard.txt";
  write_text(hard, serialize_scenario(short_hard_switch()));
  config.scenario = hard.string();
  config.out_dir = dir / "hard";
  CHECK(run(config, log) == kExitViolations);
  const std::string violations = read_file(dir / "hard" / "violations.txt");
  CHECK(violations.find("current") != std::string::npos);
  CHECK(violations.find("voltage") != std::string::npos);
}

TEST_CASE("comparing a run with itself gives zero deltas") {
  const ScenarioFile s = short_hard_switch();
  const auto r = scenario::simulate(s.definition, s.schedule);
  const ComparisonReport rep = compare(r, r);
  CHECK(rep.notes.empty());
  REQUIRE(rep.channels.size() == r.series.channels().size());
  for (const auto& c : rep.channels) {
    CAPTURE(c.name);
    CHECK(c.peak_a == c.peak_b);
    CHECK(c.steady_a == c.steady_b);
  }
  CHECK(rep.peak_ratio() == 1.0);
  CHECK(format_comparison(rep).find("peak BESS current") != std::string::npos);
}

TEST_CASE("compare resamples runs with different steps and rejects channel mismatches") {
  ScenarioFile fine = short_hard_switch();
  ScenarioFile coarse = fine;
  coarse.definition.run.decimation = 40;
  const auto results = scenario::simulate_all(
      {{fine.definition, fine.schedule}, {coarse.definition, coarse.schedule}});
  const ComparisonReport rep = compare(results[0], results[1]);
  REQUIRE(rep.notes.size() == 1);
  CHECK(rep.notes[0].find("resampled") != std::string::npos);
  CHECK(rep.interval == doctest::Approx(coarse.definition.run.dt_s * 40));
  for (const auto& c : rep.channels) {
    if (c.name == "bess_v_rms") {
      CHECK(c.steady_a == doctest::Approx(c.steady_b).epsilon(1e-3));
    }
  }

  ScenarioFile fewer = short_hard_switch();
  fewer.definition.wts.pop_back();  // drops the wt6_* channels
  const auto other = scenario::simulate(fewer.definition, fewer.schedule);
  CHECK_THROWS_AS(compare(results[0], other), ConfigError);
}
