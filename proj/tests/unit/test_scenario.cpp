#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

#include "blackstart/circuit/engine.hpp"
#include "blackstart/scenario/case.hpp"
#include "blackstart/scenario/schedule.hpp"
#include "blackstart/scenario/simulation.hpp"
#include "blackstart/scenario/stage.hpp"

using namespace blackstart;
using namespace blackstart::scenario;

namespace {

double reactor_mvar(const CaseDefinition& c, std::string_view id) {
  const auto* e = c.find_element(id);
  REQUIRE(e != nullptr);
  return std::get<circuit::ShuntReactor>(e->kind).q_rated_mvar;
}

// Soft charge only, short enough for unit tests.
SimulationJob short_soft_charge(double duration) {
  CaseDefinition c = build_default_case();
  c.run.duration_s = duration;
  EventSchedule s;
  s.events.push_back({0.0, Action::SoftChargeStart, "", 0.0});
  s.events.push_back({0.5, Action::SoftChargeEnd, "", 0.0});
  return {c, s};
}

SimulationJob short_hard_switch() {
  CaseDefinition c = build_hard_switch_case();
  c.run.duration_s = 1.2;
  return {c, hard_switch_schedule()};
}

}  // namespace

TEST_CASE("default case matches the published system data") {
  const CaseDefinition c = build_default_case();
  CHECK_NOTHROW(validate_case(c));

  CHECK(c.bess.params.s_rated_mva == 112.0);
  CHECK(c.bess.params.p_rated_mw == 50.0);
  CHECK(c.bess.params.q_rated_mvar == 100.0);
  REQUIRE(c.wts.size() == 6);
  CHECK(c.wt_params.p_rated_mw == 12.0);

  CHECK(reactor_mvar(c, "reactor_onshore") == 190.0);
  CHECK(reactor_mvar(c, "reactor_offshore") == 130.0);

  const auto& load = std::get<circuit::RlLoad>(c.find_element("load")->kind);
  CHECK(load.p_rated_mw == 20.0);

  CHECK(std::holds_alternative<circuit::SaturationCurve>(transformer_of(c, "tx_400").core));
  CHECK(std::holds_alternative<circuit::SaturationCurve>(transformer_of(c, "tx_66").core));
  CHECK(std::holds_alternative<circuit::LinearCore>(transformer_of(c, "tx_bess").core));
}

TEST_CASE("network size follows the case") {
  const CaseDefinition c = build_default_case();
  const circuit::Network net = build_network(c);
  // Each T-section array cable adds its midpoint.
  CHECK(net.solved_node_count() == c.nodes.size() + c.wts.size());
  const circuit::Engine engine(net, c.run.dt_s);
  CHECK(engine.dimension() == 3 * net.solved_node_count());

  CaseDefinition with_grid = c;
  with_grid.grid.enabled = true;
  const circuit::Network g = build_network(with_grid);
  CHECK(g.solved_node_count() == net.solved_node_count() + 1);
  CHECK(g.find_element("brk_tie").has_value());
  CHECK(g.find_element("grid_src").has_value());

  const circuit::Network linear = build_network(c, {.saturation = false});
  const auto& tx = std::get<circuit::TwoWindingTransformer>(linear.element(linear.element_index("tx_66")).kind);
  CHECK(std::holds_alternative<circuit::LinearCore>(tx.core));
}

TEST_CASE("case validation names the problem") {
  CaseDefinition c = build_default_case();
  c.nodes.push_back(c.nodes.front());
  CHECK_THROWS_AS(validate_case(c), ScenarioError);

  c = build_default_case();
  c.elements.back().to = "nowhere";
  CHECK_THROWS_WITH_AS(validate_case(c), doctest::Contains(c.elements.back().id.c_str()), ScenarioError);

  c = build_default_case();
  c.run.dt_s = 0.0;
  CHECK_THROWS_AS(validate_case(c), ScenarioError);

  c = build_default_case();
  c.synchrocheck.dwell_s = -1.0;
  CHECK_THROWS_AS(validate_case(c), ScenarioError);

  const CaseDefinition three = build_default_case(3);
  CHECK(three.wts.size() == 3);
  CHECK_NOTHROW(validate_case(three));
}

TEST_CASE("default schedule") {
  const EventSchedule s = default_schedule();
  const CaseDefinition c = build_default_case();
  CHECK_NOTHROW(validate_schedule(s, c));

  CHECK(s.count(Action::SoftChargeStart) == 1);
  CHECK(s.count(Action::SoftChargeEnd) == 1);
  CHECK(s.count(Action::EnableWT) == 6);
  CHECK(s.count(Action::EnergiseBlockLoad) == 1);
  CHECK(s.count(Action::SetBessPRef) == 1);
  CHECK(s.count(Action::SynchrocheckArm) == 0);
  CHECK(default_schedule(true).count(Action::SynchrocheckArm) == 1);

  auto at = [&](Action a, std::string_view target) {
    const auto it = std::find_if(s.events.begin(), s.events.end(),
                                 [&](const Event& e) { return e.action == a && e.target == target; });
    REQUIRE(it != s.events.end());
    return *it;
  };
  CHECK(at(Action::SoftChargeEnd, "").time == 0.5);
  CHECK(at(Action::EnableWT, "wt1").time == 1.0);
  CHECK(at(Action::EnableWT, "wt6").time == 16.0);
  CHECK(at(Action::SetBessPRef, "").time == 19.0);
  CHECK(at(Action::SetBessPRef, "").value_mw == 20.0);
  CHECK(at(Action::EnergiseBlockLoad, "").time == 19.0);

  for (const Event& e : s.events) {
    if (e.action == Action::CloseBreaker) CHECK(c.has_breaker(e.target));
    if (e.action == Action::EnableWT) CHECK(c.find_wt(e.target) != nullptr);
  }
  CHECK(std::is_sorted(s.events.begin(), s.events.end(),
                       [](const Event& a, const Event& b) { return a.time < b.time; }));
}

TEST_CASE("hard-switch schedule and case") {
  const EventSchedule s = hard_switch_schedule();
  REQUIRE(s.events.size() == 1);
  CHECK(s.events[0].action == Action::CloseBreaker);
  CHECK(s.events[0].target == "brk_export");
  CHECK(s.events[0].time == 1.0);

  const CaseDefinition c = build_hard_switch_case();
  CHECK_NOTHROW(validate_schedule(s, c));
  CHECK_FALSE(std::get<circuit::Breaker>(c.find_element("brk_export")->kind).closed);
  CHECK(std::get<circuit::Breaker>(build_default_case().find_element("brk_export")->kind).closed);
}

TEST_CASE("schedule validation") {
  const CaseDefinition c = build_default_case();
  EventSchedule s = default_schedule();

  EventSchedule twice = s;
  twice.events.push_back({24.0, Action::EnableWT, "wt1", 0.0});
  CHECK_THROWS_WITH_AS(validate_schedule(twice, c), doctest::Contains("wt1"), ScenarioError);

  EventSchedule unsorted = s;
  std::swap(unsorted.events[1], unsorted.events[2]);
  CHECK_THROWS_AS(validate_schedule(unsorted, c), ScenarioError);

  EventSchedule unknown = s;
  unknown.events.push_back({24.0, Action::CloseBreaker, "brk_nope", 0.0});
  CHECK_THROWS_WITH_AS(validate_schedule(unknown, c), doctest::Contains("brk_nope"), ScenarioError);

  EventSchedule too_much = s;
  too_much.events.push_back({24.0, Action::SetBessPRef, "", 80.0});
  CHECK_THROWS_AS(validate_schedule(too_much, c), ScenarioError);

  // Arming needs a grid to compare against.
  CHECK_THROWS_AS(validate_schedule(default_schedule(true), c), ScenarioError);
  CaseDefinition grid = c;
  grid.grid.enabled = true;
  CHECK_NOTHROW(validate_schedule(default_schedule(true), grid));

  for (Action a : {Action::SoftChargeStart, Action::SoftChargeEnd, Action::EnableWT, Action::CloseBreaker,
                   Action::EnergiseBlockLoad, Action::SetBessPRef, Action::SynchrocheckArm}) {
    CHECK(parse_action(to_string(a)) == a);
  }
  CHECK_THROWS_AS(parse_action("open_everything"), ScenarioError);
}

TEST_CASE("stage machine runs forward only") {
  StageMachine m;
  CHECK(m.stage() == Stage::Dead);
  CHECK_FALSE(m.advance({0.0, false, false, false}));
  CHECK(m.advance({0.1, true, false, false}));
  CHECK(m.stage() == Stage::WindFarmPowerIsland);
  CHECK(m.advance({19.0, true, true, false}));
  CHECK(m.stage() == Stage::BlackStartPowerIsland);

  // Block load trips: the stage holds and the regression is noted once.
  CHECK_FALSE(m.advance({20.0, true, false, false}));
  CHECK_FALSE(m.advance({20.1, true, false, false}));
  CHECK(m.stage() == Stage::BlackStartPowerIsland);
  CHECK(m.regressions().size() == 1);

  CHECK(m.advance({22.0, true, true, true}));
  CHECK(m.stage() == Stage::PowerIslandReSync);

  const std::vector<StageTransition> expected{{0.1, Stage::WindFarmPowerIsland},
                                              {19.0, Stage::BlackStartPowerIsland},
                                              {22.0, Stage::PowerIslandReSync}};
  CHECK(m.transitions() == expected);

  // Jumping straight to a later stage records each stage on the way.
  StageMachine jump;
  jump.advance({5.0, true, true, false});
  REQUIRE(jump.transitions().size() == 2);
  CHECK(jump.transitions()[0].stage == Stage::WindFarmPowerIsland);
  CHECK(jump.transitions()[1].stage == Stage::BlackStartPowerIsland);
}

TEST_CASE("synchrocheck") {
  const SynchrocheckSettings s;
  const PhasorMeasurement grid{50.0, 1.0, 0.0};

  CHECK(synchrocheck_in_band({50.05, 0.98, 0.1}, grid, s));
  CHECK_FALSE(synchrocheck_in_band({50.2, 1.0, 0.0}, grid, s));
  CHECK_FALSE(synchrocheck_in_band({50.0, 0.9, 0.0}, grid, s));
  CHECK_FALSE(synchrocheck_in_band({50.0, 1.0, 0.3}, grid, s));

  // Angle wraps: 359 deg against 1 deg is a 2 deg difference.
  const double deg = std::numbers::pi / 180.0;
  CHECK(synchrocheck_in_band({50.0, 1.0, 359.0 * deg}, {50.0, 1.0, 1.0 * deg}, s));

  CHECK_FALSE(synchrocheck_evaluate({50.0, 1.0, 0.0}, grid, s, 0.1));
  CHECK(synchrocheck_evaluate({50.0, 1.0, 0.0}, grid, s, 0.2));

  // Shrinking the mismatch never turns a pass into a fail.
  for (double df = 0.0; df <= 0.2; df += 0.01) {
    const bool wide = synchrocheck_in_band({50.0 + df, 1.0, 0.0}, grid, s);
    const bool narrow = synchrocheck_in_band({50.0 + df / 2, 1.0, 0.0}, grid, s);
    CHECK((!wide || narrow));
  }
}

TEST_CASE("shifting the schedule shifts the response") {
  SimulationJob base = short_soft_charge(0.8);
  SimulationJob later = base;
  const double offset = 0.1;  // five whole cycles, so the idle angle lines up
  later.schedule = shifted(later.schedule, offset);
  later.definition.run.duration_s += offset;

  const auto results = simulate_all({base, later});
  const auto& a = results[0].series;
  const auto& b = results[1].series;
  const double step = a.sample_interval();
  const auto shift = static_cast<std::size_t>(std::lround(offset / step));

  const auto& va = a.values("bess_v_rms");
  const auto& vb = b.values("bess_v_rms");
  double worst = 0.0;
  for (std::size_t i = 0; i < va.size() && i + shift < vb.size(); ++i) {
    worst = std::max(worst, std::abs(va[i] - vb[i + shift]));
  }
  CHECK(worst < 5e-3);

  REQUIRE(results[1].stages.size() >= 1);
  CHECK(results[1].stages[0].stage == Stage::WindFarmPowerIsland);
  CHECK(results[1].stages[0].time == doctest::Approx(offset).epsilon(1e-3));
}

TEST_CASE("parallel runs match serial runs") {
  const std::vector<SimulationJob> jobs{short_soft_charge(0.6), short_hard_switch()};
  const auto parallel = simulate_all(jobs);
  const auto serial = simulate_all_serial(jobs);
  REQUIRE(parallel.size() == serial.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    CHECK(parallel[i].series == serial[i].series);
    CHECK(parallel[i].events == serial[i].events);
    CHECK(parallel[i].stages == serial[i].stages);
    CHECK(parallel[i].summary.entries() == serial[i].summary.entries());
    CHECK(parallel[i].violations.violations.size() == serial[i].violations.violations.size());
  }
  CHECK(parallel[0].case_name == "default-blackstart");
  CHECK(parallel[1].case_name == "hard-switch");
}

TEST_CASE("simulate rejects a run shorter than its schedule") {
  SimulationJob job = short_soft_charge(0.4);
  CHECK_THROWS_AS(simulate(job.definition, job.schedule), ScenarioError);
}
