#include "blackstart/scenario/schedule.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <utility>

#include <fmt/format.h>

namespace blackstart::scenario {
namespace {

constexpr std::array<std::pair<Action, const char*>, 7> kNames{{
    {Action::SoftChargeStart, "soft_charge_start"},
    {Action::SoftChargeEnd, "soft_charge_end"},
    {Action::EnableWT, "enable_wt"},
    {Action::CloseBreaker, "close_breaker"},
    {Action::EnergiseBlockLoad, "energise_block_load"},
    {Action::SetBessPRef, "set_bess_p_ref"},
    {Action::SynchrocheckArm, "synchrocheck_arm"},
}};

}  // namespace

const char* to_string(Action action) {
  for (const auto& [a, name] : kNames) {
    if (a == action) {
      return name;
    }
  }
  return "?";
}

Action parse_action(std::string_view name) {
  for (const auto& [a, n] : kNames) {
    if (name == n) {
      return a;
    }
  }
  throw ScenarioError(fmt::format("unknown action '{}'", name));
}

std::size_t EventSchedule::count(Action action) const {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [&](const Event& e) { return e.action == action; }));
}

double EventSchedule::last_time() const { return events.empty() ? 0.0 : events.back().time; }

EventSchedule default_schedule(bool with_resync) {
  EventSchedule s;
  s.events = {
      {0.0, Action::SoftChargeStart, "", 0.0},
      {0.5, Action::SoftChargeEnd, "", 0.0},
      {1.0, Action::EnableWT, "wt1", 0.0},
      {4.0, Action::EnableWT, "wt2", 0.0},
      {7.0, Action::EnableWT, "wt3", 0.0},
      {10.0, Action::EnableWT, "wt4", 0.0},
      {10.0, Action::EnableWT, "wt5", 0.0},
      {16.0, Action::EnableWT, "wt6", 0.0},
      {19.0, Action::EnergiseBlockLoad, "", 0.0},
      {19.0, Action::SetBessPRef, "", 20.0},
  };
  if (with_resync) {
    s.events.push_back({21.0, Action::SynchrocheckArm, "", 0.0});
  }
  return s;
}

EventSchedule hard_switch_schedule() {
  EventSchedule s;
  s.events = {{1.0, Action::CloseBreaker, "brk_export", 0.0}};
  return s;
}

void validate_schedule(const EventSchedule& schedule, const CaseDefinition& c) {
  std::set<std::string, std::less<>> enabled;
  double previous = 0.0;
  for (std::size_t k = 0; k < schedule.events.size(); ++k) {
    const Event& e = schedule.events[k];
    const auto fail = [&](std::string_view why) {
      throw ScenarioError(fmt::format("event {} ({} at {} s): {}", k, to_string(e.action), e.time, why));
    };
    if (!(e.time >= 0.0)) {
      fail("time must not be negative");
    }
    if (e.time < previous) {
      fail("times must be non-decreasing");
    }
    previous = e.time;
    switch (e.action) {
      case Action::EnableWT:
        if (!c.find_wt(e.target)) {
          fail(fmt::format("unknown wind turbine '{}'", e.target));
        }
        if (!enabled.insert(e.target).second) {
          fail(fmt::format("wind turbine '{}' enabled twice", e.target));
        }
        break;
      case Action::CloseBreaker:
        if (!c.has_breaker(e.target)) {
          fail(fmt::format("unknown breaker '{}'", e.target));
        }
        break;
      case Action::SetBessPRef:
        if (!(std::abs(e.value_mw) <= c.bess.params.p_rated_mw)) {
          fail("power reference outside the BESS rating");
        }
        break;
      case Action::SynchrocheckArm:
        if (!c.grid.enabled) {
          fail("synchrocheck armed without an external grid");
        }
        break;
      default:
        break;
    }
  }
}

EventSchedule shifted(EventSchedule schedule, double offset_s) {
  for (auto& e : schedule.events) {
    e.time += offset_s;
  }
  return schedule;
}

}  // namespace blackstart::scenario
