#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "blackstart/scenario/case.hpp"

namespace blackstart::scenario {

enum class Action {
  SoftChargeStart,
  SoftChargeEnd,
  EnableWT,
  CloseBreaker,
  EnergiseBlockLoad,
  SetBessPRef,
  SynchrocheckArm,
};

const char* to_string(Action action);
/// Inverse of to_string; throws ScenarioError on an unknown name.
Action parse_action(std::string_view name);

struct Event {
  double time = 0.0;
  Action action = Action::EnableWT;
  std::string target;     // WT id for EnableWT, breaker id for CloseBreaker
  double value_mw = 0.0;  // SetBessPRef only

  friend bool operator==(const Event&, const Event&) = default;
};

struct EventSchedule {
  std::vector<Event> events;

  std::size_t count(Action action) const;
  double last_time() const;
  friend bool operator==(const EventSchedule&, const EventSchedule&) = default;
};

/// Energisation sequence of the default case over 25 s. With `with_resync`
/// the synchrocheck is armed at 21 s.
EventSchedule default_schedule(bool with_resync = false);

/// BESS on its own bus from t = 0; export breaker closed at 1 s.
EventSchedule hard_switch_schedule();

/// Times non-decreasing, each WT enabled at most once, every target known
/// to the case. Throws ScenarioError naming the offending event.
void validate_schedule(const EventSchedule& schedule, const CaseDefinition& c);

EventSchedule shifted(EventSchedule schedule, double offset_s);

}  // namespace blackstart::scenario
