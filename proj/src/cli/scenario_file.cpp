#include "blackstart/cli/scenario_file.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <variant>

#include "blackstart/circuit/element.hpp"

namespace blackstart::cli {

using scenario::ScenarioError;

SyntaxError::SyntaxError(int line, int column, const std::string& message)
    : ScenarioError(fmt::format("line {}, column {}: {}", line, column, message)), line_(line), column_(column) {}

namespace {

using FieldRef = std::variant<double*, bool*, std::string*, std::size_t*, std::optional<double>*,
                              std::vector<std::string>*>;

struct Field {
  std::string_view key;
  FieldRef ref;
};

using Fields = std::vector<Field>;

// One table per struct, shared by the reader and the writer so a field
// cannot be written without being readable.

Fields fields(converters::PllParams& p) {
  return {{"pll.k_p", &p.k_p},
          {"pll.t_i_s", &p.t_i_s},
          {"pll.prefilter_rad_s", &p.prefilter_rad_s},
          {"pll.f_min_hz", &p.f_min_hz},
          {"pll.f_max_hz", &p.f_max_hz}};
}

Fields fields(converters::GflWtParams& p) {
  Fields f{{"p_rated_mw", &p.p_rated_mw},
           {"power_factor", &p.power_factor},
           {"v_lv_kv", &p.v_lv_kv},
           {"filter_l_pu", &p.filter_l_pu},
           {"filter_r_pu", &p.filter_r_pu},
           {"shunt_r_pu", &p.shunt_r_pu},
           {"shunt_c_pu", &p.shunt_c_pu},
           {"transformer_r_pu", &p.transformer_r_pu},
           {"transformer_x_pu", &p.transformer_x_pu},
           {"transformer_hv_kv", &p.transformer_hv_kv},
           {"current_k_p", &p.current_k_p},
           {"current_t_i_s", &p.current_t_i_s},
           {"voltage_droop", &p.voltage_droop},
           {"dc_k_p", &p.dc_k_p},
           {"dc_t_i_s", &p.dc_t_i_s},
           {"ac_k_p", &p.ac_k_p},
           {"frequency_droop", &p.frequency_droop},
           {"p_ref_base_pu", &p.p_ref_base_pu},
           {"v_ref_pu", &p.v_ref_pu},
           {"v_meas_filter_rad_s", &p.v_meas_filter_rad_s}};
  for (const Field& pll : fields(p.pll)) f.push_back(pll);
  return f;
}

Fields fields(scenario::BessPlacement& b) {
  auto& p = b.params;
  return {{"terminal_node", &b.terminal_node},
          {"poc_node", &b.poc_node},
          {"transformer", &b.transformer},
          {"p_ref_initial_mw", &b.p_ref_initial_mw},
          {"s_rated_mva", &p.s_rated_mva},
          {"p_rated_mw", &p.p_rated_mw},
          {"q_rated_mvar", &p.q_rated_mvar},
          {"v_rated_kv", &p.v_rated_kv},
          {"filter_l_pu", &p.filter_l_pu},
          {"filter_r_pu", &p.filter_r_pu},
          {"transformer_r_pu", &p.transformer_r_pu},
          {"transformer_x_pu", &p.transformer_x_pu},
          {"transformer_hv_kv", &p.transformer_hv_kv},
          {"k_v", &p.k_v},
          {"k_p", &p.k_p},
          {"error_filter_rad_s", &p.error_filter_rad_s},
          {"v_ref_pu", &p.v_ref_pu},
          {"current_limit_pu", &p.current_limit_pu},
          {"limiter_resistance_pu", &p.limiter_resistance_pu}};
}

Fields fields(scenario::WtPlacement& w) {
  return {{"terminal_node", &w.terminal_node}, {"hv_node", &w.hv_node}, {"breaker", &w.breaker}};
}

Fields fields(scenario::BlockLoad& b) { return {{"breaker", &b.breaker}, {"element", &b.element}}; }

Fields fields(scenario::ExternalGrid& g) {
  return {{"enabled", &g.enabled},
          {"node", &g.node},
          {"island_node", &g.island_node},
          {"tie_breaker", &g.tie_breaker},
          {"kv", &g.kv},
          {"scr", &g.scr},
          {"s_base_mva", &g.s_base_mva},
          {"x_over_r", &g.x_over_r}};
}

Fields fields(scenario::SynchrocheckSettings& s) {
  return {{"max_df_hz", &s.max_df_hz},
          {"max_dv_pu", &s.max_dv_pu},
          {"max_dtheta_deg", &s.max_dtheta_deg},
          {"dwell_s", &s.dwell_s}};
}

Fields fields(measure::LimitEnvelope& e) {
  return {{"v_min_pu", &e.v_min_pu},
          {"v_max_pu", &e.v_max_pu},
          {"f_min_hz", &e.f_min_hz},
          {"f_max_hz", &e.f_max_hz},
          {"current_cap_pu", &e.current_cap_pu},
          {"debounce_s", &e.debounce_s},
          {"monitor_from_s", &e.monitor_from_s},
          {"voltage_channels", &e.voltage_channels},
          {"frequency_channels", &e.frequency_channels},
          {"current_channels", &e.current_channels}};
}

Fields fields(scenario::RunSettings& r) {
  return {{"dt_s", &r.dt_s},
          {"duration_s", &r.duration_s},
          {"decimation", &r.decimation},
          {"saturation", &r.saturation},
          {"current_limiter", &r.current_limiter},
          {"current_limit_pu", &r.current_limit_pu},
          {"wt_deblock_delay_s", &r.wt_deblock_delay_s}};
}

Fields fields(circuit::Resistor& e) { return {{"r_ohm", &e.r_ohm}}; }
Fields fields(circuit::Inductor& e) { return {{"l_h", &e.l_h}}; }
Fields fields(circuit::Capacitor& e) { return {{"c_f", &e.c_f}}; }
Fields fields(circuit::PiSection& e) {
  return {{"r_series_ohm", &e.r_series_ohm},
          {"l_series_h", &e.l_series_h},
          {"c_shunt_each_end_f", &e.c_shunt_each_end_f}};
}
Fields fields(circuit::TSection& e) {
  return {{"r_series_ohm", &e.r_series_ohm}, {"l_series_h", &e.l_series_h}, {"c_shunt_f", &e.c_shunt_f}};
}
Fields fields(circuit::ShuntReactor& e) {
  return {{"q_rated_mvar", &e.q_rated_mvar}, {"v_nominal_kv", &e.v_nominal_kv}, {"x_over_r", &e.x_over_r}};
}
Fields fields(circuit::Breaker& e) { return {{"closed", &e.closed}}; }
Fields fields(circuit::RlLoad& e) {
  return {{"p_rated_mw", &e.p_rated_mw}, {"q_rated_mvar", &e.q_rated_mvar}, {"v_nominal_kv", &e.v_nominal_kv}};
}
Fields fields(circuit::ControlledVoltageSource& e) {
  return {{"r_series_ohm", &e.r_series_ohm}, {"l_series_h", &e.l_series_h}};
}
Fields fields(circuit::ControlledCurrentSource&) { return {}; }

// The core is handled beside the table: its fields depend on the core kind.
Fields fields(circuit::TwoWindingTransformer& e) {
  return {{"s_rated_mva", &e.s_rated_mva},
          {"v_hv_kv", &e.v_hv_kv},
          {"v_lv_kv", &e.v_lv_kv},
          {"r_leak_pu", &e.r_leak_pu},
          {"x_leak_pu", &e.x_leak_pu}};
}

// ---- writing ----

std::string format_double(double v) { return fmt::format("{}", v); }

std::string format_value(const FieldRef& ref) {
  return std::visit(
      [](auto* p) -> std::string {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(*p);
        } else if constexpr (std::is_same_v<T, bool>) {
          return *p ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return *p;
        } else if constexpr (std::is_same_v<T, std::size_t>) {
          return std::to_string(*p);
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
          return *p ? format_double(**p) : "none";
        } else {
          std::string out;
          for (const auto& s : *p) {
            if (!out.empty()) out += ", ";
            out += s;
          }
          return out;
        }
      },
      ref);
}

bool is_id(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' ||
           ch == '-';
  });
}

void require_id(std::string_view what, std::string_view id) {
  if (!is_id(id)) {
    throw ScenarioError(fmt::format("{} '{}' cannot be written: ids use letters, digits, '_' and '-'", what, id));
  }
}

void require_plain(std::string_view key, std::string_view value) {
  if (value.find_first_of("#\n\r") != std::string_view::npos) {
    throw ScenarioError(fmt::format("{} cannot be written: value contains '#' or a line break", key));
  }
  if (!value.empty() && (value.front() == ' ' || value.back() == ' ' || value.front() == '\t' ||
                         value.back() == '\t')) {
    throw ScenarioError(fmt::format("{} cannot be written: value has surrounding whitespace", key));
  }
}

class Writer {
 public:
  void line(std::string_view key, std::string_view value) {
    require_plain(key, value);
    out_ += fmt::format("{} = {}\n", key, value);
  }
  void table(std::string_view prefix, const Fields& fs) {
    for (const Field& f : fs) {
      const std::string value = format_value(f.ref);
      if (std::holds_alternative<std::vector<std::string>*>(f.ref)) {
        for (const auto& item : *std::get<std::vector<std::string>*>(f.ref)) {
          if (item.find(',') != std::string::npos || item.empty()) {
            throw ScenarioError(fmt::format("{}.{} cannot be written: item '{}'", prefix, f.key, item));
          }
        }
      }
      line(fmt::format("{}.{}", prefix, f.key), value);
    }
  }
  void blank() { out_ += '\n'; }
  void comment(std::string_view text) { out_ += fmt::format("# {}\n", text); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

std::string format_knots(const circuit::SaturationCurve& curve) {
  std::string out;
  for (const auto& k : curve.knots()) {
    if (!out.empty()) out += ", ";
    out += format_double(k.flux_pu) + ":" + format_double(k.current_pu);
  }
  return out;
}

void write_element(Writer& w, const scenario::ElementDef& e) {
  require_id("element", e.id);
  const std::string prefix = "element." + e.id;
  w.line(prefix + ".type", circuit::kind_name(e.kind));
  w.line(prefix + ".from", e.from);
  w.line(prefix + ".to", e.to);
  circuit::ElementKind kind = e.kind;
  std::visit([&](auto& k) { w.table(prefix, fields(k)); }, kind);
  if (const auto* tx = std::get_if<circuit::TwoWindingTransformer>(&e.kind)) {
    w.line(prefix + ".core_side", tx->core_side == circuit::CoreSide::Hv ? "hv" : "lv");
    if (const auto* lin = std::get_if<circuit::LinearCore>(&tx->core)) {
      w.line(prefix + ".core", "linear");
      w.line(prefix + ".x_mag_pu", format_double(lin->x_mag_pu));
    } else {
      const auto& sat = std::get<circuit::SaturationCurve>(tx->core);
      w.line(prefix + ".core", "saturable");
      w.line(prefix + ".saturation_knots", format_knots(sat));
      w.line(prefix + ".air_core_inductance_pu", format_double(sat.air_core_inductance_pu()));
    }
  }
}

bool takes_target(scenario::Action a) {
  return a == scenario::Action::EnableWT || a == scenario::Action::CloseBreaker;
}

std::string format_event(const scenario::Event& e) {
  using scenario::Action;
  std::string out = format_double(e.time) + " " + scenario::to_string(e.action);
  if (takes_target(e.action)) {
    require_id("event target", e.target);
    out += " " + e.target;
  } else if (!e.target.empty()) {
    throw ScenarioError(fmt::format("{} at {} s cannot carry a target", scenario::to_string(e.action), e.time));
  }
  if (e.action == Action::SetBessPRef) {
    out += " " + format_double(e.value_mw);
  } else if (e.value_mw != 0.0) {
    throw ScenarioError(fmt::format("{} at {} s cannot carry a value", scenario::to_string(e.action), e.time));
  }
  return out;
}

// ---- reading ----

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
  int key_column = 0;
  int value_column = 0;
};

[[noreturn]] void fail_value(const Entry& e, const std::string& message) {
  throw SyntaxError(e.line, e.value_column, fmt::format("{}: {}", e.key, message));
}

double parse_double(const Entry& e, std::string_view text, int column_offset = 0) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw SyntaxError(e.line, e.value_column + column_offset,
                      fmt::format("{}: expected a number, got '{}'", e.key, text));
  }
  return v;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto t = s.find_last_not_of(" \t");
  return s.substr(b, t - b + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.emplace_back(trim(s.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void assign(const FieldRef& ref, const Entry& e) {
  std::visit(
      [&](auto* p) {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, double>) {
          *p = parse_double(e, e.value);
        } else if constexpr (std::is_same_v<T, bool>) {
          if (e.value == "true") {
            *p = true;
          } else if (e.value == "false") {
            *p = false;
          } else {
            fail_value(e, "expected true or false");
          }
        } else if constexpr (std::is_same_v<T, std::string>) {
          *p = e.value;
        } else if constexpr (std::is_same_v<T, std::size_t>) {
          std::size_t v = 0;
          const char* last = e.value.data() + e.value.size();
          const auto [ptr, ec] = std::from_chars(e.value.data(), last, v);
          if (e.value.empty() || ec != std::errc{} || ptr != last) fail_value(e, "expected a whole number");
          *p = v;
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
          if (e.value == "none") {
            p->reset();
          } else {
            *p = parse_double(e, e.value);
          }
        } else {
          *p = split_list(e.value);
          for (const auto& item : *p) {
            if (item.empty()) fail_value(e, "empty list item");
          }
        }
      },
      ref);
}

[[noreturn]] void unknown_key(const Entry& e) {
  throw SyntaxError(e.line, e.key_column, fmt::format("unknown key '{}'", e.key));
}

// Applies `e` to the field named `key` in `fs`; false when there is none.
bool apply(const Fields& fs, std::string_view key, const Entry& e) {
  for (const Field& f : fs) {
    if (f.key == key) {
      assign(f.ref, e);
      return true;
    }
  }
  return false;
}

std::vector<Entry> tokenize(std::string_view text) {
  std::vector<Entry> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (trim(raw).empty()) continue;

    const auto eq = raw.find('=');
    const auto key_start = raw.find_first_not_of(" \t");
    if (eq == std::string_view::npos) {
      throw SyntaxError(line_no, static_cast<int>(key_start) + 1, "expected 'key = value'");
    }
    const std::string_view key = trim(raw.substr(0, eq));
    if (key.empty()) throw SyntaxError(line_no, static_cast<int>(eq) + 1, "missing key before '='");
    for (std::size_t i = 0; i < key.size(); ++i) {
      const char ch = key[i];
      if (!(is_id(std::string_view(&ch, 1)) || ch == '.')) {
        throw SyntaxError(line_no, static_cast<int>(key_start + i) + 1,
                          fmt::format("invalid character '{}' in key", ch));
      }
    }
    const std::string_view rest = raw.substr(eq + 1);
    const auto value_start = rest.find_first_not_of(" \t");
    Entry e;
    e.key = std::string(key);
    e.value = std::string(trim(rest));
    e.line = line_no;
    e.key_column = static_cast<int>(key_start) + 1;
    e.value_column = static_cast<int>(eq + 1 + (value_start == std::string_view::npos ? 0 : value_start)) + 1;
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<std::string_view> split_key(std::string_view key) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    parts.push_back(key.substr(start, dot == std::string_view::npos ? dot : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

// Entries sharing an id prefix (element.<id>.*, turbine.<id>.*), in order of
// first appearance.
struct Group {
  std::string id;
  std::vector<std::pair<std::string, Entry>> fields;
};

Group& group_for(std::vector<Group>& groups, std::string_view id) {
  for (auto& g : groups) {
    if (g.id == id) return g;
  }
  groups.push_back({std::string(id), {}});
  return groups.back();
}

const Entry* find_field(const Group& g, std::string_view name) {
  for (const auto& [k, e] : g.fields) {
    if (k == name) return &e;
  }
  return nullptr;
}

circuit::ElementKind make_kind(std::string_view type, const Entry& at) {
  for (const circuit::ElementKind& k :
       {circuit::ElementKind{circuit::Resistor{}}, circuit::ElementKind{circuit::Inductor{}},
        circuit::ElementKind{circuit::Capacitor{}}, circuit::ElementKind{circuit::PiSection{}},
        circuit::ElementKind{circuit::TSection{}}, circuit::ElementKind{circuit::ShuntReactor{}},
        circuit::ElementKind{circuit::TwoWindingTransformer{}}, circuit::ElementKind{circuit::Breaker{}},
        circuit::ElementKind{circuit::RlLoad{}}, circuit::ElementKind{circuit::ControlledVoltageSource{}},
        circuit::ElementKind{circuit::ControlledCurrentSource{}}}) {
    if (type == circuit::kind_name(k)) return k;
  }
  fail_value(at, fmt::format("unknown element type '{}'", type));
}

std::vector<circuit::FluxCurrentPoint> parse_knots(const Entry& e) {
  std::vector<circuit::FluxCurrentPoint> knots;
  std::size_t offset = 0;
  for (const std::string& item : split_list(e.value)) {
    offset = e.value.find(item, offset);
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw SyntaxError(e.line, e.value_column + static_cast<int>(offset),
                        fmt::format("{}: expected flux:current, got '{}'", e.key, item));
    }
    const std::string_view flux = trim(std::string_view(item).substr(0, colon));
    const std::string_view current = trim(std::string_view(item).substr(colon + 1));
    knots.push_back({parse_double(e, flux, static_cast<int>(offset)),
                     parse_double(e, current, static_cast<int>(offset + colon + 1))});
    offset += item.size();
  }
  return knots;
}

scenario::ElementDef build_element(const Group& g) {
  const Entry* type = find_field(g, "type");
  if (!type) {
    const Entry& first = g.fields.front().second;
    throw SyntaxError(first.line, first.key_column, fmt::format("element '{}' has no type", g.id));
  }
  scenario::ElementDef def;
  def.id = g.id;
  def.kind = make_kind(type->value, *type);
  auto* tx = std::get_if<circuit::TwoWindingTransformer>(&def.kind);

  const Entry* core = find_field(g, "core");
  std::optional<double> x_mag;
  std::optional<std::vector<circuit::FluxCurrentPoint>> knots;
  std::optional<double> air_core;
  bool have_from = false;
  bool have_to = false;

  for (const auto& [name, e] : g.fields) {
    if (name == "type") continue;
    if (name == "from") {
      def.from = e.value;
      have_from = true;
      continue;
    }
    if (name == "to") {
      def.to = e.value;
      have_to = true;
      continue;
    }
    if (std::visit([&](auto& k) { return apply(fields(k), name, e); }, def.kind)) continue;
    if (tx && name == "core_side") {
      if (e.value == "hv") {
        tx->core_side = circuit::CoreSide::Hv;
      } else if (e.value == "lv") {
        tx->core_side = circuit::CoreSide::Lv;
      } else {
        fail_value(e, "expected hv or lv");
      }
      continue;
    }
    if (tx && name == "core") continue;
    const bool saturable = core && core->value == "saturable";
    if (tx && name == "x_mag_pu" && !saturable) {
      x_mag = parse_double(e, e.value);
      continue;
    }
    if (tx && name == "saturation_knots" && saturable) {
      knots = parse_knots(e);
      continue;
    }
    if (tx && name == "air_core_inductance_pu" && saturable) {
      air_core = parse_double(e, e.value);
      continue;
    }
    unknown_key(e);
  }

  const Entry& first = g.fields.front().second;
  if (!have_from || !have_to) {
    throw SyntaxError(first.line, first.key_column,
                      fmt::format("element '{}' needs both from and to", g.id));
  }
  if (tx) {
    if (!core || core->value == "linear") {
      tx->core = circuit::LinearCore{x_mag.value_or(circuit::LinearCore{}.x_mag_pu)};
    } else if (core->value == "saturable") {
      if (!knots || !air_core) {
        throw SyntaxError(core->line, core->value_column,
                          fmt::format("element '{}': a saturable core needs saturation_knots and "
                                      "air_core_inductance_pu",
                                      g.id));
      }
      try {
        tx->core = circuit::SaturationCurve(*knots, *air_core);
      } catch (const std::exception& ex) {
        throw ScenarioError(fmt::format("element '{}': {}", g.id, ex.what()));
      }
    } else {
      fail_value(*core, "expected linear or saturable");
    }
  }
  return def;
}

scenario::Event parse_event(const Entry& e) {
  std::vector<std::pair<std::string_view, int>> tokens;
  std::string_view v = e.value;
  std::size_t i = 0;
  while (i < v.size()) {
    while (i < v.size() && (v[i] == ' ' || v[i] == '\t')) ++i;
    if (i >= v.size()) break;
    const std::size_t start = i;
    while (i < v.size() && v[i] != ' ' && v[i] != '\t') ++i;
    tokens.emplace_back(v.substr(start, i - start), static_cast<int>(start));
  }
  if (tokens.size() < 2) fail_value(e, "expected '<time_s> <action> [target | value_mw]'");

  scenario::Event ev;
  ev.time = parse_double(e, tokens[0].first, tokens[0].second);
  try {
    ev.action = scenario::parse_action(tokens[1].first);
  } catch (const ScenarioError& ex) {
    throw SyntaxError(e.line, e.value_column + tokens[1].second, ex.what());
  }
  const std::size_t want = takes_target(ev.action) || ev.action == scenario::Action::SetBessPRef ? 3 : 2;
  if (tokens.size() != want) {
    fail_value(e, fmt::format("{} takes {} argument(s) after the time", scenario::to_string(ev.action), want - 1));
  }
  if (takes_target(ev.action)) ev.target = std::string(tokens[2].first);
  if (ev.action == scenario::Action::SetBessPRef) ev.value_mw = parse_double(e, tokens[2].first, tokens[2].second);
  return ev;
}

}  // namespace

ScenarioFile parse_scenario(std::string_view text) {
  ScenarioFile out;
  scenario::CaseDefinition& c = out.definition;
  std::vector<Group> nodes;
  std::vector<Group> elements;
  std::vector<Group> turbines;
  std::set<std::string> seen;

  for (const Entry& e : tokenize(text)) {
    const auto parts = split_key(e.key);
    const std::string_view section = parts.front();
    const std::string_view rest =
        parts.size() > 1 ? std::string_view(e.key).substr(section.size() + 1) : std::string_view{};

    if (e.key != "schedule.event" && !seen.insert(e.key).second) {
      throw SyntaxError(e.line, e.key_column, fmt::format("duplicate key '{}'", e.key));
    }
    if (std::any_of(parts.begin(), parts.end(), [](std::string_view p) { return p.empty(); })) unknown_key(e);

    bool ok = false;
    if (section == "case") {
      if (rest == "name") {
        c.name = e.value;
        ok = true;
      }
    } else if (section == "node" || section == "element" || section == "turbine") {
      if (parts.size() == 3) {
        auto& groups = section == "node" ? nodes : section == "element" ? elements : turbines;
        group_for(groups, parts[1]).fields.emplace_back(std::string(parts[2]), e);
        ok = true;
      }
    } else if (section == "bess") {
      ok = apply(fields(c.bess), rest, e);
    } else if (section == "wt_params") {
      ok = apply(fields(c.wt_params), rest, e);
    } else if (section == "block_load") {
      ok = apply(fields(c.block_load), rest, e);
    } else if (section == "grid") {
      ok = apply(fields(c.grid), rest, e);
    } else if (section == "synchrocheck") {
      ok = apply(fields(c.synchrocheck), rest, e);
    } else if (section == "envelope") {
      ok = apply(fields(c.envelope), rest, e);
    } else if (section == "run") {
      ok = apply(fields(c.run), rest, e);
    } else if (section == "schedule") {
      if (rest == "event") {
        out.schedule.events.push_back(parse_event(e));
        ok = true;
      }
    }
    if (!ok) unknown_key(e);
  }

  for (const Group& g : nodes) {
    scenario::NodeDef n{g.id, 0.0};
    for (const auto& [name, e] : g.fields) {
      if (name != "kv") unknown_key(e);
      n.kv = parse_double(e, e.value);
    }
    c.nodes.push_back(n);
  }
  for (const Group& g : elements) c.elements.push_back(build_element(g));
  for (const Group& g : turbines) {
    scenario::WtPlacement w;
    w.id = g.id;
    for (const auto& [name, e] : g.fields) {
      if (!apply(fields(w), name, e)) unknown_key(e);
    }
    c.wts.push_back(w);
  }

  scenario::validate_case(c);
  scenario::validate_schedule(out.schedule, c);
  return out;
}

std::string serialize_scenario(const ScenarioFile& s) {
  scenario::CaseDefinition c = s.definition;
  Writer w;
  w.comment("blackstart scenario");
  w.line("case.name", c.name);
  w.blank();
  for (const auto& n : c.nodes) {
    require_id("node", n.name);
    w.line(fmt::format("node.{}.kv", n.name), format_double(n.kv));
  }
  w.blank();
  for (const auto& e : c.elements) {
    write_element(w, e);
    w.blank();
  }
  w.table("bess", fields(c.bess));
  w.blank();
  w.table("wt_params", fields(c.wt_params));
  w.blank();
  for (auto& t : c.wts) {
    require_id("turbine", t.id);
    w.table("turbine." + t.id, fields(t));
  }
  w.blank();
  w.table("block_load", fields(c.block_load));
  w.blank();
  w.table("grid", fields(c.grid));
  w.blank();
  w.table("synchrocheck", fields(c.synchrocheck));
  w.blank();
  w.table("envelope", fields(c.envelope));
  w.blank();
  w.table("run", fields(c.run));
  w.blank();
  w.comment("<time_s> <action> [target | value_mw]");
  for (const auto& e : s.schedule.events) w.line("schedule.event", format_event(e));
  return w.take();
}

bool is_builtin_scenario(std::string_view name) { return name == "default-blackstart" || name == "hard-switch"; }

ScenarioFile builtin_scenario(std::string_view name) {
  if (name == "default-blackstart") return {scenario::build_default_case(), scenario::default_schedule()};
  if (name == "hard-switch") return {scenario::build_hard_switch_case(), scenario::hard_switch_schedule()};
  throw ScenarioError(fmt::format("no built-in scenario '{}'", name));
}

ScenarioFile load_scenario(const std::string& name_or_path) {
  if (is_builtin_scenario(name_or_path)) return builtin_scenario(name_or_path);
  std::ifstream in(name_or_path, std::ios::binary);
  if (!in) {
    throw ScenarioError(fmt::format("'{}' is neither a built-in scenario nor a readable file", name_or_path));
  }
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_scenario(text.str());
  } catch (const ScenarioError& ex) {
    throw ScenarioError(fmt::format("{}: {}", name_or_path, ex.what()));
  }
}

}  // namespace blackstart::cli
