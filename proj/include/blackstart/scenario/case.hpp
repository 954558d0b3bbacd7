#pragma once

#include <string>
#include <vector>

#include "blackstart/circuit/network.hpp"
#include "blackstart/converters/gfl_wt.hpp"
#include "blackstart/converters/gfm_bess.hpp"
#include "blackstart/measure/limits.hpp"

namespace blackstart::scenario {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NodeDef {
  std::string name;
  double kv = 0.0;

  friend bool operator==(const NodeDef&, const NodeDef&) = default;
};

/// Passive element between two named nodes ("ground" is the reference).
struct ElementDef {
  std::string id;
  std::string from;
  std::string to;
  circuit::ElementKind kind;

  friend bool operator==(const ElementDef&, const ElementDef&) = default;
};

/// Grid-forming battery. Its converter source (behind the filter) is added
/// at `terminal_node` when the network is built.
struct BessPlacement {
  std::string terminal_node = "bess_33";
  std::string poc_node = "bess_220";
  std::string transformer = "tx_bess";
  converters::GfmBessParams params;
  double p_ref_initial_mw = 2.5;

  std::string source_id() const { return "bess_conv"; }
  friend bool operator==(const BessPlacement&, const BessPlacement&) = default;
};

/// Grid-following wind turbine. The converter source is `<id>_conv` at
/// `terminal_node`; `hv_node` is the 66 kV side of its transformer.
struct WtPlacement {
  std::string id;
  std::string terminal_node;
  std::string hv_node;
  std::string breaker;

  std::string source_id() const { return id + "_conv"; }
  friend bool operator==(const WtPlacement&, const WtPlacement&) = default;
};

struct BlockLoad {
  std::string breaker = "brk_load";
  std::string element = "load";

  friend bool operator==(const BlockLoad&, const BlockLoad&) = default;
};

/// Thevenin equivalent of the external grid behind a tie breaker. Only built
/// into the network when enabled.
struct ExternalGrid {
  bool enabled = false;
  std::string node = "grid_400";
  std::string island_node = "onshore_400";
  std::string tie_breaker = "brk_tie";
  double kv = 400.0;
  double scr = 10.0;
  double s_base_mva = 475.0;
  double x_over_r = 10.0;

  std::string source_id() const { return "grid_src"; }
  friend bool operator==(const ExternalGrid&, const ExternalGrid&) = default;
};

struct SynchrocheckSettings {
  double max_df_hz = 0.1;
  double max_dv_pu = 0.05;
  double max_dtheta_deg = 10.0;
  double dwell_s = 0.2;

  void validate() const;
  friend bool operator==(const SynchrocheckSettings&, const SynchrocheckSettings&) = default;
};

struct RunSettings {
  double dt_s = 50e-6;
  double duration_s = 25.0;
  std::size_t decimation = 20;
  bool saturation = true;
  bool current_limiter = false;
  double current_limit_pu = 1.2;
  double wt_deblock_delay_s = 0.02;

  void validate() const;
  friend bool operator==(const RunSettings&, const RunSettings&) = default;
};

struct CaseDefinition {
  std::string name;
  std::vector<NodeDef> nodes;
  std::vector<ElementDef> elements;
  BessPlacement bess;
  converters::GflWtParams wt_params;
  std::vector<WtPlacement> wts;
  BlockLoad block_load;
  ExternalGrid grid;
  SynchrocheckSettings synchrocheck;
  measure::LimitEnvelope envelope;
  RunSettings run;

  const NodeDef* find_node(std::string_view name) const;
  const ElementDef* find_element(std::string_view id) const;
  const WtPlacement* find_wt(std::string_view id) const;
  bool has_breaker(std::string_view id) const;

  friend bool operator==(const CaseDefinition&, const CaseDefinition&) = default;
};

/// Checks names, references and parameters; throws ScenarioError.
void validate_case(const CaseDefinition& c);

/// The offshore wind farm black-start case: BESS at the onshore 220 kV bus,
/// 40 km land and 60 km submarine export cable, 190/130 Mvar reactors,
/// 400/220 kV and 220/66 kV saturable transformers, six 12 MW turbines on
/// one 66 kV array and a 20 MW block load at 400 kV.
CaseDefinition build_default_case(std::size_t wt_count = 6);

/// Same network with the export breaker open: the BESS forms full voltage
/// on its own bus and the passive system is switched in at once.
CaseDefinition build_hard_switch_case();

struct BuildOptions {
  bool saturation = true;
};

/// Circuit network of the case: the passive elements plus converter and
/// grid sources. Converter sources start disabled except the BESS.
circuit::Network build_network(const CaseDefinition& c, const BuildOptions& options = {});

/// Transformer element `id` of the case, or throws.
const circuit::TwoWindingTransformer& transformer_of(const CaseDefinition& c, std::string_view id);

}  // namespace blackstart::scenario
