#pragma once

// Scenario configuration: a strict-schema JSON document with explicit units
// per field (suffix naming, e.g. "_rad_per_s"). Values are given in SI and
// nondimensionalized through the UnitSystem block at load time; for toy
// scenarios all scales are simply 1. Unknown keys are rejected with the JSON
// pointer of the offending key.

#include "spdiff/oracle.hpp"
#include "spdiff/scenario.hpp"
#include "spdiff/units.hpp"
#include "spdiff/wavepacket.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace spdiff {

enum class Engine { analytic, oracle, both };

struct SweepSpec {
    std::string parameter; // documented sweep-axis path, recorded in metadata
    double from = 0.0, to = 0.0;
    std::size_t count = 0;
};

struct ScenarioConfig {
    UnitSystem units{1.0, 1.0, 1.0, 1.0, 1.0};
    Scenario scenario;           // fully nondimensionalized
    GaussianWavePacket packet{1.0, 1.0, 0.0, 0.0, 0.0, 0.0};
    GridSpec grid;
    Engine engine = Engine::both;
    double pulse_area = M_PI;    // Omega t
    bool direct_mode = true;     // direct vs magnetically-induced transition
    SweepSpec sweep;

    double pulse_duration() const { return pulse_area / std::abs(scenario.Omega()); }
};

struct GuardStatus {
    std::string name;
    bool ok = true;
    std::string message;
};

// Parse and resolve a config document. Accepts either a bare config or a
// metadata sidecar (object with a "config" member). Throws
// std::invalid_argument with a JSON-pointer location on schema violations.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::string& path);

// Serialize back to the exact schema accepted by parse_config (lossless
// round trip; all values in SI).
nlohmann::json serialize_config(const ScenarioConfig& cfg);

// Evaluate the soft regime guards (dilaton amplitude, elimination ratios,
// DM-freeze, RWA). In strict mode any violated guard throws.
std::vector<GuardStatus> evaluate_guards(const ScenarioConfig& cfg, bool strict);

} // namespace spdiff
