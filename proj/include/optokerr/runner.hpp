#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "optokerr/io.hpp"

namespace optokerr {

struct SweepSpec {
    std::string param;
    double from = 0.0;
    double to = 0.0;
    int count = 0;
    bool log_scale = false;
};

struct RunSpec {
    std::string command;  // steady | modes | spectrum | temperature | sweep | audit | sde
    std::string config_path;
    std::string preset = "none";  // fig2_eta0 | fig2_eta004 | schliesser | none
    std::vector<std::string> overrides;  // key=value
    std::string out_dir = ".";
    int branch = -1;  // -1 = smallest stable
    Grid grid;
    SweepSpec sweep;
    int jobs = 1;
    std::uint64_t seed = 1;
    bool no_timestamp = false;
    Normalization convention = Normalization::Normalized;
    DeltaEtaConvention delta_eta = DeltaEtaConvention::Detuning;

    double sde_duration = 2621.44;
    double sde_dt = 1e-3;
    int sde_realizations = 64;
    std::string sde_scheme = "euler";  // euler | midpoint
    int dump_trajectories = 0;
};

// Base configuration plus, when derived-pinned, the targets it was
// materialized from (so sweeps over eta_p / g_prime / delta_eff re-pin).
struct ResolvedConfig {
    SystemParams params;              // reduced, canonical
    SystemParams params_as_given;     // before unit conversion
    UnitScales scales;
    bool pinned = false;
    PinnedTargets targets;
};

ResolvedConfig resolve_config(const RunSpec& spec);

// Apply one key=value to a resolved config (sweep engine entry point).
ResolvedConfig apply_override(const ResolvedConfig& base, const std::string& key,
                              double value);

// Execute the command, writing artifacts into spec.out_dir. Returns the
// process exit code (0 ok, 2 config, 3 physics, 4 non-convergence).
int run(const RunSpec& spec);

}  // namespace optokerr
