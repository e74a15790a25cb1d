#include <string>

#include <CLI11.hpp>

#include "optokerr/runner.hpp"

namespace {

// "--grid start:stop:count"
optokerr::Grid parse_grid(const std::string& text) {
    optokerr::Grid g;
    const auto c1 = text.find(':');
    const auto c2 = text.rfind(':');
    if (c1 == std::string::npos || c2 == c1)
        throw CLI::ValidationError("--grid expects start:stop:count");
    try {
        g.start = std::stod(text.substr(0, c1));
        g.stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        g.count = std::stoi(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--grid expects numeric start:stop:count");
    }
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady states, stability, fluctuation spectra, normal-mode splitting\n"
                 "and effective temperature of a movable mirror in a Kerr cavity"};
    app.require_subcommand(1);

    optokerr::RunSpec spec;
    std::string grid_text;
    std::string convention = "normalized";
    std::string delta_eta = "detuning";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", spec.config_path, "JSON config file");
        cmd->add_option("--preset", spec.preset,
                        "fig2_eta0 | fig2_eta004 | schliesser | none");
        cmd->add_option("--set", spec.overrides, "override key=value (repeatable)");
        cmd->add_option("--branch", spec.branch, "branch index (default: smallest stable)");
        cmd->add_option("--grid", grid_text, "frequency grid start:stop:count in omega_m units");
        cmd->add_option("--jobs", spec.jobs, "worker threads for sweeps");
        cmd->add_option("--seed", spec.seed, "random seed");
        cmd->add_option("--out", spec.out_dir, "output directory");
        cmd->add_flag("--no-timestamp", spec.no_timestamp, "omit timestamp header lines");
        cmd->add_option("--convention", convention, "normalized | literal");
        cmd->add_option("--delta-eta", delta_eta, "detuning | literal");
    };

    for (const char* name : {"steady", "modes", "spectrum", "temperature", "audit"})
        add_common(app.add_subcommand(name));

    auto* sweep = app.add_subcommand("sweep");
    add_common(sweep);
    sweep->add_option("--param", spec.sweep.param, "parameter to sweep")->required();
    sweep->add_option("--from", spec.sweep.from, "sweep start")->required();
    sweep->add_option("--to", spec.sweep.to, "sweep stop")->required();
    sweep->add_option("--count", spec.sweep.count, "number of points")->required();
    sweep->add_flag("--log", spec.sweep.log_scale, "logarithmic spacing");

    auto* sde = app.add_subcommand("sde");
    add_common(sde);
    sde->add_option("--sde-duration", spec.sde_duration, "recorded span per realization");
    sde->add_option("--sde-dt", spec.sde_dt, "integration step (units of 1/omega_m)");
    sde->add_option("--sde-realizations", spec.sde_realizations, "ensemble size");
    sde->add_option("--sde-scheme", spec.sde_scheme, "euler | midpoint");
    sde->add_option("--dump-traj", spec.dump_trajectories,
                    "dump the first N realizations as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    spec.command = app.get_subcommands().front()->get_name();
    if (!grid_text.empty()) {
        try {
            spec.grid = parse_grid(grid_text);
        } catch (const CLI::Error& e) {
            std::cerr << "optokerr: " << e.what() << "\n";
            return 2;
        }
    }
    if (convention == "literal") spec.convention = optokerr::Normalization::Literal;
    else if (convention == "normalized") spec.convention = optokerr::Normalization::Normalized;
    else {
        std::cerr << "optokerr: --convention must be normalized or literal\n";
        return 2;
    }
    if (delta_eta == "literal") spec.delta_eta = optokerr::DeltaEtaConvention::Literal;
    else if (delta_eta == "detuning") spec.delta_eta = optokerr::DeltaEtaConvention::Detuning;
    else {
        std::cerr << "optokerr: --delta-eta must be detuning or literal\n";
        return 2;
    }

    return optokerr::run(spec);
}
