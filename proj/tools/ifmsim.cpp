#include "ifm/cli_commands.hpp"
#include "ifm/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>
#include <string>

namespace {

int fail(const std::string& command, const std::exception& error) {
    nlohmann::json j;
    j["command"] = command;
    j["error"] = error.what();
    std::cerr << j.dump() << std::endl;
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator and design tool for interaction-free-measurement interferometer "
                 "circuits. All physical quantities carry unit suffixes: _nm (nanometre), "
                 "_um (micrometre), _rad (radian)."};
    app.set_version_flag("--version", ifm::kToolVersion);
    app.require_subcommand(1);

    ifm::cli::EvCurveOptions ev_options;
    auto* ev = app.add_subcommand("ev-curve",
                                  "Two-stage efficiency curve over complementary coupler "
                                  "reflectivities (CSV: R,eta,p_ifm,p_abs)");
    ev->add_option("--r-min", ev_options.r_min, "Lowest reflectivity of the grid")
        ->check(CLI::Range(0.0, 1.0));
    ev->add_option("--r-max", ev_options.r_max, "Highest reflectivity of the grid")
        ->check(CLI::Range(0.0, 1.0));
    ev->add_option("--points", ev_options.points, "Grid size (default 101)");
    ev->add_option("--output", ev_options.output, "Output CSV path")->required();

    ifm::cli::ZenoCurveOptions zeno_options;
    auto* zeno = app.add_subcommand(
        "zeno-curve", "Chain probabilities and efficiency versus stage count (CSV: "
                      "N,p_L,p_U,p_abs,p_loss,eta)");
    zeno->add_option("--n", zeno_options.n_list, "Stage counts, e.g. --n 5,10,20")
        ->delimiter(',')
        ->required();
    zeno->add_option("--loss", zeno_options.loss_per_stage, "Per-stage loss fraction in [0,1)")
        ->check(CLI::Range(0.0, 1.0));
    zeno->add_option("--loss-arm", zeno_options.loss_arm, "Arm the loss acts on: both|upper|lower");
    zeno->add_option("--eta-definition", zeno_options.eta_definition,
                     "'raw' = p_L/(p_abs+p_L); 'loss-normalized' = p_L/(1-p_loss)");
    zeno->add_option("--output", zeno_options.output, "Output CSV path")->required();

    ifm::cli::SpectrumOptions spectrum_options;
    auto* spectrum = app.add_subcommand(
        "spectrum", "Wavelength-swept transmission spectrum (CSV: "
                    "lambda_nm,p_upper,p_lower,p_absorbed,p_lost)");
    spectrum->add_option("--config", spectrum_options.config_path, "Sweep config file")
        ->required()
        ->check(CLI::ExistingFile);
    spectrum->add_option("--output", spectrum_options.output, "Output CSV path")->required();

    ifm::cli::CountOptions count_options;
    auto* count = app.add_subcommand(
        "count", "Monte Carlo photon-counting run (JSON record with counts and estimates)");
    count->add_option("--config", count_options.config_path, "Experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    count->add_option("--gates", count_options.gates, "Number of detector gates")->required();
    count->add_option("--seed", count_options.seed, "RNG seed (default 1)");
    count->add_option("--threads", count_options.threads,
                      "Worker threads (0 = hardware concurrency); result is thread-count "
                      "independent");
    count->add_option("--output", count_options.output, "Output JSON path")->required();

    ifm::cli::DesignCouplerOptions design_options;
    auto* design = app.add_subcommand(
        "design-coupler", "Solve the directional-coupler gap for a target reflectivity "
                          "(single-line JSON design record)");
    design->add_option("--table", design_options.table_path, "Gap/index CSV (gap_nm,n_s,n_a)")
        ->required()
        ->check(CLI::ExistingFile);
    design->add_option("--target-r", design_options.target_r, "Target reflectivity in (0,1)")
        ->required();
    design->add_option("--length-um", design_options.length_um, "Coupler design length");
    design->add_option("--bend-um", design_options.bend_um,
                       "Bend-region coupling-length correction (default 2)");
    design->add_option("--output", design_options.output, "Output JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        nlohmann::json j;
        j["error"] = std::string("argument error: ") + e.what();
        std::cerr << j.dump() << std::endl;
        return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
    }

    try {
        if (ev->parsed()) ifm::cli::cmd_ev_curve(ev_options);
        if (zeno->parsed()) ifm::cli::cmd_zeno_curve(zeno_options);
        if (spectrum->parsed()) ifm::cli::cmd_spectrum(spectrum_options);
        if (count->parsed()) ifm::cli::cmd_count(count_options);
        if (design->parsed()) ifm::cli::cmd_design_coupler(design_options);
    } catch (const std::exception& e) {
        return fail(app.get_subcommands().front()->get_name(), e);
    }
    return 0;
}
