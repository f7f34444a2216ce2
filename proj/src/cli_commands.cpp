#include "ifm/cli_commands.hpp"

#include "ifm/analysis.hpp"
#include "ifm/config.hpp"
#include "ifm/counting.hpp"
#include "ifm/coupler_design.hpp"
#include "ifm/spectrum.hpp"
#include "ifm/version.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace ifm::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string iso8601_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

std::ofstream open_output(const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
    out.precision(15);
    return out;
}

void write_manifest(const std::string& command, const Json& config,
                    const std::string& output_path) {
    Json manifest;
    manifest["command"] = command;
    manifest["tool_version"] = kToolVersion;
    manifest["timestamp_utc"] = iso8601_utc_now();
    manifest["config"] = config;
    manifest["outputs"] = Json::array({output_path});
    std::ofstream out(output_path + ".manifest.json");
    if (!out) throw std::runtime_error("cannot write manifest for '" + output_path + "'");
    out << manifest.dump(2) << '\n';
}

Arm parse_arm(const std::string& name) {
    if (name == "both") return Arm::both;
    if (name == "upper") return Arm::upper;
    if (name == "lower") return Arm::lower;
    throw std::invalid_argument("loss_arm must be both, upper or lower; got '" + name + "'");
}

struct CircuitConfig {
    std::string type;
    double r1 = 0.5;
    double r2 = 0.5;
    int n_stages = 2;
    bool absorbers = false;
    double absorber_alpha = 1.0;
    double loss_per_stage = 0.0;
    Arm loss_arm = Arm::both;
    double delta_l_um = 100.0;
};

const std::set<std::string> kCircuitKeys = {
    "type",          "r1",   "r2",   "n_stages", "absorber", "absorbers",
    "absorber_alpha", "loss_per_stage", "loss_arm", "delta_l_um"};

CircuitConfig read_circuit(const ConfigFile& cfg) {
    CircuitConfig circuit;
    circuit.type = cfg.get_string("circuit", "type");
    if (circuit.type != "ev" && circuit.type != "zeno") {
        throw ConfigError("circuit.type must be 'ev' or 'zeno', got '" + circuit.type + "'");
    }
    circuit.absorbers = cfg.get_bool("circuit", "absorbers",
                                     cfg.get_bool("circuit", "absorber", false));
    circuit.absorber_alpha = cfg.get_double("circuit", "absorber_alpha", 1.0);
    circuit.loss_per_stage = cfg.get_double("circuit", "loss_per_stage", 0.0);
    circuit.loss_arm = parse_arm(cfg.get_string("circuit", "loss_arm", "both"));
    circuit.delta_l_um = cfg.get_double("circuit", "delta_l_um", 100.0);
    if (circuit.type == "ev") {
        circuit.r1 = cfg.get_double("circuit", "r1");
        circuit.r2 = cfg.get_double("circuit", "r2");
    } else {
        circuit.n_stages = static_cast<int>(cfg.get_int("circuit", "n_stages"));
    }
    return circuit;
}

Json circuit_snapshot(const CircuitConfig& c) {
    Json j;
    j["type"] = c.type;
    if (c.type == "ev") {
        j["r1"] = c.r1;
        j["r2"] = c.r2;
    } else {
        j["n_stages"] = c.n_stages;
    }
    j["absorbers"] = c.absorbers;
    if (c.type == "ev") j["absorber_alpha"] = c.absorber_alpha;
    j["loss_per_stage"] = c.loss_per_stage;
    j["loss_arm"] = c.loss_arm == Arm::both ? "both" : (c.loss_arm == Arm::upper ? "upper" : "lower");
    return j;
}

Json config_snapshot(const ConfigFile& cfg) {
    Json j;
    for (const auto& [key, value] : cfg.flattened()) j[key] = value;
    return j;
}

}  // namespace

void cmd_ev_curve(const EvCurveOptions& options) {
    if (options.points < 1) throw std::invalid_argument("need at least one grid point");
    if (!(options.r_min >= 0.0 && options.r_max <= 1.0 && options.r_min <= options.r_max)) {
        throw std::invalid_argument("reflectivity grid must lie inside [0, 1]");
    }
    if (options.output.empty()) throw std::invalid_argument("missing --output path");

    auto out = open_output(options.output);
    out << "R,eta,p_ifm,p_abs\n";
    for (int i = 0; i < options.points; ++i) {
        const double r = options.points == 1
                             ? options.r_min
                             : options.r_min + (options.r_max - options.r_min) * i /
                                                   (options.points - 1);
        const IfmReport report = ev_efficiency({r, 1.0 - r});
        out << r << ',' << report.eta << ',' << report.p_lower << ',' << report.p_absorbed
            << '\n';
    }

    Json config;
    config["r_min"] = options.r_min;
    config["r_max"] = options.r_max;
    config["points"] = options.points;
    write_manifest("ev-curve", config, options.output);
}

void cmd_zeno_curve(const ZenoCurveOptions& options) {
    if (options.output.empty()) throw std::invalid_argument("missing --output path");
    for (int n : options.n_list) {
        if (n < 2) {
            throw std::invalid_argument("zeno curve entries need N >= 2, got " +
                                        std::to_string(n));
        }
    }
    const bool loss_normalized = options.eta_definition == "loss-normalized";
    if (!loss_normalized && options.eta_definition != "raw") {
        throw std::invalid_argument("eta definition must be 'raw' or 'loss-normalized'");
    }
    const Arm arm = parse_arm(options.loss_arm);

    const auto curve = efficiency_curve(options.n_list, options.loss_per_stage, arm);
    auto out = open_output(options.output);
    out << "N,p_L,p_U,p_abs,p_loss,eta\n";
    for (const auto& [n, report] : curve) {
        const double eta = loss_normalized ? report.eta_loss_normalized() : report.eta;
        out << n << ',' << report.p_lower << ',' << report.p_upper << ',' << report.p_absorbed
            << ',' << report.p_lost << ',' << eta << '\n';
    }

    Json config;
    config["n_list"] = options.n_list;
    config["loss_per_stage"] = options.loss_per_stage;
    config["loss_arm"] = options.loss_arm;
    config["eta_definition"] = options.eta_definition;
    write_manifest("zeno-curve", config, options.output);
}

void cmd_spectrum(const SpectrumOptions& options) {
    if (options.output.empty()) throw std::invalid_argument("missing --output path");
    const ConfigFile cfg = ConfigFile::load(options.config_path);
    cfg.require_known({{"circuit", kCircuitKeys},
                       {"dispersion", {"n_eff0", "n_g", "dn_dlambda_per_nm", "lambda0_nm"}},
                       {"sweep", {"lambda_min_nm", "lambda_max_nm", "step_nm"}}});

    const CircuitConfig circuit = read_circuit(cfg);
    const double n_eff0 = cfg.get_double("dispersion", "n_eff0", 2.1129);
    const double lambda0 = cfg.get_double("dispersion", "lambda0_nm", 1550.0);
    DispersionModel model;
    if (cfg.has("dispersion", "dn_dlambda_per_nm")) {
        if (cfg.has("dispersion", "n_g")) {
            throw ConfigError("give either dispersion.n_g or dispersion.dn_dlambda_per_nm");
        }
        model.n_eff0 = n_eff0;
        model.lambda0_nm = lambda0;
        model.dn_dlambda_per_nm = cfg.get_double("dispersion", "dn_dlambda_per_nm");
        model.validate();
    } else {
        model = DispersionModel::from_group_index(n_eff0, cfg.get_double("dispersion", "n_g", 4.7),
                                                  lambda0);
    }

    const CircuitTemplate tmpl =
        circuit.type == "ev"
            ? ev_spectrum_template(circuit.r1, circuit.r2,
                                   circuit.absorbers ? circuit.absorber_alpha : 0.0,
                                   circuit.loss_per_stage, circuit.loss_arm)
            : zeno_spectrum_template(circuit.n_stages, circuit.absorbers, circuit.loss_per_stage,
                                     circuit.loss_arm);

    const SpectrumResult result = sweep_spectrum(
        tmpl, model, circuit.delta_l_um, cfg.get_double("sweep", "lambda_min_nm"),
        cfg.get_double("sweep", "lambda_max_nm"), cfg.get_double("sweep", "step_nm", 0.01));

    auto out = open_output(options.output);
    write_spectrum_csv(result, out);
    write_manifest("spectrum", config_snapshot(cfg), options.output);
}

void cmd_count(const CountOptions& options) {
    if (options.output.empty()) throw std::invalid_argument("missing --output path");
    if (options.gates == 0) throw std::invalid_argument("--gates must be at least 1");
    const ConfigFile cfg = ConfigFile::load(options.config_path);
    cfg.require_known(
        {{"circuit", kCircuitKeys},
         {"source", {"mu", "tap_ratio"}},
         {"detectors", {"a_lower", "a_upper", "a_tap", "dark_rate", "a_ratio_sigma"}}});

    const CircuitConfig circuit = read_circuit(cfg);
    ExperimentConfig experiment;
    experiment.circuit =
        circuit.type == "ev"
            ? build_ev_circuit(circuit.r1, circuit.r2, circuit.absorbers, circuit.loss_per_stage,
                               circuit.loss_arm)
            : build_zeno_circuit(circuit.n_stages, circuit.absorbers, circuit.loss_per_stage,
                                 circuit.loss_arm);
    experiment.mu = cfg.get_double("source", "mu", 0.1);
    experiment.tap_ratio = cfg.get_double("source", "tap_ratio", 0.5);
    experiment.a_lower = cfg.get_double("detectors", "a_lower", 1.0);
    experiment.a_upper = cfg.get_double("detectors", "a_upper", 1.0);
    experiment.a_tap = cfg.get_double("detectors", "a_tap", 1.0);
    experiment.dark_rate = cfg.get_double("detectors", "dark_rate", 0.0);
    experiment.gates = options.gates;
    experiment.rng_seed = options.seed;
    const double ratio_sigma = cfg.get_double("detectors", "a_ratio_sigma", 0.0);

    const CountingRecord rec = run_counting(experiment, options.threads);

    Json record;
    record["gates"] = rec.gates;
    record["seed"] = rec.seed;
    record["mu"] = experiment.mu;
    record["tap_ratio"] = experiment.tap_ratio;
    record["c_tap"] = rec.c_tap;
    record["c_lower"] = rec.c_lower;
    record["c_upper"] = rec.c_upper;
    record["explosions"] = rec.explosions;
    record["multi_photon_gates"] = rec.multi_photon_gates;
    record["circuit"] = circuit_snapshot(circuit);

    Json estimates;
    const auto emit = [&estimates](const char* name, auto&& compute) {
        try {
            const Estimate e = compute();
            estimates[name] = Json{{"value", e.value}, {"sigma", e.sigma}};
        } catch (const std::exception& err) {
            estimates[name] = Json{{"error", err.what()}};
        }
    };
    emit("eta_ev", [&] {
        return estimate_eta_ev(rec, experiment.a_upper / experiment.a_lower, ratio_sigma);
    });
    emit("eta_zeno", [&] {
        return estimate_eta_zeno(rec, experiment.a_lower / experiment.a_upper, ratio_sigma);
    });
    emit("eta_loss_corrected",
         [&] { return estimate_eta_loss_corrected(rec, experiment.a_lower, experiment.a_upper); });
    record["estimates"] = estimates;

    auto out = open_output(options.output);
    out << record.dump(2) << '\n';
    write_manifest("count", config_snapshot(cfg), options.output);
}

void cmd_design_coupler(const DesignCouplerOptions& options) {
    if (options.output.empty()) throw std::invalid_argument("missing --output path");
    const CouplerIndexTable table = load_index_table(options.table_path);
    const CouplerDesign design =
        solve_gap_for_reflectivity(table, options.target_r, options.length_um, options.bend_um);

    Json record;
    record["gap_nm"] = design.gap_nm;
    record["length_um"] = design.length_um;
    record["bend_correction_um"] = design.bend_correction_um;
    record["coupling_length_um"] = design.coupling_length_um;
    record["reflectivity"] = design.reflectivity;
    record["transmissivity"] = design.transmissivity;

    std::cout << record.dump() << std::endl;
    auto out = open_output(options.output);
    out << record.dump() << '\n';

    Json config;
    config["table"] = options.table_path;
    config["target_r"] = options.target_r;
    config["length_um"] = options.length_um;
    config["bend_um"] = options.bend_um;
    write_manifest("design-coupler", config, options.output);
}

}  // namespace ifm::cli
