#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ifm::cli {

/// Complementary-coupler efficiency curve: columns R,eta,p_ifm,p_abs.
struct EvCurveOptions {
    double r_min = 0.0;
    double r_max = 1.0;
    int points = 101;
    std::string output;
};

/// Chain curve: columns N,p_L,p_U,p_abs,p_loss,eta. eta_definition picks the
/// conclusive-event efficiency ("raw") or the loss-renormalized one
/// ("loss-normalized").
struct ZenoCurveOptions {
    std::vector<int> n_list;
    double loss_per_stage = 0.0;
    std::string loss_arm = "both";
    std::string eta_definition = "raw";
    std::string output;
};

struct SpectrumOptions {
    std::string config_path;
    std::string output;
};

struct CountOptions {
    std::string config_path;
    std::uint64_t gates = 0;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string output;
};

struct DesignCouplerOptions {
    std::string table_path;
    double target_r = 0.5;
    double length_um = 20.0;
    double bend_um = 2.0;
    std::string output;
};

// Each command writes its data file plus a <output>.manifest.json sidecar
// and throws on any validation failure.
void cmd_ev_curve(const EvCurveOptions& options);
void cmd_zeno_curve(const ZenoCurveOptions& options);
void cmd_spectrum(const SpectrumOptions& options);
void cmd_count(const CountOptions& options);

/// Also prints the resulting design record to stdout as single-line JSON.
void cmd_design_coupler(const DesignCouplerOptions& options);

}  // namespace ifm::cli
