#pragma once

#include "ifm/optics.hpp"

#include <cstdint>

namespace ifm {

/// Attenuated-laser counting experiment: Poissonian photon number per gate,
/// a monitor tap before the circuit, and binary (non-number-resolving)
/// detectors on the tap, lower and upper ports.
struct ExperimentConfig {
    CircuitSpec circuit;
    double mu = 0.1;              // mean source photons per gate
    std::uint64_t gates = 1;
    double a_lower = 1.0;         // coupling+detection efficiency, lower port
    double a_upper = 1.0;
    double a_tap = 1.0;
    double tap_ratio = 0.5;       // input fraction split off to the monitor
    double dark_rate = 0.0;       // per-gate per-detector dark-click probability
    std::uint64_t rng_seed = 1;

    void validate() const;
};

/// Per-run tallies. Counts are gate clicks (at most one per detector per
/// gate); explosions count absorbed photons individually.
struct CountingRecord {
    std::uint64_t c_tap = 0;
    std::uint64_t c_lower = 0;
    std::uint64_t c_upper = 0;
    std::uint64_t explosions = 0;
    std::uint64_t multi_photon_gates = 0;  // gates with >= 2 source photons
    std::uint64_t gates = 0;
    std::uint64_t seed = 0;
};

/// Simulates the experiment. Gates are processed in fixed-size blocks, each
/// with an RNG seeded from (rng_seed, block index), so the result is
/// bit-identical for a given config regardless of the worker count.
/// threads = 0 uses the hardware concurrency.
CountingRecord run_counting(const ExperimentConfig& config, unsigned threads = 0);

struct Estimate {
    double value = 0.0;
    double sigma = 0.0;
};

/// Two-stage normalized efficiency 1 / (2 + (C_L/C_U) (a_U/a_L)); sigma by
/// first-order propagation of Poisson count errors and the ratio
/// uncertainty.
Estimate estimate_eta_ev(const CountingRecord& rec, double a_upper_over_lower,
                         double ratio_sigma = 0.0);

/// Chain estimator C_L / (C_T - C_U a_L/a_U). Exact for lossless circuits
/// with a balanced tap; circuit loss stays in its denominator.
Estimate estimate_eta_zeno(const CountingRecord& rec, double a_lower_over_upper,
                           double ratio_sigma = 0.0);

/// Loss-renormalized efficiency from counts and the explosion tally:
/// (C_L/a_L) / (C_L/a_L + C_U/a_U + explosions). Converges to
/// p_L / (p_L + p_U + p_abs), the quantity a lossy chain reports.
Estimate estimate_eta_loss_corrected(const CountingRecord& rec, double a_lower = 1.0,
                                     double a_upper = 1.0);

}  // namespace ifm
