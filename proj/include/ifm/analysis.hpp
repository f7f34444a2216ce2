#pragma once

#include "ifm/optics.hpp"

#include <utility>
#include <vector>

namespace ifm {

/// Reflectivities of the two beam splitters of an Elitzur-Vaidman
/// interferometer.
struct EvConfig {
    double r_bs1 = 0.5;
    double r_bs2 = 0.5;

    /// True when r_bs2 = 1 - r_bs1 within tol (the pairing that gives a
    /// perfectly dark lower port without the absorber).
    bool is_complementary(double tol = 1e-9) const;
};

/// Outcome probabilities for one bomb-present interferometer plus the
/// conclusive-event efficiency.
struct IfmReport {
    double p_lower = 0.0;
    double p_upper = 0.0;
    double p_absorbed = 0.0;
    double p_lost = 0.0;
    /// p_L / (p_abs + p_L); NaN when no conclusive outcome exists.
    double eta = 0.0;

    /// Efficiency with lost photons renormalized away,
    /// p_L / (p_L + p_U + p_abs) = p_L / (1 - p_loss). For a lossless
    /// circuit this is the detection probability of the lower port, which
    /// is what a count-rate measurement reports after the coupling and
    /// detection efficiencies are factored out.
    double eta_loss_normalized() const;
};

IfmReport ev_efficiency(const EvConfig& cfg);

/// Bomb-present N-stage chain. loss_per_stage = 0 evaluates the closed
/// forms p_L = [cos^2(pi/2N)]^N and p_U = [cos^2(pi/2N)]^{N-1} sin^2(pi/2N);
/// a lossy chain is propagated through the matrix engine.
IfmReport zeno_probabilities(int n_couplers, double loss_per_stage,
                             Arm loss_arm = Arm::both);

/// zeno_probabilities mapped over n_list, returned sorted by N.
std::vector<std::pair<int, IfmReport>> efficiency_curve(std::vector<int> n_list,
                                                        double loss_per_stage,
                                                        Arm loss_arm = Arm::both);

}  // namespace ifm
