#include "ifm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ifm {

namespace {

double eta_of(double p_lower, double p_absorbed) {
    const double conclusive = p_lower + p_absorbed;
    if (conclusive <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return p_lower / conclusive;
}

IfmReport report_from_state(const PathState& state) {
    IfmReport report;
    report.p_lower = state.p_lower();
    report.p_upper = state.p_upper();
    report.p_absorbed = state.p_absorbed;
    report.p_lost = state.p_lost;
    report.eta = eta_of(report.p_lower, report.p_absorbed);
    return report;
}

}  // namespace

bool EvConfig::is_complementary(double tol) const {
    return std::abs(r_bs2 - (1.0 - r_bs1)) <= tol;
}

double IfmReport::eta_loss_normalized() const {
    const double kept = p_lower + p_upper + p_absorbed;
    if (kept <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return p_lower / kept;
}

IfmReport ev_efficiency(const EvConfig& cfg) {
    if (!(cfg.r_bs1 >= 0.0 && cfg.r_bs1 <= 1.0) || !(cfg.r_bs2 >= 0.0 && cfg.r_bs2 <= 1.0)) {
        throw std::invalid_argument("EV reflectivities must be in [0, 1]");
    }
    // Bomb in the upper arm: the transmitted BS1 fraction is absorbed, the
    // reflected fraction stays in the lower arm and splits at BS2.
    const double t1 = 1.0 - cfg.r_bs1;
    const double t2 = 1.0 - cfg.r_bs2;
    IfmReport report;
    report.p_absorbed = t1;
    report.p_lower = cfg.r_bs1 * cfg.r_bs2;
    report.p_upper = cfg.r_bs1 * t2;
    report.p_lost = 0.0;
    report.eta = eta_of(report.p_lower, report.p_absorbed);
    return report;
}

IfmReport zeno_probabilities(int n_couplers, double loss_per_stage, Arm loss_arm) {
    if (n_couplers < 2) {
        throw std::invalid_argument("zeno_probabilities needs N >= 2, got " +
                                    std::to_string(n_couplers));
    }
    if (loss_per_stage == 0.0) {
        const double r = std::pow(std::cos(std::numbers::pi / (2.0 * n_couplers)), 2);
        IfmReport report;
        report.p_lower = std::pow(r, n_couplers);
        report.p_upper = std::pow(r, n_couplers - 1) * (1.0 - r);
        report.p_absorbed = 1.0 - report.p_lower - report.p_upper;
        report.p_lost = 0.0;
        report.eta = eta_of(report.p_lower, report.p_absorbed);
        return report;
    }
    const CircuitSpec circuit = build_zeno_circuit(n_couplers, true, loss_per_stage, loss_arm);
    return report_from_state(propagate(PathState::lower_input(), circuit));
}

std::vector<std::pair<int, IfmReport>> efficiency_curve(std::vector<int> n_list,
                                                        double loss_per_stage, Arm loss_arm) {
    std::sort(n_list.begin(), n_list.end());
    std::vector<std::pair<int, IfmReport>> curve;
    curve.reserve(n_list.size());
    for (int n : n_list) {
        curve.emplace_back(n, zeno_probabilities(n, loss_per_stage, loss_arm));
    }
    return curve;
}

}  // namespace ifm
