#include "ifm/optics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ifm {

namespace {

void check_unit_interval(double value, const char* what) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must be in [0, 1], got " +
                                    std::to_string(value));
    }
}

void check_element(const StageElement& element) {
    if (const auto* c = std::get_if<Coupler>(&element)) {
        check_unit_interval(c->reflectivity, "coupler reflectivity");
    } else if (const auto* a = std::get_if<Absorber>(&element)) {
        check_unit_interval(a->alpha, "absorber alpha");
    } else if (const auto* l = std::get_if<Loss>(&element)) {
        check_unit_interval(l->fraction, "loss fraction");
    }
}

}  // namespace

double PathState::norm_defect() const {
    return std::norm(upper) + std::norm(lower) + p_absorbed + p_lost - 1.0;
}

bool PathState::is_normalized(double tol) const {
    return std::abs(norm_defect()) <= tol && p_absorbed >= 0.0 && p_lost >= 0.0;
}

void CircuitSpec::validate() const {
    int couplers = 0;
    for (const auto& element : stages) {
        check_element(element);
        if (std::holds_alternative<Coupler>(element)) ++couplers;
    }
    if (couplers != n_couplers) {
        throw std::invalid_argument("circuit n_couplers = " + std::to_string(n_couplers) +
                                    " but stage list contains " + std::to_string(couplers) +
                                    " couplers");
    }
}

CircuitSpec make_circuit(std::vector<StageElement> stages,
                         std::map<std::string, std::string> metadata) {
    CircuitSpec circuit;
    circuit.stages = std::move(stages);
    circuit.metadata = std::move(metadata);
    for (const auto& element : circuit.stages) {
        if (std::holds_alternative<Coupler>(element)) ++circuit.n_couplers;
    }
    circuit.validate();
    return circuit;
}

Eigen::Matrix2cd coupler_matrix(double reflectivity) {
    check_unit_interval(reflectivity, "coupler reflectivity");
    const double r = std::sqrt(reflectivity);
    const double t = std::sqrt(1.0 - reflectivity);
    Eigen::Matrix2cd m;
    m << Complex{r, 0.0}, Complex{0.0, t},
         Complex{0.0, t}, Complex{r, 0.0};
    return m;
}

PathState apply_stage(const PathState& state, const StageElement& element) {
    if (!state.is_normalized()) {
        throw std::invalid_argument("apply_stage: input state violates normalization, defect = " +
                                    std::to_string(state.norm_defect()));
    }
    check_element(element);

    PathState out = state;
    if (const auto* c = std::get_if<Coupler>(&element)) {
        const double r = std::sqrt(c->reflectivity);
        const double t = std::sqrt(1.0 - c->reflectivity);
        const Complex it{0.0, t};
        out.upper = r * state.upper + it * state.lower;
        out.lower = it * state.upper + r * state.lower;
    } else if (const auto* p = std::get_if<PhaseShift>(&element)) {
        out.upper = state.upper * std::polar(1.0, p->delta_phi_rad);
    } else if (const auto* a = std::get_if<Absorber>(&element)) {
        out.p_absorbed += a->alpha * std::norm(state.upper);
        out.upper = state.upper * std::sqrt(1.0 - a->alpha);
    } else {
        const auto& l = std::get<Loss>(element);
        const double keep = std::sqrt(1.0 - l.fraction);
        switch (l.arm) {
            case Arm::both:
                out.p_lost += l.fraction * (std::norm(state.upper) + std::norm(state.lower));
                out.upper = state.upper * keep;
                out.lower = state.lower * keep;
                break;
            case Arm::upper:
                out.p_lost += l.fraction * std::norm(state.upper);
                out.upper = state.upper * keep;
                break;
            case Arm::lower:
                out.p_lost += l.fraction * std::norm(state.lower);
                out.lower = state.lower * keep;
                break;
        }
    }
    return out;
}

PathState propagate(PathState state, const CircuitSpec& circuit) {
    circuit.validate();
    for (const auto& element : circuit.stages) {
        state = apply_stage(state, element);
    }
    return state;
}

CircuitSpec build_zeno_circuit(int n_couplers, bool absorbers, double loss_per_stage,
                               Arm loss_arm) {
    if (n_couplers < 2) {
        throw std::invalid_argument("zeno circuit needs at least 2 couplers, got " +
                                    std::to_string(n_couplers));
    }
    check_unit_interval(loss_per_stage, "loss_per_stage");
    if (loss_per_stage >= 1.0) {
        throw std::invalid_argument("loss_per_stage must be below 1");
    }

    const double reflectivity =
        std::pow(std::cos(std::numbers::pi / (2.0 * n_couplers)), 2);
    std::vector<StageElement> stages;
    for (int k = 1; k <= n_couplers; ++k) {
        stages.emplace_back(Coupler{reflectivity});
        // Absorber sees the full stage amplitude; the stage loss follows it.
        if (absorbers && k < n_couplers) stages.emplace_back(Absorber{1.0});
        if (loss_per_stage > 0.0) stages.emplace_back(Loss{loss_per_stage, loss_arm});
    }
    return make_circuit(std::move(stages),
                        {{"type", "zeno"}, {"n", std::to_string(n_couplers)}});
}

CircuitSpec build_ev_circuit(double r_bs1, double r_bs2, bool absorber,
                             double loss_per_stage, Arm loss_arm) {
    check_unit_interval(r_bs1, "r_bs1");
    check_unit_interval(r_bs2, "r_bs2");
    std::vector<StageElement> stages;
    stages.emplace_back(Coupler{r_bs1});
    if (absorber) stages.emplace_back(Absorber{1.0});
    if (loss_per_stage > 0.0) stages.emplace_back(Loss{loss_per_stage, loss_arm});
    stages.emplace_back(Coupler{r_bs2});
    if (loss_per_stage > 0.0) stages.emplace_back(Loss{loss_per_stage, loss_arm});
    return make_circuit(std::move(stages), {{"type", "ev"}});
}

}  // namespace ifm
