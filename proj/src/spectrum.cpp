#include "ifm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace ifm {

DispersionModel DispersionModel::from_group_index(double n_eff0, double n_g, double lambda0_nm) {
    if (!(lambda0_nm > 0.0)) throw std::invalid_argument("lambda0 must be positive");
    DispersionModel model;
    model.n_eff0 = n_eff0;
    model.lambda0_nm = lambda0_nm;
    model.dn_dlambda_per_nm = (n_eff0 - n_g) / lambda0_nm;
    model.validate();
    return model;
}

void DispersionModel::validate() const {
    if (!(n_eff0 > 1.0)) throw std::invalid_argument("n_eff0 must exceed 1");
    if (!(group_index() > 0.0)) throw std::invalid_argument("group index must be positive");
    if (!(lambda0_nm > 0.0)) throw std::invalid_argument("lambda0 must be positive");
}

double phase_at(const DispersionModel& model, double delta_l_um, double lambda_nm) {
    if (!(lambda_nm > 0.0)) throw std::invalid_argument("wavelength must be positive");
    if (delta_l_um < 0.0) throw std::invalid_argument("path imbalance must be >= 0");
    return 2.0 * std::numbers::pi * delta_l_um * 1000.0 * model.n_eff_at(lambda_nm) / lambda_nm;
}

double fsr_nm(const DispersionModel& model, double delta_l_um, double lambda_nm) {
    if (!(lambda_nm > 0.0)) throw std::invalid_argument("wavelength must be positive");
    const double ng_dl = model.group_index() * delta_l_um * 1000.0;
    if (ng_dl <= 0.0) throw std::invalid_argument("n_g * delta_L must be positive");
    if (ng_dl <= lambda_nm) throw std::invalid_argument("n_g * delta_L too small for a fringe period");
    return 1.0 / (1.0 / lambda_nm - 1.0 / ng_dl) - lambda_nm;
}

bool CircuitTemplate::has_dispersive_delay() const {
    return std::any_of(elements.begin(), elements.end(), [](const TemplateElement& e) {
        return std::holds_alternative<DispersiveDelay>(e);
    });
}

CircuitSpec CircuitTemplate::at(const DispersionModel& model, double delta_l_um,
                                double lambda_nm) const {
    std::vector<StageElement> stages;
    stages.reserve(elements.size());
    for (const auto& element : elements) {
        if (std::holds_alternative<DispersiveDelay>(element)) {
            stages.emplace_back(PhaseShift{phase_at(model, delta_l_um, lambda_nm)});
        } else {
            stages.push_back(std::get<StageElement>(element));
        }
    }
    CircuitSpec circuit = make_circuit(std::move(stages));
    circuit.metadata["label"] = label;
    return circuit;
}

CircuitTemplate ev_spectrum_template(double r_bs1, double r_bs2, double absorber_alpha,
                                     double loss_per_stage, Arm loss_arm) {
    CircuitTemplate tmpl;
    tmpl.label = "ev";
    tmpl.elements.emplace_back(StageElement{Coupler{r_bs1}});
    tmpl.elements.emplace_back(DispersiveDelay{});
    if (absorber_alpha > 0.0) tmpl.elements.emplace_back(StageElement{Absorber{absorber_alpha}});
    if (loss_per_stage > 0.0) tmpl.elements.emplace_back(StageElement{Loss{loss_per_stage, loss_arm}});
    tmpl.elements.emplace_back(StageElement{Coupler{r_bs2}});
    if (loss_per_stage > 0.0) tmpl.elements.emplace_back(StageElement{Loss{loss_per_stage, loss_arm}});
    return tmpl;
}

CircuitTemplate zeno_spectrum_template(int n_couplers, bool absorbers, double loss_per_stage,
                                       Arm loss_arm) {
    if (n_couplers < 2) throw std::invalid_argument("zeno template needs at least 2 couplers");
    const double reflectivity =
        std::pow(std::cos(std::numbers::pi / (2.0 * n_couplers)), 2);
    CircuitTemplate tmpl;
    tmpl.label = "zeno-" + std::to_string(n_couplers);
    for (int k = 1; k <= n_couplers; ++k) {
        tmpl.elements.emplace_back(StageElement{Coupler{reflectivity}});
        if (k < n_couplers) {
            tmpl.elements.emplace_back(DispersiveDelay{});
            if (absorbers) tmpl.elements.emplace_back(StageElement{Absorber{1.0}});
        }
        if (loss_per_stage > 0.0) {
            tmpl.elements.emplace_back(StageElement{Loss{loss_per_stage, loss_arm}});
        }
    }
    return tmpl;
}

SpectrumResult sweep_spectrum(const CircuitTemplate& circuit_template,
                              const DispersionModel& model, double delta_l_um,
                              double lambda_min_nm, double lambda_max_nm, double step_nm) {
    model.validate();
    if (!circuit_template.has_dispersive_delay()) {
        throw std::invalid_argument(
            "circuit template has no dispersive delay; a wavelength sweep would be flat");
    }
    if (!(lambda_min_nm > 0.0) || lambda_max_nm < lambda_min_nm) {
        throw std::invalid_argument("bad sweep range");
    }
    if (!(step_nm > 0.0)) throw std::invalid_argument("sweep step must be positive");

    SpectrumResult result;
    result.lambda_min_nm = lambda_min_nm;
    result.lambda_max_nm = lambda_max_nm;
    result.step_nm = step_nm;
    result.delta_l_um = delta_l_um;
    result.circuit_label = circuit_template.label;

    const auto n_steps =
        static_cast<std::size_t>(std::floor((lambda_max_nm - lambda_min_nm) / step_nm + 1e-9));
    result.rows.reserve(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i) {
        const double lambda = lambda_min_nm + static_cast<double>(i) * step_nm;
        const CircuitSpec circuit = circuit_template.at(model, delta_l_um, lambda);
        const PathState state = propagate(PathState::lower_input(), circuit);
        result.rows.push_back(
            {lambda, state.p_upper(), state.p_lower(), state.p_absorbed, state.p_lost});
    }
    return result;
}

double visibility(const SpectrumResult& result) {
    if (result.rows.empty()) throw std::invalid_argument("visibility of an empty spectrum");
    const auto best = std::max_element(
        result.rows.begin(), result.rows.end(),
        [](const SpectrumRow& a, const SpectrumRow& b) { return a.p_upper < b.p_upper; });
    const double denom = best->p_upper + best->p_lower;
    if (denom <= 0.0) {
        throw std::domain_error("visibility undefined: both output ports dark at the peak row");
    }
    return (best->p_upper - best->p_lower) / denom;
}

std::vector<double> dip_wavelengths_nm(const SpectrumResult& result) {
    std::vector<double> dips;
    const auto& rows = result.rows;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        if (rows[i].p_lower < rows[i - 1].p_lower && rows[i].p_lower <= rows[i + 1].p_lower) {
            const double y1 = rows[i - 1].p_lower;
            const double y2 = rows[i].p_lower;
            const double y3 = rows[i + 1].p_lower;
            const double curvature = y1 - 2.0 * y2 + y3;
            double offset = 0.0;
            if (curvature > 0.0) offset = 0.5 * (y1 - y3) / curvature * result.step_nm;
            dips.push_back(rows[i].lambda_nm + offset);
        }
    }
    return dips;
}

void write_spectrum_csv(const SpectrumResult& result, std::ostream& out) {
    out << "lambda_nm,p_upper,p_lower,p_absorbed,p_lost\n";
    out.precision(15);
    for (const auto& row : result.rows) {
        out << row.lambda_nm << ',' << row.p_upper << ',' << row.p_lower << ','
            << row.p_absorbed << ',' << row.p_lost << '\n';
    }
}

std::vector<ContrastPoint> contrast_vs_mismatch(double r_in, const std::vector<double>& t_out_list,
                                                int phase_points) {
    if (!(r_in >= 0.0 && r_in <= 1.0)) throw std::invalid_argument("r_in must be in [0, 1]");
    if (phase_points < 2) throw std::invalid_argument("need at least 2 phase points");

    std::vector<ContrastPoint> points;
    points.reserve(t_out_list.size());
    for (double t_out : t_out_list) {
        if (!(t_out >= 0.0 && t_out <= 1.0)) {
            throw std::invalid_argument("t_out must be in [0, 1]");
        }
        double min_p_lower = std::numeric_limits<double>::infinity();
        double max_p_upper = 0.0;
        for (int k = 0; k < phase_points; ++k) {
            const double phi = 2.0 * std::numbers::pi * k / phase_points;
            const CircuitSpec circuit = make_circuit(
                {Coupler{r_in}, PhaseShift{phi}, Coupler{1.0 - t_out}});
            const PathState state = propagate(PathState::lower_input(), circuit);
            min_p_lower = std::min(min_p_lower, state.p_lower());
            max_p_upper = std::max(max_p_upper, state.p_upper());
        }
        points.push_back({r_in - t_out, min_p_lower / max_p_upper});
    }
    return points;
}

}  // namespace ifm
