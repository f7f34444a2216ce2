#pragma once

#include "ifm/optics.hpp"

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace ifm {

/// Linear effective-index model n_eff(lambda) = n_eff0 + dn/dlambda *
/// (lambda - lambda0). Under this model the arm-imbalance phase is exactly
/// 2 pi dL (n_g / lambda + dn/dlambda), so fringes repeat when 1/lambda
/// advances by 1/(n_g dL).
struct DispersionModel {
    double n_eff0 = 2.1129;
    double dn_dlambda_per_nm = 0.0;
    double lambda0_nm = 1550.0;

    double group_index() const { return n_eff0 - lambda0_nm * dn_dlambda_per_nm; }
    double n_eff_at(double lambda_nm) const {
        return n_eff0 + dn_dlambda_per_nm * (lambda_nm - lambda0_nm);
    }

    /// Model with dn/dlambda chosen to reproduce the given group index.
    static DispersionModel from_group_index(double n_eff0, double n_g, double lambda0_nm);
    void validate() const;  // n_eff0 > 1 and n_g > 0
};

/// Arm-imbalance phase 2 pi dL n_eff(lambda) / lambda, in radians.
double phase_at(const DispersionModel& model, double delta_l_um, double lambda_nm);

/// Fringe spacing at lambda: the exact solution of
/// 1/lambda - 1/(lambda + FSR) = 1/(n_g dL), which expands to
/// lambda^2 / (n_g dL) to first order.
double fsr_nm(const DispersionModel& model, double delta_l_um, double lambda_nm);

/// Placeholder for a stage whose phase is recomputed from the arm-length
/// imbalance at every sweep wavelength.
struct DispersiveDelay {};

using TemplateElement = std::variant<StageElement, DispersiveDelay>;

/// Circuit with unresolved dispersive phases; compiled per wavelength.
struct CircuitTemplate {
    std::vector<TemplateElement> elements;
    std::string label;

    bool has_dispersive_delay() const;
    CircuitSpec at(const DispersionModel& model, double delta_l_um, double lambda_nm) const;
};

/// Two-coupler interferometer with the dispersive section in the upper arm.
/// absorber_alpha = 0 means no absorber element at all.
CircuitTemplate ev_spectrum_template(double r_bs1, double r_bs2, double absorber_alpha = 0.0,
                                     double loss_per_stage = 0.0, Arm loss_arm = Arm::both);

/// N-coupler chain with one dispersive section per inner stage.
CircuitTemplate zeno_spectrum_template(int n_couplers, bool absorbers,
                                       double loss_per_stage = 0.0, Arm loss_arm = Arm::both);

struct SpectrumRow {
    double lambda_nm = 0.0;
    double p_upper = 0.0;
    double p_lower = 0.0;
    double p_absorbed = 0.0;
    double p_lost = 0.0;
};

struct SpectrumResult {
    std::vector<SpectrumRow> rows;
    double lambda_min_nm = 0.0;
    double lambda_max_nm = 0.0;
    double step_nm = 0.0;
    double delta_l_um = 0.0;
    std::string circuit_label;
};

/// Propagates the compiled template at every wavelength of the closed range
/// [lambda_min, lambda_max]; rows come out in increasing wavelength order.
/// A template without dispersive delays is rejected (the sweep would be
/// flat).
SpectrumResult sweep_spectrum(const CircuitTemplate& circuit_template,
                              const DispersionModel& model, double delta_l_um,
                              double lambda_min_nm, double lambda_max_nm, double step_nm);

/// (p_U - p_L)/(p_U + p_L) at the row with maximal upper-port transmission.
double visibility(const SpectrumResult& result);

/// Wavelengths of the local p_lower minima, refined by a three-point
/// parabola fit. Used to measure fringe spacing.
std::vector<double> dip_wavelengths_nm(const SpectrumResult& result);

/// Header lambda_nm,p_upper,p_lower,p_absorbed,p_lost; 15 significant
/// digits.
void write_spectrum_csv(const SpectrumResult& result, std::ostream& out);

struct ContrastPoint {
    double mismatch = 0.0;  // r_in - t_out
    double contrast = 0.0;  // min over phase of p_L / max over phase of p_U
};

/// Interference contrast of a two-coupler interferometer versus the
/// mismatch between input reflectivity and output transmissivity, swept
/// over a full phase period.
std::vector<ContrastPoint> contrast_vs_mismatch(double r_in, const std::vector<double>& t_out_list,
                                                int phase_points = 4096);

}  // namespace ifm
