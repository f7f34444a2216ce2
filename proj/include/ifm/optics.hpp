#pragma once

#include <Eigen/Core>

#include <complex>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace ifm {

using Complex = std::complex<double>;

/// Tolerance for the state-normalization contract checked on every
/// propagation step. Algebraic identities in the tests use 1e-12; long
/// compositions accumulate at most a few ulps per stage, so 1e-8 leaves
/// plenty of headroom while still catching genuinely broken inputs.
inline constexpr double kContractTol = 1e-8;

/// Two-path single-photon state: complex amplitudes in the upper and lower
/// arm plus the probability already absorbed or lost upstream. A valid state
/// satisfies |upper|^2 + |lower|^2 + p_absorbed + p_lost = 1.
struct PathState {
    Complex upper{0.0, 0.0};
    Complex lower{0.0, 0.0};
    double p_absorbed = 0.0;
    double p_lost = 0.0;

    double p_upper() const { return std::norm(upper); }
    double p_lower() const { return std::norm(lower); }

    /// |upper|^2 + |lower|^2 + p_absorbed + p_lost - 1.
    double norm_defect() const;
    bool is_normalized(double tol = kContractTol) const;

    /// Photon entering through the lower input port.
    static PathState lower_input() { return PathState{{0.0, 0.0}, {1.0, 0.0}, 0.0, 0.0}; }
};

/// Which arm a loss element acts on. The physical default is symmetric loss
/// on both arms; the selective variants exist for sensitivity studies.
enum class Arm { both, upper, lower };

struct Coupler {
    double reflectivity = 0.5;
};

/// Phase accumulated in the upper arm relative to the lower one.
struct PhaseShift {
    double delta_phi_rad = 0.0;
};

/// One-way absorber ("bomb") coupled to the upper arm. alpha = 1 is a full
/// absorber, alpha = 0 a bystander.
struct Absorber {
    double alpha = 1.0;
};

struct Loss {
    double fraction = 0.0;
    Arm arm = Arm::both;
};

using StageElement = std::variant<Coupler, PhaseShift, Absorber, Loss>;

/// Ordered element chain of an interferometer circuit.
struct CircuitSpec {
    std::vector<StageElement> stages;
    int n_couplers = 0;
    std::map<std::string, std::string> metadata;

    /// Throws std::invalid_argument if n_couplers disagrees with the stage
    /// list or any element parameter is out of range.
    void validate() const;
};

/// Builds a CircuitSpec with n_couplers derived from the stage list.
CircuitSpec make_circuit(std::vector<StageElement> stages,
                         std::map<std::string, std::string> metadata = {});

/// Lossless symmetric beam-splitter matrix [[sqrt(R), i sqrt(T)],
/// [i sqrt(T), sqrt(R)]] with T = 1 - R, acting on (upper, lower).
Eigen::Matrix2cd coupler_matrix(double reflectivity);

/// Applies one element to a normalized state. Absorbed and lost probability
/// are accumulated, never returned to the amplitudes.
PathState apply_stage(const PathState& state, const StageElement& element);

/// Folds apply_stage over the circuit in order.
PathState propagate(PathState state, const CircuitSpec& circuit);

/// N couplers with R = cos^2(pi/2N); with absorbers, a full absorber after
/// each coupler except the last (N-1 absorbers); with loss_per_stage > 0,
/// one loss element at the end of every stage.
CircuitSpec build_zeno_circuit(int n_couplers, bool absorbers, double loss_per_stage,
                               Arm loss_arm = Arm::both);

/// Two-coupler Mach-Zehnder; the absorber sits in the upper arm between the
/// couplers. Degenerate case of the Zeno chain with free reflectivities.
CircuitSpec build_ev_circuit(double r_bs1, double r_bs2, bool absorber,
                             double loss_per_stage = 0.0, Arm loss_arm = Arm::both);

}  // namespace ifm
