#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ifm {

/// Raised by table ingestion on malformed or physically invalid input; the
/// message carries the offending row number.
class ParseError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Effective indices of the symmetric and antisymmetric supermodes of a
/// coupled waveguide pair at one gap.
struct IndexSample {
    double gap_nm = 0.0;
    double n_s = 0.0;
    double n_a = 0.0;
};

/// Gap-resolved supermode index table, typically produced by a mode solver.
struct CouplerIndexTable {
    std::vector<IndexSample> samples;
    double lambda_nm = 0.0;

    void validate() const;
    double gap_min_nm() const { return samples.front().gap_nm; }
    double gap_max_nm() const { return samples.back().gap_nm; }
};

/// CSV columns gap_nm,n_s,n_a with the wavelength given as a comment line
/// `# lambda_nm=<value>` before the header.
CouplerIndexTable load_index_table(std::istream& in);
CouplerIndexTable load_index_table(const std::string& path);

/// The table shipped with this project: an exponential-decay model anchored
/// at the 270 nm gap sample (n_s 2.1232, n_a 2.1036, single-waveguide limit
/// 2.1129 at 1550 nm), calibrated so a 590 nm gap with a 22 um effective
/// length reflects 99.38%. Synthetic stand-in for mode-solver output.
CouplerIndexTable synthetic_index_table();

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolant; reproduces the
/// nodes exactly and never overshoots monotone data.
class MonotoneCubic {
  public:
    static MonotoneCubic fit(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;

  private:
    std::vector<double> x_, y_, slope_;
};

struct InterpolatedIndices {
    double n_s = 0.0;
    double n_a = 0.0;
};

/// Supermode indices interpolated at gap_nm; refuses extrapolation.
InterpolatedIndices indices_at(const CouplerIndexTable& table, double gap_nm);

/// l_c = lambda / (2 |n_s - n_a|), in micrometres.
double coupling_length_um(const CouplerIndexTable& table, double gap_nm);

struct RtPair {
    double reflectivity = 0.0;
    double transmissivity = 0.0;
};

/// R = cos^2(pi l_eff / 2 l_c) with l_eff = length + bend correction;
/// T = 1 - R exactly.
RtPair coupler_rt(double coupling_length_um, double length_um, double bend_correction_um);

struct CouplerDesign {
    double gap_nm = 0.0;
    double length_um = 0.0;
    double bend_correction_um = 0.0;
    double coupling_length_um = 0.0;
    double reflectivity = 0.0;
    double transmissivity = 0.0;
};

/// Raised when no gap in the table reaches the requested reflectivity on the
/// first coupling lobe; carries the achievable interval.
class TargetUnreachable : public std::runtime_error {
  public:
    TargetUnreachable(const std::string& message, double lo, double hi)
        : std::runtime_error(message), achievable_lo(lo), achievable_hi(hi) {}
    double achievable_lo;
    double achievable_hi;
};

/// Bisects the gap on the first coupling lobe (l_eff < l_c) until the design
/// reflectivity matches target_r to 1e-9.
CouplerDesign solve_gap_for_reflectivity(const CouplerIndexTable& table, double target_r,
                                         double length_um, double bend_correction_um);

}  // namespace ifm
