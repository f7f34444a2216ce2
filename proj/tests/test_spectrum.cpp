#include "ifm/spectrum.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

using namespace ifm;

namespace {

const DispersionModel kDefaultModel = DispersionModel::from_group_index(2.1129, 4.7, 1550.0);

// Direct two-coupler interference formulas, independent of the matrix engine.
double ev_p_lower_direct(double r1, double r2, double phi) {
    const double t1 = 1.0 - r1, t2 = 1.0 - r2;
    return r1 * r2 + t1 * t2 -
           2.0 * std::sqrt(r1 * r2 * t1 * t2) * std::cos(phi);
}

double ev_p_upper_direct(double r1, double r2, double phi) {
    const double t1 = 1.0 - r1, t2 = 1.0 - r2;
    return r2 * t1 + r1 * t2 + 2.0 * std::sqrt(r1 * r2 * t1 * t2) * std::cos(phi);
}

}  // namespace

TEST_CASE("group index derivation") {
    CHECK(kDefaultModel.group_index() == doctest::Approx(4.7).epsilon(1e-12));
    CHECK(kDefaultModel.dn_dlambda_per_nm ==
          doctest::Approx((2.1129 - 4.7) / 1550.0).epsilon(1e-12));
    CHECK_THROWS_AS(DispersionModel::from_group_index(0.9, 4.7, 1550.0), std::invalid_argument);
    CHECK_THROWS_AS(DispersionModel::from_group_index(2.1, -1.0, 1550.0), std::invalid_argument);
}

TEST_CASE("phase_at evaluates the imbalance phase") {
    CHECK(phase_at(kDefaultModel, 0.0, 1550.0) == 0.0);

    DispersionModel flat;
    flat.n_eff0 = 2.1129;
    flat.dn_dlambda_per_nm = 0.0;
    flat.lambda0_nm = 1550.0;
    const double expected = 2.0 * std::numbers::pi * 100000.0 * 2.1129 / 1550.0;
    CHECK(phase_at(flat, 100.0, 1550.0) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(expected / (2.0 * std::numbers::pi) == doctest::Approx(136.3161290).epsilon(1e-9));

    CHECK_THROWS_AS(phase_at(flat, 100.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(phase_at(flat, -1.0, 1550.0), std::invalid_argument);
}

TEST_CASE("wavelengths one FSR apart differ by exactly one fringe period") {
    for (double lambda : {1520.0, 1541.49, 1550.0, 1559.3}) {
        const double spacing = fsr_nm(kDefaultModel, 100.0, lambda);
        const double delta = phase_at(kDefaultModel, 100.0, lambda) -
                             phase_at(kDefaultModel, 100.0, lambda + spacing);
        CHECK(std::abs(delta - 2.0 * std::numbers::pi) < 1e-6);
    }
}

TEST_CASE("FSR magnitude and scaling") {
    const double fsr = fsr_nm(kDefaultModel, 100.0, 1550.0);
    CHECK(fsr == doctest::Approx(1550.0 * 1550.0 / (4.7 * 100000.0)).epsilon(4e-3));
    CHECK(std::abs(fsr - 5.11) < 0.02);

    const double fsr_double = fsr_nm(kDefaultModel, 200.0, 1550.0);
    CHECK(fsr_double / fsr == doctest::Approx(0.5).epsilon(5e-3));

    CHECK_THROWS_AS(fsr_nm(kDefaultModel, 0.0, 1550.0), std::invalid_argument);
}

TEST_CASE("matched EV sweep shows near-perfect interference") {
    const CircuitTemplate tmpl = ev_spectrum_template(0.852, 0.148);
    const SpectrumResult result = sweep_spectrum(tmpl, kDefaultModel, 100.0, 1520.0, 1560.0, 0.01);
    REQUIRE(result.rows.size() == 4001);

    double min_lower = 1.0, max_upper = 0.0;
    double previous_lambda = 0.0;
    for (const auto& row : result.rows) {
        CHECK(row.lambda_nm > previous_lambda);
        previous_lambda = row.lambda_nm;
        const double sum = row.p_upper + row.p_lower + row.p_absorbed + row.p_lost;
        CHECK(std::abs(sum - 1.0) < 1e-10);
        min_lower = std::min(min_lower, row.p_lower);
        max_upper = std::max(max_upper, row.p_upper);
    }
    CHECK(min_lower / max_upper < 0.002);
    CHECK(visibility(result) > 0.998);
}

TEST_CASE("sweep dip spacing agrees with the fsr operation") {
    const CircuitTemplate tmpl = ev_spectrum_template(0.852, 0.148);
    const SpectrumResult result = sweep_spectrum(tmpl, kDefaultModel, 100.0, 1540.0, 1560.0, 0.01);
    const std::vector<double> dips = dip_wavelengths_nm(result);
    REQUIRE(dips.size() >= 2);
    for (std::size_t i = 0; i + 1 < dips.size(); ++i) {
        const double spacing = dips[i + 1] - dips[i];
        CHECK(std::abs(spacing - fsr_nm(kDefaultModel, 100.0, dips[i])) < result.step_nm);
    }
}

TEST_CASE("shifting by one FSR reproduces the transmission") {
    const CircuitTemplate tmpl = ev_spectrum_template(0.852, 0.148);
    for (double lambda : {1522.7, 1535.0, 1541.49, 1550.0, 1556.3}) {
        const double shifted = lambda + fsr_nm(kDefaultModel, 100.0, lambda);
        const PathState at = propagate(PathState::lower_input(),
                                       tmpl.at(kDefaultModel, 100.0, lambda));
        const PathState next = propagate(PathState::lower_input(),
                                         tmpl.at(kDefaultModel, 100.0, shifted));
        CHECK(std::abs(at.p_lower() - next.p_lower()) < 1e-3);
    }
}

TEST_CASE("full absorbers erase the spectral fringes") {
    const SpectrumResult no_absorber = sweep_spectrum(zeno_spectrum_template(10, false),
                                                      kDefaultModel, 100.0, 1520.0, 1560.0, 0.01);
    const SpectrumResult with_absorbers = sweep_spectrum(zeno_spectrum_template(10, true),
                                                         kDefaultModel, 100.0, 1520.0, 1560.0, 0.01);
    double mod_free = 0.0, mod_absorbed = 0.0;
    double lo_free = 1.0, lo_abs = 1.0, hi_free = 0.0, hi_abs = 0.0;
    for (const auto& row : no_absorber.rows) {
        lo_free = std::min(lo_free, row.p_lower);
        hi_free = std::max(hi_free, row.p_lower);
    }
    for (const auto& row : with_absorbers.rows) {
        lo_abs = std::min(lo_abs, row.p_lower);
        hi_abs = std::max(hi_abs, row.p_lower);
    }
    mod_free = hi_free - lo_free;
    mod_absorbed = hi_abs - lo_abs;
    CHECK(mod_absorbed < mod_free / 10.0);
    // with full absorbers the lower-arm path never interferes: flat at R^N
    CHECK(hi_abs == doctest::Approx(std::pow(std::pow(std::cos(std::numbers::pi / 20.0), 2), 10))
                        .epsilon(1e-12));
    CHECK(visibility(no_absorber) > 0.98);
}

TEST_CASE("zero-width sweep emits a single row") {
    const SpectrumResult result = sweep_spectrum(ev_spectrum_template(0.5, 0.5), kDefaultModel,
                                                 100.0, 1550.0, 1550.0, 0.01);
    CHECK(result.rows.size() == 1);
    CHECK(result.rows.front().lambda_nm == 1550.0);
}

TEST_CASE("sweep rejects a template without dispersive delays") {
    CircuitTemplate tmpl;
    tmpl.elements = {StageElement{Coupler{0.5}}, StageElement{Coupler{0.5}}};
    CHECK_THROWS_AS(sweep_spectrum(tmpl, kDefaultModel, 100.0, 1520.0, 1560.0, 0.01),
                    std::invalid_argument);
}

TEST_CASE("sweep validates range and step") {
    const CircuitTemplate tmpl = ev_spectrum_template(0.5, 0.5);
    CHECK_THROWS_AS(sweep_spectrum(tmpl, kDefaultModel, 100.0, 1560.0, 1520.0, 0.01),
                    std::invalid_argument);
    CHECK_THROWS_AS(sweep_spectrum(tmpl, kDefaultModel, 100.0, 1520.0, 1560.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("visibility is exactly one at a phase-commensurate point") {
    // 77.5 um * n_eff 2.0 / 1550 nm = exactly 100 fringes
    DispersionModel flat;
    flat.n_eff0 = 2.0;
    flat.dn_dlambda_per_nm = 0.0;
    flat.lambda0_nm = 1550.0;
    const SpectrumResult result = sweep_spectrum(ev_spectrum_template(0.852, 0.148), flat, 77.5,
                                                 1550.0, 1550.0, 0.01);
    CHECK(std::abs(visibility(result) - 1.0) < 1e-9);
}

TEST_CASE("visibility error cases") {
    SpectrumResult empty;
    CHECK_THROWS_AS(visibility(empty), std::invalid_argument);

    SpectrumResult dark;
    dark.rows.push_back({1550.0, 0.0, 0.0, 1.0, 0.0});
    CHECK_THROWS_AS(visibility(dark), std::domain_error);
}

TEST_CASE("spectrum CSV format") {
    const SpectrumResult result = sweep_spectrum(ev_spectrum_template(0.852, 0.148), kDefaultModel,
                                                 100.0, 1550.0, 1550.05, 0.01);
    std::ostringstream out;
    write_spectrum_csv(result, out);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "lambda_nm,p_upper,p_lower,p_absorbed,p_lost");
    std::string row;
    std::getline(in, row);
    SpectrumRow parsed{};
    char c = 0;
    std::istringstream row_in(row);
    row_in >> parsed.lambda_nm >> c >> parsed.p_upper >> c >> parsed.p_lower >> c >>
        parsed.p_absorbed >> c >> parsed.p_lost;
    CHECK(parsed.lambda_nm == result.rows[0].lambda_nm);
    CHECK(parsed.p_upper == doctest::Approx(result.rows[0].p_upper).epsilon(1e-12));
}

TEST_CASE("contrast is exactly zero for matched couplers") {
    for (double r_in : {0.99, 0.9, 0.5}) {
        const auto points = contrast_vs_mismatch(r_in, {r_in});
        REQUIRE(points.size() == 1);
        CHECK(points[0].mismatch == 0.0);
        CHECK(points[0].contrast == 0.0);
    }
}

TEST_CASE("contrast grows strictly with the coupler mismatch") {
    for (double r_in : {0.99, 0.9, 0.5}) {
        std::vector<double> t_outs;
        for (int i = 0; i <= 10; ++i) t_outs.push_back(r_in - 0.01 * i);
        const auto points = contrast_vs_mismatch(r_in, t_outs);
        for (std::size_t i = 0; i + 1 < points.size(); ++i) {
            CHECK(points[i + 1].contrast > points[i].contrast);
        }
    }
    // negative mismatch worsens the contrast symmetrically in trend
    const auto negative = contrast_vs_mismatch(0.5, {0.55});
    CHECK(negative[0].mismatch < 0.0);
    CHECK(negative[0].contrast > 0.0);
}

TEST_CASE("contrast agrees with a brute-force phase-grid oracle") {
    const int grid = 10000;
    for (const auto& [r_in, t_out] : std::vector<std::pair<double, double>>{
             {0.5, 0.4}, {0.9, 0.85}, {0.99, 0.905}}) {
        double min_lower = 1e300, max_upper = 0.0;
        for (int k = 0; k < grid; ++k) {
            const double phi = 2.0 * std::numbers::pi * k / grid;
            min_lower = std::min(min_lower, ev_p_lower_direct(r_in, 1.0 - t_out, phi));
            max_upper = std::max(max_upper, ev_p_upper_direct(r_in, 1.0 - t_out, phi));
        }
        const double oracle = min_lower / max_upper;
        const auto points = contrast_vs_mismatch(r_in, {t_out});
        CHECK(std::abs(points[0].contrast - oracle) < 1e-6);
    }
    const auto frozen = contrast_vs_mismatch(0.5, {0.4});
    CHECK(frozen[0].contrast == doctest::Approx(0.0102051443).epsilon(1e-7));
}
