// Acceptance suite: runs every release criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exit code 0 only if all pass.

#include "ifm/analysis.hpp"
#include "ifm/counting.hpp"
#include "ifm/coupler_design.hpp"
#include "ifm/optics.hpp"
#include "ifm/spectrum.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Checker {
    bool ok = true;
    std::ostringstream notes;

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            notes << " FAILED{" << what << "}";
        }
    }
    void note(const std::string& text) { notes << ' ' << text; }
};

int g_failures = 0;

void run_criterion(int id, const std::string& name, double budget_s,
                   const std::function<void(Checker&)>& body) {
    Checker check;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& e) {
        check.ok = false;
        check.notes << " EXCEPTION{" << e.what() << "}";
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed >= budget_s) {
        check.ok = false;
        check.notes << " OVER-BUDGET{" << elapsed << "s >= " << budget_s << "s}";
    }
    if (!check.ok) ++g_failures;
    std::printf("[%s] criterion %d: %s (%.2fs)%s\n", check.ok ? "PASS" : "FAIL", id, name.c_str(),
                elapsed, check.notes.str().c_str());
    std::fflush(stdout);
}

double sq(double x) { return x * x; }

}  // namespace

int main() {
    using namespace ifm;

    run_criterion(1, "EV efficiency: eta(0.5,0.5) = 1/3 exactly; complementary sup below 1/2", 1.0,
                  [](Checker& check) {
                      const IfmReport balanced = ev_efficiency({0.5, 0.5});
                      check.expect(balanced.eta == 1.0 / 3.0, "eta(0.5,0.5) == 1/3 exactly");
                      double sup = 0.0;
                      for (int i = 0; i <= 999; ++i) {
                          const double r = i / 1000.0;
                          const double eta = ev_efficiency({r, 1.0 - r}).eta;
                          check.expect(eta < 0.5, "eta < 1/2 on the grid");
                          sup = std::max(sup, eta);
                      }
                      const double at_999 = ev_efficiency({0.999, 1.0 - 0.999}).eta;
                      check.expect(std::abs(at_999 - 0.5) < 1e-3, "eta(0.999) within 1e-3 of 1/2");
                      std::ostringstream note;
                      note << "sup=" << sup;
                      check.note(note.str());
                  });

    run_criterion(2, "Zeno reflectivity rule for N=5/10/20", 1.0, [](Checker& check) {
        const double targets[3][2] = {{5, 0.9045}, {10, 0.9755}, {20, 0.9938}};
        for (const auto& [n, target] : targets) {
            const CircuitSpec chain = build_zeno_circuit(static_cast<int>(n), false, 0.0);
            const double r = std::get<Coupler>(chain.stages.front()).reflectivity;
            std::ostringstream what;
            what << "R(N=" << n << ") = " << r << " vs " << target;
            check.expect(std::abs(r - target) < 5e-4, what.str());
        }
    });

    run_criterion(3, "Lossless Zeno oracle equivalence for N in 2..64", 1.0, [](Checker& check) {
        for (int n = 2; n <= 64; ++n) {
            const PathState out = propagate(PathState::lower_input(),
                                            build_zeno_circuit(n, true, 0.0));
            const double closed =
                std::pow(std::pow(std::cos(std::numbers::pi / (2.0 * n)), 2), n);
            std::ostringstream what;
            what << "N=" << n << " |matrix - closed| < 1e-10";
            check.expect(std::abs(out.p_lower() - closed) < 1e-10, what.str());
        }
    });

    run_criterion(
        4, "Lossy-chain reproduction: published etas at 7.4%/21.2% per-stage loss", 120.0,
        [](Checker& check) {
            struct Target {
                int n;
                double loss;
                double value;
                double sigma;
            };
            const std::vector<Target> targets = {
                {5, 0.074, 0.506, 0.014}, {10, 0.074, 0.682, 0.008}, {20, 0.212, 0.212, 0.002}};
            for (const auto& target : targets) {
                // analytic route: symmetric per-stage loss, loss-renormalized eta
                const IfmReport report = zeno_probabilities(target.n, target.loss);
                const double eta_norm = report.eta_loss_normalized();

                // independent closed-form oracle (geometric sums, no matrices)
                const double r = std::pow(std::cos(std::numbers::pi / (2.0 * target.n)), 2);
                const double rx = r * (1.0 - target.loss);
                const double t = 1.0 - r;
                const double p_lower = std::pow(rx, target.n);
                const double p_upper = t * (1.0 - target.loss) * std::pow(rx, target.n - 1);
                const double p_abs = t * (1.0 - std::pow(rx, target.n - 1)) / (1.0 - rx);
                const double oracle = p_lower / (p_lower + p_upper + p_abs);
                std::ostringstream what;
                what << "N=" << target.n << " analytic eta_norm " << eta_norm << " vs oracle";
                check.expect(std::abs(eta_norm - oracle) < 1e-10, what.str());

                std::ostringstream band;
                band << "N=" << target.n << " analytic " << eta_norm << " in " << target.value
                     << "+-" << 3.0 * target.sigma;
                check.expect(std::abs(eta_norm - target.value) <= 3.0 * target.sigma, band.str());

                // Monte Carlo route at 1e7 gates, mu = 0.1
                ExperimentConfig config;
                config.circuit = build_zeno_circuit(target.n, true, target.loss);
                config.mu = 0.1;
                config.gates = 10000000;
                config.rng_seed = 42 + static_cast<std::uint64_t>(target.n);
                const CountingRecord rec = run_counting(config);
                const Estimate estimate = estimate_eta_loss_corrected(rec);
                const double combined =
                    std::sqrt(sq(target.sigma) + sq(estimate.sigma));
                std::ostringstream mc;
                mc << "N=" << target.n << " MC " << estimate.value << " in " << target.value
                   << "+-3*" << combined;
                check.expect(std::abs(estimate.value - target.value) <= 3.0 * combined, mc.str());
                std::ostringstream note;
                note << "N=" << target.n << ": analytic " << eta_norm << ", MC " << estimate.value
                     << " (target " << target.value << "+-" << target.sigma << ");";
                check.note(note.str());
            }
            check.note("symmetric per-stage loss passes all bands; arm-selective fallback unused");
        });

    const DispersionModel model = DispersionModel::from_group_index(2.1129, 4.7, 1550.0);

    run_criterion(5, "Spectral visibility: matched 2-stage > 0.998, lossless 10-stage > 0.98",
                  30.0, [&model](Checker& check) {
                      const SpectrumResult two_stage = sweep_spectrum(
                          ev_spectrum_template(0.852, 0.148), model, 100.0, 1520.0, 1560.0, 0.01);
                      const double vis2 = visibility(two_stage);
                      check.expect(vis2 > 0.998, "2-stage visibility " + std::to_string(vis2));

                      const SpectrumResult ten_stage = sweep_spectrum(
                          zeno_spectrum_template(10, false), model, 100.0, 1520.0, 1560.0, 0.01);
                      const double vis10 = visibility(ten_stage);
                      check.expect(vis10 > 0.98, "10-stage visibility " + std::to_string(vis10));
                      std::ostringstream note;
                      note << "vis2=" << vis2 << " vis10=" << vis10;
                      check.note(note.str());
                  });

    run_criterion(6, "FSR: dip spacing equals lambda^2/(n_g dL) within one sweep step", 30.0,
                  [&model](Checker& check) {
                      const SpectrumResult sweep = sweep_spectrum(
                          ev_spectrum_template(0.852, 0.148), model, 100.0, 1520.0, 1560.0, 0.01);
                      const std::vector<double> dips = dip_wavelengths_nm(sweep);
                      check.expect(dips.size() >= 2, "at least two fringe dips in the sweep");
                      std::size_t i = 0;
                      while (i + 1 < dips.size() && dips[i + 1] < 1550.0) ++i;
                      const double spacing = dips[i + 1] - dips[i];
                      const double mid = 0.5 * (dips[i] + dips[i + 1]);
                      const double first_order = mid * mid / (4.7 * 100.0 * 1000.0);
                      std::ostringstream what;
                      what << "spacing " << spacing << " vs lambda^2/(ng dL) " << first_order;
                      check.expect(std::abs(spacing - first_order) <= sweep.step_nm, what.str());
                      check.expect(std::abs(spacing - fsr_nm(model, 100.0, dips[i])) <=
                                       sweep.step_nm,
                                   "spacing vs fsr() at the left dip");
                      check.expect(std::abs(first_order - 5.11) < 0.05,
                                   "fringe period near 5.11 nm");
                  });

    run_criterion(
        7, "Contrast vs mismatch: zero at match, monotone, brute-force agreement", 10.0,
        [](Checker& check) {
            for (double r_in : {0.99, 0.9, 0.5}) {
                std::vector<double> t_outs;
                for (int i = 0; i <= 10; ++i) t_outs.push_back(r_in - 0.01 * i);
                const auto points = contrast_vs_mismatch(r_in, t_outs);
                std::ostringstream at_zero;
                at_zero << "contrast(r_in=" << r_in << ", mismatch=0) == 0";
                check.expect(points[0].contrast == 0.0, at_zero.str());
                for (std::size_t i = 0; i + 1 < points.size(); ++i) {
                    check.expect(points[i + 1].contrast > points[i].contrast,
                                 "monotone contrast growth");
                }
                // brute-force 1e4-point phase grid, direct interference formulas
                for (std::size_t i = 2; i < points.size(); i += 4) {
                    const double t_out = t_outs[i];
                    const double r2 = 1.0 - t_out;
                    const double t1 = 1.0 - r_in;
                    double min_lower = 1e300, max_upper = 0.0;
                    for (int k = 0; k < 10000; ++k) {
                        const double phi = 2.0 * std::numbers::pi * k / 10000.0;
                        const double cross = 2.0 * std::sqrt(r_in * r2 * t1 * t_out) *
                                             std::cos(phi);
                        min_lower = std::min(min_lower, r_in * r2 + t1 * t_out - cross);
                        max_upper = std::max(max_upper, r2 * t1 + r_in * t_out + cross);
                    }
                    check.expect(std::abs(points[i].contrast - min_lower / max_upper) < 1e-6,
                                 "grid oracle agreement");
                }
            }
        });

    run_criterion(
        8, "Coupler design: anchor coupling length and gap-solve round trips", 5.0,
        [](Checker& check) {
            const CouplerIndexTable table =
                load_index_table(std::string(IFM_DATA_DIR) + "/coupler_index_synthetic.csv");
            const double anchor_oracle_um = 1550.0 / (2.0 * (2.1232 - 2.1036)) / 1000.0;
            const double lc = coupling_length_um(table, 270.0);
            std::ostringstream what;
            what << "l_c(270nm) = " << lc << " vs " << anchor_oracle_um << " within 2%";
            check.expect(std::abs(lc - anchor_oracle_um) / anchor_oracle_um < 0.02, what.str());

            std::mt19937_64 rng(8211985);
            std::uniform_real_distribution<double> target(0.05, 0.99);
            double worst = 0.0;
            for (int i = 0; i < 100; ++i) {
                const double want = target(rng);
                const CouplerDesign design = solve_gap_for_reflectivity(table, want, 20.0, 2.0);
                const double got =
                    coupler_rt(coupling_length_um(table, design.gap_nm), 20.0, 2.0).reflectivity;
                worst = std::max(worst, std::abs(got - want));
            }
            std::ostringstream rt;
            rt << "worst round-trip error " << worst;
            check.expect(worst < 1e-6, rt.str());
        });

    run_criterion(
        9, "Monte Carlo statistics: multi-photon fraction and 1/sqrt(gates) convergence", 180.0,
        [](Checker& check) {
            ExperimentConfig config;
            config.circuit = build_ev_circuit(0.852, 1.0 - 0.852, true);
            config.mu = 0.1;
            config.gates = 10000000;
            config.rng_seed = 1905;
            const CountingRecord rec = run_counting(config);
            const double expected = 1.0 - 1.1 * std::exp(-0.1);
            const double sigma = std::sqrt(expected * (1.0 - expected) / config.gates);
            const double measured = static_cast<double>(rec.multi_photon_gates) / config.gates;
            std::ostringstream frac;
            frac << "multi-photon fraction " << measured << " vs " << expected << " +-3*" << sigma;
            check.expect(std::abs(measured - expected) <= 3.0 * sigma, frac.str());
            check.expect(expected < 0.05, "fraction consistent with the <0.05 bound");

            // convergence: RMS estimator error over 48 seeds at 1e5/1e6/1e7 gates
            const IfmReport report = ev_efficiency({0.852, 1.0 - 0.852});
            const double lam_lower = 0.05 * report.p_lower;
            const double lam_upper = 0.05 * report.p_upper;
            const double rho = (1.0 - std::exp(-lam_lower)) / (1.0 - std::exp(-lam_upper));
            const double target = 1.0 / (2.0 + rho);  // thinned-detector expectation
            const std::vector<std::uint64_t> gate_counts = {100000, 1000000, 10000000};
            std::vector<double> log_gates, log_rms;
            for (std::uint64_t gates : gate_counts) {
                double sum_sq = 0.0;
                for (int replica = 0; replica < 48; ++replica) {
                    ExperimentConfig c = config;
                    c.gates = gates;
                    c.rng_seed = 7000 + static_cast<std::uint64_t>(replica);
                    const Estimate est = estimate_eta_ev(run_counting(c), 1.0);
                    sum_sq += sq(est.value - target);
                }
                log_gates.push_back(std::log10(static_cast<double>(gates)));
                log_rms.push_back(0.5 * std::log10(sum_sq / 48.0));
            }
            // least-squares slope of log RMS vs log gates
            const double mean_x = (log_gates[0] + log_gates[1] + log_gates[2]) / 3.0;
            const double mean_y = (log_rms[0] + log_rms[1] + log_rms[2]) / 3.0;
            double num = 0.0, den = 0.0;
            for (int i = 0; i < 3; ++i) {
                num += (log_gates[i] - mean_x) * (log_rms[i] - mean_y);
                den += sq(log_gates[i] - mean_x);
            }
            const double slope = num / den;
            std::ostringstream sl;
            sl << "log-log RMS slope " << slope << " (want -0.5 +- 0.1)";
            check.expect(std::abs(slope + 0.5) <= 0.1, sl.str());
            std::ostringstream note;
            note << "multi-photon fraction " << measured << ", convergence slope " << slope;
            check.note(note.str());
        });

    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ALL PASS" : "RESULT",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
