#include "ifm/counting.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ifm {

namespace {

constexpr std::uint64_t kBlockGates = 1u << 16;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t block) {
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (block + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double canonical(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Knuth's product-of-uniforms sampler; exact and cheap for mu of order 1.
int poisson(std::mt19937_64& rng, double exp_neg_mu) {
    int k = 0;
    double p = canonical(rng);
    while (p > exp_neg_mu) {
        ++k;
        p *= canonical(rng);
    }
    return k;
}

struct OutcomeSplit {
    double upper = 0.0;
    double upper_or_lower = 0.0;
    double upper_lower_or_absorbed = 0.0;
};

void accumulate_block(const ExperimentConfig& cfg, const OutcomeSplit& split, double exp_neg_mu,
                      std::uint64_t block, std::uint64_t gates_in_block, CountingRecord& rec) {
    std::mt19937_64 rng(mix_seed(cfg.rng_seed, block));
    for (std::uint64_t g = 0; g < gates_in_block; ++g) {
        const int photons = poisson(rng, exp_neg_mu);
        if (photons >= 2) ++rec.multi_photon_gates;
        bool click_tap = false, click_lower = false, click_upper = false;
        for (int j = 0; j < photons; ++j) {
            if (canonical(rng) < cfg.tap_ratio) {
                if (canonical(rng) < cfg.a_tap) click_tap = true;
                continue;
            }
            const double u = canonical(rng);
            if (u < split.upper) {
                if (canonical(rng) < cfg.a_upper) click_upper = true;
            } else if (u < split.upper_or_lower) {
                if (canonical(rng) < cfg.a_lower) click_lower = true;
            } else if (u < split.upper_lower_or_absorbed) {
                ++rec.explosions;
            }
            // remainder: photon lost, nothing fires
        }
        if (cfg.dark_rate > 0.0) {
            if (!click_tap && canonical(rng) < cfg.dark_rate) click_tap = true;
            if (!click_lower && canonical(rng) < cfg.dark_rate) click_lower = true;
            if (!click_upper && canonical(rng) < cfg.dark_rate) click_upper = true;
        }
        rec.c_tap += click_tap;
        rec.c_lower += click_lower;
        rec.c_upper += click_upper;
    }
}

void check_probability(double value, const char* what) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must be in [0, 1]");
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    circuit.validate();
    if (!(mu >= 0.0)) throw std::invalid_argument("mu must be >= 0");
    if (gates < 1) throw std::invalid_argument("need at least one gate");
    check_probability(a_lower, "a_lower");
    check_probability(a_upper, "a_upper");
    check_probability(a_tap, "a_tap");
    check_probability(tap_ratio, "tap_ratio");
    check_probability(dark_rate, "dark_rate");
}

CountingRecord run_counting(const ExperimentConfig& config, unsigned threads) {
    config.validate();

    const PathState out = propagate(PathState::lower_input(), config.circuit);
    OutcomeSplit split;
    split.upper = out.p_upper();
    split.upper_or_lower = split.upper + out.p_lower();
    split.upper_lower_or_absorbed = split.upper_or_lower + out.p_absorbed;

    const double exp_neg_mu = std::exp(-config.mu);
    const std::uint64_t n_blocks = (config.gates + kBlockGates - 1) / kBlockGates;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_blocks));

    std::vector<CountingRecord> partials(threads);
    auto worker = [&](unsigned t) {
        for (std::uint64_t b = t; b < n_blocks; b += threads) {
            const std::uint64_t first_gate = b * kBlockGates;
            const std::uint64_t gates_in_block =
                std::min<std::uint64_t>(kBlockGates, config.gates - first_gate);
            accumulate_block(config, split, exp_neg_mu, b, gates_in_block, partials[t]);
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    CountingRecord rec;
    rec.gates = config.gates;
    rec.seed = config.rng_seed;
    for (const auto& partial : partials) {
        rec.c_tap += partial.c_tap;
        rec.c_lower += partial.c_lower;
        rec.c_upper += partial.c_upper;
        rec.explosions += partial.explosions;
        rec.multi_photon_gates += partial.multi_photon_gates;
    }
    return rec;
}

Estimate estimate_eta_ev(const CountingRecord& rec, double a_upper_over_lower,
                         double ratio_sigma) {
    if (rec.c_upper == 0) {
        throw std::domain_error("eta_ev undefined: no upper-port counts");
    }
    const double cl = static_cast<double>(rec.c_lower);
    const double cu = static_cast<double>(rec.c_upper);
    const double q = a_upper_over_lower;
    const double eta = 1.0 / (2.0 + q * cl / cu);
    const double e2 = eta * eta;
    const double var = e2 * e2 *
                       (q * q * cl / (cu * cu) + q * q * cl * cl / (cu * cu * cu) +
                        (cl * cl) / (cu * cu) * ratio_sigma * ratio_sigma);
    return {eta, std::sqrt(var)};
}

Estimate estimate_eta_zeno(const CountingRecord& rec, double a_lower_over_upper,
                           double ratio_sigma) {
    const double cl = static_cast<double>(rec.c_lower);
    const double ct = static_cast<double>(rec.c_tap);
    const double cu = static_cast<double>(rec.c_upper);
    const double r = a_lower_over_upper;
    const double denom = ct - r * cu;
    if (!(denom > 0.0)) {
        throw std::domain_error(
            "eta_zeno undefined: C_T - C_U a_L/a_U is not positive (efficiency miscalibration?)");
    }
    const double eta = cl / denom;
    const double d2 = denom * denom;
    const double var = cl / d2 + cl * cl * ct / (d2 * d2) + r * r * cl * cl * cu / (d2 * d2) +
                       cl * cl * cu * cu / (d2 * d2) * ratio_sigma * ratio_sigma;
    return {eta, std::sqrt(var)};
}

Estimate estimate_eta_loss_corrected(const CountingRecord& rec, double a_lower, double a_upper) {
    if (!(a_lower > 0.0) || !(a_upper > 0.0)) {
        throw std::invalid_argument("detector efficiencies must be positive");
    }
    const double lower = static_cast<double>(rec.c_lower) / a_lower;
    const double upper = static_cast<double>(rec.c_upper) / a_upper;
    const double exploded = static_cast<double>(rec.explosions);
    const double total = lower + upper + exploded;
    if (!(total > 0.0)) {
        throw std::domain_error("eta_loss_corrected undefined: no conclusive events recorded");
    }
    const double eta = lower / total;
    const double t2 = total * total;
    const double var_lower = static_cast<double>(rec.c_lower) / (a_lower * a_lower);
    const double var_upper = static_cast<double>(rec.c_upper) / (a_upper * a_upper);
    const double var = (upper + exploded) * (upper + exploded) / (t2 * t2) * var_lower +
                       lower * lower / (t2 * t2) * (var_upper + exploded);
    return {eta, std::sqrt(var)};
}

}  // namespace ifm
