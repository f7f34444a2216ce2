#include "ifm/coupler_design.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace ifm {

namespace {

[[noreturn]] void row_error(std::size_t line_no, const std::string& what) {
    throw ParseError("index table line " + std::to_string(line_no) + ": " + what);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

void CouplerIndexTable::validate() const {
    if (lambda_nm <= 0.0) throw ParseError("index table: missing or non-positive lambda_nm");
    if (samples.size() < 2) throw ParseError("index table: needs at least 2 samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!(s.n_s > s.n_a)) {
            throw ParseError("index table sample " + std::to_string(i + 1) +
                             ": n_s must exceed n_a (zero mode splitting carries no coupling)");
        }
        if (!(s.n_a > 1.0)) {
            throw ParseError("index table sample " + std::to_string(i + 1) + ": n_a must exceed 1");
        }
        if (i > 0 && !(s.gap_nm > samples[i - 1].gap_nm)) {
            throw ParseError("index table sample " + std::to_string(i + 1) +
                             ": gaps must be strictly increasing");
        }
    }
}

CouplerIndexTable load_index_table(std::istream& in) {
    CouplerIndexTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find("lambda_nm=");
            if (eq != std::string::npos) {
                try {
                    table.lambda_nm = std::stod(line.substr(eq + 10));
                } catch (const std::exception&) {
                    row_error(line_no, "malformed lambda_nm comment");
                }
            }
            continue;
        }
        if (!header_seen) {
            std::string header = line;
            header.erase(std::remove_if(header.begin(), header.end(),
                                        [](unsigned char c) { return std::isspace(c); }),
                         header.end());
            if (header != "gap_nm,n_s,n_a") {
                row_error(line_no, "expected header 'gap_nm,n_s,n_a', got '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        IndexSample sample;
        char c1 = 0, c2 = 0;
        if (!(row >> sample.gap_nm >> c1 >> sample.n_s >> c2 >> sample.n_a) || c1 != ',' ||
            c2 != ',') {
            row_error(line_no, "expected 'gap_nm,n_s,n_a' numeric row, got '" + line + "'");
        }
        if (!(sample.n_s > sample.n_a)) row_error(line_no, "n_s must exceed n_a");
        if (!(sample.n_a > 1.0)) row_error(line_no, "n_a must exceed 1");
        if (!table.samples.empty() && !(sample.gap_nm > table.samples.back().gap_nm)) {
            row_error(line_no, "gaps must be strictly increasing");
        }
        table.samples.push_back(sample);
    }
    if (!header_seen) throw ParseError("index table: missing header 'gap_nm,n_s,n_a'");
    table.validate();
    return table;
}

CouplerIndexTable load_index_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open index table '" + path + "'");
    return load_index_table(in);
}

CouplerIndexTable synthetic_index_table() {
    constexpr double lambda_nm = 1550.0;
    constexpr double n_single = 2.1129;   // isolated-waveguide effective index
    constexpr double anchor_gap = 270.0;  // nm
    constexpr double ds = 2.1232 - n_single;
    constexpr double da = n_single - 2.1036;

    // Decay length chosen so the high-reflectivity design point lands at a
    // 590 nm gap: R(gap 590, 20 um + 2 um bend) = 0.9938.
    const double phase = std::acos(std::sqrt(0.9938));
    const double lc_590_um = std::numbers::pi * 22.0 / (2.0 * phase);
    const double dn_590 = lambda_nm / (2000.0 * lc_590_um);
    const double g0 = (590.0 - anchor_gap) / std::log((ds + da) / dn_590);

    CouplerIndexTable table;
    table.lambda_nm = lambda_nm;
    for (double gap = 100.0; gap <= 800.0 + 1e-9; gap += 10.0) {
        const double decay = std::exp(-(gap - anchor_gap) / g0);
        table.samples.push_back({gap, n_single + ds * decay, n_single - da * decay});
    }
    table.validate();
    return table;
}

MonotoneCubic MonotoneCubic::fit(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("MonotoneCubic needs >= 2 matching samples");
    }
    const std::size_t n = x.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        if (h[i] <= 0.0) throw std::invalid_argument("MonotoneCubic abscissae must increase");
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }

    MonotoneCubic curve;
    curve.slope_.assign(n, 0.0);
    if (n == 2) {
        curve.slope_[0] = curve.slope_[1] = delta[0];
    } else {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) continue;  // local extremum: flat
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            curve.slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
        // One-sided three-point ends, clamped to preserve shape (Moler).
        auto end_slope = [](double h0, double h1, double d0, double d1) {
            double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (d * d0 <= 0.0) return 0.0;
            if (d0 * d1 < 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
            return d;
        };
        curve.slope_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        curve.slope_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }
    curve.x_ = std::move(x);
    curve.y_ = std::move(y);
    return curve;
}

double MonotoneCubic::operator()(double x) const {
    if (x < x_.front() || x > x_.back()) {
        throw std::out_of_range("MonotoneCubic: query " + std::to_string(x) +
                                " outside [" + std::to_string(x_.front()) + ", " +
                                std::to_string(x_.back()) + "]");
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = std::min<std::size_t>(x_.size() - 2, it == x_.begin() ? 0 : (it - x_.begin()) - 1);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
}

namespace {

struct TableCurves {
    MonotoneCubic n_s;
    MonotoneCubic n_a;
};

TableCurves fit_curves(const CouplerIndexTable& table) {
    std::vector<double> gaps, ns, na;
    gaps.reserve(table.samples.size());
    ns.reserve(table.samples.size());
    na.reserve(table.samples.size());
    for (const auto& s : table.samples) {
        gaps.push_back(s.gap_nm);
        ns.push_back(s.n_s);
        na.push_back(s.n_a);
    }
    return {MonotoneCubic::fit(gaps, ns), MonotoneCubic::fit(std::move(gaps), std::move(na))};
}

}  // namespace

InterpolatedIndices indices_at(const CouplerIndexTable& table, double gap_nm) {
    table.validate();
    if (gap_nm < table.gap_min_nm() || gap_nm > table.gap_max_nm()) {
        throw std::out_of_range("gap " + std::to_string(gap_nm) + " nm outside table range [" +
                                std::to_string(table.gap_min_nm()) + ", " +
                                std::to_string(table.gap_max_nm()) + "] nm");
    }
    const TableCurves curves = fit_curves(table);
    return {curves.n_s(gap_nm), curves.n_a(gap_nm)};
}

double coupling_length_um(const CouplerIndexTable& table, double gap_nm) {
    const InterpolatedIndices n = indices_at(table, gap_nm);
    return table.lambda_nm / (2.0 * std::abs(n.n_s - n.n_a)) / 1000.0;
}

RtPair coupler_rt(double coupling_length_um, double length_um, double bend_correction_um) {
    if (!(coupling_length_um > 0.0)) {
        throw std::invalid_argument("coupling length must be positive");
    }
    const double l_eff = length_um + bend_correction_um;
    if (l_eff < 0.0) throw std::invalid_argument("effective coupler length must be >= 0");
    const double c = std::cos(std::numbers::pi * l_eff / (2.0 * coupling_length_um));
    RtPair rt;
    rt.reflectivity = c * c;
    rt.transmissivity = 1.0 - rt.reflectivity;
    return rt;
}

CouplerDesign solve_gap_for_reflectivity(const CouplerIndexTable& table, double target_r,
                                         double length_um, double bend_correction_um) {
    table.validate();
    if (!(target_r > 0.0 && target_r < 1.0)) {
        throw std::invalid_argument("target reflectivity must be in (0, 1)");
    }
    const double l_eff = length_um + bend_correction_um;
    if (l_eff <= 0.0) throw std::invalid_argument("effective coupler length must be positive");

    const TableCurves curves = fit_curves(table);
    const auto lc_at = [&](double gap) {
        return table.lambda_nm / (2.0 * std::abs(curves.n_s(gap) - curves.n_a(gap))) / 1000.0;
    };
    const auto r_at = [&](double gap) {
        const double c = std::cos(std::numbers::pi * l_eff / (2.0 * lc_at(gap)));
        return c * c;
    };

    // Restrict to the first coupling lobe: the contiguous large-gap region
    // where l_c exceeds l_eff, so R(gap) is single-valued.
    const double gap_hi = table.gap_max_nm();
    double gap_lo = table.gap_min_nm();
    if (lc_at(gap_hi) <= l_eff) {
        throw TargetUnreachable("no gap in the table keeps the design on the first coupling lobe",
                                0.0, 0.0);
    }
    if (lc_at(gap_lo) <= l_eff) {
        double bad = gap_lo, good = gap_hi;
        for (int i = 0; i < 200 && good - bad > 1e-9; ++i) {
            const double mid = 0.5 * (bad + good);
            (lc_at(mid) <= l_eff ? bad : good) = mid;
        }
        gap_lo = good;
    }

    const double r_lo = r_at(gap_lo);
    const double r_hi = r_at(gap_hi);
    if (target_r < r_lo || target_r > r_hi) {
        std::ostringstream msg;
        msg << "target reflectivity " << target_r << " unreachable; achievable range is ["
            << r_lo << ", " << r_hi << "] for gaps [" << gap_lo << ", " << gap_hi << "] nm";
        throw TargetUnreachable(msg.str(), r_lo, r_hi);
    }

    double lo = gap_lo, hi = gap_hi;
    for (int i = 0; i < 200 && hi - lo > 1e-9; ++i) {
        const double mid = 0.5 * (lo + hi);
        (r_at(mid) < target_r ? lo : hi) = mid;
    }
    const double gap = 0.5 * (lo + hi);

    CouplerDesign design;
    design.gap_nm = gap;
    design.length_um = length_um;
    design.bend_correction_um = bend_correction_um;
    design.coupling_length_um = lc_at(gap);
    const RtPair rt = coupler_rt(design.coupling_length_um, length_um, bend_correction_um);
    design.reflectivity = rt.reflectivity;
    design.transmissivity = rt.transmissivity;
    return design;
}

}  // namespace ifm
