#include "nld/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "nld/distill.hpp"
#include "nld/optimize.hpp"
#include "nld/parallel.hpp"
#include "nld/protocol.hpp"

namespace nld {

namespace {

const std::vector<BoundaryCurve>& curves() {
    static const std::vector<BoundaryCurve> v = {
        {"FWW_I", CrossSection::I, 0.5, 1.0},
        {"ABL1_I", CrossSection::I, 0.0, 1.0},
        {"ABL2_II", CrossSection::II, 1.0 / 3.0, 1.0},
        {"ABL1_II", CrossSection::II, 0.0, 1.0},
        // equal-value chords; the left endpoints are where each chord meets
        // the enclosing zero-gain boundary
        {"CHORD_I", CrossSection::I, 0.5 * (1.0 + 1.0 / std::sqrt(13.0)), 2.0 / 3.0},
        {"CHORD_II", CrossSection::II, (9.0 + std::sqrt(6.0)) / 25.0, 1.0},
    };
    return v;
}

}  // namespace

const std::vector<std::string>& boundary_curve_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& c : curves()) n.push_back(c.name);
        return n;
    }();
    return names;
}

const BoundaryCurve& boundary_curve(const std::string& name) {
    for (const auto& c : curves())
        if (c.name == name) return c;
    throw std::invalid_argument("unknown boundary curve: " + name);
}

double boundary_omega(const std::string& name, double eta) {
    const BoundaryCurve& c = boundary_curve(name);
    if (eta < c.eta_min - 1e-12 || eta > c.eta_max + 1e-12)
        throw std::domain_error("eta outside the domain of " + name);
    if (name == "FWW_I") return 1.0 - 3.0 * eta + 2.0 * std::sqrt(1.0 - 3.0 * eta + 3.0 * eta * eta);
    if (name == "ABL1_I") return -eta + std::sqrt((3.0 - 4.0 * eta + 4.0 * eta * eta) / 3.0);
    if (name == "ABL2_II")
        return 3.0 - 11.0 * eta + 2.0 * std::sqrt(3.0 - 18.0 * eta + 31.0 * eta * eta);
    if (name == "ABL1_II")
        return -(4.0 / 3.0) * eta + std::sqrt(9.0 - 18.0 * eta + 25.0 * eta * eta) / 3.0;
    if (name == "CHORD_I") return 5.0 * eta - 3.0;
    return -(2.0 * std::sqrt(6.0) - 3.0) / 5.0 * (eta - 1.0);  // CHORD_II
}

double closed_form_chsh(const std::string& protocol, CrossSection cs, double eta,
                        double omega) {
    const double e = eta, w = omega;
    if (cs == CrossSection::I && protocol == "FWW")
        return 0.5 * ((1.0 + w) * (1.0 + w) - 3.0 * e * e + 6.0 * e * (1.0 + w));
    if (cs == CrossSection::I && protocol == "ABL1")
        return 0.25 * (3.0 * w * w + 8.0 * w - e * e + e * (4.0 + 6.0 * w) + 5.0);
    if (cs == CrossSection::II && protocol == "ABL2")
        return 0.125 * (w * w + 10.0 * w - 3.0 * e * e + e * (6.0 + 22.0 * w) + 13.0);
    if (cs == CrossSection::II && protocol == "ABL1")
        return 0.25 * (3.0 * w * w + 8.0 * w - 3.0 * e * e + e * (6.0 + 8.0 * w) + 5.0);
    throw std::invalid_argument("no closed form for " + protocol + " on cross-section " +
                                cross_section_name(cs));
}

double zero_gain_residual(const std::string& curve, int samples) {
    if (samples < 2) throw std::invalid_argument("need at least 2 samples");
    const BoundaryCurve& c = boundary_curve(curve);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        double eta = c.eta_min + (c.eta_max - c.eta_min) * i / (samples - 1);
        double omega = boundary_omega(curve, eta);
        double r;
        if (curve == "CHORD_I")
            r = closed_form_chsh("FWW", c.cs, eta, omega) -
                closed_form_chsh("ABL1", c.cs, eta, omega);
        else if (curve == "CHORD_II")
            r = closed_form_chsh("ABL2", c.cs, eta, omega) -
                closed_form_chsh("ABL1", c.cs, eta, omega);
        else {
            std::string proto = curve.substr(0, curve.find('_'));
            r = closed_form_chsh(proto, c.cs, eta, omega) - (2.0 + 2.0 * omega);
        }
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

ScanResult scan_region(const ScanRequest& req) {
    if (req.resolution < 2) throw std::invalid_argument("resolution must be >= 2");
    for (const std::string& p : req.protocols)
        if (p != "SWEEP2" && p != "SERIAL") protocol_arity(p);  // throws on unknown
    const int res = req.resolution;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    ScanResult out;
    out.request = req;
    out.rows.resize(static_cast<size_t>(res) * res);
    parallel_for(res * res, req.threads, [&](int cell) {
        ScanRow& row = out.rows[cell];
        row.eta = double(cell / res) / (res - 1);
        row.omega = double(cell % res) / (res - 1);
        row.after.assign(req.protocols.size(), nan);
        row.distill.assign(req.protocols.size(), 0);
        if (row.eta + row.omega > 1.0 + 1e-12) {
            row.mask = true;
            row.chsh_init = nan;
            row.chsh2_val = nan;
            return;
        }
        Box p = cs_point(req.cs, row.eta, row.omega);
        row.chsh_init = chsh(p);
        if (req.chsh2_col) row.chsh2_val = chsh2(p);
        for (size_t c = 0; c < req.protocols.size(); ++c) {
            const std::string& name = req.protocols[c];
            double after;
            if (name == "SWEEP2") {
                after = sweep_two_copy(p, p, 1).value;
            } else if (name == "SERIAL") {
                AlgorithmConfig cfg;
                cfg.max_rounds = req.serial_rounds;
                cfg.threads = 1;
                Transcript t = serial_distill(p, cfg);
                after = t.rounds.empty() ? t.initial_chsh : t.rounds.back().chsh;
            } else {
                after = chsh(apply_named(p, name));
            }
            row.after[c] = after;
            row.distill[c] = after > row.chsh_init + DISTILL_TOL ? 1 : 0;
        }
    });
    return out;
}

void write_scan_csv(const ScanResult& res, std::ostream& out) {
    out << "cs,eta,omega,mask,chsh_init";
    for (const std::string& p : res.request.protocols)
        out << ',' << p << "_after," << p << "_distill";
    if (res.request.chsh2_col) out << ",chsh2";
    out << '\n';
    const std::string cs = cross_section_name(res.request.cs);
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        out << buf;
    };
    for (const ScanRow& r : res.rows) {
        out << cs << ',';
        num(r.eta);
        out << ',';
        num(r.omega);
        out << ',' << (r.mask ? 1 : 0) << ',';
        num(r.chsh_init);
        for (size_t c = 0; c < r.after.size(); ++c) {
            out << ',';
            num(r.after[c]);
            out << ',' << int(r.distill[c]);
        }
        if (res.request.chsh2_col) {
            out << ',';
            num(r.chsh2_val);
        }
        out << '\n';
    }
}

}  // namespace nld
