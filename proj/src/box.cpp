#include "nld/box.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>

namespace nld {

double trivial_cc_threshold() {
    static const double t = 4.0 * std::sqrt(2.0 / 3.0);
    return t;
}

Box local_extremal(int mu, int nu, int sigma, int tau) {
    Box b;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            b.at((mu & x) ^ nu, (sigma & y) ^ tau, x, y) = 1.0;
    return b;
}

int local_index(int mu, int nu, int sigma, int tau) {
    return 1 + tau + 2 * sigma + 4 * nu + 8 * mu;
}

std::array<int, 4> local_decode(int index) {
    if (index < 1 || index > 16) throw std::invalid_argument("local index out of range");
    int v = index - 1;
    return {v >> 3 & 1, v >> 2 & 1, v >> 1 & 1, v & 1};
}

Box nonlocal_extremal(int mu, int nu, int sigma) {
    Box b;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            int rhs = (x & y) ^ (mu & x) ^ (nu & y) ^ sigma;
            for (int a = 0; a < 2; ++a) b.at(a, a ^ rhs, x, y) = 0.5;
        }
    return b;
}

int nonlocal_index(int mu, int nu, int sigma) { return 1 + sigma + 2 * nu + 4 * mu; }

std::array<int, 3> nonlocal_decode(int index) {
    if (index < 1 || index > 8) throw std::invalid_argument("nonlocal index out of range");
    int v = index - 1;
    return {v >> 2 & 1, v >> 1 & 1, v & 1};
}

Box pr_box() { return nonlocal_extremal(0, 0, 0); }

Box po_box() {
    return mix({nonlocal_extremal(0, 0, 0), nonlocal_extremal(0, 0, 1)}, {0.75, 0.25});
}

double correlator(const Box& b, int x, int y) {
    return b.at(0, 0, x, y) + b.at(1, 1, x, y) - b.at(0, 1, x, y) - b.at(1, 0, x, y);
}

double chsh(const Box& b) {
    return correlator(b, 0, 0) + correlator(b, 0, 1) + correlator(b, 1, 0) -
           correlator(b, 1, 1);
}

double chsh2(const Box& b) {
    return correlator(b, 0, 0) - correlator(b, 0, 1) + correlator(b, 1, 0) +
           correlator(b, 1, 1);
}

Box mix(const std::vector<Box>& boxes, const std::vector<double>& weights) {
    if (boxes.size() != weights.size() || boxes.empty())
        throw std::invalid_argument("mix: boxes/weights size mismatch");
    double total = 0.0;
    for (double w : weights) {
        if (w < -EPS_PROB) throw std::invalid_argument("mix: negative weight");
        total += w;
    }
    if (std::fabs(total - 1.0) > EPS_PROB)
        throw std::invalid_argument("mix: weights do not sum to 1");
    Box out;
    for (size_t i = 0; i < boxes.size(); ++i)
        for (int k = 0; k < 16; ++k) out.p[k] += weights[i] * boxes[i].p[k];
    return out;
}

CrossSection parse_cross_section(const std::string& s) {
    if (s == "I" || s == "1") return CrossSection::I;
    if (s == "II" || s == "2") return CrossSection::II;
    if (s == "III" || s == "3") return CrossSection::III;
    throw std::invalid_argument("unknown cross-section: " + s);
}

std::string cross_section_name(CrossSection cs) {
    switch (cs) {
        case CrossSection::I: return "I";
        case CrossSection::II: return "II";
        default: return "III";
    }
}

Box cs_point(CrossSection cs, double eta, double omega) {
    if (eta < 0 || omega < 0 || eta + omega > 1 + EPS_PROB)
        throw std::invalid_argument("cs_point: need eta, omega >= 0 and eta + omega <= 1");
    const Box pr = pr_box(), po = po_box();
    const double rest = 1.0 - eta - omega;
    switch (cs) {
        case CrossSection::I:
            // half/half split over the all-zeros and all-ones deterministic boxes
            return mix({pr, local_extremal(0, 0, 0, 0), local_extremal(0, 1, 0, 1), po},
                       {omega, eta / 2, eta / 2, rest});
        case CrossSection::II:
            // the local part is the all-ones box (the a=b=1 deterministic point)
            return mix({pr, local_extremal(0, 1, 0, 1), po}, {omega, eta, rest});
        default:
            // all-zeros box paired with the one-sided a=x, b=0 box
            return mix({pr, local_extremal(0, 0, 0, 0), local_extremal(1, 0, 0, 0), po},
                       {omega, eta / 2, eta / 2, rest});
    }
}

ValidationReport validate(const Box& b) {
    ValidationReport r;
    auto bump = [&r](double v) { if (v > r.worst) r.worst = v; };
    for (int k = 0; k < 16; ++k)
        if (b.p[k] < -EPS_PROB) { r.positivity = false; bump(-b.p[k]); }
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double s = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int bb = 0; bb < 2; ++bb) s += b.at(a, bb, x, y);
            double v = std::fabs(s - 1.0);
            if (v > EPS_PROB) { r.normalization = false; bump(v); }
        }
    for (int a = 0; a < 2; ++a)
        for (int x = 0; x < 2; ++x) {
            double m0 = b.at(a, 0, x, 0) + b.at(a, 1, x, 0);
            double m1 = b.at(a, 0, x, 1) + b.at(a, 1, x, 1);
            double v = std::fabs(m0 - m1);
            if (v > EPS_PROB) { r.no_signalling_alice = false; bump(v); }
        }
    for (int bb = 0; bb < 2; ++bb)
        for (int y = 0; y < 2; ++y) {
            double m0 = b.at(0, bb, 0, y) + b.at(1, bb, 0, y);
            double m1 = b.at(0, bb, 1, y) + b.at(1, bb, 1, y);
            double v = std::fabs(m0 - m1);
            if (v > EPS_PROB) { r.no_signalling_bob = false; bump(v); }
        }
    return r;
}

Box renormalize_if_drifted(Box b) {
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double s = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int bb = 0; bb < 2; ++bb) s += b.at(a, bb, x, y);
            if (std::fabs(s - 1.0) > RENORM_DRIFT && s > 0.0)
                for (int a = 0; a < 2; ++a)
                    for (int bb = 0; bb < 2; ++bb) b.at(a, bb, x, y) /= s;
        }
    return b;
}

std::string box_to_json(const Box& b) {
    std::string out = "{\"p\": [";
    char buf[40];
    for (int row = 0; row < 4; ++row) {
        int x = row >> 1, y = row & 1;
        out += row ? ", [" : "[";
        for (int col = 0; col < 4; ++col) {
            int a = col >> 1, bb = col & 1;
            std::snprintf(buf, sizeof buf, "%.17g", b.at(a, bb, x, y));
            out += col ? ", " : "";
            out += buf;
        }
        out += "]";
    }
    out += "], \"order\": \"xy-ab\"}";
    return out;
}

Box box_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("p") || !j.contains("order") || j["order"] != "xy-ab")
        throw std::invalid_argument("box JSON must have \"p\" and \"order\": \"xy-ab\"");
    auto rows = j["p"];
    if (!rows.is_array() || rows.size() != 4)
        throw std::invalid_argument("box JSON needs 4 rows");
    Box b;
    for (int row = 0; row < 4; ++row) {
        if (!rows[row].is_array() || rows[row].size() != 4)
            throw std::invalid_argument("box JSON needs 4 columns per row");
        int x = row >> 1, y = row & 1;
        for (int col = 0; col < 4; ++col)
            b.at(col >> 1, col & 1, x, y) = rows[row][col].get<double>();
    }
    return b;
}

}  // namespace nld
