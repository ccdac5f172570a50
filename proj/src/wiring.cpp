#include "nld/wiring.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nld {

WiringClass wiring_class(int label) {
    if (label >= 1 && label <= 2) return WiringClass::Constant;
    if (label <= 10) return WiringClass::OneSided;
    if (label <= 18) return WiringClass::Xor;
    if (label <= 50) return WiringClass::And;
    if (label <= 82) return WiringClass::Sequential;
    throw std::invalid_argument("wiring label out of range 1..82");
}

std::string wiring_class_name(WiringClass c) {
    switch (c) {
        case WiringClass::Constant: return "constant";
        case WiringClass::OneSided: return "one-sided";
        case WiringClass::Xor: return "xor";
        case WiringClass::And: return "and";
        default: return "sequential";
    }
}

namespace {

WiringEffect build_effect(int label) {
    WiringEffect e;
    auto set = [&e](int a, int x1, int x2, int a1, int a2) {
        e.chi[WiringEffect::idx(a, x1, x2, a1, a2)] = 1.0;
    };
    switch (wiring_class(label)) {
        case WiringClass::Constant: {
            // constant output; both boxes fed input 0 so the tensor stays
            // normalized (any fixed input pair gives the same behaviour)
            int mu = label - 1;
            for (int a1 = 0; a1 < 2; ++a1)
                for (int a2 = 0; a2 < 2; ++a2) set(mu, 0, 0, a1, a2);
            break;
        }
        case WiringClass::OneSided: {
            int v = label - 3;  // 4*mu + 2*nu + sigma
            int mu = v >> 2 & 1, nu = v >> 1 & 1, sigma = v & 1;
            // both inputs mu; output copies box nu's outcome, maybe flipped
            for (int a1 = 0; a1 < 2; ++a1)
                for (int a2 = 0; a2 < 2; ++a2)
                    set((nu ? a2 : a1) ^ sigma, mu, mu, a1, a2);
            break;
        }
        case WiringClass::Xor: {
            int v = label - 11;
            int mu = v >> 2 & 1, nu = v >> 1 & 1, sigma = v & 1;
            for (int a1 = 0; a1 < 2; ++a1)
                for (int a2 = 0; a2 < 2; ++a2) set(a1 ^ a2 ^ sigma, mu, nu, a1, a2);
            break;
        }
        case WiringClass::And: {
            int v = label - 19;  // 16*mu + 8*nu + 4*sigma + 2*delta + eps
            int mu = v >> 4 & 1, nu = v >> 3 & 1, sigma = v >> 2 & 1;
            int delta = v >> 1 & 1, eps = v & 1;
            for (int a1 = 0; a1 < 2; ++a1)
                for (int a2 = 0; a2 < 2; ++a2)
                    set(((a1 ^ sigma) & (a2 ^ delta)) ^ eps, mu, nu, a1, a2);
            break;
        }
        case WiringClass::Sequential: {
            int v = label - 51;
            int mu = v >> 4 & 1, nu = v >> 3 & 1, sigma = v >> 2 & 1;
            int delta = v >> 1 & 1, eps = v & 1;
            // box mu queried first with input nu; the other box gets that
            // outcome xor sigma; output = second outcome xor delta*first xor eps
            for (int a1 = 0; a1 < 2; ++a1)
                for (int a2 = 0; a2 < 2; ++a2) {
                    int first = mu ? a2 : a1, second = mu ? a1 : a2;
                    int x1 = mu ? first ^ sigma : nu;
                    int x2 = mu ? nu : first ^ sigma;
                    set(second ^ (delta & first) ^ eps, x1, x2, a1, a2);
                }
            break;
        }
    }
    return e;
}

}  // namespace

const WiringEffect& catalog_effect(int label) {
    static const std::vector<WiringEffect> catalog = [] {
        std::vector<WiringEffect> v;
        v.reserve(CATALOG_SIZE);
        for (int l = 1; l <= CATALOG_SIZE; ++l) v.push_back(build_effect(l));
        return v;
    }();
    if (label < 1 || label > CATALOG_SIZE)
        throw std::invalid_argument("wiring label out of range 1..82");
    return catalog[label - 1];
}

int output_complement(int label) {
    switch (wiring_class(label)) {
        case WiringClass::Constant: return label == 1 ? 2 : 1;
        default: return ((label & 1) ? label + 1 : label - 1);
    }
}

const std::array<Box, 24>& extremal_behaviours() {
    static const std::array<Box, 24> all = [] {
        std::array<Box, 24> v;
        for (int i = 1; i <= 16; ++i) {
            auto d = local_decode(i);
            v[i - 1] = local_extremal(d[0], d[1], d[2], d[3]);
        }
        for (int i = 1; i <= 8; ++i) {
            auto d = nonlocal_decode(i);
            v[15 + i] = nonlocal_extremal(d[0], d[1], d[2]);
        }
        return v;
    }();
    return all;
}

EffectReport validate_effect(const WiringEffect& e) {
    EffectReport r;
    for (const Box& q : extremal_behaviours()) {
        double total = 0.0;
        for (int a = 0; a < 2; ++a) {
            double s = 0.0;
            for (int x1 = 0; x1 < 2; ++x1)
                for (int x2 = 0; x2 < 2; ++x2)
                    for (int a1 = 0; a1 < 2; ++a1)
                        for (int a2 = 0; a2 < 2; ++a2)
                            s += e.chi[WiringEffect::idx(a, x1, x2, a1, a2)] *
                                 q.at(a1, a2, x1, x2);
            double v = std::max(-s, s - 1.0);
            if (v > r.worst) r.worst = v;
            if (v > EPS_LP) r.ok = false;
            total += s;
        }
        double v = std::fabs(total - 1.0);
        if (v > r.worst) r.worst = v;
        if (v > EPS_LP) r.ok = false;
    }
    return r;
}

NamedTwoCopy named_two_copy(const std::string& name) {
    // FWW: both inputs x, output a1^a2. ABL1: x1=x, x2=x^a1^1, a=a1^a2^1
    // (Bob: y1=y, y2=y*b1, b=b1^b2^1). ABL2: both inputs x, a=a1*a2.
    if (name == "FWW") return {{11, 17}, {11, 17}};
    if (name == "ABL1") return {{58, 62}, {12, 62}};
    if (name == "ABL2") return {{19, 43}, {19, 43}};
    throw std::invalid_argument("unknown two-copy protocol: " + name);
}

PairMatrix pair_matrix(const Box& q1, const Box& q2) {
    PairMatrix r;
    for (int x1 = 0; x1 < 2; ++x1)
        for (int x2 = 0; x2 < 2; ++x2)
            for (int a1 = 0; a1 < 2; ++a1)
                for (int a2 = 0; a2 < 2; ++a2) {
                    int k = x1 << 3 | x2 << 2 | a1 << 1 | a2;
                    for (int y1 = 0; y1 < 2; ++y1)
                        for (int y2 = 0; y2 < 2; ++y2)
                            for (int b1 = 0; b1 < 2; ++b1)
                                for (int b2 = 0; b2 < 2; ++b2)
                                    r[k][y1 << 3 | y2 << 2 | b1 << 1 | b2] =
                                        q1.at(a1, b1, x1, y1) * q2.at(a2, b2, x2, y2);
                }
    return r;
}

Box compose2_effects(const Box& q1, const Box& q2, const WiringEffect& alice0,
                     const WiringEffect& alice1, const WiringEffect& bob0,
                     const WiringEffect& bob1) {
    const PairMatrix r = pair_matrix(q1, q2);
    const WiringEffect* alice[2] = {&alice0, &alice1};
    const WiringEffect* bob[2] = {&bob0, &bob1};
    Box out;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    double s = 0.0;
                    for (int k = 0; k < 16; ++k) {
                        double ca = alice[x]->chi[a << 4 | k];
                        if (ca == 0.0) continue;
                        double acc = 0.0;
                        for (int k2 = 0; k2 < 16; ++k2)
                            acc += r[k][k2] * bob[y]->chi[b << 4 | k2];
                        s += ca * acc;
                    }
                    out.at(a, b, x, y) = s;
                }
    return renormalize_if_drifted(out);
}

Box compose2(const Box& q1, const Box& q2, WiringPair alice, WiringPair bob) {
    return compose2_effects(q1, q2, catalog_effect(alice[0]), catalog_effect(alice[1]),
                            catalog_effect(bob[0]), catalog_effect(bob[1]));
}

}  // namespace nld
