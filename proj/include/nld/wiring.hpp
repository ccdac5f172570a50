#pragma once
#include <array>
#include <string>

#include "nld/box.hpp"

namespace nld {

// One party's two-copy wiring effect for a single local input symbol:
// chi(a, x1, x2 | a1, a2) read against pair behaviours Q(a1 a2 | x1 x2).
struct WiringEffect {
    std::array<double, 32> chi{};
    static constexpr int idx(int a, int x1, int x2, int a1, int a2) {
        return a << 4 | x1 << 3 | x2 << 2 | a1 << 1 | a2;
    }
};

inline constexpr double EPS_LP = 1e-9;  // effect validity / LP tolerance
inline constexpr int CATALOG_SIZE = 82;

enum class WiringClass { Constant, OneSided, Xor, And, Sequential };
WiringClass wiring_class(int label);  // label bands 1-2 / 3-10 / 11-18 / 19-50 / 51-82
std::string wiring_class_name(WiringClass c);

// Extremal deterministic effects, labels 1..82.
const WiringEffect& catalog_effect(int label);

// Label of the effect with the final output flipped (same class).
int output_complement(int label);

// The 24 extremal boxes read as one party's pair behaviours Q(a1 a2 | x1 x2)
// (16 local deterministic followed by 8 nonlocal, each in index order).
const std::array<Box, 24>& extremal_behaviours();

struct EffectReport {
    bool ok = true;
    double worst = 0.0;
};
// Checks 0 <= sum chi.Q <= 1 per output and sum over outputs == 1, against
// all 24 extremal pair behaviours, within EPS_LP.
EffectReport validate_effect(const WiringEffect& e);

using WiringPair = std::array<int, 2>;  // catalog label per input symbol

struct NamedTwoCopy {
    WiringPair alice, bob;
};
// FWW, ABL1, ABL2 as catalog label pairs.
NamedTwoCopy named_two_copy(const std::string& name);

// P(ab|xy) = sum chi_x xi_y Q1(a1 b1|x1 y1) Q2(a2 b2|x2 y2).
Box compose2(const Box& q1, const Box& q2, WiringPair alice, WiringPair bob);
Box compose2_effects(const Box& q1, const Box& q2, const WiringEffect& alice0,
                     const WiringEffect& alice1, const WiringEffect& bob0,
                     const WiringEffect& bob1);

// 16x16 coefficient matrix R[k][k'] = Q1(a1 b1|x1 y1) Q2(a2 b2|x2 y2), with
// k = (x1,x2,a1,a2) and k' = (y1,y2,b1,b2) packed high-to-low. Composition
// and sweep objectives are bilinear in the effects through this matrix.
using PairMatrix = std::array<std::array<double, 16>, 16>;
PairMatrix pair_matrix(const Box& q1, const Box& q2);

}  // namespace nld
