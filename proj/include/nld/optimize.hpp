#pragma once
#include <array>
#include <cstdint>
#include <vector>

#include "nld/box.hpp"
#include "nld/wiring.hpp"

namespace nld {

// The full two-symbol optimization problem over Alice's effects: 64
// variables (two 32-entry chi blocks), the (A1) bounds and (A2)
// normalizations instantiated over the 24 extremal pair behaviours.
struct LPProblem {
    std::vector<double> objective;               // size 64
    std::vector<std::vector<double>> ineq_lhs;   // 192 rows: 0 <= row, row <= 1
    std::vector<double> ineq_rhs;
    std::vector<std::vector<double>> eq_lhs;     // 48 rows: sum over outputs == 1
    std::vector<double> eq_rhs;
};
LPProblem build_lp_problem(const Box& q1, const Box& q2, WiringPair bob);

struct AliceOptimum {
    double value = 0.0;
    std::array<WiringEffect, 2> effects;  // optimal chi per input symbol
    std::array<int, 2> labels{-1, -1};    // catalog labels when attained at vertices
    bool vertex = true;                   // false flags an interior LP optimum
};
// Max CHSH of compose2(q1, q2, chi, bob) over feasible Alice effects. The
// objective decomposes over Alice's input symbol, so this solves two
// independent 32-variable programs and sums them.
AliceOptimum lp_optimize_alice(const Box& q1, const Box& q2, WiringPair bob);

struct SweepResult {
    double value = 0.0;
    WiringPair alice{-1, -1}, bob{-1, -1};
    bool vertex_alice = true;
    std::array<WiringEffect, 2> alice_effects;   // the optimizing effects
    std::vector<double> per_bob;                 // optional 82*82 table
};

// Best lp_optimize_alice over all 82^2 Bob label pairs; ties resolved to the
// lowest (bob0, bob1, alice0, alice1) lexicographically.
SweepResult sweep_two_copy(const Box& q1, const Box& q2, int threads = 0,
                           bool keep_table = false);

// Independent discrete route: exact maximum over catalog pairs on both
// sides, via the per-symbol decomposition of the CHSH objective.
SweepResult brute_force_two_copy(const Box& q1, const Box& q2);

// Wiring quadruples that map PR x PR back to PR (within 1e-12).
long count_pr_preserving(int threads = 0);

inline constexpr double DISTILL_TOL = 1e-9;  // gain > tol counts as distillation

}  // namespace nld
