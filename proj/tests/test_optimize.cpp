#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nld/box.hpp"
#include "nld/optimize.hpp"
#include "nld/protocol.hpp"
#include "nld/scan.hpp"
#include "nld/wiring.hpp"

using namespace nld;

namespace {

Box random_ns_box(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Box> parts;
    std::vector<double> w;
    double total = 0.0;
    for (int i = 1; i <= 16; ++i) {
        auto d = local_decode(i);
        parts.push_back(local_extremal(d[0], d[1], d[2], d[3]));
        w.push_back(u(rng));
        total += w.back();
    }
    for (int i = 1; i <= 8; ++i) {
        auto d = nonlocal_decode(i);
        parts.push_back(nonlocal_extremal(d[0], d[1], d[2]));
        w.push_back(u(rng));
        total += w.back();
    }
    for (double& x : w) x /= total;
    return mix(parts, w);
}

// completely independent fixed-Bob vertex maximum: compose every Alice
// catalog pair and score it
double enumerate_alice_max(const Box& q1, const Box& q2, WiringPair bob) {
    double best = -1e300;
    for (int l0 = 1; l0 <= CATALOG_SIZE; ++l0)
        for (int l1 = 1; l1 <= CATALOG_SIZE; ++l1)
            best = std::max(best, chsh(compose2(q1, q2, {l0, l1}, bob)));
    return best;
}

}  // namespace

TEST_CASE("LP problem has the documented shape and scores the winner") {
    Box p = cs_point(CrossSection::I, 0.888, 0.1);
    LPProblem lp = build_lp_problem(p, p, {11, 17});
    CHECK(lp.objective.size() == 64);
    CHECK(lp.ineq_lhs.size() == 192);
    CHECK(lp.ineq_rhs.size() == 192);
    CHECK(lp.eq_lhs.size() == 48);
    CHECK(lp.eq_rhs.size() == 48);
    for (const auto& row : lp.ineq_lhs) CHECK(row.size() == 64);
    for (const auto& row : lp.eq_lhs) CHECK(row.size() == 64);

    // Alice playing the optimal labels: objective reproduces the sweep value
    // and every constraint holds
    SweepResult s = sweep_two_copy(p, p, 1);
    std::vector<double> chi(64);
    for (int sym = 0; sym < 2; ++sym)
        for (int j = 0; j < 32; ++j) chi[32 * sym + j] = s.alice_effects[sym].chi[j];
    double score = 0.0;
    for (int j = 0; j < 64; ++j) score += lp.objective[j] * chi[j];
    CHECK(score == doctest::Approx(s.value).epsilon(1e-9));
    for (size_t r = 0; r < lp.ineq_lhs.size(); ++r) {
        double lhs = 0.0;
        for (int j = 0; j < 64; ++j) lhs += lp.ineq_lhs[r][j] * chi[j];
        CHECK(lhs <= lp.ineq_rhs[r] + 1e-12);
    }
    for (size_t r = 0; r < lp.eq_lhs.size(); ++r) {
        double lhs = 0.0;
        for (int j = 0; j < 64; ++j) lhs += lp.eq_lhs[r][j] * chi[j];
        CHECK(lhs == doctest::Approx(lp.eq_rhs[r]).epsilon(1e-12));
    }
}

TEST_CASE("LP optimum equals the enumerated vertex maximum") {
    std::mt19937 rng(77);
    Box q1 = random_ns_box(rng), q2 = random_ns_box(rng);
    for (WiringPair bob : {WiringPair{11, 17}, WiringPair{58, 62}}) {
        AliceOptimum lp = lp_optimize_alice(q1, q2, bob);
        double vm = enumerate_alice_max(q1, q2, bob);
        CHECK(std::fabs(lp.value - vm) <= 1e-7);
        CHECK(lp.vertex);
        // the returned labels actually attain the value
        CHECK(chsh(compose2(q1, q2, {lp.labels[0], lp.labels[1]}, bob)) ==
              doctest::Approx(lp.value).epsilon(1e-9));
    }
}

TEST_CASE("constant Bob wirings cap the composition at the local bound") {
    Box p = cs_point(CrossSection::I, 0.888, 0.1);
    AliceOptimum r = lp_optimize_alice(p, p, {1, 1});
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
    AliceOptimum r2 = lp_optimize_alice(pr_box(), pr_box(), {1, 1});
    CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("fixed-Bob LP attains the sweep value for the complemented pair") {
    Box p = cs_point(CrossSection::I, 0.888, 0.1);
    AliceOptimum r = lp_optimize_alice(p, p, {12, 18});
    CHECK(std::fabs(r.value - 2.3525840) <= 2e-4);
}

TEST_CASE("sweep reference points: values, labels, vertex flags") {
    Box p1 = cs_point(CrossSection::I, 0.888, 0.1);
    SweepResult s1 = sweep_two_copy(p1, p1, 1);
    CHECK(std::fabs(s1.value - 2.3525840000000002) <= 1e-11);
    CHECK(s1.alice == WiringPair{11, 17});
    CHECK(s1.bob == WiringPair{11, 17});
    CHECK(s1.vertex_alice);

    Box p2 = cs_point(CrossSection::I, 0.575, 0.375);
    SweepResult s2 = sweep_two_copy(p2, p2, 1);
    CHECK(std::fabs(s2.value - 2.92125) <= 1e-11);
    CHECK(s2.alice == WiringPair{57, 61});
    CHECK(s2.bob == WiringPair{11, 61});

    SweepResult pr = sweep_two_copy(pr_box(), pr_box(), 1);
    CHECK(pr.value == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("per-Bob table: winner is the table maximum and lex-lowest tie") {
    Box p = cs_point(CrossSection::I, 0.575, 0.375);
    SweepResult s = sweep_two_copy(p, p, 1, true);
    REQUIRE(s.per_bob.size() == size_t(CATALOG_SIZE) * CATALOG_SIZE);
    double table_max = -1e300;
    for (double v : s.per_bob) table_max = std::max(table_max, v);
    CHECK(std::fabs(table_max - s.value) <= 1e-11);
    const int winner = (s.bob[0] - 1) * CATALOG_SIZE + (s.bob[1] - 1);
    for (int bm = 0; bm < winner; ++bm) CHECK(s.per_bob[bm] < s.value - 1e-12);
}

TEST_CASE("discrete brute force agrees with the LP sweep") {
    for (Box p : {cs_point(CrossSection::I, 0.888, 0.1), cs_point(CrossSection::II, 0.5, 0.3)}) {
        SweepResult lp = sweep_two_copy(p, p, 1);
        SweepResult bf = brute_force_two_copy(p, p);
        CHECK(std::fabs(lp.value - bf.value) <= 1e-9);
    }
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 2; ++trial) {
        Box q1 = random_ns_box(rng), q2 = random_ns_box(rng);
        CHECK(std::fabs(sweep_two_copy(q1, q2, 1).value -
                        brute_force_two_copy(q1, q2).value) <= 1e-9);
    }
}

TEST_CASE("sweeping two local deterministic boxes yields exactly the local bound") {
    auto d5 = local_decode(5);
    auto d12 = local_decode(12);
    Box l5 = local_extremal(d5[0], d5[1], d5[2], d5[3]);
    Box l12 = local_extremal(d12[0], d12[1], d12[2], d12[3]);
    CHECK(std::fabs(brute_force_two_copy(l5, l12).value - 2.0) <= 1e-12);
    CHECK(std::fabs(sweep_two_copy(l5, l12, 1).value - 2.0) <= 1e-9);
}

TEST_CASE("sweep dominates every named two-copy protocol") {
    for (Box p : {cs_point(CrossSection::I, 0.575, 0.375), cs_point(CrossSection::II, 0.4, 0.45)}) {
        double sv = sweep_two_copy(p, p, 1).value;
        for (const char* n : {"FWW", "ABL1", "ABL2"})
            CHECK(sv >= chsh(apply_named(p, n)) - 1e-9);
    }
}

TEST_CASE("distillation region boundary flips sign within one 400-grid cell") {
    const double delta = 1.0 / 399.0;
    // segments where each curve is the binding (lower) one
    for (double eta : {0.1, 0.3, 0.5}) {
        double wb = boundary_omega("ABL1_I", eta);
        Box below = cs_point(CrossSection::I, eta, wb - delta);
        Box above = cs_point(CrossSection::I, eta, wb + delta);
        CHECK(sweep_two_copy(below, below, 1).value <= chsh(below) + 1e-9);
        CHECK(sweep_two_copy(above, above, 1).value > chsh(above) + 1e-9);
    }
    for (double eta : {0.7, 0.8, 0.9}) {
        double wb = boundary_omega("FWW_I", eta);
        Box below = cs_point(CrossSection::I, eta, wb - delta);
        Box above = cs_point(CrossSection::I, eta, wb + delta);
        CHECK(sweep_two_copy(below, below, 1).value <= chsh(below) + 1e-9);
        CHECK(sweep_two_copy(above, above, 1).value > chsh(above) + 1e-9);
    }
}

TEST_CASE("third cross-section spot points admit no two-copy gain") {
    for (auto [eta, omega] : {std::pair{0.25, 0.25}, {0.5, 0.375}, {0.125, 0.75}}) {
        Box p = cs_point(CrossSection::III, eta, omega);
        CHECK(sweep_two_copy(p, p, 1).value <= 2.0 + 2.0 * omega + 1e-9);
    }
}

TEST_CASE("two-copy blind spot where a three-copy protocol still gains") {
    const double eta = 3.0 / 32.0;
    const double omega = (2.0 * std::sqrt(227.0) - 3.0) / 32.0;
    Box p = cs_point(CrossSection::I, eta, omega);
    double init = chsh(p);
    CHECK(sweep_two_copy(p, p, 1).value <= init + 1e-9);
    CHECK(chsh(apply_named(p, "HR")) > init + 1e-6);
}

TEST_CASE("PR-preservation census") {
    CHECK(count_pr_preserving(1) == 3152);
}
