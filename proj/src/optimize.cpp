#include "nld/optimize.hpp"

#include <cmath>
#include <stdexcept>

#include "nld/parallel.hpp"
#include "nld/simplex.hpp"

namespace nld {

namespace {

// Difference vector d[k] = chi(a=0, k) - chi(a=1, k): correlators of a
// composed box are bilinear forms d_alice . R . d_bob.
using DVec = std::array<double, 16>;

// band below which two candidate values count as tied during lex tie-breaks
constexpr double TIE_EPS = 1e-12;

DVec effect_difference(const WiringEffect& e) {
    DVec d;
    for (int k = 0; k < 16; ++k) d[k] = e.chi[k] - e.chi[16 + k];
    return d;
}

const std::array<DVec, CATALOG_SIZE>& catalog_differences() {
    static const std::array<DVec, CATALOG_SIZE> all = [] {
        std::array<DVec, CATALOG_SIZE> v;
        for (int l = 1; l <= CATALOG_SIZE; ++l)
            v[l - 1] = effect_difference(catalog_effect(l));
        return v;
    }();
    return all;
}

// Per-symbol constraint block, independent of the boxes and of Bob: rows
// r(Q, a) . chi = sum over k of chi(a, k) Q(a1 a2|x1 x2), bounded by (A1)
// and tied by (A2). In simplex form (A x <= b, x >= 0) this is
//   r <= 1, -r <= 0 for each of the 48 (Q, a) rows, and both directions of
//   each of the 24 equalities, giving 144 rows over 32 variables.
struct SymbolConstraints {
    std::vector<std::vector<double>> A;
    std::vector<double> b;
};

const SymbolConstraints& symbol_constraints() {
    static const SymbolConstraints sc = [] {
        SymbolConstraints s;
        const auto& behaviours = extremal_behaviours();
        std::vector<std::array<double, 32>> rows;
        for (const Box& q : behaviours)
            for (int a = 0; a < 2; ++a) {
                std::array<double, 32> r{};
                for (int x1 = 0; x1 < 2; ++x1)
                    for (int x2 = 0; x2 < 2; ++x2)
                        for (int a1 = 0; a1 < 2; ++a1)
                            for (int a2 = 0; a2 < 2; ++a2)
                                r[WiringEffect::idx(a, x1, x2, a1, a2)] =
                                    q.at(a1, a2, x1, x2);
                rows.push_back(r);
            }
        auto push = [&s](const std::array<double, 32>& r, double sign, double rhs) {
            std::vector<double> row(32);
            for (int j = 0; j < 32; ++j) row[j] = sign * r[j];
            s.A.push_back(std::move(row));
            s.b.push_back(rhs);
        };
        for (size_t i = 0; i < rows.size(); ++i) {
            push(rows[i], 1.0, 1.0);   // (A1) upper
            push(rows[i], -1.0, 0.0);  // (A1) lower
        }
        for (size_t q = 0; q < behaviours.size(); ++q) {
            std::array<double, 32> sum{};
            for (int j = 0; j < 32; ++j) sum[j] = rows[2 * q][j] + rows[2 * q + 1][j];
            push(sum, 1.0, 1.0);   // (A2) as a <= / >= pair
            push(sum, -1.0, -1.0);
        }
        return s;
    }();
    return sc;
}

// Objective weight vector for one Alice symbol given Bob's effect pair:
// w = R . (s0 d_bob0 + s1 d_bob1) with CHSH signs s = (+1,+1) for x = 0 and
// (+1,-1) for x = 1; the symbol's contribution is then d_chi . w.
DVec symbol_weights(const PairMatrix& r, const DVec& db0, const DVec& db1, int x) {
    const double s1 = x ? -1.0 : 1.0;
    DVec w;
    for (int k = 0; k < 16; ++k) {
        double acc = 0.0;
        for (int k2 = 0; k2 < 16; ++k2) acc += r[k][k2] * (db0[k2] + s1 * db1[k2]);
        w[k] = acc;
    }
    return w;
}

struct SymbolOptimum {
    double value;
    WiringEffect effect;
    int label;    // -1 when no vertex attains the LP value
};

SymbolOptimum optimize_symbol(const DVec& w) {
    const SymbolConstraints& sc = symbol_constraints();
    std::vector<double> c(32);
    for (int k = 0; k < 16; ++k) {
        c[k] = w[k];        // a = 0 entries
        c[16 + k] = -w[k];  // a = 1 entries carry the opposite correlator sign
    }
    SimplexSolver lp(sc.A, sc.b, c);
    std::vector<double> x;
    double value = lp.solve(x);
    if (!std::isfinite(value))
        throw std::runtime_error("wiring LP infeasible or unbounded: constraint bug");
    SymbolOptimum out;
    out.value = value;
    for (int j = 0; j < 32; ++j) out.effect.chi[j] = x[j];
    // vertex identification: lowest catalog label matching the LP optimum.
    // Values within TIE_EPS are one tie class, so symmetry-degenerate optima
    // resolve to the same label regardless of float summation order.
    out.label = -1;
    const auto& diffs = catalog_differences();
    double best = -1e300;
    int arg = 0;
    for (int l = 0; l < CATALOG_SIZE; ++l) {
        double v = 0.0;
        for (int k = 0; k < 16; ++k) v += diffs[l][k] * w[k];
        if (v > best + TIE_EPS) { best = v; arg = l; }
    }
    if (std::fabs(best - value) <= EPS_LP) {
        out.label = arg + 1;
        out.effect = catalog_effect(arg + 1);
        out.value = best;
    }
    return out;
}

}  // namespace

LPProblem build_lp_problem(const Box& q1, const Box& q2, WiringPair bob) {
    const PairMatrix r = pair_matrix(q1, q2);
    const DVec db0 = effect_difference(catalog_effect(bob[0]));
    const DVec db1 = effect_difference(catalog_effect(bob[1]));
    LPProblem p;
    p.objective.assign(64, 0.0);
    for (int x = 0; x < 2; ++x) {
        DVec w = symbol_weights(r, db0, db1, x);
        for (int k = 0; k < 16; ++k) {
            p.objective[32 * x + k] = w[k];
            p.objective[32 * x + 16 + k] = -w[k];
        }
    }
    const auto& behaviours = extremal_behaviours();
    for (int x = 0; x < 2; ++x)
        for (const Box& q : behaviours) {
            std::array<std::vector<double>, 2> rows;
            for (int a = 0; a < 2; ++a) {
                rows[a].assign(64, 0.0);
                for (int x1 = 0; x1 < 2; ++x1)
                    for (int x2 = 0; x2 < 2; ++x2)
                        for (int a1 = 0; a1 < 2; ++a1)
                            for (int a2 = 0; a2 < 2; ++a2)
                                rows[a][32 * x + WiringEffect::idx(a, x1, x2, a1, a2)] =
                                    q.at(a1, a2, x1, x2);
                // 0 <= row and row <= 1, stored as two one-sided rows
                p.ineq_lhs.push_back(rows[a]);
                p.ineq_rhs.push_back(1.0);
                std::vector<double> neg(64);
                for (int j = 0; j < 64; ++j) neg[j] = -rows[a][j];
                p.ineq_lhs.push_back(std::move(neg));
                p.ineq_rhs.push_back(0.0);
            }
            std::vector<double> eq(64);
            for (int j = 0; j < 64; ++j) eq[j] = rows[0][j] + rows[1][j];
            p.eq_lhs.push_back(std::move(eq));
            p.eq_rhs.push_back(1.0);
        }
    return p;
}

AliceOptimum lp_optimize_alice(const Box& q1, const Box& q2, WiringPair bob) {
    const PairMatrix r = pair_matrix(q1, q2);
    const DVec db0 = effect_difference(catalog_effect(bob[0]));
    const DVec db1 = effect_difference(catalog_effect(bob[1]));
    AliceOptimum out;
    for (int x = 0; x < 2; ++x) {
        SymbolOptimum s = optimize_symbol(symbol_weights(r, db0, db1, x));
        out.value += s.value;
        out.effects[x] = s.effect;
        out.labels[x] = s.label;
        if (s.label < 0) out.vertex = false;
    }
    return out;
}

SweepResult sweep_two_copy(const Box& q1, const Box& q2, int threads, bool keep_table) {
    const PairMatrix r = pair_matrix(q1, q2);
    const auto& diffs = catalog_differences();
    // R . d_bob for every Bob label, shared across the sweep
    std::vector<DVec> rv(CATALOG_SIZE);
    for (int m = 0; m < CATALOG_SIZE; ++m)
        for (int k = 0; k < 16; ++k) {
            double acc = 0.0;
            for (int k2 = 0; k2 < 16; ++k2) acc += r[k][k2] * diffs[m][k2];
            rv[m][k] = acc;
        }
    struct Cell {
        double value;
        std::array<int, 2> alice;
        bool vertex;
    };
    const int total = CATALOG_SIZE * CATALOG_SIZE;
    std::vector<Cell> cells(total);
    parallel_for(total, threads, [&](int bm) {
        int m0 = bm / CATALOG_SIZE, m1 = bm % CATALOG_SIZE;
        Cell c{0.0, {-1, -1}, true};
        for (int x = 0; x < 2; ++x) {
            const double s1 = x ? -1.0 : 1.0;
            DVec w;
            for (int k = 0; k < 16; ++k) w[k] = rv[m0][k] + s1 * rv[m1][k];
            SymbolOptimum s = optimize_symbol(w);
            c.value += s.value;
            c.alice[x] = s.label;
            if (s.label < 0) c.vertex = false;
        }
        cells[bm] = c;
    });
    SweepResult res;
    res.value = -1e300;
    if (keep_table) res.per_bob.resize(total);
    for (int bm = 0; bm < total; ++bm) {  // ascending scan keeps the lex-lowest tie
        if (keep_table) res.per_bob[bm] = cells[bm].value;
        if (cells[bm].value > res.value + TIE_EPS) {
            res.value = cells[bm].value;
            res.bob = {bm / CATALOG_SIZE + 1, bm % CATALOG_SIZE + 1};
            res.alice = {cells[bm].alice[0], cells[bm].alice[1]};
            res.vertex_alice = cells[bm].vertex;
        }
    }
    for (int x = 0; x < 2; ++x)
        res.alice_effects[x] = res.alice[x] > 0 ? catalog_effect(res.alice[x])
                                                : WiringEffect{};
    if (!res.vertex_alice) {
        // interior optimum: recover the effects from the winning Bob pair
        AliceOptimum a = lp_optimize_alice(q1, q2, res.bob);
        res.alice_effects = a.effects;
    }
    return res;
}

SweepResult brute_force_two_copy(const Box& q1, const Box& q2) {
    const PairMatrix r = pair_matrix(q1, q2);
    const auto& diffs = catalog_differences();
    // M[l][m] = E_xy of the composed box when Alice plays l and Bob plays m
    std::vector<std::array<double, CATALOG_SIZE>> mm(CATALOG_SIZE);
    for (int m = 0; m < CATALOG_SIZE; ++m) {
        DVec rm;
        for (int k = 0; k < 16; ++k) {
            double acc = 0.0;
            for (int k2 = 0; k2 < 16; ++k2) acc += r[k][k2] * diffs[m][k2];
            rm[k] = acc;
        }
        for (int l = 0; l < CATALOG_SIZE; ++l) {
            double acc = 0.0;
            for (int k = 0; k < 16; ++k) acc += diffs[l][k] * rm[k];
            mm[l][m] = acc;
        }
    }
    SweepResult res;
    res.value = -1e300;
    for (int m0 = 0; m0 < CATALOG_SIZE; ++m0)
        for (int m1 = 0; m1 < CATALOG_SIZE; ++m1) {
            double best0 = -1e300, best1 = -1e300;
            int arg0 = 0, arg1 = 0;
            for (int l = 0; l < CATALOG_SIZE; ++l) {
                double v0 = mm[l][m0] + mm[l][m1];  // x = 0 block: E00 + E01
                double v1 = mm[l][m0] - mm[l][m1];  // x = 1 block: E10 - E11
                if (v0 > best0) { best0 = v0; arg0 = l; }
                if (v1 > best1) { best1 = v1; arg1 = l; }
            }
            if (best0 + best1 > res.value) {
                res.value = best0 + best1;
                res.bob = {m0 + 1, m1 + 1};
                res.alice = {arg0 + 1, arg1 + 1};
            }
        }
    res.alice_effects = {catalog_effect(res.alice[0]), catalog_effect(res.alice[1])};
    return res;
}

long count_pr_preserving(int threads) {
    const Box pr = pr_box();
    const PairMatrix r = pair_matrix(pr, pr);
    // classify each (alice label, bob label) block of the composed box:
    // same[l][m] - the block equals PR's correlated (x,y) block,
    // diff[l][m] - it equals the anticorrelated block at (1,1)
    std::vector<std::array<uint8_t, CATALOG_SIZE>> same(CATALOG_SIZE),
        diff(CATALOG_SIZE);
    parallel_for(CATALOG_SIZE, threads, [&](int l) {
        const WiringEffect& el = catalog_effect(l + 1);
        for (int m = 0; m < CATALOG_SIZE; ++m) {
            const WiringEffect& em = catalog_effect(m + 1);
            double blk[2][2];
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    double s = 0.0;
                    for (int k = 0; k < 16; ++k) {
                        double ca = el.chi[a << 4 | k];
                        if (ca == 0.0) continue;
                        for (int k2 = 0; k2 < 16; ++k2)
                            s += ca * r[k][k2] * em.chi[b << 4 | k2];
                    }
                    blk[a][b] = s;
                }
            auto near = [](double v, double t) { return std::fabs(v - t) <= 1e-12; };
            same[l][m] = near(blk[0][0], .5) && near(blk[1][1], .5) &&
                         near(blk[0][1], 0) && near(blk[1][0], 0);
            diff[l][m] = near(blk[0][1], .5) && near(blk[1][0], .5) &&
                         near(blk[0][0], 0) && near(blk[1][1], 0);
        }
    });
    // a quadruple (l0, l1, m0, m1) preserves PR iff blocks (l0,m0), (l0,m1),
    // (l1,m0) are correlated and (l1,m1) is anticorrelated; the count
    // factorizes over m0 and m1
    long count = 0;
    for (int l0 = 0; l0 < CATALOG_SIZE; ++l0)
        for (int l1 = 0; l1 < CATALOG_SIZE; ++l1) {
            long c0 = 0, c1 = 0;
            for (int m = 0; m < CATALOG_SIZE; ++m) {
                c0 += same[l0][m] & same[l1][m];
                c1 += same[l0][m] & diff[l1][m];
            }
            count += c0 * c1;
        }
    return count;
}

}  // namespace nld
