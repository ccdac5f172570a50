#pragma once
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace nld {

// Dense two-phase simplex for max c.x subject to A x <= b, x >= 0.
// Tableau layout and pivoting follow the classic KACTL formulation; entering
// and leaving choices break ties on variable index (Bland-style), which
// prevents cycling on the degenerate coupler polytopes this is used for.
struct SimplexSolver {
    static constexpr double EPS = 1e-9;
    static constexpr double INF = std::numeric_limits<double>::infinity();

    int m, n;
    std::vector<int> N, B;
    std::vector<std::vector<double>> D;

    SimplexSolver(const std::vector<std::vector<double>>& A,
                  const std::vector<double>& b, const std::vector<double>& c)
        : m(static_cast<int>(b.size())), n(static_cast<int>(c.size())), N(n + 1),
          B(m), D(m + 2, std::vector<double>(n + 2)) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) D[i][j] = A[i][j];
        for (int i = 0; i < m; ++i) {
            B[i] = n + i;
            D[i][n] = -1;
            D[i][n + 1] = b[i];
        }
        for (int j = 0; j < n; ++j) {
            N[j] = j;
            D[m][j] = -c[j];
        }
        N[n] = -1;
        D[m + 1][n] = 1;
    }

    void pivot(int r, int s) {
        double* a = D[r].data();
        double inv = 1 / a[s];
        for (int i = 0; i < m + 2; ++i)
            if (i != r && std::fabs(D[i][s]) > EPS) {
                double* bi = D[i].data();
                double inv2 = bi[s] * inv;
                for (int j = 0; j < n + 2; ++j) bi[j] -= a[j] * inv2;
                bi[s] = a[s] * inv2;
            }
        for (int j = 0; j < n + 2; ++j)
            if (j != s) D[r][j] *= inv;
        for (int i = 0; i < m + 2; ++i)
            if (i != r) D[i][s] *= -inv;
        D[r][s] = inv;
        std::swap(B[r], N[s]);
    }

    bool simplex(int phase) {
        int x = m + phase - 1;
        for (;;) {
            int s = -1;
            for (int j = 0; j < n + 1; ++j) {
                if (N[j] == -phase) continue;
                if (s == -1 || std::make_pair(D[x][j], N[j]) <
                                   std::make_pair(D[x][s], N[s]))
                    s = j;
            }
            if (D[x][s] >= -EPS) return true;
            int r = -1;
            for (int i = 0; i < m; ++i) {
                if (D[i][s] <= EPS) continue;
                if (r == -1 || std::make_pair(D[i][n + 1] / D[i][s], B[i]) <
                                   std::make_pair(D[r][n + 1] / D[r][s], B[r]))
                    r = i;
            }
            if (r == -1) return false;
            pivot(r, s);
        }
    }

    // Returns the optimum (x holds the solution), -INF if infeasible,
    // INF if unbounded.
    double solve(std::vector<double>& x) {
        int r = 0;
        for (int i = 1; i < m; ++i)
            if (D[i][n + 1] < D[r][n + 1]) r = i;
        if (D[r][n + 1] < -EPS) {
            pivot(r, n);
            if (!simplex(2) || D[m + 1][n + 1] < -EPS) return -INF;
            for (int i = 0; i < m; ++i)
                if (B[i] == -1) {
                    int s = 0;
                    for (int j = 1; j <= n; ++j)
                        if (s == -1 || std::make_pair(D[i][j], N[j]) <
                                           std::make_pair(D[i][s], N[s]))
                            s = j;
                    pivot(i, s);
                }
        }
        bool ok = simplex(1);
        x.assign(n, 0.0);
        for (int i = 0; i < m; ++i)
            if (B[i] < n) x[B[i]] = D[i][n + 1];
        return ok ? D[m][n + 1] : INF;
    }
};

}  // namespace nld
