#pragma once

// independent SVM dual oracle: pairwise analytic coordinate ascent run to a
// fixpoint, usable on tiny datasets only (quadratic per sweep)
#include <algorithm>
#include <cmath>
#include <vector>

#include "svm.hpp"

namespace testutil {

inline double brute_dual(const std::vector<std::vector<double>>& rows,
                         const std::vector<int>& y, double C,
                         const amc::KernelSpec& k) {
    const size_t n = rows.size();
    std::vector<double> a(n, 0.0);
    std::vector<std::vector<double>> K(n, std::vector<double>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            K[i][j] = amc::kernel_eval(k, rows[i], rows[j]);
    for (int iter = 0; iter < 2000000; ++iter) {
        double moved = 0.0;
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const double s = y[i] * y[j];
                double lo, hi;
                if (s < 0) {
                    lo = std::max(0.0, a[j] - a[i]);
                    hi = std::min(C, C + a[j] - a[i]);
                } else {
                    lo = std::max(0.0, a[i] + a[j] - C);
                    hi = std::min(C, a[i] + a[j]);
                }
                if (lo >= hi) continue;
                const double eta = K[i][i] + K[j][j] - 2 * K[i][j];
                double gi = 1.0, gj = 1.0;
                for (size_t t = 0; t < n; ++t) {
                    gi -= y[i] * y[t] * a[t] * K[i][t];
                    gj -= y[j] * y[t] * a[t] * K[j][t];
                }
                double aj_new;
                if (eta > 1e-15) {
                    aj_new = a[j] + (gj - s * gi) / eta;
                    if (aj_new < lo) aj_new = lo;
                    if (aj_new > hi) aj_new = hi;
                } else {
                    aj_new = (gj - s * gi) > 0 ? hi : lo;
                }
                const double delta = aj_new - a[j];
                if (std::fabs(delta) < 1e-15) continue;
                a[i] -= s * delta;
                a[j] = aj_new;
                moved += std::fabs(delta);
            }
        }
        if (moved < 1e-13) break;
    }
    double lin = 0.0, quad = 0.0;
    for (size_t i = 0; i < n; ++i) {
        lin += a[i];
        for (size_t j = 0; j < n; ++j)
            quad += y[i] * y[j] * a[i] * a[j] * K[i][j];
    }
    return lin - 0.5 * quad;
}

}  // namespace testutil
