#pragma once

#include "symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

namespace zedge {

// Continuum reference data: the edge theory is a compact boson at radius R
// (R = 2 at the clock-model point used throughout). Primaries carry integer
// charge/winding labels (n, m); the symmetry twist shifts them by p/N and 1/N.

inline double scaling_dimension(int n, int m, double radius) {
    if (!(radius > 0.0)) throw invalid_parameter("scaling_dimension: radius must be positive");
    double r2 = radius * radius;
    return double(n) * n / r2 + r2 * double(m) * m / 4.0;
}

inline double cft_momentum(int n, int m) { return double(n) * m; }

inline double twisted_scaling_dimension(SptClass cls, int n, int m, double radius) {
    if (!(radius > 0.0))
        throw invalid_parameter("twisted_scaling_dimension: radius must be positive");
    double r2 = radius * radius;
    double a = double(n) + double(cls.p) / cls.N;
    double b = double(m) + 1.0 / cls.N;
    return a * a / r2 + r2 * b * b / 4.0;
}

inline double twisted_cft_momentum(SptClass cls, int n, int m) {
    return (double(n) + double(cls.p) / cls.N) * (double(m) + 1.0 / cls.N);
}

// Z_N symmetry eigenvalue of the (n, m) tower: exp[2 pi i (m + p n) / N].
inline cplx charge_prediction(SptClass cls, int n, int m) {
    return std::polar(1.0, two_pi * double(mod_n(m + cls.p * n, cls.N)) / cls.N);
}

struct CftPrediction {
    int n = 0, m = 0;             // primary labels
    int level_left = 0, level_right = 0; // descendant levels (a, abar)
    double delta = 0.0;           // total scaling dimension, descendants included
    double momentum = 0.0;        // total conformal spin P + a - abar
    cplx charge{1.0, 0.0};
    bool twisted = false;

    bool primary() const { return level_left == 0 && level_right == 0; }
};

// All predicted levels with total dimension <= max_delta, descendants up to
// total level max_descendant. Sorted by dimension; ties broken by
// (|n|, |m|, n, m, a, abar) so the order is deterministic. Descendant counting
// is the coarse one (one state per (a, abar)), which is all the matcher needs.
inline std::vector<CftPrediction> prediction_table(SptClass cls, bool twisted,
                                                   double radius, double max_delta,
                                                   int max_descendant = 2) {
    if (!(max_delta > 0.0))
        throw invalid_parameter("prediction_table: max_delta must be positive");
    if (max_descendant < 0)
        throw invalid_parameter("prediction_table: max_descendant must be >= 0");
    std::vector<CftPrediction> out;
    int nmax = int(std::ceil(radius * std::sqrt(max_delta))) + 2;
    int mmax = int(std::ceil(2.0 * std::sqrt(max_delta) / radius)) + 2;
    for (int n = -nmax; n <= nmax; ++n)
        for (int m = -mmax; m <= mmax; ++m) {
            double d0 = twisted ? twisted_scaling_dimension(cls, n, m, radius)
                                : scaling_dimension(n, m, radius);
            double p0 = twisted ? twisted_cft_momentum(cls, n, m)
                                : cft_momentum(n, m);
            if (d0 > max_delta) continue;
            for (int a = 0; a <= max_descendant; ++a)
                for (int b = 0; a + b <= max_descendant; ++b) {
                    if (d0 + a + b > max_delta) continue;
                    CftPrediction pr;
                    pr.n = n;
                    pr.m = m;
                    pr.level_left = a;
                    pr.level_right = b;
                    pr.delta = d0 + a + b;
                    pr.momentum = p0 + a - b;
                    pr.charge = charge_prediction(cls, n, m);
                    pr.twisted = twisted;
                    out.push_back(pr);
                }
        }
    std::sort(out.begin(), out.end(), [](const CftPrediction& x, const CftPrediction& y) {
        auto key = [](const CftPrediction& c) {
            return std::make_tuple(c.delta, std::abs(c.n), std::abs(c.m), c.n, c.m,
                                   c.level_left, c.level_right);
        };
        return key(x) < key(y);
    });
    return out;
}

} // namespace zedge
