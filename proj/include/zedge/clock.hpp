#pragma once

#include "core.hpp"

namespace zedge {

// Z_N clock pair: sigma = diag(1, w, ..., w^{N-1}) with w = e^{+2 pi i / N},
// tau the cyclic raising permutation tau|j> = |j+1 mod N>. They satisfy the
// Weyl relation tau^dag sigma tau = w sigma and sigma^N = tau^N = 1.

inline cplx omega(int N) {
    if (N < 2) throw invalid_parameter("omega: N must be >= 2");
    return std::polar(1.0, two_pi / double(N));
}

inline cplx omega_pow(int N, int k) {
    // exact-angle evaluation; avoids accumulating pow() error for large k
    return std::polar(1.0, two_pi * double(mod_n(k, N)) / double(N));
}

inline Mat clock_sigma(int N) {
    if (N < 2) throw invalid_parameter("clock_sigma: N must be >= 2");
    Mat s = Mat::Zero(N, N);
    for (int j = 0; j < N; ++j) s(j, j) = omega_pow(N, j);
    return s;
}

inline Mat clock_tau(int N) {
    if (N < 2) throw invalid_parameter("clock_tau: N must be >= 2");
    Mat t = Mat::Zero(N, N);
    for (int j = 0; j < N; ++j) t(mod_n(j + 1, N), j) = 1.0;
    return t;
}

// Max-norm deviation from the defining relations; ~1e-15 for any sane N.
inline double weyl_deviation(int N) {
    Mat s = clock_sigma(N);
    Mat t = clock_tau(N);
    Mat id = Mat::Identity(N, N);
    double dev = 0.0;
    dev = std::max(dev, (t.adjoint() * s * t - omega(N) * s).cwiseAbs().maxCoeff());
    dev = std::max(dev, (s * t - omega(N) * t * s).cwiseAbs().maxCoeff());
    Mat sp = id, tp = id;
    for (int k = 0; k < N; ++k) { sp = sp * s; tp = tp * t; }
    dev = std::max(dev, (sp - id).cwiseAbs().maxCoeff());
    dev = std::max(dev, (tp - id).cwiseAbs().maxCoeff());
    dev = std::max(dev, (s * s.adjoint() - id).cwiseAbs().maxCoeff());
    dev = std::max(dev, (t * t.adjoint() - id).cwiseAbs().maxCoeff());
    return dev;
}

} // namespace zedge
