#pragma once

#include "symmetry.hpp"

namespace zedge {

// Edge-restricted SPT Hamiltonian H = lambda * sum_j h_j with
// h_j = -sum_{l=0}^{N-1} S^{-l} (tau_j + tau_j^dag) S^l.
// Conjugating by the symmetry dresses the clock flip with domain-wall phases
// on the two adjacent bonds, so each h_j is a three-site kernel on
// (j-1, j, j+1).
struct EdgeModel {
    SptClass cls;
    int M;
    double lambda = 1.0;
};

// lambda values used for the reference spectra at N = 2 and N = 3; they set
// the velocity so that conformal towers come out close to integer spaced.
inline double default_lambda(const SptClass& cls) {
    if (cls.N == 2) return 0.82;
    if (cls.N == 3) return 0.26;
    return 1.0;
}

// Bulk kernel on local digits (a, b, c) ~ sites (j-1, j, j+1), slot 0 least
// significant. Writing W(a,b,c) = u((b-a) mod N) u((c-b) mod N) for the
// dressing of |a,b,c>, the geometric sum over l collapses:
//   K[t,s] = -(tau+tau^dag)[b_t, b_s] * sum_l (W(s)/W(t))^l,
// and W(s)/W(t) is always an exact N-th root of unity (u(d)^N = w^{dp}), so
// the sum is N when the dressings agree and 0 otherwise. The kernel therefore
// has at most two entries per column, each equal to -N (they merge at N = 2).
inline LocalKernel local_term_kernel(SptClass cls) {
    const int N = cls.N;
    auto u = bond_phase_table(cls);
    const index_t nloc = index_t(N) * N * N;
    auto wall = [&](int a, int b, int c) {
        return u[mod_n(b - a, N)] * u[mod_n(c - b, N)];
    };
    LocalKernel k;
    k.local_dim = N;
    k.support = {1, 2, 3};
    k.hermitian = true;
    k.entries = Mat::Zero(nloc, nloc);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int c = 0; c < N; ++c) {
                index_t s = a + index_t(N) * b + index_t(N) * N * c;
                for (int step : {+1, -1}) {
                    int bt = mod_n(b + step, N);
                    index_t t = a + index_t(N) * bt + index_t(N) * N * c;
                    cplx rho = wall(a, b, c) * std::conj(wall(a, bt, c));
                    if (std::abs(rho - 1.0) < 1e-8)
                        k.entries(t, s) += -double(N);
                }
            }
    return k;
}

namespace detail {

inline LocalKernel conjugate_kernel(const LocalKernel& k, const Mat& v) {
    LocalKernel out = k;
    out.entries = v.adjoint() * k.entries * v;
    return out;
}

} // namespace detail

// Twisted replacement for h_1, on slots (a, b, c) ~ sites (M, 1, 2):
// h~_1 = tau_1^dag tau_2^dag h_1 tau_1 tau_2, a pure relabelling of the two
// clock digits inside the twisted bond's reach.
inline LocalKernel twisted_first_kernel(SptClass cls) {
    const int N = cls.N;
    const index_t nloc = index_t(N) * N * N;
    Mat v = Mat::Zero(nloc, nloc);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int c = 0; c < N; ++c) {
                index_t s = a + index_t(N) * b + index_t(N) * N * c;
                index_t t = a + index_t(N) * mod_n(b + 1, N)
                            + index_t(N) * N * mod_n(c + 1, N);
                v(t, s) = 1.0;
            }
    auto k = detail::conjugate_kernel(local_term_kernel(cls), v);
    k.hermitian = true;
    return k;
}

// Twisted replacement for h_M, on slots (a, b, c) ~ sites (M-1, M, 1):
// h~_M = tau_1^dag U_{M,1}^{-1} h_M U_{M,1} tau_1. The conjugator shifts the
// site-1 digit and picks up the domain-wall phase of the twisted bond.
inline LocalKernel twisted_last_kernel(SptClass cls) {
    const int N = cls.N;
    auto u = bond_phase_table(cls);
    const index_t nloc = index_t(N) * N * N;
    Mat v = Mat::Zero(nloc, nloc);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int c = 0; c < N; ++c) {
                index_t s = a + index_t(N) * b + index_t(N) * N * c;
                index_t t = a + index_t(N) * b + index_t(N) * N * mod_n(c + 1, N);
                v(t, s) = u[mod_n(c + 1 - b, N)];
            }
    auto k = detail::conjugate_kernel(local_term_kernel(cls), v);
    k.hermitian = true;
    return k;
}

namespace detail {

inline void require_ring(const EdgeModel& m) {
    if (m.M < 3)
        throw invalid_configuration(
            "Hamiltonian needs M >= 3: three-site terms self-overlap on shorter rings");
    if (!(m.lambda > 0.0) || !std::isfinite(m.lambda))
        throw invalid_parameter("lambda must be positive and finite");
}

} // namespace detail

inline ManyBodyOperator build_hamiltonian(const EdgeModel& m) {
    detail::require_ring(m);
    ChainGeometry g(m.cls.N, m.M);
    ManyBodyOperator h(g);
    h.scale = m.lambda;
    h.hermitian = true;
    auto bulk = local_term_kernel(m.cls);
    for (int j = 1; j <= m.M; ++j)
        h.terms.push_back(bulk.placed_at({g.site_left(j), j, g.site_right(j)}));
    return h;
}

// Same ring with the symmetry twist inserted on bond (M, 1): the two terms
// whose support crosses that bond are conjugated, everything else is carried
// over. For p = 0 the conjugators commute with the kernels and H~ = H.
inline ManyBodyOperator build_twisted_hamiltonian(const EdgeModel& m) {
    detail::require_ring(m);
    ChainGeometry g(m.cls.N, m.M);
    ManyBodyOperator h(g);
    h.scale = m.lambda;
    h.hermitian = true;
    auto bulk = local_term_kernel(m.cls);
    for (int j = 1; j <= m.M; ++j) {
        if (j == 1)
            h.terms.push_back(twisted_first_kernel(m.cls).placed_at({g.M, 1, 2}));
        else if (j == m.M)
            h.terms.push_back(twisted_last_kernel(m.cls).placed_at({g.M - 1, g.M, 1}));
        else
            h.terms.push_back(bulk.placed_at({g.site_left(j), j, g.site_right(j)}));
    }
    return h;
}

// max over random unit vectors of ||A B v - B A v||; the workhorse behind all
// matrix-free commutation checks.
inline double commutator_residual(const ManyBodyOperator& a, const ManyBodyOperator& b,
                                  int trials = 4, std::uint64_t seed = 7) {
    if (a.dim() != b.dim())
        throw dimension_error("commutator_residual: operators act on different spaces");
    double worst = 0.0;
    Vec v, ab, ba, t;
    for (int k = 0; k < trials; ++k) {
        v = random_unit_vector(a.dim(), seed + std::uint64_t(k));
        b.apply(v, t);
        a.apply(t, ab);
        a.apply(v, t);
        b.apply(t, ba);
        worst = std::max(worst, (ab - ba).norm());
    }
    return worst;
}

} // namespace zedge
