#pragma once

#include "clock.hpp"
#include "hilbert.hpp"

namespace zedge {

// Label (N, p): Z_N clock chain carrying the p-th SPT class, p in {0..N-1}.
struct SptClass {
    int N;
    int p;
    SptClass(int n, int pp) : N(n), p(pp) {
        if (N < 2) throw invalid_parameter("SptClass: N must be >= 2");
        if (p < 0 || p >= N) throw invalid_parameter("SptClass: p must lie in 0..N-1");
    }
};

// Domain-wall phase polynomial Q(x) = sum_a q_a x^a, chosen so that
// exp(i Q(w^d)) = w^{d p} for every domain wall height d. The coefficients are
// hermitian (q_a = conj(q_{N-a})), so Q is real on the N-th roots of unity.
// For even N the naive coefficients hit the branch cut of the discrete
// logarithm at d = N/2; the q_0 / q_{N/2} adjustment below moves that jump
// onto a full 2 pi where it is invisible, keeping the defining property exact
// without ever taking a complex logarithm.
struct DomainWallPolynomial {
    SptClass cls;
    std::vector<cplx> coeff; // q_0 .. q_{N-1}

    // Q(w^d), guaranteed real by hermiticity
    double eval_at_root(int d) const {
        const int N = cls.N;
        cplx q = 0.0;
        for (int a = 0; a < N; ++a) q += coeff[a] * omega_pow(N, a * d);
        return q.real();
    }
};

inline DomainWallPolynomial q_polynomial(SptClass cls) {
    const int N = cls.N;
    const double g = two_pi * double(cls.p) / double(N);
    DomainWallPolynomial poly{cls, std::vector<cplx>(N)};
    poly.coeff[0] = -g * double(N - 1) / 2.0;
    for (int k = 1; k < N; ++k)
        poly.coeff[k] = -g / (omega_pow(N, k) - 1.0);
    if (N % 2 == 0) {
        poly.coeff[0] += pi * double(cls.p);
        poly.coeff[N / 2] -= pi * double(cls.p);
    }
    return poly;
}

// u(d) = exp(i Q(w^d) / N): the phase one bond contributes to the symmetry.
// Satisfies u(d)^N = w^{d p}.
inline std::vector<cplx> bond_phase_table(SptClass cls) {
    auto poly = q_polynomial(cls);
    std::vector<cplx> u(cls.N);
    for (int d = 0; d < cls.N; ++d)
        u[d] = std::polar(1.0, poly.eval_at_root(d) / double(cls.N));
    return u;
}

// Two-site diagonal unitary U_{j,j+1} = u((c_{j+1} - c_j) mod N), returned on
// placeholder sites {1, 2}; callers rebind the support with placed_at.
// U^N = (sigma_j^dag sigma_{j+1})^p.
inline LocalKernel domain_wall_unitary(SptClass cls) {
    const int N = cls.N;
    auto u = bond_phase_table(cls);
    LocalKernel k;
    k.local_dim = N;
    k.support = {1, 2};
    k.entries = Mat::Zero(N * N, N * N);
    for (int d1 = 0; d1 < N; ++d1)
        for (int d2 = 0; d2 < N; ++d2) {
            int loc = d1 + N * d2;
            k.entries(loc, loc) = u[mod_n(d2 - d1, N)];
        }
    return k;
}

inline ManyBodyOperator build_translation(const ChainGeometry& g) {
    ManyBodyOperator t(g);
    t.factors = {Translate{}};
    return t;
}

// S = (prod_j tau_j)(prod_j U_{j,j+1}) over the ring. Order matters only up to
// a basis convention: the two products commute as wholes.
inline ManyBodyOperator build_symmetry(SptClass cls, int M) {
    ManyBodyOperator s(ChainGeometry(cls.N, M));
    s.factors = {GlobalShift{1}, AllBondPhases{bond_phase_table(cls)}};
    return s;
}

// Symmetry-twisted translation T~ = T U_{M,1} tau_1. For p != 0 this is not
// order M; (T~)^M reproduces the full symmetry operator up to the domain-wall
// rearrangement phase, which is the content of build_twisted_symmetry.
inline ManyBodyOperator build_twisted_translation(SptClass cls, int M) {
    ManyBodyOperator t(ChainGeometry(cls.N, M));
    t.factors = {Translate{},
                 BondPhase{M, 1, bond_phase_table(cls)},
                 SiteShift{1, 1}};
    return t;
}

// S~ = exp(i [Q(w^{d+1}) - Q(w^d)] / N) S with d = (c_1 - c_M) mod N read off
// the incoming state. Satisfies S~ = (T~)^M and the anomalous order relation
// S~^N = exp(2 pi i p / N), which no genuinely on-site symmetry could.
inline ManyBodyOperator build_twisted_symmetry(SptClass cls, int M) {
    const int N = cls.N;
    auto poly = q_polynomial(cls);
    std::vector<cplx> pre(N);
    for (int d = 0; d < N; ++d) {
        double dq = poly.eval_at_root(mod_n(d + 1, N)) - poly.eval_at_root(d);
        pre[d] = std::polar(1.0, dq / double(N));
    }
    ManyBodyOperator s(ChainGeometry(N, M));
    s.factors = {GlobalShift{1}, AllBondPhases{bond_phase_table(cls)},
                 BondPhase{M, 1, std::move(pre)}};
    return s;
}

} // namespace zedge
