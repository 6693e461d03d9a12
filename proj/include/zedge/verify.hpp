#pragma once

#include "clock.hpp"
#include "cocycle.hpp"
#include "hamiltonian.hpp"
#include "solver.hpp"

#include <functional>
#include <vector>

namespace zedge {

// One named invariant check. `margin` checks pass when the measured value is
// at least the threshold (used for anomaly witnesses that must be large);
// ordinary checks pass when it is at most the threshold.
struct CheckResult {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool at_least = false;
    bool pass = false;
};

struct VerifyOptions {
    // Deliberately flips the sign of one domain-wall coefficient inside the
    // exponentiation check, to prove the suite can catch exactly that defect.
    bool inject_q_sign_error = false;
    std::uint64_t seed = 23;
};

namespace detail {

inline void push_check(std::vector<CheckResult>& out, std::string name, double measured,
                       double threshold, bool at_least = false) {
    CheckResult c;
    c.name = std::move(name);
    c.measured = measured;
    c.threshold = threshold;
    c.at_least = at_least;
    c.pass = at_least ? (measured >= threshold) : (measured <= threshold);
    out.push_back(std::move(c));
}

// product over sites of given one-site matrices, site 1 least significant
inline Mat dense_site_chain(int M, const std::function<Mat(int)>& site_op) {
    Mat out = site_op(M);
    for (int j = M - 1; j >= 1; --j) out = kron(out, site_op(j));
    return out;
}

inline double op_norm_dev(const ManyBodyOperator& a, const ManyBodyOperator& b,
                          std::uint64_t seed, int trials = 3) {
    double worst = 0.0;
    Vec v, x, y;
    for (int t = 0; t < trials; ++t) {
        v = random_unit_vector(a.dim(), seed + std::uint64_t(t));
        a.apply(v, x);
        b.apply(v, y);
        worst = std::max(worst, (x - y).norm());
    }
    return worst;
}

inline Vec power_apply(const ManyBodyOperator& a, Vec v, int times) {
    Vec w;
    for (int i = 0; i < times; ++i) {
        a.apply(v, w);
        std::swap(v, w);
    }
    return v;
}

} // namespace detail

// The full invariant suite, cheap enough to run on every invocation. Returns
// one result per named check; callers decide how to present them.
inline std::vector<CheckResult> run_verification(const VerifyOptions& opt = {}) {
    std::vector<CheckResult> out;

    // clock algebra for every local dimension in range
    for (int n = 2; n <= 8; ++n)
        detail::push_check(out, "clock-algebra-n" + std::to_string(n),
                           weyl_deviation(n), 1e-13);

    // basis packing round trip, including the documented corner examples
    {
        ChainGeometry g3(2, 3);
        double dev = std::abs(double(encode(g3, {0, 1, 0}) - 2));
        ChainGeometry g2(3, 2);
        dev = std::max(dev, std::abs(double(encode(g2, {2, 1}) - 5)));
        ChainGeometry g(3, 5);
        for (index_t i = 0; i < g.dim; ++i)
            dev = std::max(dev, std::abs(double(encode(g, decode(g, i)) - i)));
        detail::push_check(out, "encode-roundtrip", dev, 0.0);
    }

    // translation is a permutation of order M
    {
        ChainGeometry g(3, 4);
        auto t = build_translation(g);
        Mat td = dense_materialize(t);
        Mat id = Mat::Identity(g.dim, g.dim);
        double dev = (td * td.adjoint() - id).cwiseAbs().maxCoeff();
        Mat pw = id;
        for (int j = 0; j < g.M; ++j) pw = td * pw;
        dev = std::max(dev, (pw - id).cwiseAbs().maxCoeff());
        detail::push_check(out, "translation-order", dev, 1e-13);
    }

    // hermiticity of the domain-wall coefficients: q_a = conj(q_{N-a})
    {
        double dev = 0.0;
        for (int n = 2; n <= 8; ++n)
            for (int p = 0; p < n; ++p) {
                auto poly = q_polynomial(SptClass(n, p));
                dev = std::max(dev, std::abs(poly.coeff[0].imag()));
                for (int a = 1; a < n; ++a)
                    dev = std::max(dev, std::abs(poly.coeff[a] -
                                                 std::conj(poly.coeff[mod_n(-a, n)])));
            }
        detail::push_check(out, "domain-wall-hermiticity", dev, 1e-12);
    }

    // the defining property exp(i Q(w^d)) = w^{d p}; this is where the
    // optional fault is injected
    {
        double dev = 0.0;
        for (int n = 2; n <= 8; ++n)
            for (int p = 0; p < n; ++p) {
                auto poly = q_polynomial(SptClass(n, p));
                if (opt.inject_q_sign_error) poly.coeff[1] = -poly.coeff[1];
                for (int d = 0; d < n; ++d) {
                    cplx lhs = std::polar(1.0, poly.eval_at_root(d));
                    dev = std::max(dev, std::abs(lhs - omega_pow(n, d * p)));
                }
            }
        detail::push_check(out, "domain-wall-exponentiation", dev, 1e-12);
    }

    // U^N = (sigma^dag (x) sigma)^p on one bond
    {
        double dev = 0.0;
        for (int n = 2; n <= 6; ++n)
            for (int p = 0; p < n; ++p) {
                auto u = domain_wall_unitary(SptClass(n, p));
                Mat un = Mat::Identity(u.entries.rows(), u.entries.cols());
                for (int k = 0; k < n; ++k) un = un * u.entries;
                Mat ss = detail::kron(clock_sigma(n), clock_sigma(n).adjoint());
                Mat ssp = Mat::Identity(un.rows(), un.cols());
                for (int k = 0; k < p; ++k) ssp = ssp * ss;
                dev = std::max(dev, (un - ssp).cwiseAbs().maxCoeff());
            }
        detail::push_check(out, "domain-wall-unitary-order", dev, 1e-12);
    }

    // symmetry operator: S^N = 1, [S, T] = 0, and its two factor products
    // commute with each other
    {
        double dev_order = 0.0, dev_comm = 0.0, dev_fac = 0.0;
        for (auto [n, p, m] : {std::array<int, 3>{2, 1, 10}, {3, 1, 7}, {4, 3, 5}}) {
            SptClass cls(n, p);
            ChainGeometry g(n, m);
            auto s = build_symmetry(cls, m);
            auto t = build_translation(g);
            Vec v = random_unit_vector(g.dim, opt.seed);
            dev_order = std::max(dev_order,
                                 (detail::power_apply(s, v, n) - v).norm());
            dev_comm = std::max(dev_comm, commutator_residual(s, t, 3, opt.seed));
            ManyBodyOperator shift(g), walls(g);
            shift.factors = {GlobalShift{1}};
            walls.factors = {AllBondPhases{bond_phase_table(cls)}};
            dev_fac = std::max(dev_fac, commutator_residual(shift, walls, 3, opt.seed));
        }
        detail::push_check(out, "symmetry-order", dev_order, 1e-12);
        detail::push_check(out, "symmetry-translation-commute", dev_comm, 1e-12);
        detail::push_check(out, "symmetry-factor-commute", dev_fac, 1e-12);
    }

    // twisted translation: unitary, (T~)^M = S~, anomalous order of S~
    {
        double dev_unit = 0.0, dev_power = 0.0, dev_order = 0.0, anomaly = 1e300;
        for (auto [n, p, m] : {std::array<int, 3>{2, 1, 8}, {3, 1, 6}, {3, 2, 6}, {5, 2, 4}}) {
            SptClass cls(n, p);
            ChainGeometry g(n, m);
            auto tt = build_twisted_translation(cls, m);
            auto st = build_twisted_symmetry(cls, m);
            Vec v = random_unit_vector(g.dim, opt.seed + 1);
            Vec w = random_unit_vector(g.dim, opt.seed + 2);
            Vec tv, tw, sv;
            tt.apply(v, tv);
            tt.apply(w, tw);
            dev_unit = std::max(dev_unit, std::abs(tv.dot(tw) - v.dot(w)));
            Vec pw = detail::power_apply(tt, v, m);
            st.apply(v, sv);
            dev_power = std::max(dev_power, (pw - sv).norm());
            if (p != 0) anomaly = std::min(anomaly, (pw - v).norm());
            Vec sn = detail::power_apply(st, v, n);
            cplx expect = std::polar(1.0, two_pi * p / double(n));
            dev_order = std::max(dev_order, (sn - expect * v).norm());
        }
        detail::push_check(out, "twisted-translation-unitary", dev_unit, 1e-12);
        detail::push_check(out, "ttilde-power-equals-stilde", dev_power, 1e-11);
        detail::push_check(out, "twisted-translation-anomalous", anomaly, 0.1, true);
        detail::push_check(out, "stilde-order-phase", dev_order, 1e-11);
    }

    // Hamiltonian: hermitian, translation covariant, commutes with S
    {
        double dev_h = 0.0, dev_t = 0.0, dev_s = 0.0;
        for (auto [n, p, m] : {std::array<int, 3>{2, 1, 8}, {3, 2, 6}}) {
            EdgeModel model{SptClass(n, p), m, 1.0};
            ChainGeometry g(n, m);
            auto h = build_hamiltonian(model);
            Vec u = random_unit_vector(g.dim, opt.seed + 3);
            Vec v = random_unit_vector(g.dim, opt.seed + 4);
            Vec hu, hv;
            h.apply(u, hu);
            h.apply(v, hv);
            dev_h = std::max(dev_h, std::abs(u.dot(hv) - std::conj(v.dot(hu))));
            dev_t = std::max(dev_t, commutator_residual(h, build_translation(g), 3,
                                                        opt.seed));
            dev_s = std::max(dev_s, commutator_residual(h, build_symmetry(model.cls, m),
                                                        3, opt.seed));
        }
        detail::push_check(out, "hamiltonian-hermitian", dev_h, 1e-12);
        detail::push_check(out, "hamiltonian-translation-commute", dev_t, 1e-11);
        detail::push_check(out, "hamiltonian-symmetry-commute", dev_s, 1e-11);
    }

    // twisted Hamiltonian: commutes with T~; fails to commute with the naive S
    // by a finite amount when p != 0 (the anomaly); p = 0 twist is trivial
    {
        double dev_cov = 0.0, contrast = 1e300, dev_p0 = 0.0;
        for (auto [n, p, m] : {std::array<int, 3>{2, 1, 8}, {3, 1, 6}, {3, 2, 6}}) {
            EdgeModel model{SptClass(n, p), m, 1.0};
            auto ht = build_twisted_hamiltonian(model);
            dev_cov = std::max(dev_cov,
                               commutator_residual(ht, build_twisted_translation(
                                                           model.cls, m),
                                                   3, opt.seed));
            contrast = std::min(contrast,
                                commutator_residual(ht, build_symmetry(model.cls, m), 3,
                                                    opt.seed));
        }
        for (int n : {2, 3, 4}) {
            EdgeModel model{SptClass(n, 0), 6, 1.0};
            auto ht = build_twisted_hamiltonian(model);
            auto h = build_hamiltonian(model);
            dev_p0 = std::max(dev_p0, detail::op_norm_dev(h, ht, opt.seed));
            dev_p0 = std::max(dev_p0,
                              commutator_residual(ht, build_symmetry(model.cls, 6), 3,
                                                  opt.seed));
        }
        detail::push_check(out, "twisted-hamiltonian-covariance", dev_cov, 1e-11);
        detail::push_check(out, "anomaly-contrast", contrast, 0.01, true);
        detail::push_check(out, "p0-twist-trivial", dev_p0, 1e-12);
    }

    // closed forms at the solvable points
    {
        Mat sx = clock_tau(2);
        Mat sz = clock_sigma(2);
        Mat i2 = Mat::Identity(2, 2);
        const int m = 5;
        ChainGeometry g(2, m);
        auto one_site = [&](int at, const Mat& op) {
            return detail::dense_site_chain(m, [&](int j) { return j == at ? op : i2; });
        };
        Mat closed0 = Mat::Zero(g.dim, g.dim);
        Mat closed1 = Mat::Zero(g.dim, g.dim);
        for (int j = 1; j <= m; ++j) {
            Mat xj = one_site(j, sx);
            Mat zxz = one_site(g.site_left(j), sz) * xj * one_site(g.site_right(j), sz);
            closed0 += -4.0 * xj;
            closed1 += -2.0 * (xj - zxz);
        }
        double dev = (dense_materialize(build_hamiltonian({SptClass(2, 0), m, 1.0})) -
                      closed0)
                         .cwiseAbs()
                         .maxCoeff();
        detail::push_check(out, "closed-form-z2-trivial", dev, 1e-12);
        dev = (dense_materialize(build_hamiltonian({SptClass(2, 1), m, 1.0})) - closed1)
                  .cwiseAbs()
                  .maxCoeff();
        detail::push_check(out, "closed-form-z2-spt", dev, 1e-12);

        Mat t3 = clock_tau(3);
        Mat flip = t3 + t3.adjoint();
        Mat i3 = Mat::Identity(3, 3);
        ChainGeometry g3(3, 4);
        Mat closed3 = Mat::Zero(g3.dim, g3.dim);
        for (int j = 1; j <= 4; ++j)
            closed3 += -3.0 * detail::dense_site_chain(4, [&](int jj) {
                return jj == j ? flip : i3;
            });
        dev = (dense_materialize(build_hamiltonian({SptClass(3, 0), 4, 1.0})) - closed3)
                  .cwiseAbs()
                  .maxCoeff();
        detail::push_check(out, "closed-form-z3-trivial", dev, 1e-12);
    }

    // discrete topology: cocycle condition, class distinctness, MPS phases
    {
        double worst = 0.0;
        for (int n = 2; n <= 6; ++n)
            for (int p = 0; p < n; ++p)
                worst = std::max(worst, verify_cocycle_condition(SptClass(n, p)));
        detail::push_check(out, "cocycle-condition", worst, 1e-12);

        bool all_distinct = true;
        for (int n : {2, 3})
            for (int pa = 0; pa < n; ++pa)
                for (int pb = 0; pb < pa; ++pb)
                    all_distinct = all_distinct && class_distinctness(n, pa, pb);
        detail::push_check(out, "cocycle-class-distinctness",
                           all_distinct ? 1.0 : 0.0, 1.0, true);

        double mps_dev = 0.0;
        for (int n = 2; n <= 4; ++n)
            for (int p = 0; p < n; ++p)
                for (int m1 = 0; m1 < n; ++m1)
                    for (int m2 = 0; m2 < n; ++m2)
                        for (int m3 = 0; m3 < n; ++m3) {
                            auto got = projective_phase_from_tensors(SptClass(n, p),
                                                                     m1, m2, m3);
                            cplx want = std::polar(
                                1.0, three_cocycle(SptClass(n, p), m1, m2, m3));
                            mps_dev = std::max(mps_dev, std::abs(got.phase - want));
                        }
        detail::push_check(out, "mps-projective-phase", mps_dev, 1e-10);
    }

    // iterative solver against the dense path on a space big enough to matter
    {
        EdgeModel model{SptClass(2, 1), 8, 0.82};
        auto h = build_hamiltonian(model);
        SolveOptions dense_opts;
        auto ref = lowest_eigenpairs(h, 8, dense_opts);
        SolveOptions it_opts;
        it_opts.force_iterative = true;
        it_opts.seed = opt.seed;
        auto got = lowest_eigenpairs(h, 8, it_opts);
        double dev = 0.0;
        for (int i = 0; i < 8; ++i)
            dev = std::max(dev, std::abs(ref[i].value - got[i].value));
        detail::push_check(out, "solver-cross-check", dev, 1e-9);
    }

    return out;
}

} // namespace zedge
