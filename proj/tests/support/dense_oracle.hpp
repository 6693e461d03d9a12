#pragma once

// Reference implementations built the slow, literal way: dense Kronecker
// products, explicit matrix powers, operators assembled exactly as their
// defining expressions read. Everything here is independent of the library's
// kernel compilation and matrix-free application paths so the two can be
// compared in tests. Sizes are expected to stay small (dim = N^M up to a few
// thousand).

#include <Eigen/Dense>

#include <cassert>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

constexpr double pi = 3.141592653589793238462643383279502884;

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Mat clock_sigma(int n) {
    Mat s = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) s(k, k) = std::polar(1.0, 2.0 * pi * k / n);
    return s;
}

inline Mat clock_tau(int n) {
    Mat t = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) t((k + 1) % n, k) = 1.0;
    return t;
}

// chain operator with `a` acting on one site; site 1 is the fastest index
inline Mat site_op(int n, int m, int site, const Mat& a) {
    assert(site >= 1 && site <= m);
    Mat acc = Mat::Identity(1, 1);
    for (int j = m; j >= 1; --j)
        acc = kron(acc, j == site ? a : Mat::Identity(n, n));
    return acc;
}

// cyclic shift of site contents: site j of the output holds site j+1 of the
// input, site M holds site 1
inline Mat translation(int n, int m) {
    Eigen::Index dim = 1;
    for (int j = 0; j < m; ++j) dim *= n;
    Mat t = Mat::Zero(dim, dim);
    for (Eigen::Index in = 0; in < dim; ++in) {
        std::vector<int> d(m);
        Eigen::Index rest = in;
        for (int j = 0; j < m; ++j) {
            d[j] = int(rest % n);
            rest /= n;
        }
        Eigen::Index out = 0;
        for (int j = m - 1; j >= 0; --j) out = out * n + d[(j + 1) % m];
        t(out, in) = 1.0;
    }
    return t;
}

// domain-wall polynomial at wall value d: Q(omega^d) = sum_a q_a omega^(a d),
// with the coefficients of the closed solution of e^{iQ} = x^p
inline double q_phase(int n, int p, int d) {
    std::vector<cplx> q(n);
    q[0] = -(2.0 * pi * p / n) * (n - 1) / 2.0;
    for (int a = 1; a < n; ++a)
        q[a] = -(2.0 * pi * p / n) / (std::polar(1.0, 2.0 * pi * a / n) - 1.0);
    if (n % 2 == 0) {
        q[0] += pi * p;
        q[n / 2] -= pi * p;
    }
    cplx val = 0.0;
    for (int a = 0; a < n; ++a) val += q[a] * std::polar(1.0, 2.0 * pi * a * d / n);
    assert(std::abs(val.imag()) < 1e-9);
    return val.real();
}

// diagonal two-site phase exp[(i/N) Q(sigma^dag_j sigma_k)] on the full chain
inline Mat bond_u(int n, int p, int m, int j, int k) {
    Eigen::Index dim = 1;
    for (int s = 0; s < m; ++s) dim *= n;
    Eigen::Index sj = 1, sk = 1;
    for (int s = 1; s < j; ++s) sj *= n;
    for (int s = 1; s < k; ++s) sk *= n;
    Mat u = Mat::Zero(dim, dim);
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
        int dj = int((idx / sj) % n), dk = int((idx / sk) % n);
        int wall = ((dk - dj) % n + n) % n;
        u(idx, idx) = std::polar(1.0, q_phase(n, p, wall) / n);
    }
    return u;
}

// S = (prod_j tau_j)(prod_j U_{j,j+1}) with the cyclic bond M,1 included
inline Mat symmetry(int n, int p, int m) {
    Eigen::Index dim = 1;
    for (int s = 0; s < m; ++s) dim *= n;
    Mat s = Mat::Identity(dim, dim);
    for (int j = 1; j <= m; ++j) s = s * site_op(n, m, j, clock_tau(n));
    for (int j = 1; j <= m; ++j) s = s * bond_u(n, p, m, j, j % m + 1);
    return s;
}

// T~ = T U_{M,1} tau_1
inline Mat twisted_translation(int n, int p, int m) {
    return translation(n, m) * bond_u(n, p, m, m, 1) *
           site_op(n, m, 1, clock_tau(n));
}

// the per-site term of the defining sum: h_j = -sum_l S^-l (tau_j + h.c.) S^l
inline Mat hamiltonian_term(int n, int p, int m, int j) {
    Mat s = symmetry(n, p, m);
    Mat tj = site_op(n, m, j, clock_tau(n));
    tj += tj.adjoint().eval();
    Mat h = Mat::Zero(s.rows(), s.cols());
    Mat sl = Mat::Identity(s.rows(), s.cols());
    for (int l = 0; l < n; ++l) {
        h -= sl.adjoint() * tj * sl;
        sl = sl * s;
    }
    return h;
}

inline Mat hamiltonian(int n, int p, int m, double lambda) {
    Mat h = hamiltonian_term(n, p, m, 1);
    for (int j = 2; j <= m; ++j) h += hamiltonian_term(n, p, m, j);
    return lambda * h;
}

// boundary-twisted chain: h~_1 = (tau_1 tau_2)^dag h_1 (tau_1 tau_2),
// h~_M = (U_{M,1} tau_1)^dag h_M (U_{M,1} tau_1), bulk terms untouched
inline Mat twisted_hamiltonian(int n, int p, int m, double lambda) {
    Mat v1 = site_op(n, m, 1, clock_tau(n)) * site_op(n, m, 2, clock_tau(n));
    Mat vm = bond_u(n, p, m, m, 1) * site_op(n, m, 1, clock_tau(n));
    Mat h = v1.adjoint() * hamiltonian_term(n, p, m, 1) * v1;
    for (int j = 2; j < m; ++j) h += hamiltonian_term(n, p, m, j);
    h += vm.adjoint() * hamiltonian_term(n, p, m, m) * vm;
    return lambda * h;
}

// closed forms quoted for the two smallest groups (overall constants dropped
// at the source, hence the fitted-scalar comparisons in the tests)

inline Mat z2_trivial(int m) {
    Mat h = Mat::Zero(1 << m, 1 << m);
    for (int j = 1; j <= m; ++j) h += site_op(2, m, j, clock_tau(2));
    return h;
}

inline Mat z2_spt(int m) {
    const Mat sx = clock_tau(2);
    Mat sz = Mat::Zero(2, 2);
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    Mat h = Mat::Zero(1 << m, 1 << m);
    for (int j = 1; j <= m; ++j) {
        int left = (j + m - 2) % m + 1, right = j % m + 1;
        h += site_op(2, m, j, sx);
        h -= site_op(2, m, left, sz) * site_op(2, m, j, sx) *
             site_op(2, m, right, sz);
    }
    return h;
}

inline Mat z3_trivial(int m) {
    Eigen::Index dim = 1;
    for (int s = 0; s < m; ++s) dim *= 3;
    Mat h = Mat::Zero(dim, dim);
    for (int j = 1; j <= m; ++j) {
        Mat t = site_op(3, m, j, clock_tau(3));
        h += t + t.adjoint().eval();
    }
    return h;
}

// tau_j [ 5/3 + (omega + conj omega)/3 (sd_{j-1} s_j + s_{j-1} sd_j)
//         + ( (1+omega)/3 sd_j s_{j+1} + 2 conj(omega)/3 sd_{j-1} s_{j+1}
//             + 2 omega/3 sd_{j-1} sd_j sd_{j+1} + h.c. ) ] + h.c.
inline Mat z3_spt(int m) {
    const cplx w = std::polar(1.0, 2.0 * pi / 3.0);
    Eigen::Index dim = 1;
    for (int s = 0; s < m; ++s) dim *= 3;
    const Mat sg = clock_sigma(3), tu = clock_tau(3);
    Mat h = Mat::Zero(dim, dim);
    for (int j = 1; j <= m; ++j) {
        int left = (j + m - 2) % m + 1, right = j % m + 1;
        Mat s_l = site_op(3, m, left, sg), s_j = site_op(3, m, j, sg);
        Mat s_r = site_op(3, m, right, sg);
        Mat inner = (1.0 + w) / 3.0 * s_j.adjoint() * s_r +
                    2.0 * std::conj(w) / 3.0 * s_l.adjoint() * s_r +
                    2.0 * w / 3.0 * s_l.adjoint() * s_j.adjoint() * s_r.adjoint();
        Mat bracket = (5.0 / 3.0) * Mat::Identity(dim, dim) +
                      ((w + std::conj(w)) / 3.0) *
                          (s_l.adjoint() * s_j + s_l * s_j.adjoint()) +
                      inner + inner.adjoint().eval();
        Mat term = site_op(3, m, j, tu) * bracket;
        h += term + term.adjoint().eval();
    }
    return -h;
}

// three-site blocks in slot order (a, b, c), slot a fastest, for comparing
// boundary kernels: X_b + Z_a X_b Z_c and Y_b Z_c + Z_a Y_b
inline Mat three_slot(const Mat& a, const Mat& b, const Mat& c) {
    return kron(c, kron(b, a));
}

inline Mat z2_twisted_first() {
    Mat id = Mat::Identity(2, 2), sx = clock_tau(2);
    Mat sz = Mat::Zero(2, 2);
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    return three_slot(id, sx, id) + three_slot(sz, sx, sz);
}

inline Mat z2_twisted_last() {
    Mat id = Mat::Identity(2, 2);
    Mat sy = Mat::Zero(2, 2), sz = Mat::Zero(2, 2);
    sy(0, 1) = cplx(0.0, -1.0);
    sy(1, 0) = cplx(0.0, 1.0);
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    return three_slot(id, sy, sz) + three_slot(sz, sy, id);
}

// least-squares positive scale fitting a = s * b; returns {s, max |a - s b|}
inline std::pair<double, double> fit_scale(const Mat& a, const Mat& b) {
    double num = (b.conjugate().cwiseProduct(a)).sum().real();
    double den = b.squaredNorm();
    if (den == 0.0) throw std::invalid_argument("fit_scale: zero reference");
    double s = num / den;
    double dev = (a - s * b).cwiseAbs().maxCoeff();
    return {s, dev};
}

} // namespace oracle
