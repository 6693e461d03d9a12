#pragma once

#include "symmetry.hpp"

#include <string>
#include <unordered_set>
#include <vector>

namespace zedge {

// Elements of the Z_N symmetry group, reduced representatives in 0..N-1.
struct GroupElement {
    int N;
    int m;
    GroupElement(int n, int mm) : N(n), m(mod_n(mm, n)) {
        if (N < 2) throw invalid_parameter("GroupElement: N must be >= 2");
    }
    GroupElement operator*(const GroupElement& o) const {
        if (N != o.N) throw invalid_parameter("GroupElement: mixed group orders");
        return GroupElement(N, m + o.m);
    }
};

// The discrete three-cocycle labelling class p in H^3(Z_N, U(1)):
// theta(g1, g2, g3) = -p (2 pi / N) m3 * carry(m1, m2), where carry is 1 when
// composing g1 g2 wraps past N and 0 otherwise. All values are integer
// multiples of 2 pi / N.
inline double three_cocycle(SptClass cls, GroupElement g1, GroupElement g2,
                            GroupElement g3) {
    if (g1.N != cls.N || g2.N != cls.N || g3.N != cls.N)
        throw invalid_parameter("three_cocycle: group order differs from class");
    int carry = (g1.m + g2.m) >= cls.N ? 1 : 0;
    return -double(cls.p) * (two_pi / cls.N) * double(g3.m) * double(carry);
}

inline double three_cocycle(SptClass cls, int m1, int m2, int m3) {
    return three_cocycle(cls, GroupElement(cls.N, m1), GroupElement(cls.N, m2),
                         GroupElement(cls.N, m3));
}

// Pentagon (cocycle) condition: the alternating sum of theta over all
// quadruples must be a multiple of 2 pi. Returns the worst deviation from the
// nearest multiple, in radians.
inline double verify_cocycle_condition(SptClass cls) {
    const int N = cls.N;
    auto th = [&](int a, int b, int c) { return three_cocycle(cls, a, b, c); };
    double worst = 0.0;
    for (int g1 = 0; g1 < N; ++g1)
        for (int g2 = 0; g2 < N; ++g2)
            for (int g3 = 0; g3 < N; ++g3)
                for (int g4 = 0; g4 < N; ++g4) {
                    double d = th(g2, g3, g4) - th(mod_n(g1 + g2, N), g3, g4)
                               + th(g1, mod_n(g2 + g3, N), g4)
                               - th(g1, g2, mod_n(g3 + g4, N)) + th(g1, g2, g3);
                    double dev = std::abs(d / two_pi - std::round(d / two_pi)) * two_pi;
                    worst = std::max(worst, dev);
                }
    return worst;
}

namespace detail {

// Is the integer-valued 3-cochain `target` (mod N) the coboundary of some
// Z_N-valued 2-cochain beta? Exhaustive over all N^(N^2) candidates, split
// meet-in-the-middle so N = 4 stays fast. Everything is exact integer
// arithmetic mod N.
inline bool is_z_n_coboundary(int N, const std::vector<int>& target) {
    const int C = N * N;   // beta entries, indexed g1 * N + g2
    const int R = N * N * N; // equations, indexed (g1 * N + g2) * N + g3
    // coefficient of beta_col in equation r: delta-beta expansion
    std::vector<std::vector<int>> col(C, std::vector<int>(R, 0));
    auto bidx = [N](int a, int b) { return a * N + b; };
    int r = 0;
    for (int g1 = 0; g1 < N; ++g1)
        for (int g2 = 0; g2 < N; ++g2)
            for (int g3 = 0; g3 < N; ++g3, ++r) {
                col[bidx(g2, g3)][r] += 1;
                col[bidx(g1, mod_n(g2 + g3, N))][r] += 1;
                col[bidx(mod_n(g1 + g2, N), g3)][r] -= 1;
                col[bidx(g1, g2)][r] -= 1;
            }

    const int half = C / 2;
    auto enumerate = [&](int first, int last, auto&& visit) {
        std::vector<int> digits(size_t(last - first), 0);
        std::vector<int> acc(R, 0);
        for (;;) {
            visit(acc);
            int d = 0;
            for (; d < last - first; ++d) {
                for (int rr = 0; rr < R; ++rr)
                    acc[rr] = mod_n(acc[rr] + col[first + d][rr], N);
                if (++digits[d] < N) break;
                // digit wraps: its N accumulated additions cancel mod N
                digits[d] = 0;
            }
            if (d == last - first) return;
        }
    };

    std::unordered_set<std::string> left;
    enumerate(0, half, [&](const std::vector<int>& acc) {
        std::string key(acc.begin(), acc.end());
        left.insert(std::move(key));
    });
    bool found = false;
    enumerate(half, C, [&](const std::vector<int>& acc) {
        if (found) return;
        std::string need(size_t(R), '\0');
        for (int rr = 0; rr < R; ++rr)
            need[rr] = char(mod_n(target[rr] - acc[rr], N));
        if (left.count(need)) found = true;
    });
    return found;
}

} // namespace detail

// Do classes pa and pb define distinct elements of H^3(Z_N, U(1))? Checked by
// exhaustive search for a Z_N-valued 2-cochain whose coboundary absorbs the
// difference. Guarded at N <= 4, where the N^(N^2) search space is tractable.
inline bool class_distinctness(int N, int pa, int pb) {
    if (N < 2) throw invalid_parameter("class_distinctness: N must be >= 2");
    if (N > 4) throw guard_error("class_distinctness: exhaustive search guarded at N <= 4");
    if (pa < 0 || pa >= N || pb < 0 || pb >= N)
        throw invalid_parameter("class_distinctness: class labels must lie in 0..N-1");
    if (pa == pb) return false;
    std::vector<int> target(size_t(N) * N * N);
    int r = 0;
    for (int g1 = 0; g1 < N; ++g1)
        for (int g2 = 0; g2 < N; ++g2)
            for (int g3 = 0; g3 < N; ++g3, ++r) {
                // theta_pa - theta_pb in units of 2 pi / N, an exact integer
                int carry = (g1 + g2) >= N ? 1 : 0;
                target[r] = mod_n(-(pa - pb) * g3 * carry, N);
            }
    return !detail::is_z_n_coboundary(N, target);
}

// Fixed-point MPS data for the group action: the pair projector
// P_{g1,g2} : |phi_k> -> e^{-i p phi_k carry} |phi_{k+m2}> (x) |phi_k>,
// with phi_k = 2 pi k / N the discretized edge angles.
inline Mat mps_pair_projector(SptClass cls, int m1, int m2) {
    const int N = cls.N;
    m1 = mod_n(m1, N);
    m2 = mod_n(m2, N);
    Mat p = Mat::Zero(index_t(N) * N, N);
    int carry_n = (m1 + m2) - mod_n(m1 + m2, N); // 0 or N
    for (int k = 0; k < N; ++k) {
        cplx ph = std::polar(1.0, -double(cls.p) * (two_pi * k / N) * carry_n / N);
        int kout = mod_n(k + m2, N);
        p(index_t(kout) * N + k, k) = ph;
    }
    return p;
}

struct CocyclePhase {
    double theta = 0.0;
    cplx phase{1.0, 0.0};
};

namespace detail {

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace detail

// Reassociate three symmetry insertions on the MPS fixed point. The two
// fusion orders give column-parallel tensors; the relative phase is the
// three-cocycle. Throws representation_error if the tensors fail to be
// parallel, which would mean the projector data does not represent the group.
inline CocyclePhase projective_phase_from_tensors(SptClass cls, int m1, int m2,
                                                  int m3) {
    const int N = cls.N;
    m1 = mod_n(m1, N);
    m2 = mod_n(m2, N);
    m3 = mod_n(m3, N);
    Mat id = Mat::Identity(N, N);
    Mat a = detail::kron(mps_pair_projector(cls, m1, m2), id) *
            mps_pair_projector(cls, mod_n(m1 + m2, N), m3);
    Mat b = detail::kron(id, mps_pair_projector(cls, m2, m3)) *
            mps_pair_projector(cls, m1, mod_n(m2 + m3, N));
    cplx overlap = 0.0;
    double nb2 = 0.0, na2 = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        overlap += b.col(j).dot(a.col(j)); // conj(b) . a
        nb2 += b.col(j).squaredNorm();
        na2 += a.col(j).squaredNorm();
    }
    if (nb2 == 0.0 || na2 == 0.0)
        throw representation_error("projective_phase_from_tensors: degenerate tensors");
    cplx ratio = overlap / nb2;
    if (std::abs(std::abs(ratio) - 1.0) > 1e-10 ||
        (a - ratio * b).cwiseAbs().maxCoeff() > 1e-10)
        throw representation_error(
            "projective_phase_from_tensors: fusion tensors are not parallel");
    return CocyclePhase{std::arg(ratio), ratio};
}

} // namespace zedge
