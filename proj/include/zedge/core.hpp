#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace zedge {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using index_t = std::int64_t;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// Error taxonomy. Everything user-facing derives from zedge::error so the CLI
// can map failures to exit codes without catching std::exception wholesale.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A constructor argument is outside its documented range (N < 2, p out of Z_N, ...).
struct invalid_parameter : error {
    using error::error;
};

// A combination of otherwise-valid arguments does not describe a runnable job.
struct invalid_configuration : error {
    using error::error;
};

// Vector/matrix shapes disagree with the operator they are fed to.
struct dimension_error : error {
    using error::error;
};

// A resource guard tripped (dense materialization too large, state space too big).
struct guard_error : error {
    using error::error;
};

// A mathematical contract that should hold to rounding was violated
// (non-hermitian Hamiltonian handed to the hermitian solver, etc).
struct contract_error : error {
    using error::error;
};

// Symmetry block restricted from a degenerate subspace failed to be unitary,
// i.e. the subspace leaks under the symmetry. Usually means degeneracy_tol
// grouped states that are not actually degenerate.
struct leakage_error : error {
    using error::error;
};

// Normalization asked for a reference level that is not among the computed ones.
struct insufficient_levels : error {
    using error::error;
};

// Tensor-level check could not even extract a projective phase (columns not parallel).
struct representation_error : error {
    using error::error;
};

// Iterative eigensolver ran out of restarts. Carries the best residual reached
// so callers can report how close the run came.
struct convergence_error : error {
    double best_residual;
    convergence_error(const std::string& what, double best)
        : error(what), best_residual(best) {}
};

inline index_t ipow(index_t base, int exp) {
    index_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Floored modulus, result always in [0, n).
inline int mod_n(int a, int n) {
    int r = a % n;
    return r < 0 ? r + n : r;
}

inline double wrap_angle(double a) {
    // principal branch (-pi, pi]
    while (a <= -pi) a += two_pi;
    while (a > pi) a -= two_pi;
    return a;
}

// Deterministic pseudo-random complex vector of unit norm. mt19937_64 has a
// portable output sequence and we avoid std::*_distribution (whose mapping is
// implementation-defined), so the same seed gives the same vector everywhere.
inline Vec random_unit_vector(index_t dim, std::uint64_t seed) {
    if (dim <= 0) throw dimension_error("random_unit_vector: dim must be positive");
    std::mt19937_64 gen(seed);
    auto uniform = [&gen]() {
        return double(gen() >> 11) * 0x1.0p-53; // [0, 1)
    };
    Vec v(dim);
    for (index_t i = 0; i < dim; ++i)
        v[i] = cplx(2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0);
    double nrm = v.norm();
    if (nrm == 0.0) {
        v[0] = 1.0; // astronomically unlikely; keep deterministic anyway
        nrm = 1.0;
    }
    return v / nrm;
}

} // namespace zedge
