#pragma once

#include "core.hpp"

#include <utility>
#include <variant>
#include <vector>

namespace zedge {

// Ring of M sites, each carrying an N-state clock. Basis states are labelled by
// digit strings |c_1, ..., c_M>, c_j in {0..N-1}, packed little-endian:
// index = sum_j c_j N^{j-1}, so site 1 is the least significant digit.
// Sites are 1-based throughout.
struct ChainGeometry {
    int N = 0;
    int M = 0;
    index_t dim = 0;

    ChainGeometry() = default;
    ChainGeometry(int n, int m) : N(n), M(m) {
        if (N < 2) throw invalid_parameter("ChainGeometry: local dimension N must be >= 2");
        if (M < 2) throw invalid_parameter("ChainGeometry: chain length M must be >= 2");
        double approx = std::pow(double(N), double(M));
        if (approx > double(index_t(1) << 26))
            throw guard_error("ChainGeometry: state space N^M exceeds 2^26");
        dim = ipow(N, M);
        strides_.resize(M + 1);
        for (int j = 1; j <= M; ++j) strides_[j] = ipow(N, j - 1);
    }

    index_t stride(int site) const { return strides_[site]; }
    int digit(index_t idx, int site) const {
        return int((idx / strides_[site]) % N);
    }
    int site_right(int j) const { return j % M + 1; }       // neighbour j+1 on the ring
    int site_left(int j) const { return (j - 2 + M) % M + 1; }

    bool operator==(const ChainGeometry& o) const { return N == o.N && M == o.M; }

private:
    std::vector<index_t> strides_;
};

inline index_t encode(const ChainGeometry& g, const std::vector<int>& digits) {
    if (int(digits.size()) != g.M)
        throw dimension_error("encode: expected one digit per site");
    index_t idx = 0;
    for (int j = g.M; j >= 1; --j) {
        int c = digits[j - 1];
        if (c < 0 || c >= g.N) throw invalid_parameter("encode: digit out of range");
        idx = idx * g.N + c;
    }
    return idx;
}

inline std::vector<int> decode(const ChainGeometry& g, index_t idx) {
    if (idx < 0 || idx >= g.dim) throw dimension_error("decode: index out of range");
    std::vector<int> digits(g.M);
    for (int j = 1; j <= g.M; ++j) {
        digits[j - 1] = int(idx % g.N);
        idx /= g.N;
    }
    return digits;
}

// Dense operator on a few sites. entries is N^s x N^s where s = support.size();
// local index = sum_r digit(support[r]) N^r, i.e. support[0] is the least
// significant local digit. Support sites need not be adjacent or sorted, but
// must be distinct.
struct LocalKernel {
    int local_dim = 0;         // N of the chain this kernel acts on
    std::vector<int> support;  // sites, in local-digit order
    Mat entries;
    bool hermitian = false;

    LocalKernel placed_at(std::vector<int> sites) const {
        if (sites.size() != support.size())
            throw dimension_error("placed_at: support size mismatch");
        LocalKernel k = *this;
        k.support = std::move(sites);
        return k;
    }
};

namespace detail {

// Kernel flattened into per-column update lists against global indices:
// for source index i with local configuration loc,
//   y[i + offset[e]] += value[e] * x[i]   for e in the column's entry range.
struct compiled_kernel {
    index_t nloc = 0;
    std::vector<index_t> strides;     // per support slot
    std::vector<int> col_begin;       // size nloc + 1
    std::vector<index_t> offsets;
    std::vector<cplx> values;
};

inline compiled_kernel compile_kernel(const ChainGeometry& g, const LocalKernel& k) {
    int s = int(k.support.size());
    if (s < 1 || s > g.M) throw dimension_error("compile_kernel: bad support size");
    if (k.local_dim != g.N)
        throw dimension_error("compile_kernel: kernel local_dim differs from chain N");
    index_t nloc = ipow(g.N, s);
    if (k.entries.rows() != nloc || k.entries.cols() != nloc)
        throw dimension_error("compile_kernel: entries shape does not match support");
    for (int a = 0; a < s; ++a) {
        int site = k.support[a];
        if (site < 1 || site > g.M) throw invalid_parameter("compile_kernel: site out of range");
        for (int b = 0; b < a; ++b)
            if (k.support[a] == k.support[b])
                throw invalid_parameter("compile_kernel: repeated support site");
    }

    compiled_kernel ck;
    ck.nloc = nloc;
    ck.strides.resize(s);
    for (int r = 0; r < s; ++r) ck.strides[r] = g.stride(k.support[r]);

    ck.col_begin.assign(size_t(nloc) + 1, 0);
    std::vector<int> dcol(s), drow(s);
    for (index_t col = 0; col < nloc; ++col) {
        index_t q = col;
        for (int r = 0; r < s; ++r) { dcol[r] = int(q % g.N); q /= g.N; }
        for (index_t row = 0; row < nloc; ++row) {
            cplx v = k.entries(row, col);
            if (v == cplx(0.0, 0.0)) continue;
            q = row;
            index_t off = 0;
            for (int r = 0; r < s; ++r) {
                drow[r] = int(q % g.N);
                q /= g.N;
                off += index_t(drow[r] - dcol[r]) * ck.strides[r];
            }
            ck.offsets.push_back(off);
            ck.values.push_back(v);
            ++ck.col_begin[col + 1];
        }
    }
    for (index_t c = 0; c < nloc; ++c) ck.col_begin[c + 1] += ck.col_begin[c];
    return ck;
}

// y += (kernel) x over the whole chain. Walks the state space once; the local
// configuration is read off with one division per support slot.
inline void accumulate_kernel(const ChainGeometry& g, const compiled_kernel& ck,
                              const Vec& x, Vec& y) {
    int s = int(ck.strides.size());
    const index_t N = g.N;
    for (index_t i = 0; i < g.dim; ++i) {
        index_t loc = 0, mul = 1;
        for (int r = 0; r < s; ++r) {
            loc += ((i / ck.strides[r]) % N) * mul;
            mul *= N;
        }
        const cplx xi = x[i];
        for (int e = ck.col_begin[loc]; e < ck.col_begin[loc + 1]; ++e)
            y[i + ck.offsets[e]] += ck.values[e] * xi;
    }
}

} // namespace detail

// One-shot version for tests and small jobs; the operator path precompiles.
inline void apply_kernel(const ChainGeometry& g, const LocalKernel& k,
                         const Vec& x, Vec& y) {
    if (x.size() != g.dim) throw dimension_error("apply_kernel: vector length != N^M");
    auto ck = detail::compile_kernel(g, k);
    y.setZero(g.dim);
    detail::accumulate_kernel(g, ck, x, y);
}

// Cyclic shift of the ring content by one site: T|c_1, c_2, ..., c_M> =
// |c_2, ..., c_M, c_1>. On packed indices: i -> i/N + (i mod N) N^{M-1}.
inline void apply_translation(const ChainGeometry& g, const Vec& x, Vec& y) {
    if (x.size() != g.dim) throw dimension_error("apply_translation: vector length != N^M");
    y.resize(g.dim);
    const index_t top = g.stride(g.M);
    index_t i = 0;
    for (index_t rest = 0; rest < top; ++rest)
        for (index_t c = 0; c < g.N; ++c, ++i)
            y[rest + c * top] = x[i];
}

// Elementary unitary factors a product-form operator is assembled from.
// A factor list acts like an operator product written left to right, so the
// rightmost factor hits the state first.

struct ScalarPhase { cplx value; };

// tau_site^amount : adds `amount` to one digit (mod N)
struct SiteShift { int site; int amount; };

// prod_j tau_j^amount : adds `amount` to every digit
struct GlobalShift { int amount; };

// multiplies by table[(digit(to) - digit(from)) mod N]
struct BondPhase { int from_site; int to_site; std::vector<cplx> table; };

// BondPhase over every ring bond (j, j+1), j = 1..M, with bond (M, 1) included
struct AllBondPhases { std::vector<cplx> table; };

// the translation T above
struct Translate {};

using Factor = std::variant<ScalarPhase, SiteShift, GlobalShift, BondPhase,
                            AllBondPhases, Translate>;

// A linear operator on the chain, in one of two shapes:
//  - sum form: scale * sum of placed local kernels (Hamiltonians),
//  - product form: ordered product of elementary factors (symmetries).
// Application is allocation-free after the first call: one scratch vector.
class ManyBodyOperator {
public:
    ChainGeometry geom;
    double scale = 1.0;              // sum form only
    std::vector<LocalKernel> terms;
    std::vector<Factor> factors;
    bool hermitian = false;          // builder's promise, checked downstream

    ManyBodyOperator() = default;
    explicit ManyBodyOperator(ChainGeometry g) : geom(std::move(g)) {}

    index_t dim() const { return geom.dim; }
    bool is_product() const { return !factors.empty(); }

    // y = A x. y must not alias x.
    void apply(const Vec& x, Vec& y) const {
        if (x.size() != geom.dim) throw dimension_error("apply: vector length != N^M");
        ensure_ready();
        y.resize(geom.dim);
        if (!terms.empty()) {
            y.setZero();
            for (const auto& ck : compiled_)
                detail::accumulate_kernel(geom, ck, x, y);
            if (scale != 1.0) y *= scale;
            return;
        }
        y = x;
        for (auto it = factors.rbegin(); it != factors.rend(); ++it)
            std::visit([&](const auto& f) { apply_factor(f, y); }, *it);
    }

    Vec operator()(const Vec& x) const {
        Vec y;
        apply(x, y);
        return y;
    }

private:
    mutable std::vector<detail::compiled_kernel> compiled_;
    mutable Vec scratch_;

    void ensure_ready() const {
        if (!terms.empty() && !factors.empty())
            throw invalid_configuration("operator mixes sum and product forms");
        if (terms.empty() && factors.empty())
            throw invalid_configuration("operator has neither kernels nor factors");
        if (compiled_.size() != terms.size()) {
            compiled_.clear();
            compiled_.reserve(terms.size());
            for (const auto& t : terms)
                compiled_.push_back(detail::compile_kernel(geom, t));
        }
        if (scratch_.size() != geom.dim) scratch_.resize(geom.dim);
    }

    void apply_factor(const ScalarPhase& f, Vec& y) const { y *= f.value; }

    void apply_factor(const SiteShift& f, Vec& y) const {
        shift_digit(f.site, f.amount, y);
    }

    void apply_factor(const GlobalShift& f, Vec& y) const {
        for (int j = 1; j <= geom.M; ++j) shift_digit(j, f.amount, y);
    }

    void apply_factor(const BondPhase& f, Vec& y) const {
        bond_phase(f.from_site, f.to_site, f.table, y);
    }

    void apply_factor(const AllBondPhases& f, Vec& y) const {
        for (int j = 1; j <= geom.M; ++j)
            bond_phase(j, geom.site_right(j), f.table, y);
    }

    void apply_factor(const Translate&, Vec& y) const {
        apply_translation(geom, y, scratch_);
        std::swap(y, scratch_);
    }

    // digit(site) += amount (mod N), via block copy: digit is constant on
    // contiguous runs of length stride(site)
    void shift_digit(int site, int amount, Vec& y) const {
        const index_t str = geom.stride(site);
        const index_t block = str * geom.N;
        const int N = geom.N;
        for (index_t base = 0; base < geom.dim; base += block)
            for (int d = 0; d < N; ++d) {
                index_t delta = index_t(mod_n(d + amount, N) - d) * str;
                scratch_.segment(base + d * str + delta, str) =
                    y.segment(base + d * str, str);
            }
        std::swap(y, scratch_);
    }

    // y[i] *= table[(digit(to) - digit(from)) mod N], in place, no divisions:
    // both digits are constant on the nested block decomposition below.
    void bond_phase(int from, int to, const std::vector<cplx>& table, Vec& y) const {
        if (int(table.size()) != geom.N)
            throw dimension_error("bond phase table must have N entries");
        if (from == to)
            throw invalid_parameter("bond phase endpoints must differ");
        const int N = geom.N;
        int lo = from, hi = to;
        if (geom.stride(lo) > geom.stride(hi)) std::swap(lo, hi);
        const index_t lo_str = geom.stride(lo);
        const index_t hi_str = geom.stride(hi);
        const index_t lo_block = lo_str * N;
        const index_t hi_block = hi_str * N;
        for (index_t B = 0; B < geom.dim; B += hi_block)
            for (int dhi = 0; dhi < N; ++dhi) {
                const index_t hb = B + index_t(dhi) * hi_str;
                for (index_t b = 0; b < hi_str; b += lo_block)
                    for (int dlo = 0; dlo < N; ++dlo) {
                        int dfrom = (lo == from) ? dlo : dhi;
                        int dto = (lo == from) ? dhi : dlo;
                        const cplx ph = table[mod_n(dto - dfrom, N)];
                        y.segment(hb + b + index_t(dlo) * lo_str, lo_str) *= ph;
                    }
            }
    }
};

// Full matrix of the operator, for cross-checks. Guarded: this is O(dim^2)
// memory and only meant for small chains.
inline Mat dense_materialize(const ManyBodyOperator& op) {
    if (op.dim() > 4096)
        throw guard_error("dense_materialize: dimension exceeds 4096");
    Mat m(op.dim(), op.dim());
    Vec e = Vec::Zero(op.dim()), col;
    for (index_t j = 0; j < op.dim(); ++j) {
        e[j] = 1.0;
        op.apply(e, col);
        m.col(j) = col;
        e[j] = 0.0;
    }
    return m;
}

} // namespace zedge
