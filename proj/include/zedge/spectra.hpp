#pragma once

#include "cft.hpp"
#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

namespace zedge {

// One resolved many-body level: energy plus simultaneous translation and
// symmetry eigendata. For twisted runs `momentum` is the fractional k~ and
// `charge` is the raw twisted-symmetry eigenvalue; for untwisted runs momentum
// is integer (to solver precision) and charges are reported relative to the
// ground state.
struct SpectrumRecord {
    double energy = 0.0;
    double epsilon = std::numeric_limits<double>::quiet_NaN();
    double momentum = 0.0;
    cplx charge{1.0, 0.0};
    int group = 0;                  // degenerate-energy group, 0 = ground
    int group_size = 0;
    double solver_residual = 0.0;
    double block_unitarity = 0.0;   // worst symmetry-block leakage in the group
};

struct ResolveOptions {
    double degeneracy_tol = 1e-8;    // energy grouping, relative to spectral width
    double phase_cluster_tol = 1e-6; // clustering of translation eigenvalues
    double leakage_tol = 1e-5;       // max tolerated block non-unitarity
    bool relative_charge = true;     // divide charges by the ground state's
    bool trim_trailing = true;       // drop leaky groups from the tail (cut multiplets)
};

namespace detail {

// thin-QR orthonormal basis of the columns of b
inline Mat orthonormalize(const Mat& b) {
    Eigen::HouseholderQR<Mat> qr(b);
    Mat q = qr.householderQ() * Mat::Identity(b.rows(), b.cols());
    return q;
}

inline Mat restrict_to(const ManyBodyOperator& op, const Mat& q) {
    Mat oq(q.rows(), q.cols());
    Vec in, out;
    for (Eigen::Index c = 0; c < q.cols(); ++c) {
        in = q.col(c);
        op.apply(in, out);
        oq.col(c) = out;
    }
    return q.adjoint() * oq;
}

inline double unitarity_deviation(const Mat& block) {
    Mat d = block.adjoint() * block - Mat::Identity(block.rows(), block.cols());
    return d.cwiseAbs().maxCoeff();
}

} // namespace detail

// Split the eigenpairs into degenerate groups, then block-diagonalize the
// translation and the symmetry inside each group. Both operators commute with
// the Hamiltonian, so each group carries a finite unitary representation; a
// non-unitary block means the group is not actually closed (either the
// degeneracy tolerance merged distinct levels, or the solver captured only
// part of a degenerate multiplet). An iterative solver can converge states of
// the next level before exhausting the copies of a high-multiplicity one, so
// an incomplete multiplet may sit below converged groups. Trimming therefore
// keeps the maximal intact prefix: the first leaky group and everything above
// it are dropped, and only what survives is labeled.
inline std::vector<SpectrumRecord> resolve_quantum_numbers(
    const std::vector<EigenPair>& pairs, const ManyBodyOperator& translation,
    const ManyBodyOperator& symmetry, const ResolveOptions& opt = {}) {
    if (pairs.empty()) return {};
    const index_t n = pairs.front().vector.size();
    if (translation.dim() != n || symmetry.dim() != n)
        throw dimension_error("resolve_quantum_numbers: operator dimensions disagree");
    for (const auto& p : pairs)
        if (p.vector.size() != n)
            throw dimension_error("resolve_quantum_numbers: ragged eigenvector set");
    const int M = translation.geom.M;

    std::vector<int> order(pairs.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return pairs[a].value < pairs[b].value; });

    const double width = std::max(1.0, pairs[order.back()].value - pairs[order.front()].value);
    const double gap_tol = opt.degeneracy_tol * width;

    std::vector<std::vector<int>> groups;
    for (size_t i = 0; i < order.size(); ++i) {
        if (i == 0 || pairs[order[i]].value - pairs[order[i - 1]].value > gap_tol)
            groups.emplace_back();
        groups.back().push_back(order[i]);
    }

    std::vector<SpectrumRecord> records;
    for (size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& g = groups[gi];
        Mat b(n, g.size());
        double e_mean = 0.0, res_max = 0.0;
        for (size_t c = 0; c < g.size(); ++c) {
            b.col(c) = pairs[g[c]].vector;
            e_mean += pairs[g[c]].value;
            res_max = std::max(res_max, pairs[g[c]].residual);
        }
        e_mean /= double(g.size());

        Mat q = detail::orthonormalize(b);
        Mat tb = detail::restrict_to(translation, q);
        double leakage = detail::unitarity_deviation(tb);
        if (leakage > opt.leakage_tol) {
            if (opt.trim_trailing) break; // keep the intact prefix below this group
            std::ostringstream msg;
            msg << "resolve_quantum_numbers: translation leaks out of degenerate group "
                << gi << " (deviation " << leakage << "); an incomplete multiplet or"
                << " degeneracy_tol merged distinct levels";
            throw leakage_error(msg.str());
        }

        Eigen::ComplexEigenSolver<Mat> tes(tb);
        if (tes.info() != Eigen::Success)
            throw error("resolve_quantum_numbers: translation block diagonalization failed");

        // cluster translation eigenvalues that agree to phase_cluster_tol
        const int gsz = int(g.size());
        std::vector<int> by_angle(gsz);
        for (int i = 0; i < gsz; ++i) by_angle[i] = i;
        auto angle_of = [&](int i) { return std::arg(tes.eigenvalues()[i]); };
        std::sort(by_angle.begin(), by_angle.end(),
                  [&](int a, int bb) { return angle_of(a) < angle_of(bb); });
        std::vector<std::vector<int>> clusters;
        for (int i = 0; i < gsz; ++i) {
            if (i == 0 || angle_of(by_angle[i]) - angle_of(by_angle[i - 1]) >
                              opt.phase_cluster_tol)
                clusters.emplace_back();
            clusters.back().push_back(by_angle[i]);
        }
        if (clusters.size() > 1) {
            double span = angle_of(clusters.back().back()) + two_pi -
                          angle_of(clusters.front().front());
            if (span <= opt.phase_cluster_tol) {
                for (int i : clusters.back()) clusters.front().push_back(i);
                clusters.pop_back();
            }
        }

        std::vector<SpectrumRecord> group_records;
        for (const auto& cl : clusters) {
            cplx t_sum = 0.0;
            Mat wc(gsz, cl.size());
            for (size_t c = 0; c < cl.size(); ++c) {
                t_sum += tes.eigenvalues()[cl[c]];
                wc.col(c) = tes.eigenvectors().col(cl[c]);
            }
            cplx t_rep = t_sum / std::abs(t_sum);
            double k = double(M) * std::arg(t_rep) / two_pi;

            Mat qc = detail::orthonormalize((q * wc).eval());
            Mat sb = detail::restrict_to(symmetry, qc);
            double s_leak = detail::unitarity_deviation(sb);
            if (s_leak > opt.leakage_tol) {
                if (opt.trim_trailing) {
                    group_records.clear();
                    leakage = std::numeric_limits<double>::infinity();
                    break;
                }
                std::ostringstream msg;
                msg << "resolve_quantum_numbers: symmetry leaks out of momentum cluster"
                    << " in group " << gi << " (deviation " << s_leak << ")";
                throw leakage_error(msg.str());
            }
            Eigen::ComplexEigenSolver<Mat> ses(sb);
            if (ses.info() != Eigen::Success)
                throw error("resolve_quantum_numbers: symmetry block diagonalization failed");
            for (Eigen::Index c = 0; c < ses.eigenvalues().size(); ++c) {
                SpectrumRecord r;
                r.energy = e_mean;
                r.momentum = k;
                r.charge = ses.eigenvalues()[c] / std::abs(ses.eigenvalues()[c]);
                r.group = int(gi);
                r.group_size = gsz;
                r.solver_residual = res_max;
                r.block_unitarity = std::max(leakage, s_leak);
                group_records.push_back(r);
            }
        }
        if (std::isinf(leakage)) break; // group trimmed at the cluster stage

        std::sort(group_records.begin(), group_records.end(),
                  [](const SpectrumRecord& a, const SpectrumRecord& b) {
                      if (a.momentum != b.momentum) return a.momentum < b.momentum;
                      return std::arg(a.charge) < std::arg(b.charge);
                  });
        records.insert(records.end(), group_records.begin(), group_records.end());
    }

    if (records.empty())
        throw leakage_error("resolve_quantum_numbers: no group survived trimming");

    if (opt.relative_charge) {
        const SpectrumRecord* ground = &records.front();
        for (const auto& r : records) {
            if (r.group != 0) break;
            if (std::abs(r.momentum) < std::abs(ground->momentum) - 1e-12)
                ground = &r;
        }
        cplx g0 = ground->charge;
        for (auto& r : records) r.charge /= g0;
    }
    return records;
}

enum class NormalizationMethod { tower_spacing, calibrated_lambda };

inline const char* to_string(NormalizationMethod m) {
    return m == NormalizationMethod::tower_spacing ? "tower-spacing" : "calibrated-lambda";
}

struct NormalizationInfo {
    NormalizationMethod method = NormalizationMethod::tower_spacing;
    double ground_energy = 0.0;
    double scale = 1.0;
    bool available = true;
    std::string note;
};

// epsilon = (E - E_reference)/scale with the reference taken from the records
// themselves (their own ground state). Used directly for twisted spectra,
// whose scale comes from the companion untwisted run.
inline NormalizationInfo normalize_with_scale(std::vector<SpectrumRecord>& recs,
                                              double scale, NormalizationMethod method,
                                              std::string note = {}) {
    if (recs.empty()) throw insufficient_levels("normalize: no records");
    if (!(scale > 0.0)) throw invalid_parameter("normalize: scale must be positive");
    NormalizationInfo info;
    info.method = method;
    info.ground_energy = recs.front().energy;
    info.scale = scale;
    info.note = std::move(note);
    for (auto& r : recs) r.epsilon = (r.energy - info.ground_energy) / scale;
    return info;
}

// tower-spacing: the lowest charge-neutral level at |k| = 1 above the ground
// state is the first descendant of the identity tower, at epsilon = 1 by
// construction. calibrated-lambda: trust that lambda was tuned to make the tower
// spacing a known constant (2 at N = 2, 1 at N = 3) and use that constant.
inline NormalizationInfo normalize_spectrum(std::vector<SpectrumRecord>& recs,
                                            NormalizationMethod method, SptClass cls,
                                            double momentum_tol = 1e-3,
                                            double charge_tol = 1e-3) {
    if (recs.empty()) throw insufficient_levels("normalize_spectrum: no records");
    if (method == NormalizationMethod::calibrated_lambda) {
        if (cls.N == 2 || cls.N == 3) {
            double r = cls.N == 2 ? 2.0 : 1.0;
            return normalize_with_scale(recs, r, method, "fixed tower spacing");
        }
        NormalizationInfo info;
        info.method = method;
        info.ground_energy = recs.front().energy;
        info.available = false;
        info.note = "no calibrated lambda for this N";
        return info;
    }
    const double e0 = recs.front().energy;
    for (const auto& r : recs) {
        if (r.group == 0) continue;
        if (std::abs(std::abs(r.momentum) - 1.0) > momentum_tol) continue;
        if (std::abs(r.charge - cplx(1.0, 0.0)) > charge_tol) continue;
        std::ostringstream note;
        note << "identity descendant found in group " << r.group;
        return normalize_with_scale(recs, r.energy - e0, method, note.str());
    }
    throw insufficient_levels(
        "normalize_spectrum: no charge-neutral |k| = 1 level among the computed ones;"
        " request more levels");
}

// Lattice offset between the CFT momentum of a tower and the measured lattice
// momentum of its states. Calibrated against exact diagonalization at N = 2, 3:
// charge towers shift by -n M(N-1)/(2N), winding towers by +m M(N-2)/(2N).
// When the predicted offset is not an integer the identification is only
// class-level and the check is advisory.
struct MomentumClassCheck {
    bool exact = false; // offset rule lands on an integer
    bool ok = false;
    double deviation = 0.0;
};

inline double wrap_to_half_open(double k, int M) {
    // reduce into (-M/2, M/2]
    double kk = std::fmod(k, double(M));
    if (kk <= -double(M) / 2) kk += M;
    if (kk > double(M) / 2) kk -= M;
    return kk;
}

inline MomentumClassCheck untwisted_momentum_class(double k_measured,
                                                   const CftPrediction& pred, int M,
                                                   SptClass cls) {
    const double dc = double(M) * (cls.N - 1) / (2.0 * cls.N);
    const double dw = double(M) * (cls.N - 2) / (2.0 * cls.N);
    const double offset = -pred.n * dc + pred.m * dw;
    MomentumClassCheck c;
    c.exact = std::abs(offset - std::round(offset)) < 1e-9;
    double dev = wrap_to_half_open(k_measured - (pred.momentum + offset), M);
    c.deviation = std::abs(dev);
    c.ok = c.exact ? (c.deviation <= 1e-3) : (c.deviation <= 0.5 + 1e-9);
    return c;
}

// For twisted spectra the sharp statement is the anomaly class: every level
// obeys N k~ = p/N (mod 1). Where the calibrated charge-tower offset lands on
// an integer (e.g. N = 2 with 4 | M) the full fractional momentum is predicted
// as P~ - (n + p/N) M(N-1)/(2N) and checked exactly.
inline MomentumClassCheck twisted_momentum_class(double k_measured,
                                                 const CftPrediction& pred, int M,
                                                 SptClass cls) {
    MomentumClassCheck c;
    cplx lhs = std::polar(1.0, two_pi * cls.N * k_measured);
    cplx rhs = std::polar(1.0, two_pi * cls.p / double(cls.N));
    double anomaly_dev = std::abs(lhs - rhs);
    const double dc = double(M) * (cls.N - 1) / (2.0 * cls.N);
    const double offset = -(pred.n + double(cls.p) / cls.N) * dc;
    if (std::abs(offset - std::round(offset)) < 1e-9) {
        c.exact = true;
        double dev = wrap_to_half_open(k_measured - (pred.momentum + offset), M);
        c.deviation = std::abs(dev);
        c.ok = c.deviation <= 1e-3;
    } else {
        c.exact = false;
        c.deviation = anomaly_dev;
        c.ok = anomaly_dev <= 1e-6;
    }
    return c;
}

struct MatchRow {
    SpectrumRecord record;
    CftPrediction prediction; // valid only when matched
    bool matched = false;
    bool ambiguous = false;
    double residual = std::numeric_limits<double>::quiet_NaN();
    MomentumClassCheck momentum_class;
};

struct MatchOptions {
    double energy_tol = 0.35;      // max |epsilon - delta| accepted
    double charge_tol = 1e-3;
    bool use_charge = true;        // twisted runs switch this off
    double delta_shift = 0.0;      // subtracted from predictions (twisted patterns)
    double ambiguity_margin = 0.05;
};

// Match each resolved level against the prediction table: filter candidates by
// charge (untwisted) and by the exact part of the momentum dictionary, then
// take the nearest dimension; among equally near dimensions a candidate whose
// predicted momentum agrees wins over one whose does not. A row is ambiguous
// when the runner-up candidate with a different (n, m, a, abar) label is
// nearly as good.
inline std::vector<MatchRow> match_to_cft(const std::vector<SpectrumRecord>& recs,
                                          const std::vector<CftPrediction>& preds,
                                          int M, SptClass cls, bool twisted,
                                          const MatchOptions& opt = {}) {
    constexpr double tie_eps = 1e-9;
    std::vector<MatchRow> rows;
    rows.reserve(recs.size());
    for (const auto& rec : recs) {
        MatchRow row;
        row.record = rec;
        double best = std::numeric_limits<double>::infinity();
        double second = std::numeric_limits<double>::infinity();
        for (const auto& pr : preds) {
            if (opt.use_charge && std::abs(rec.charge - pr.charge) > opt.charge_tol)
                continue;
            MomentumClassCheck mc =
                twisted ? twisted_momentum_class(rec.momentum, pr, M, cls)
                        : untwisted_momentum_class(rec.momentum, pr, M, cls);
            // the exact dictionary filters; mixed/advisory labels do not
            bool mixed = pr.n != 0 && pr.m != 0;
            if (mc.exact && !mixed && !mc.ok) continue;
            double res = std::abs(rec.epsilon - (pr.delta - opt.delta_shift));
            bool tie = std::isfinite(best) && std::abs(res - best) <= tie_eps;
            if (res < best - tie_eps || (tie && mc.ok && !row.momentum_class.ok)) {
                second = best;
                best = res;
                row.prediction = pr;
                row.momentum_class = mc;
            } else if (res < second) {
                second = res;
            }
        }
        if (std::isfinite(best) && best <= opt.energy_tol) {
            row.matched = true;
            row.residual = best;
            row.ambiguous = (second - best) < opt.ambiguity_margin;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace zedge
