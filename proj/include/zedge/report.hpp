#pragma once

#include "spectra.hpp"
#include "verify.hpp"

#include <json.hpp>

#include <ctime>
#include <iomanip>
#include <sstream>

namespace zedge {

using json = nlohmann::json;

inline std::string make_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// All reports share the same envelope so downstream tooling can dispatch on
// "command" and version-check on "schema_version".
inline json report_envelope(const std::string& command) {
    json j;
    j["schema_version"] = 1;
    j["generated_at"] = make_timestamp();
    j["command"] = command;
    return j;
}

inline json to_json(const NormalizationInfo& info) {
    json j;
    j["method"] = to_string(info.method);
    j["ground_energy"] = info.ground_energy;
    j["scale"] = info.scale;
    j["available"] = info.available;
    j["note"] = info.note;
    return j;
}

inline json to_json(const MatchRow& row) {
    const SpectrumRecord& r = row.record;
    json j;
    j["energy"] = r.energy;
    j["epsilon"] = r.epsilon;
    j["momentum"] = r.momentum;
    j["charge_angle"] = std::arg(r.charge);
    j["charge_re"] = r.charge.real();
    j["charge_im"] = r.charge.imag();
    j["group"] = r.group;
    j["degeneracy"] = r.group_size;
    j["solver_residual"] = r.solver_residual;
    j["block_unitarity"] = r.block_unitarity;
    j["matched"] = row.matched;
    if (row.matched) {
        j["label"] = {{"n", row.prediction.n},
                      {"m", row.prediction.m},
                      {"descendant", {row.prediction.level_left, row.prediction.level_right}}};
        j["delta"] = row.prediction.delta;
        j["residual"] = row.residual;
        j["ambiguous"] = row.ambiguous;
        j["momentum_class"] = {{"exact", row.momentum_class.exact},
                               {"ok", row.momentum_class.ok},
                               {"deviation", row.momentum_class.deviation}};
    }
    return j;
}

inline json residual_summary(const std::vector<MatchRow>& rows) {
    double mx = 0.0, sum = 0.0;
    int matched = 0, unmatched = 0;
    for (const auto& r : rows) {
        if (r.matched) {
            mx = std::max(mx, r.residual);
            sum += r.residual;
            ++matched;
        } else {
            ++unmatched;
        }
    }
    json j;
    j["max"] = mx;
    j["mean"] = matched ? sum / matched : 0.0;
    j["matched"] = matched;
    j["unmatched"] = unmatched;
    return j;
}

inline json to_json(const CheckResult& c) {
    json j;
    j["name"] = c.name;
    j["measured"] = c.measured;
    j["threshold"] = c.threshold;
    j["comparison"] = c.at_least ? "at-least" : "at-most";
    j["pass"] = c.pass;
    return j;
}

// CSV companion: one row per resolved level, unmatched rows leave the label
// columns empty.
inline std::string spectrum_csv(const std::vector<MatchRow>& rows) {
    std::ostringstream os;
    os << "k,epsilon,charge_angle,n,m,residual\n";
    os << std::setprecision(15);
    for (const auto& r : rows) {
        os << r.record.momentum << ',' << r.record.epsilon << ','
           << std::arg(r.record.charge) << ',';
        if (r.matched)
            os << r.prediction.n << ',' << r.prediction.m << ',' << r.residual;
        else
            os << ",,";
        os << '\n';
    }
    return os.str();
}

inline std::string spectrum_gnuplot(const std::string& csv_name, bool twisted) {
    std::ostringstream os;
    os << "set datafile separator ','\n"
       << "set xlabel '" << (twisted ? "fractional momentum" : "lattice momentum k")
       << "'\n"
       << "set ylabel 'normalized energy'\n"
       << "set grid\n"
       << "set key off\n"
       << "plot '" << csv_name
       << "' every ::1 using 1:2:3 with points pt 7 ps 1.4 palette\n";
    return os.str();
}

} // namespace zedge
