#include "complearn/chain_check.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "complearn/errors.hpp"

namespace complearn {

ChainReport quantized_erm_chain_check(std::span<const double> xs, std::span<const double> ys,
                                      std::span<const double> yhats,
                                      const HypothesisGrid& grid, const LossFunction& loss,
                                      std::size_t fhat_index, bool allow_non_argmin) {
    if (xs.size() != ys.size() || xs.size() != yhats.size() || xs.empty())
        throw UsageError("chain check: blocks must be nonempty and equal length");
    if (fhat_index >= grid.size()) throw UsageError("chain check: fhat index out of range");

    const double n = static_cast<double>(xs.size());
    double ln = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) ln += loss(ys[i], yhats[i]);
    ln /= n;
    const double eta_ln = loss.eta(ln);

    // empirical risks of every member on both blocks
    double sup_dev = 0.0;
    double star_raw = 0.0, star_rec = 0.0;
    double fhat_raw = 0.0, fhat_rec = 0.0;
    std::size_t argmin_rec = 0;
    double best_rec = 0.0;
    for (std::size_t m = 0; m < grid.size(); ++m) {
        double raw = 0.0, rec = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double fx = grid.value(m, xs[i]);
            raw += loss(fx, ys[i]);
            rec += loss(fx, yhats[i]);
        }
        raw /= n;
        rec /= n;
        sup_dev = std::max(sup_dev, std::fabs(raw - rec));
        if (m == 0 || raw < star_raw) star_raw = raw;
        if (m == 0 || rec < best_rec) {
            best_rec = rec;
            argmin_rec = m;
        }
        if (m == fhat_index) {
            fhat_raw = raw;
            fhat_rec = rec;
        }
    }
    star_rec = best_rec;
    if (!allow_non_argmin && fhat_rec != star_rec)
        throw UsageError("chain check: fhat (index " + std::to_string(fhat_index) +
                         ") is not the ERM minimizer on the reconstructed block (index " +
                         std::to_string(argmin_rec) + ")");

    ChainReport report;
    auto push_leq = [&](const std::string& label, double lhs, double rhs) {
        report.steps.push_back(ChainStep{label, lhs, rhs, rhs - lhs, false});
    };
    push_leq("sup_f |Lhat_raw(f) - Lhat_rec(f)| <= eta(l_n)", sup_dev, eta_ln);
    push_leq("(a) Lhat_raw(fhat) <= Lhat_rec(fhat) + eta(l_n)", fhat_raw, fhat_rec + eta_ln);
    report.steps.push_back(ChainStep{"(b) Lhat_rec(fhat) = Lhat*_rec", fhat_rec, star_rec,
                                     -(std::fabs(fhat_rec - star_rec)), true});
    push_leq("(c) Lhat_raw(fhat) <= Lhat*_raw + 2 eta(l_n)", fhat_raw,
             star_raw + 2.0 * eta_ln);

    report.worst_slack = report.steps.front().slack;
    for (const ChainStep& s : report.steps)
        report.worst_slack = std::min(report.worst_slack, s.slack);
    return report;
}

nlohmann::json ChainReport::to_json() const {
    nlohmann::json j;
    j["worst_slack"] = worst_slack;
    j["steps"] = nlohmann::json::array();
    for (const ChainStep& s : steps)
        j["steps"].push_back({{"label", s.label},
                              {"lhs", s.lhs},
                              {"rhs", s.rhs},
                              {"slack", s.slack},
                              {"equality", s.is_equality}});
    return j;
}

std::string ChainReport::to_text() const {
    std::string out;
    char buf[256];
    for (const ChainStep& s : steps) {
        std::snprintf(buf, sizeof(buf), "%-58s lhs=%-14.8g rhs=%-14.8g slack=%.3g\n",
                      s.label.c_str(), s.lhs, s.rhs, s.slack);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "worst slack: %.3g\n", worst_slack);
    out += buf;
    return out;
}

}  // namespace complearn
