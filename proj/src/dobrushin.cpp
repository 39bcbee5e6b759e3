#include "complearn/dobrushin.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "complearn/errors.hpp"

namespace complearn {

DobrushinReport dobrushin_diagnostic(const std::vector<std::pair<double, double>>& samples,
                                     const std::vector<double>& c_values) {
    if (samples.size() < 3)
        throw UsageError("dobrushin_diagnostic: need at least 3 (eps, H) samples");
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (!(samples[k].first > 0.0))
            throw UsageError("dobrushin_diagnostic: eps values must be positive");
        if (k > 0 && !(samples[k].first < samples[k - 1].first))
            throw UsageError("dobrushin_diagnostic: eps values must strictly decrease");
        if (samples[k].second < 0.0)
            throw UsageError("dobrushin_diagnostic: entropies must be nonnegative");
    }

    DobrushinReport report;
    report.note = "finite-eps trend over the sampled range; not a proof of the limit";
    for (double c : c_values) {
        DobrushinTrend trend;
        trend.c = c;
        trend.decreasing = true;
        // work in log2 to keep 2^(c/eps) representable
        for (const auto& [eps, h] : samples) {
            const double lr = (h > 0.0 ? std::log2(h) : -std::numeric_limits<double>::infinity()) -
                              c / eps;
            if (!trend.log2_ratios.empty() && lr > trend.log2_ratios.back() + 1e-12)
                trend.decreasing = false;
            trend.log2_ratios.push_back(lr);
        }
        report.trends.push_back(std::move(trend));
    }
    return report;
}

nlohmann::json DobrushinReport::to_json() const {
    nlohmann::json j;
    j["note"] = note;
    j["trends"] = nlohmann::json::array();
    for (const auto& t : trends)
        j["trends"].push_back(
            {{"c", t.c}, {"log2_ratios", t.log2_ratios}, {"decreasing", t.decreasing}});
    return j;
}

std::string DobrushinReport::to_text() const {
    std::string out = note + "\n";
    char buf[128];
    for (const auto& t : trends) {
        std::snprintf(buf, sizeof(buf), "c = %-10.4g %s; log2 ratios:", t.c,
                      t.decreasing ? "decreasing" : "NOT decreasing");
        out += buf;
        for (double r : t.log2_ratios) {
            std::snprintf(buf, sizeof(buf), " %.4g", r);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

}  // namespace complearn
