#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace complearn {

/// Trend of H(eps) / 2^(c/eps) over the sampled eps range for one c.
struct DobrushinTrend {
    double c;
    std::vector<double> log2_ratios;  // log2 H(eps_k) - c / eps_k
    bool decreasing;
};

struct DobrushinReport {
    std::vector<DobrushinTrend> trends;
    std::string note;  // explicit finite-sample disclaimer

    nlohmann::json to_json() const;
    std::string to_text() const;
};

/// Finite-eps diagnostic for the entropy growth condition: for each c, does
/// H(eps) / 2^(c/eps) decrease over the sampled eps? This is a trend check on
/// the sampled range, not a proof of the eps -> 0 limit.
///
/// `samples` holds (eps, H(eps)) pairs with strictly decreasing eps; at least
/// three are required.
DobrushinReport dobrushin_diagnostic(const std::vector<std::pair<double, double>>& samples,
                                     const std::vector<double>& c_values);

}  // namespace complearn
