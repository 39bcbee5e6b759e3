#include "complearn/regression_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "complearn/errors.hpp"

namespace complearn {

namespace {

double gaussian_cdf(double z) { return 0.5 * std::erfc(-z * 0.7071067811865475244); }

}  // namespace

double RegressionModel::f0(double x) const {
    const auto& bp = breakpoints;
    if (bp.empty()) return 0.0;
    if (x <= bp.front().first) return bp.front().second;
    if (x >= bp.back().first) return bp.back().second;
    // first breakpoint at or beyond x; repeated x values make f right-continuous
    std::size_t hi = 1;
    while (hi < bp.size() && bp[hi].first < x) ++hi;
    const auto& [x0, v0] = bp[hi - 1];
    const auto& [x1, v1] = bp[hi];
    if (x1 == x0) return v1;
    const double t = (x - x0) / (x1 - x0);
    return v0 + t * (v1 - v0);
}

double RegressionModel::f0_min() const {
    double m = breakpoints.empty() ? 0.0 : breakpoints.front().second;
    for (const auto& [x, v] : breakpoints) m = std::min(m, v);
    return m;
}

double RegressionModel::f0_max() const {
    double m = breakpoints.empty() ? 0.0 : breakpoints.front().second;
    for (const auto& [x, v] : breakpoints) m = std::max(m, v);
    return m;
}

void RegressionModel::validate() const {
    if (!(sigma > 0.0)) throw UsageError("RegressionModel: sigma must be positive");
    if (!(domain_hi > domain_lo)) throw UsageError("RegressionModel: empty domain");
    if (breakpoints.empty()) throw UsageError("RegressionModel: f0 needs breakpoints");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (breakpoints[i].first < breakpoints[i - 1].first)
            throw UsageError("RegressionModel: breakpoints must be sorted by x");
    for (const auto& [x, v] : breakpoints)
        if (v < 0.0 || v > 1.0)
            throw UsageError("RegressionModel: f0 values must lie in [0, 1]");
}

RegressionModel RegressionModel::constant(double value, double sigma, double lo, double hi) {
    RegressionModel m;
    m.breakpoints = {{lo, value}, {hi, value}};
    m.sigma = sigma;
    m.domain_lo = lo;
    m.domain_hi = hi;
    m.validate();
    return m;
}

nlohmann::json RegressionModel::to_json() const {
    nlohmann::json j;
    j["breakpoints"] = nlohmann::json::array();
    for (const auto& [x, v] : breakpoints) j["breakpoints"].push_back({x, v});
    j["sigma"] = sigma;
    j["domain"] = {domain_lo, domain_hi};
    return j;
}

RegressionModel RegressionModel::from_json(const nlohmann::json& j) {
    RegressionModel m;
    for (const auto& bp : j.at("breakpoints"))
        m.breakpoints.emplace_back(bp.at(0).get<double>(), bp.at(1).get<double>());
    m.sigma = j.at("sigma").get<double>();
    if (j.contains("domain")) {
        m.domain_lo = j["domain"].at(0).get<double>();
        m.domain_hi = j["domain"].at(1).get<double>();
    }
    m.validate();
    return m;
}

void DiscretizationSpec::validate() const {
    if (x_bins < 1) throw UsageError("DiscretizationSpec: x_bins must be >= 1");
    if (y_grid < 2) throw UsageError("DiscretizationSpec: y_grid must be >= 2");
    if (!(y_span > 0.0)) throw UsageError("DiscretizationSpec: y_span must be positive");
}

FiniteJoint discretize_regression(const RegressionModel& model, const DiscretizationSpec& spec) {
    return discretize_regression(model, spec, model.f0_min() - spec.y_span * model.sigma,
                                 model.f0_max() + spec.y_span * model.sigma);
}

FiniteJoint discretize_regression(const RegressionModel& model, const DiscretizationSpec& spec,
                                  double y_lo, double y_hi) {
    model.validate();
    spec.validate();
    if (!(y_hi > y_lo)) throw UsageError("discretize_regression: empty output range");
    const double cell = (y_hi - y_lo) / spec.y_grid;

    std::vector<double> x_values(spec.x_bins);
    const double xw = model.volume() / spec.x_bins;
    for (int i = 0; i < spec.x_bins; ++i) x_values[i] = model.domain_lo + (i + 0.5) * xw;

    std::vector<double> y_values(spec.y_grid);
    for (int j = 0; j < spec.y_grid; ++j) y_values[j] = y_lo + (j + 0.5) * cell;

    std::vector<double> pmf(static_cast<std::size_t>(spec.x_bins) * spec.y_grid, 0.0);
    const double row_mass = 1.0 / spec.x_bins;
    for (int i = 0; i < spec.x_bins; ++i) {
        const double mean = model.f0(x_values[i]);
        double covered = 0.0;
        for (int j = 0; j < spec.y_grid; ++j) {
            const double lo = (y_lo + j * cell - mean) / model.sigma;
            const double hi = (y_lo + (j + 1) * cell - mean) / model.sigma;
            const double mass = gaussian_cdf(hi) - gaussian_cdf(lo);
            pmf[static_cast<std::size_t>(i) * spec.y_grid + j] = mass;
            covered += mass;
        }
        const double tail = 1.0 - covered;
        if (tail >= 1e-6)
            throw UsageError("discretize_regression: truncated tail mass " +
                             std::to_string(tail) + " at x-bin " + std::to_string(i) +
                             "; widen y_span or the grid");
        for (int j = 0; j < spec.y_grid; ++j)
            pmf[static_cast<std::size_t>(i) * spec.y_grid + j] *= row_mass / covered;
    }
    return FiniteJoint::with_numeric_x(std::move(x_values), std::move(y_values), std::move(pmf));
}

double l2q_sq_distance(const RegressionModel& f, const RegressionModel& g) {
    if (f.domain_lo != g.domain_lo || f.domain_hi != g.domain_hi)
        throw UsageError("l2q_sq_distance: models must share a domain");
    std::set<double> cuts{f.domain_lo, f.domain_hi};
    for (const auto& [x, v] : f.breakpoints)
        if (x > f.domain_lo && x < f.domain_hi) cuts.insert(x);
    for (const auto& [x, v] : g.breakpoints)
        if (x > g.domain_lo && x < g.domain_hi) cuts.insert(x);

    double acc = 0.0;
    auto it = cuts.begin();
    double prev = *it++;
    for (; it != cuts.end(); ++it) {
        const double u = prev, v = *it;
        prev = *it;
        const double w = v - u;
        if (w <= 0.0) continue;
        // both functions are linear strictly inside (u, v); recover the lines
        // from two interior samples to stay clear of jump points
        const double t1 = u + w / 3.0, t2 = u + 2.0 * w / 3.0;
        const double d1 = f.f0(t1) - g.f0(t1);
        const double d2 = f.f0(t2) - g.f0(t2);
        const double slope = (d2 - d1) / (t2 - t1);
        const double at_u = d1 - slope * (t1 - u);
        // integral of (at_u + slope * s)^2 over s in [0, w]
        acc += at_u * at_u * w + at_u * slope * w * w + slope * slope * w * w * w / 3.0;
    }
    return acc / f.volume();
}

}  // namespace complearn
