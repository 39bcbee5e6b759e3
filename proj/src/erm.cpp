#include "complearn/erm.hpp"

#include <algorithm>
#include <cmath>

#include "complearn/errors.hpp"
#include "complearn/rng.hpp"

namespace complearn {

double empirical_risk(const HypothesisGrid& grid, std::size_t member,
                      std::span<const double> xs, std::span<const double> ys,
                      const LossFunction& loss) {
    if (xs.empty() || xs.size() != ys.size())
        throw UsageError("empirical_risk: need equal-length nonempty samples");
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) acc += loss(grid.value(member, xs[i]), ys[i]);
    return acc / static_cast<double>(xs.size());
}

ErmResult erm(const HypothesisGrid& grid, std::span<const double> xs,
              std::span<const double> ys, const LossFunction& loss) {
    if (grid.size() == 0) throw UsageError("erm: empty hypothesis grid");
    // Cache per-sample cell indices; members only differ in level choices.
    std::vector<int> cells(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) cells[i] = grid.cell_of(xs[i]);

    ErmResult best{0, 0.0};
    bool first = true;
    for (std::size_t m = 0; m < grid.size(); ++m) {
        double acc = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            acc += loss(grid.cell_value(m, cells[i]), ys[i]);
        const double risk = acc / static_cast<double>(xs.size());
        if (first || risk < best.risk) {  // strict: ties keep the lowest index
            best = {m, risk};
            first = false;
        }
    }
    return best;
}

double true_risk_regression(const HypothesisGrid& grid, std::size_t member,
                            const RegressionModel& model, const LossFunction& loss) {
    if (loss.kind() != LossFunction::Kind::Squared)
        throw UsageError("true_risk_regression: closed form exists for the squared loss only");
    const RegressionModel g = grid.as_regression(member, model.sigma);
    return l2q_sq_distance(model, g) + model.sigma * model.sigma;
}

double modulus_soundness_check(const LossFunction& loss, const HypothesisGrid& grid,
                               int trials, std::uint64_t seed, double eta_scale) {
    if (trials < 1) throw UsageError("modulus_soundness_check: trials must be >= 1");
    Rng rng(seed);
    // p-power moduli are certified on [0, 1]; metrics hold on any range.
    const double lo = loss.is_metric() ? -1.0 : 0.0;
    const double hi = loss.is_metric() ? 2.0 : 1.0;
    double worst = -1e300;
    for (int t = 0; t < trials; ++t) {
        const std::size_t m = rng.integer(grid.size());
        const double x = rng.uniform(grid.lo(), grid.hi());
        const double u = rng.uniform(lo, hi);
        const double v = rng.uniform(lo, hi);
        const double fx = grid.value(m, x);
        const double gap = std::fabs(loss(fx, u) - loss(fx, v));
        worst = std::max(worst, gap - eta_scale * loss.eta(loss(u, v)));
    }
    return worst;
}

}  // namespace complearn
