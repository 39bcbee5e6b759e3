#include "complearn/covering.hpp"

#include <algorithm>
#include <cmath>

#include "complearn/errors.hpp"
#include "complearn/info_measures.hpp"
#include "complearn/rng.hpp"

namespace complearn {

namespace {

struct NetParams {
    int cells;
    int n_levels;
    int max_jump;  // -1 when unconstrained
};

// Split the epsilon budget between cell width (Lipschitz drift) and level
// spacing (rounding). The same parameters certify both norms since the L2(Q)
// distance never exceeds the sup distance.
NetParams net_params(double lipschitz, double lo, double hi, double epsilon) {
    if (!(epsilon > 0.0)) throw UsageError("covering: epsilon must be positive");
    if (lipschitz < 0.0) throw UsageError("covering: Lipschitz constant must be >= 0");
    if (!(hi > lo)) throw UsageError("covering: empty domain");
    const double span = hi - lo;
    if (lipschitz == 0.0) {
        const int k = std::max(1, static_cast<int>(std::ceil(1.0 / (2.0 * epsilon))));
        return NetParams{1, k, -1};
    }
    const int m = std::max(1, static_cast<int>(std::ceil(lipschitz * span / epsilon)));
    const int k = std::max(1, static_cast<int>(std::ceil(1.0 / epsilon)));
    const double w = span / m;
    const double s = 1.0 / k;
    const int jump = static_cast<int>(std::floor(lipschitz * w / s)) + 1;
    return NetParams{m, k, jump};
}

std::vector<double> center_levels(int k) {
    std::vector<double> levels(k);
    for (int j = 0; j < k; ++j) levels[j] = (j + 0.5) / k;
    return levels;
}

}  // namespace

CoveringResult covering_number(double lipschitz, double lo, double hi, double epsilon,
                               CoveringNorm /*norm*/, std::uint64_t size_cap) {
    const NetParams p = net_params(lipschitz, lo, hi, epsilon);
    HypothesisGrid net = HypothesisGrid::with_levels(lo, hi, p.cells, center_levels(p.n_levels),
                                                     p.max_jump, epsilon, size_cap);
    const std::uint64_t n = net.size();
    return CoveringResult{n, std::log2(static_cast<double>(n)), std::move(net)};
}

double covering_log2_count(double lipschitz, double lo, double hi, double epsilon,
                           CoveringNorm /*norm*/) {
    const NetParams p = net_params(lipschitz, lo, hi, epsilon);
    if (p.max_jump < 0 || p.max_jump >= p.n_levels - 1 || p.cells == 1)
        return std::log2(static_cast<double>(p.n_levels)) +
               (p.cells - 1) * std::log2(static_cast<double>(p.n_levels));
    // path counting over the level chain, renormalized per cell to stay finite
    std::vector<double> counts(p.n_levels, 1.0);
    double log2_scale = 0.0;
    for (int c = 1; c < p.cells; ++c) {
        std::vector<double> next(p.n_levels, 0.0);
        for (int j = 0; j < p.n_levels; ++j) {
            const int a = std::max(0, j - p.max_jump);
            const int b = std::min(p.n_levels - 1, j + p.max_jump);
            for (int i = a; i <= b; ++i) next[j] += counts[i];
        }
        double peak = *std::max_element(next.begin(), next.end());
        for (double& v : next) v /= peak;
        log2_scale += std::log2(peak);
        counts.swap(next);
    }
    double total = 0.0;
    for (double v : counts) total += v;
    return log2_scale + std::log2(total);
}

FamilyNetCertificate family_net_from_function_net(const HypothesisGrid& grid, double sigma) {
    if (!(sigma > 0.0)) throw UsageError("family net: sigma must be positive");
    if (!(grid.epsilon() > 0.0))
        throw UsageError("family net: grid carries no certified radius");
    return FamilyNetCertificate{grid.epsilon(), sigma, grid.epsilon() / sigma};
}

double family_net_spot_check(const HypothesisGrid& grid, double sigma,
                             const DiscretizationSpec& spec, int pairs,
                             std::uint64_t seed) {
    Rng rng(seed);
    double worst = -1e300;
    for (int t = 0; t < pairs; ++t) {
        const std::size_t a = rng.integer(grid.size());
        const std::size_t b = rng.integer(grid.size());
        const RegressionModel fa = grid.as_regression(a, sigma);
        const RegressionModel fb = grid.as_regression(b, sigma);
        const double y_lo = std::min(fa.f0_min(), fb.f0_min()) - spec.y_span * sigma;
        const double y_hi = std::max(fa.f0_max(), fb.f0_max()) + spec.y_span * sigma;
        const FiniteJoint pa = discretize_regression(fa, spec, y_lo, y_hi);
        const FiniteJoint pb = discretize_regression(fb, spec, y_lo, y_hi);
        const double dv = kl_and_variational(pa, pb).dv;
        const double bound = std::sqrt(l2q_sq_distance(fa, fb)) / sigma;
        worst = std::max(worst, dv - bound);
    }
    return worst;
}

}  // namespace complearn
