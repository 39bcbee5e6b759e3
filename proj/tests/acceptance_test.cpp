// Acceptance suite: one test case per shipped criterion, each printing a
// PASS/FAIL line with the measured margin and runtime.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "complearn/converse_verifier.hpp"
#include "complearn/covering.hpp"
#include "complearn/erm.hpp"
#include "complearn/experiment.hpp"
#include "complearn/info_measures.hpp"
#include "complearn/rd_solver.hpp"
#include "complearn/regression_model.hpp"
#include "complearn/rng.hpp"

#include "oracles.hpp"

using namespace complearn;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig desk_scale_config() {
    ExperimentConfig c;
    // staircase ramp: a grid member with unit-slope level jumps
    c.model.breakpoints = {{0.0, 0.1}, {0.2, 0.1}, {0.2, 0.3}, {0.4, 0.3}, {0.4, 0.5},
                           {0.6, 0.5}, {0.6, 0.7}, {0.8, 0.7}, {0.8, 0.9}, {1.0, 0.9}};
    c.model.sigma = 0.5;
    c.grid = HypothesisGrid::with_levels(0.0, 1.0, 5, {0.1, 0.3, 0.5, 0.7, 0.9}, 1);
    c.loss = LossFunction::squared();
    c.codec_kind = CodecKind::ConditionalLloydMax;
    c.codec_x_bins = 5;
    c.rates = {1.0, 2.0, 3.0};
    c.n_list = {4096};
    c.trials = 64;
    c.seed = 20250801;
    return c;
}

const SweepResult& desk_scale_sweep(double* elapsed = nullptr) {
    static double cached_elapsed = 0.0;
    static const SweepResult result = [] {
        const auto t0 = std::chrono::steady_clock::now();
        const SweepResult r = run_sweep(desk_scale_config());
        cached_elapsed = seconds_since(t0);
        return r;
    }();
    if (elapsed) *elapsed = cached_elapsed;
    return result;
}

}  // namespace

TEST_CASE("criterion 1: solver reproduces the gaussian conditional DRF") {
    const auto t0 = std::chrono::steady_clock::now();
    const RegressionModel model = RegressionModel::constant(0.5, 1.0);
    DiscretizationSpec spec;
    spec.x_bins = 1;
    spec.y_grid = 512;
    spec.y_span = 6.0;
    const FiniteJoint joint = discretize_regression(model, spec);
    const LossFunction loss = LossFunction::squared();

    double max_rel_err = 0.0;
    for (double rate : {0.5, 1.0, 2.0, 3.0}) {
        const BAPoint p = solve_at_rate(joint, loss, rate, 1e-4);
        const double target = gaussian_drf(1.0, rate);
        max_rel_err = std::max(max_rel_err, std::fabs(p.distortion - target) / target);
        CHECK(p.converged);
    }
    const double secs = seconds_since(t0);
    const bool ok = max_rel_err <= 0.03 && secs < 60.0;
    std::printf("[criterion 1] %s: discretized-gaussian solver within 3%% of sigma^2 2^(-2R) "
                "for R in {0.5,1,2,3} (max rel err %.4f, %.1f s)\n",
                ok ? "PASS" : "FAIL", max_rel_err, secs);
    CHECK(max_rel_err <= 0.03);
    CHECK(secs < 60.0);
}

TEST_CASE("criterion 2: desk-scale sweep stays under the gaussian root-risk bound") {
    double secs = 0.0;
    const SweepResult& res = desk_scale_sweep(&secs);
    bool ok = secs < 600.0;
    double worst_margin = 1e300;
    for (const Aggregate& a : res.aggregates) {
        const double lhs = a.mean_sqrt_risk + 2.0 * a.se_sqrt_risk;
        worst_margin = std::min(worst_margin, a.gaussian_root_bound - lhs);
        ok = ok && lhs <= a.gaussian_root_bound && a.trials == 64;
        CHECK(lhs <= a.gaussian_root_bound);
    }
    std::printf("[criterion 2] %s: mean sqrt-risk + 2 SE <= sigma(1 + 2^(-R+1)) at every rate "
                "(min margin %.4f, %.1f s)\n",
                ok ? "PASS" : "FAIL", worst_margin, secs);
    CHECK(secs < 600.0);
}

TEST_CASE("criterion 3: per-realization transfer chain holds in every trial") {
    const SweepResult& res = desk_scale_sweep();
    double worst = 1e300;
    bool all_ok = true;
    for (const TrialRow& row : res.rows) {
        all_ok = all_ok && row.ok;
        worst = std::min(worst, row.chain_worst_slack);
    }
    const bool ok = all_ok && worst >= -1e-12;
    std::printf("[criterion 3] %s: every trial's ERM transfer inequalities hold "
                "(worst slack %.3g over %zu trials)\n",
                ok ? "PASS" : "FAIL", worst, res.rows.size());
    CHECK(all_ok);
    CHECK(worst >= -1e-12);
}

TEST_CASE("criterion 4: shipped converse instance verifies exhaustively") {
    const auto t0 = std::chrono::steady_clock::now();
    std::ifstream in(std::string(COMPLEARN_DATA_DIR) + "/appendix_tiny.json");
    REQUIRE(in.good());
    nlohmann::json instance;
    in >> instance;
    const ConverseReport rep = converse_chain_verify_json(instance);
    const double secs = seconds_since(t0);
    const bool ok = rep.chain.all_hold(1e-9) && rep.lstar_dominates && secs < 10.0;
    std::printf("[criterion 4] %s: converse chain slacks >= -1e-9 and L* >= D(R) at every "
                "sampled rate (worst slack %.3g, L* %.4f vs D(R) %.4f, %.2f s)\n",
                ok ? "PASS" : "FAIL", rep.chain.worst_slack, rep.lstar,
                rep.distortion_at_rate, secs);
    CHECK(rep.chain.all_hold(1e-9));
    CHECK(rep.lstar_dominates);
    CHECK(secs < 10.0);
}

TEST_CASE("criterion 5: curve properties on random 4x4 joints") {
    Rng rng(0xc5);
    const LossFunction loss = LossFunction::hamming();
    bool all_ok = true;
    for (int t = 0; t < 50; ++t) {
        std::vector<double> pmf(16);
        double total = 0.0;
        for (double& v : pmf) {
            v = -std::log(1.0 - rng.uniform());
            total += v;
        }
        for (double& v : pmf) v /= total;
        const FiniteJoint joint({"a", "b", "c", "d"}, {0.0, 1.0, 2.0, 3.0}, pmf);

        const RDCurve cond = rd_curve(joint, loss);
        try {
            cond.validate(1e-9);
        } catch (const std::exception& e) {
            all_ok = false;
            std::printf("  curve invariant violated: %s\n", e.what());
        }
        for (double lam : {0.2, 1.0, 8.0}) {
            const BAPoint p = ba_rd_point(joint, loss, lam);
            all_ok = all_ok && p.descent_ok;
        }
        for (double r = 0.05; r < cond.max_rate(); r += 0.17) {
            const double d = cond.distortion_at_rate(r);
            all_ok = all_ok && std::fabs(cond.rate_at_distortion(d) - r) <= 1e-3;
        }
        const RDCurve pooled = rd_curve(joint.pooled(), loss);
        for (const RDPoint& pt : cond.points) {
            if (pt.distortion > pooled.zero_rate_distortion()) continue;
            all_ok = all_ok && pt.rate_bits <= pooled.rate_at_distortion(pt.distortion) + 1e-6;
        }
    }
    std::printf("[criterion 5] %s: 50 random 4x4 joints pass convexity, descent, inverse "
                "consistency and side-information dominance\n",
                all_ok ? "PASS" : "FAIL");
    CHECK(all_ok);
}

TEST_CASE("criterion 6: bernoulli closed-form oracle") {
    const FiniteJoint source({"*"}, {0.0, 1.0}, {0.5, 0.5});
    const BAPoint p = solve_at_rate(source, LossFunction::hamming(), 0.5, 1e-6);
    const double oracle = oracles::bernoulli_half_distortion_at_rate(0.5);
    const double err = std::fabs(p.distortion - oracle);
    const bool ok = err <= 1e-3;
    std::printf("[criterion 6] %s: D at R=0.5 for Bern(1/2)/Hamming = %.6f vs oracle %.6f "
                "(|err| %.2g <= 1e-3)\n",
                ok ? "PASS" : "FAIL", p.distortion, oracle, err);
    CHECK(err <= 1e-3);
}

TEST_CASE("criterion 7: divergence matches the squared-distance form with pinsker slack") {
    const double sigma = 0.5;
    const HypothesisGrid grid =
        HypothesisGrid::with_levels(0.0, 1.0, 4, {0.125, 0.375, 0.625, 0.875}, -1);
    DiscretizationSpec spec;
    spec.x_bins = 4;  // aligned with the grid cells, so f is constant per bin
    spec.y_grid = 2048;
    spec.y_span = 8.0;

    Rng rng(0xc7);
    bool ok = true;
    double worst_rel = 0.0, worst_pinsker = -1e300;
    int checked = 0;
    while (checked < 20) {
        const std::size_t a = rng.integer(grid.size());
        const std::size_t b = rng.integer(grid.size());
        if (a == b) continue;
        ++checked;
        const RegressionModel fa = grid.as_regression(a, sigma);
        const RegressionModel fb = grid.as_regression(b, sigma);
        const double dist_sq = l2q_sq_distance(fa, fb);
        const double y_lo = std::min(fa.f0_min(), fb.f0_min()) - spec.y_span * sigma;
        const double y_hi = std::max(fa.f0_max(), fb.f0_max()) + spec.y_span * sigma;
        const auto pa = discretize_regression(fa, spec, y_lo, y_hi);
        const auto pb = discretize_regression(fb, spec, y_lo, y_hi);
        const Divergence d = kl_and_variational(pa, pb);

        const double target = dist_sq / (2.0 * sigma * sigma);
        const double rel = std::fabs(d.kl_nats - target) / target;
        worst_rel = std::max(worst_rel, rel);
        ok = ok && rel <= 0.01;

        const double pinsker_slack = d.dv - std::sqrt(dist_sq) / sigma;
        worst_pinsker = std::max(worst_pinsker, pinsker_slack);
        ok = ok && pinsker_slack <= 1e-6;
    }
    std::printf("[criterion 7] %s: KL within 1%% of ||f-g||^2/(2 sigma^2) and d_V <= "
                "||f-g||/sigma + 1e-6 on 20 pairs (worst rel %.4f, worst d_V slack %.2g)\n",
                ok ? "PASS" : "FAIL", worst_rel, worst_pinsker);
    CHECK(ok);
}

TEST_CASE("criterion 8: erm equals brute force on 100 random instances") {
    Rng rng(0xc8);
    bool ok = true;
    for (int t = 0; t < 100; ++t) {
        const int cells = 2 + static_cast<int>(rng.integer(3));
        const int q = 2 + static_cast<int>(rng.integer(4));
        HypothesisGrid grid = HypothesisGrid::uniform_levels(0.0, 1.0, cells, q, -1);
        if (grid.size() > 500)
            grid = HypothesisGrid::uniform_levels(0.0, 1.0, 3, 4, -1);  // keep <= 500 members
        const int n = 20 + static_cast<int>(rng.integer(980));
        std::vector<double> xs(n), ys(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = rng.uniform();
            ys[i] = rng.uniform();
        }
        const LossFunction loss =
            t % 3 == 0 ? LossFunction::absolute() : LossFunction::squared();
        const ErmResult got = erm(grid, xs, ys, loss);
        std::vector<double> risks(grid.size());
        for (std::size_t m = 0; m < grid.size(); ++m)
            risks[m] = empirical_risk(grid, m, xs, ys, loss);
        ok = ok && got.index == oracles::brute_force_argmin(risks);
    }
    std::printf("[criterion 8] %s: ERM index matches the exhaustive argmin with documented "
                "tie-breaking on 100 instances\n",
                ok ? "PASS" : "FAIL");
    CHECK(ok);
}

TEST_CASE("criterion 9: sweep output is byte-identical across thread counts") {
    const SweepResult& reference = desk_scale_sweep();
    ExperimentConfig c = desk_scale_config();
    c.threads = 1;
    const SweepResult serial = run_sweep(c);
    c.threads = 3;
    const SweepResult three = run_sweep(c);
    const bool ok = serial.rows_csv() == reference.rows_csv() &&
                    three.rows_csv() == reference.rows_csv();
    std::printf("[criterion 9] %s: trials CSV bytes agree across 1, 3 and default worker "
                "threads\n",
                ok ? "PASS" : "FAIL");
    CHECK(ok);
}
