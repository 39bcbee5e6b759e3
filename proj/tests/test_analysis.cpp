#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "complearn/bounds.hpp"
#include "complearn/chain_check.hpp"
#include "complearn/codec.hpp"
#include "complearn/converse_verifier.hpp"
#include "complearn/covering.hpp"
#include "complearn/dobrushin.hpp"
#include "complearn/erm.hpp"
#include "complearn/errors.hpp"
#include "complearn/info_measures.hpp"
#include "complearn/rng.hpp"

using namespace complearn;

TEST_CASE("achievable-risk bound values") {
    CHECK(achievable_risk_bound(0.37, LossFunction::absolute(), 0.0) ==
          doctest::Approx(0.37).epsilon(1e-15));
    CHECK(achievable_risk_bound(0.1, LossFunction::absolute(), 0.05) ==
          doctest::Approx(0.2).epsilon(1e-15));
    CHECK(achievable_risk_bound(0.3, LossFunction::squared(), 0.0625) ==
          doctest::Approx(1.3).epsilon(1e-15));
    CHECK_THROWS_AS(achievable_risk_bound(-1.0, LossFunction::squared(), 0.0), UsageError);
}

TEST_CASE("gaussian root-risk bound and its metric-power consistency") {
    CHECK(gaussian_root_risk_bound(0.5, 2.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(gaussian_root_risk_bound(1.0, 0.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(gaussian_root_risk_bound(0.7, 40.0) == doctest::Approx(0.7).epsilon(1e-11));

    for (double sigma : {0.25, 0.5, 1.0, 2.0}) {
        for (double rate : {0.0, 0.5, 1.0, 2.5, 6.0}) {
            const double via_general =
                root_risk_bound(sigma * sigma, 2.0, gaussian_drf(sigma, rate));
            CHECK(std::fabs(gaussian_root_risk_bound(sigma, rate) - via_general) <= 1e-15);
        }
    }
}

TEST_CASE("finite-sample bound values") {
    CHECK(finite_sample_risk_bound(0.0, LossFunction::absolute(), 0.2, 0.0, 50) ==
          doctest::Approx(0.2).epsilon(1e-15));
    CHECK(finite_sample_risk_bound(0.02, LossFunction::absolute(), 0.1, 1.0, 100) ==
          doctest::Approx(0.24).epsilon(1e-15));
    CHECK_THROWS_AS(finite_sample_risk_bound(0.0, LossFunction::absolute(), 0.1, 0.0, 0),
                    UsageError);
}

TEST_CASE("risk bound is nonincreasing in rate along a distortion curve") {
    const LossFunction loss = LossFunction::squared();
    double prev = 1e300;
    for (double rate : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0}) {
        const double bound = achievable_risk_bound(0.25, loss, gaussian_drf(0.5, rate));
        CHECK(bound <= prev + 1e-15);
        prev = bound;
    }
}

TEST_CASE("bound report carries every requested term") {
    const BoundReport r = make_bound_report(2.0, gaussian_drf(0.5, 2.0), 0.25,
                                            LossFunction::squared(), 0.5, 0.01, 1.0, 400);
    CHECK(r.gaussian_root_bound.has_value());
    CHECK(*r.gaussian_root_bound == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(r.finite_sample_bound.has_value());
    CHECK(*r.finite_sample_bound ==
          doctest::Approx(0.25 + 2.0 * LossFunction::squared().eta(0.01) + 0.05).epsilon(1e-12));
    const auto j = r.to_json();
    CHECK(j.contains("risk_bound"));
    CHECK(j.contains("gaussian_root_risk_bound"));
}

TEST_CASE("erm transfer chain collapses to equalities on lossless blocks") {
    const HypothesisGrid grid = HypothesisGrid::uniform_levels(0.0, 1.0, 2, 4, -1);
    Rng rng(3);
    std::vector<double> xs(200), ys(200);
    for (int i = 0; i < 200; ++i) {
        xs[i] = rng.uniform();
        ys[i] = rng.uniform();
    }
    const ErmResult fit = erm(grid, xs, ys, LossFunction::squared());
    const ChainReport rep = quantized_erm_chain_check(xs, ys, ys, grid,
                                                      LossFunction::squared(), fit.index);
    CHECK(rep.all_hold(1e-12));
    for (const ChainStep& s : rep.steps) CHECK(std::fabs(s.slack) <= 1e-12);
}

TEST_CASE("erm transfer chain holds on a quantized regression trial") {
    const HypothesisGrid grid =
        HypothesisGrid::with_levels(0.0, 1.0, 5, {0.1, 0.3, 0.5, 0.7, 0.9}, 1);
    Rng rng(1234);
    const int n = 2000;
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = rng.uniform();
        ys[i] = 0.1 + 0.8 * xs[i] + 0.5 * rng.normal();
    }
    CodecConfig cfg;
    cfg.x_bins = 5;
    const Codec codec = train_codec(CodecKind::ConditionalLloydMax, xs, ys, 1.0,
                                    LossFunction::squared(), cfg);
    const std::vector<double> yhat = decode(codec, xs, encode(codec, xs, ys));
    const ErmResult fit = erm(grid, xs, yhat, LossFunction::squared());
    const ChainReport rep = quantized_erm_chain_check(xs, ys, yhat, grid,
                                                      LossFunction::squared(), fit.index);
    CHECK(rep.all_hold(1e-12));
}

TEST_CASE("erm transfer chain flags a planted non-minimizer") {
    const HypothesisGrid grid = HypothesisGrid::with_levels(0.0, 1.0, 1, {0.0, 0.5, 1.0}, -1);
    std::vector<double> xs{0.2, 0.6}, ys{0.5, 0.5};
    // the true minimizer is member 1; plant member 0
    CHECK_THROWS_AS(
        quantized_erm_chain_check(xs, ys, ys, grid, LossFunction::squared(), 0),
        UsageError);
    const ChainReport rep = quantized_erm_chain_check(xs, ys, ys, grid,
                                                      LossFunction::squared(), 0, true);
    bool found_negative_equality = false;
    for (const ChainStep& s : rep.steps)
        if (s.is_equality && s.slack < -1e-12) found_negative_equality = true;
    CHECK(found_negative_equality);
}

TEST_CASE("entropy-growth diagnostic trends") {
    // constructive covering counts: H(eps) ~ c'/eps
    std::vector<std::pair<double, double>> samples;
    for (double eps : {0.2, 0.1, 0.05, 0.02})
        samples.emplace_back(eps, covering_log2_count(1.0, 0.0, 1.0, eps));
    const double c_prime = samples.back().second * samples.back().first;
    const DobrushinReport grow = dobrushin_diagnostic(samples, {10.0 * c_prime});
    CHECK(grow.trends[0].decreasing);

    // finite families have constant entropy: every positive c works
    const DobrushinReport flat = dobrushin_diagnostic(
        {{0.2, 3.0}, {0.1, 3.0}, {0.05, 3.0}}, {0.01, 1.0, 100.0});
    for (const auto& t : flat.trends) CHECK(t.decreasing);

    // falsification: H(eps) = 2^(2c/eps) must be flagged
    const double c = 0.5;
    std::vector<std::pair<double, double>> bad;
    for (double eps : {0.5, 0.25, 0.125})
        bad.emplace_back(eps, std::pow(2.0, 2.0 * c / eps));
    const DobrushinReport flagged = dobrushin_diagnostic(bad, {c});
    CHECK(!flagged.trends[0].decreasing);

    CHECK_THROWS_AS(dobrushin_diagnostic({{0.2, 1.0}, {0.1, 1.0}}, {1.0}), UsageError);
    CHECK_THROWS_AS(dobrushin_diagnostic({{0.1, 1.0}, {0.2, 1.0}, {0.3, 1.0}}, {1.0}),
                    UsageError);
    CHECK(!flat.note.empty());
}

namespace {

FiniteJoint tiny_joint() {
    return FiniteJoint({"x0", "x1"}, {0.0, 1.0}, {0.35, 0.15, 0.10, 0.40});
}

}  // namespace

TEST_CASE("converse chain is tight for the lossless one-sample scheme") {
    const FiniteJoint joint = tiny_joint();
    const LossFunction loss = LossFunction::hamming();
    const RDCurve curve = rd_curve(joint, loss);
    const SchemeTables scheme = identity_scheme(joint, 1, 2, loss);
    const ConverseReport rep = converse_chain_verify(joint, scheme, 1, 1.0, loss, curve);
    CHECK(rep.chain.all_hold(1e-9));

    const double hyx = entropy_bits(joint, "Y|X");
    // H(J|X) = H(Y|X) and the chain is an equality through the mutual
    // information step
    CHECK(rep.chain.steps[1].lhs == doctest::Approx(hyx).epsilon(1e-10));
    CHECK(std::fabs(rep.chain.steps[1].slack) <= 1e-10);
    CHECK(std::fabs(rep.chain.steps[2].slack) <= 1e-10);
    CHECK(rep.lstar_dominates);
}

TEST_CASE("converse chain for the zero-bit scheme forces zero-rate distortion") {
    const FiniteJoint joint = tiny_joint();
    const LossFunction loss = LossFunction::hamming();
    const RDCurve curve = rd_curve(joint, loss);
    const SchemeTables scheme = constant_scheme(joint, 2, loss);
    const ConverseReport rep = converse_chain_verify(joint, scheme, 2, 0.0, loss, curve);
    CHECK(rep.chain.all_hold(1e-9));
    // every information term is zero, so the block loss cannot beat the
    // zero-rate optimum
    CHECK(rep.expected_block_loss >= curve.zero_rate_distortion() - 1e-12);
    CHECK(rep.chain.steps[0].lhs == doctest::Approx(0.0));
}

TEST_CASE("converse chain on a lossy hand-built scheme") {
    // four output symbols, one bit per sample: the decoder sees the high bit
    const FiniteJoint joint({"x0", "x1"}, {0.0, 1.0, 2.0, 3.0},
                            {0.10, 0.05, 0.05, 0.05, 0.05, 0.05, 0.15, 0.50});
    const LossFunction loss = LossFunction::hamming();
    const RDCurve curve = rd_curve(joint, loss);

    const int n = 2;
    SchemeTables s;
    s.index_count = 4;  // 2 bits total for n = 2
    const std::size_t xn = 4, yn = 16;
    s.encoder.assign(xn, std::vector<int>(yn));
    s.decoder.assign(xn, std::vector<std::vector<int>>(4, std::vector<int>(n)));
    for (std::size_t xi = 0; xi < xn; ++xi) {
        for (std::size_t yi = 0; yi < yn; ++yi) {
            const int y0 = static_cast<int>(yi / 4), y1 = static_cast<int>(yi % 4);
            s.encoder[xi][yi] = (y0 / 2) * 2 + (y1 / 2);
        }
        for (int j = 0; j < 4; ++j)
            s.decoder[xi][j] = {(j / 2) * 2, (j % 2) * 2};  // representative symbol per half
    }
    // learner: predict the first reconstructed symbol everywhere
    s.learner.assign(xn, std::vector<std::vector<int>>(yn, std::vector<int>(2, 0)));
    for (std::size_t xi = 0; xi < xn; ++xi)
        for (std::size_t yi = 0; yi < yn; ++yi)
            s.learner[xi][yi] = {static_cast<int>(yi / 4), static_cast<int>(yi / 4)};

    const ConverseReport rep = converse_chain_verify(joint, s, n, 1.0, loss, curve);
    CHECK(rep.chain.all_hold(1e-9));
    CHECK(rep.lstar_dominates);
    CHECK(rep.lstar >= rep.distortion_at_rate - 1e-9);
}

TEST_CASE("converse verifier refuses oversized instances") {
    std::vector<double> pmf(25, 1.0 / 25.0);
    std::vector<std::string> xl(5);
    std::vector<double> yv(5);
    for (int i = 0; i < 5; ++i) {
        xl[i] = "x" + std::to_string(i);
        yv[i] = i;
    }
    const FiniteJoint big(xl, yv, pmf);
    const LossFunction loss = LossFunction::hamming();
    const RDCurve curve = rd_curve(tiny_joint(), loss);
    SchemeTables s;
    CHECK_THROWS_AS(converse_chain_verify(big, s, 1, 3.0, loss, curve), UsageError);

    const SchemeTables ok = identity_scheme(tiny_joint(), 1, 2, loss);
    ConverseLimits tight;
    tight.max_n = 0;
    CHECK_THROWS_AS(converse_chain_verify(tiny_joint(), ok, 1, 1.0, loss, curve, {}, tight),
                    UsageError);
}

TEST_CASE("scheme tables round trip through json") {
    const LossFunction loss = LossFunction::hamming();
    const SchemeTables s = identity_scheme(tiny_joint(), 2, 4, loss);
    const SchemeTables back = SchemeTables::from_json(s.to_json());
    CHECK(back.index_count == s.index_count);
    CHECK(back.encoder == s.encoder);
    CHECK(back.decoder == s.decoder);
    CHECK(back.learner == s.learner);
}
