#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "complearn/errors.hpp"
#include "complearn/finite_joint.hpp"
#include "complearn/info_measures.hpp"
#include "complearn/regression_model.hpp"
#include "complearn/rng.hpp"

#include "oracles.hpp"

using namespace complearn;

namespace {

FiniteJoint random_joint(Rng& rng, std::size_t nx, std::size_t ny) {
    std::vector<double> pmf(nx * ny);
    double total = 0.0;
    for (double& v : pmf) {
        v = -std::log(1.0 - rng.uniform());
        total += v;
    }
    for (double& v : pmf) v /= total;
    std::vector<std::string> xl(nx);
    std::vector<double> yv(ny);
    for (std::size_t i = 0; i < nx; ++i) xl[i] = "x" + std::to_string(i);
    for (std::size_t j = 0; j < ny; ++j) yv[j] = static_cast<double>(j);
    return FiniteJoint(xl, yv, pmf);
}

}  // namespace

TEST_CASE("joint construction enforces pmf invariants") {
    CHECK_THROWS_AS(FiniteJoint({"a"}, {0.0, 1.0}, {0.6, 0.6}), UsageError);
    CHECK_THROWS_AS(FiniteJoint({"a"}, {0.0, 1.0}, {1.1, -0.1}), UsageError);
    CHECK_THROWS_AS(FiniteJoint({"a"}, {0.0, 1.0}, {0.5}), UsageError);
    const FiniteJoint j({"a", "b"}, {0.0, 1.0}, {0.25, 0.25, 0.25, 0.25});
    CHECK(j.x_marginal()[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(j.y_marginal()[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("entropy of uniform marginal over two symbols is one bit") {
    const FiniteJoint j({"a", "b"}, {0.0, 1.0}, {0.25, 0.25, 0.25, 0.25});
    CHECK(entropy_bits(j, "Y") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(entropy_bits(j, "X") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(entropy_bits(j, "X,Y") == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("deterministic output given input has zero conditional entropy") {
    // y = g(x): each row concentrated on one column
    const FiniteJoint j({"a", "b"}, {0.0, 1.0}, {0.5, 0.0, 0.0, 0.5});
    CHECK(entropy_bits(j, "Y|X") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(entropy_bits(j, "Y|X") >= 0.0);
}

TEST_CASE("conditional entropy matches direct summation") {
    const FiniteJoint j({"a", "b"}, {0.0, 1.0}, {0.4, 0.1, 0.1, 0.4});
    // both rows are (0.8, 0.2) conditionals
    CHECK(entropy_bits(j, "Y|X") == doctest::Approx(0.721928094887).epsilon(1e-11));
    // independent re-summation in the other order: H(X,Y) - H(X)
    const double alt = entropy_bits(j, "X,Y") - entropy_bits(j, "X");
    CHECK(entropy_bits(j, "Y|X") == doctest::Approx(alt).epsilon(1e-12));
}

TEST_CASE("selector referencing an absent variable is a usage error") {
    const FiniteJoint j({"a"}, {0.0, 1.0}, {0.5, 0.5});
    CHECK_THROWS_AS(entropy_bits(j, "Yhat|X"), UsageError);
    CHECK_THROWS_AS(entropy_bits(j, "Z"), UsageError);
    CHECK_THROWS_AS(entropy_bits(j, "Y|Y"), UsageError);
}

TEST_CASE("independent variables carry zero mutual information") {
    const FiniteJoint j({"a", "b"}, {0.0, 1.0}, {0.06, 0.14, 0.24, 0.56});
    CHECK(mutual_information_bits(j) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("copy channel: I(Y;Yhat|X) equals H(Y|X)") {
    const FiniteJoint base({"a", "b"}, {0.0, 1.0}, {0.4, 0.1, 0.1, 0.4});
    std::vector<std::vector<double>> identity(2, std::vector<double>{1, 0, 0, 1});
    const ExtendedJoint ext = ExtendedJoint::from_channels(base, identity, 2);
    CHECK(mutual_information_bits(ext, true) ==
          doctest::Approx(entropy_bits(base, "Y|X")).epsilon(1e-12));
}

TEST_CASE("chain identity and data processing on random extended joints") {
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        const FiniteJoint base = random_joint(rng, 2, 3);
        std::vector<std::vector<double>> channels(2);
        for (auto& ch : channels) {
            ch.resize(3 * 2);
            for (std::size_t y = 0; y < 3; ++y) {
                const double a = rng.uniform();
                ch[y * 2] = a;
                ch[y * 2 + 1] = 1.0 - a;
            }
        }
        const ExtendedJoint ext = ExtendedJoint::from_channels(base, channels, 2);
        const double mi = mutual_information_bits(ext, true);
        CHECK(mi >= -1e-12);
        // I(Y;Yhat|X) = H(Y|X) - H(Y|X,Yhat)
        const double via_chain =
            entropy_bits(ext, "Y|X") - entropy_bits(ext, "Y|X,Yhat");
        CHECK(mi == doctest::Approx(via_chain).epsilon(1e-10));
        // and is bounded by H(Yhat|X)
        CHECK(mi <= entropy_bits(ext, "Yhat|X") + 1e-10);
    }
}

TEST_CASE("kl and variational distance basics") {
    const auto same = kl_and_variational({0.3, 0.7}, {0.3, 0.7});
    CHECK(same.kl_nats == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(same.dv == doctest::Approx(0.0).epsilon(1e-15));

    const auto d = kl_and_variational({0.9, 0.1}, {0.5, 0.5});
    CHECK(d.dv == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(d.kl_nats == doctest::Approx(0.368064207168).epsilon(1e-10));
    CHECK(d.kl_bits == doctest::Approx(d.kl_nats / std::log(2.0)).epsilon(1e-12));

    // missing mass in q yields the +inf sentinel, not a crash
    const auto inf = kl_and_variational({0.5, 0.5}, {1.0, 0.0});
    CHECK(std::isinf(inf.kl_nats));

    CHECK_THROWS_AS(kl_and_variational({0.5, 0.5}, {1.0}), UsageError);
}

TEST_CASE("pinsker holds on random distribution pairs") {
    Rng rng(11);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> p(4), q(4);
        double sp = 0.0, sq = 0.0;
        for (int i = 0; i < 4; ++i) {
            p[i] = -std::log(1.0 - rng.uniform());
            q[i] = -std::log(1.0 - rng.uniform());
            sp += p[i];
            sq += q[i];
        }
        for (int i = 0; i < 4; ++i) {
            p[i] /= sp;
            q[i] /= sq;
        }
        const auto d = kl_and_variational(p, q);
        CHECK(d.dv <= std::sqrt(2.0 * d.kl_nats) + 1e-9);
        CHECK(d.dv >= 0.0);
        CHECK(d.dv <= 2.0);
    }
}

TEST_CASE("discretization: symmetry, row masses and variance") {
    const RegressionModel model = RegressionModel::constant(0.5, 1.0);
    DiscretizationSpec spec;
    spec.x_bins = 1;
    spec.y_grid = 512;
    spec.y_span = 6.0;
    const FiniteJoint j = discretize_regression(model, spec);

    // symmetric about the mean
    const auto ym = j.y_marginal();
    for (std::size_t k = 0; k < ym.size() / 2; ++k)
        CHECK(ym[k] == doctest::Approx(ym[ym.size() - 1 - k]).epsilon(1e-12));

    // exact row mass
    double row = 0.0;
    for (std::size_t k = 0; k < j.ny(); ++k) row += j.p(0, k);
    CHECK(row == doctest::Approx(1.0).epsilon(1e-12));

    // discrete conditional variance approaches sigma^2
    double mean = 0.0, var = 0.0;
    for (std::size_t k = 0; k < j.ny(); ++k) mean += j.p(0, k) * j.y_values()[k];
    for (std::size_t k = 0; k < j.ny(); ++k) {
        const double d = j.y_values()[k] - mean;
        var += j.p(0, k) * d * d;
    }
    CHECK(var == doctest::Approx(1.0).epsilon(0.005));
}

TEST_CASE("discretization rejects starved output grids") {
    const RegressionModel model = RegressionModel::constant(0.5, 1.0);
    DiscretizationSpec spec;
    spec.y_span = 2.0;  // tail mass ~0.045, far above the refusal threshold
    CHECK_THROWS_AS(discretize_regression(model, spec), UsageError);
}

TEST_CASE("row masses equal 1/x_bins for piecewise-linear regressions") {
    RegressionModel model;
    model.breakpoints = {{0.0, 0.1}, {0.5, 0.9}, {1.0, 0.3}};
    model.sigma = 0.4;
    DiscretizationSpec spec;
    spec.x_bins = 7;
    spec.y_grid = 129;
    const FiniteJoint j = discretize_regression(model, spec);
    for (std::size_t i = 0; i < j.nx(); ++i) {
        double row = 0.0;
        for (std::size_t k = 0; k < j.ny(); ++k) row += j.p(i, k);
        CHECK(row == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    }
}

TEST_CASE("discretized divergence converges to the squared-distance form") {
    // constant regressions 0.2 apart: the limit is 0.2^2 / (2 sigma^2) nats
    const double sigma = 1.0;
    const RegressionModel f = RegressionModel::constant(0.3, sigma);
    const RegressionModel g = RegressionModel::constant(0.5, sigma);
    const double target = 0.02;

    const double y_lo = 0.3 - 8.0 * sigma, y_hi = 0.5 + 8.0 * sigma;
    double prev_err = 1e300;
    double prev_kl = -1.0;
    for (int grid : {64, 256, 1024}) {
        DiscretizationSpec spec;
        spec.y_grid = grid;
        spec.y_span = 8.0;
        const auto pf = discretize_regression(f, spec, y_lo, y_hi);
        const auto pg = discretize_regression(g, spec, y_lo, y_hi);
        const double kl = kl_and_variational(pf, pg).kl_nats;
        const double err = std::fabs(kl - target);
        CHECK(err <= prev_err + 1e-12);   // refinement never hurts
        CHECK(kl >= prev_kl - 1e-12);     // nested partitions only add divergence
        prev_err = err;
        prev_kl = kl;
    }
    CHECK(prev_err <= 0.01 * target);
}

TEST_CASE("json round trip preserves the joint") {
    Rng rng(3);
    const FiniteJoint j = random_joint(rng, 3, 4);
    const FiniteJoint back = FiniteJoint::from_json(j.to_json());
    CHECK(back.same_alphabets(j));
    for (std::size_t i = 0; i < j.pmf().size(); ++i) CHECK(back.pmf()[i] == j.pmf()[i]);

    // numeric x alphabets survive too
    const FiniteJoint num = FiniteJoint::with_numeric_x({0.25, 0.75}, {0.0, 1.0},
                                                        {0.25, 0.25, 0.25, 0.25});
    const FiniteJoint num_back = FiniteJoint::from_json(num.to_json());
    CHECK(num_back.x_values() == num.x_values());
}
