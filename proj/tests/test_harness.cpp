#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "complearn/experiment.hpp"
#include "complearn/rng.hpp"

using namespace complearn;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.model.breakpoints = {{0.0, 0.1}, {0.2, 0.1}, {0.2, 0.3}, {0.4, 0.3}, {0.4, 0.5},
                           {0.6, 0.5}, {0.6, 0.7}, {0.8, 0.7}, {0.8, 0.9}, {1.0, 0.9}};
    c.model.sigma = 0.5;
    c.grid = HypothesisGrid::with_levels(0.0, 1.0, 5, {0.1, 0.3, 0.5, 0.7, 0.9}, 1);
    c.loss = LossFunction::squared();
    c.codec_kind = CodecKind::ConditionalLloydMax;
    c.codec_x_bins = 5;
    c.rates = {1.0, 2.0};
    c.n_list = {256};
    c.trials = 4;
    c.seed = 777;
    return c;
}

}  // namespace

TEST_CASE("trial rows reproduce bit-identically from the same seed") {
    const ExperimentConfig c = small_config();
    const TrialRow a = run_trial(c, 2.0, 256, Rng::derive(42, 0, 0, 0), 0);
    const TrialRow b = run_trial(c, 2.0, 256, Rng::derive(42, 0, 0, 0), 0);
    REQUIRE(a.ok);
    CHECK(a.distortion_ln == b.distortion_ln);
    CHECK(a.true_risk == b.true_risk);
    CHECK(a.fhat_index == b.fhat_index);
    CHECK(a.chain_worst_slack == b.chain_worst_slack);
    CHECK(a.achieved_rate == b.achieved_rate);
}

TEST_CASE("vanishing noise identifies the in-grid regression function") {
    ExperimentConfig c = small_config();
    c.model.sigma = 1e-6;
    const TrialRow row = run_trial(c, 3.0, 512, Rng::derive(9, 1, 2, 3), 0);
    REQUIRE(row.ok);
    // the staircase f0 is a grid member; ERM should find exactly it
    const long long truth = c.grid.find_member({0.1, 0.3, 0.5, 0.7, 0.9});
    REQUIRE(truth >= 0);
    CHECK(row.fhat_index == static_cast<std::size_t>(truth));
    CHECK(row.true_risk == doctest::Approx(1e-12).epsilon(1e-10));
    CHECK(row.chain_worst_slack >= -1e-12);
}

TEST_CASE("zero-rate trials still satisfy the transfer chain") {
    ExperimentConfig c = small_config();
    const TrialRow row = run_trial(c, 0.0, 256, Rng::derive(5, 0, 0, 1), 0);
    REQUIRE(row.ok);
    CHECK(row.achieved_rate == doctest::Approx(0.0));
    CHECK(row.chain_worst_slack >= -1e-12);
    // with one codebook level the reconstruction is constant, so the measured
    // distortion is the distance to that constant
    CHECK(row.distortion_ln > 0.0);
}

TEST_CASE("sweeps are byte-identical across thread counts") {
    ExperimentConfig c = small_config();
    c.threads = 1;
    const SweepResult serial = run_sweep(c);
    c.threads = 4;
    const SweepResult parallel = run_sweep(c);
    CHECK(serial.rows_csv() == parallel.rows_csv());
    CHECK(serial.aggregates_json(c).dump() == parallel.aggregates_json(c).dump());
}

TEST_CASE("aggregates carry the bound comparison") {
    ExperimentConfig c = small_config();
    c.threads = 2;
    const SweepResult res = run_sweep(c);
    REQUIRE(res.aggregates.size() == 2);
    for (const Aggregate& a : res.aggregates) {
        CHECK(a.trials == 4);
        CHECK(a.gaussian_root_bound ==
              doctest::Approx(0.5 * (1.0 + std::pow(2.0, -a.rate + 1.0))).epsilon(1e-12));
        CHECK(a.min_chain_slack >= -1e-12);
    }
    // a degenerate single-cell sweep equals its one trial
    ExperimentConfig single = small_config();
    single.rates = {1.0};
    single.trials = 1;
    const SweepResult one = run_sweep(single);
    const TrialRow direct = run_trial(single, 1.0, 256, Rng::derive(single.seed, 0, 0, 0), 0);
    REQUIRE(one.rows.size() == 1);
    CHECK(one.rows[0].true_risk == direct.true_risk);
    CHECK(one.rows[0].distortion_ln == direct.distortion_ln);
}

TEST_CASE("config json round trip") {
    const ExperimentConfig c = small_config();
    const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
    CHECK(back.model.sigma == c.model.sigma);
    CHECK(back.grid.size() == c.grid.size());
    CHECK(back.rates == c.rates);
    CHECK(back.n_list == c.n_list);
    CHECK(back.seed == c.seed);
    CHECK(codec_kind_name(back.codec_kind) == codec_kind_name(c.codec_kind));
}

TEST_CASE("csv header stays pinned") {
    const SweepResult empty;
    CHECK(empty.rows_csv() ==
          "rate,n,trial,achieved_rate,distortion_ln,emp_risk_raw_star,emp_risk_rec_star,"
          "emp_risk_raw_fhat,fhat_index,true_risk,sqrt_true_risk,chain_worst_slack,ok\n");
}

TEST_CASE("config validation rejects malformed sweeps") {
    ExperimentConfig c = small_config();
    c.rates.clear();
    CHECK_THROWS(c.validate());
    ExperimentConfig d = small_config();
    d.n_list = {512, 256};
    CHECK_THROWS(d.validate());
    ExperimentConfig e = small_config();
    e.trials = 0;
    CHECK_THROWS(e.validate());
}
