#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "complearn/codec.hpp"
#include "complearn/hypothesis_grid.hpp"
#include "complearn/loss.hpp"
#include "complearn/regression_model.hpp"

namespace complearn {

/// A full sweep description: data model, hypothesis grid, loss, codec family,
/// sample sizes, Monte Carlo repetitions and the master seed.
struct ExperimentConfig {
    RegressionModel model;
    HypothesisGrid grid;
    LossFunction loss = LossFunction::squared();

    CodecKind codec_kind = CodecKind::ConditionalLloydMax;
    int codec_x_bins = 1;
    bool held_out_training = false;  // train the codec on an independent block

    std::vector<double> rates;
    std::vector<int> n_list;
    int trials = 1;
    std::uint64_t seed = 0;
    std::string output_dir = ".";
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::string& path);
};

struct TrialRow {
    double rate = 0.0;
    int n = 0;
    int trial = 0;
    double achieved_rate = 0.0;
    double distortion_ln = 0.0;      // l_n(Y^n, Yhat^n)
    double emp_risk_raw_star = 0.0;  // min empirical risk on the raw block
    double emp_risk_rec_star = 0.0;  // min empirical risk on the reconstructed block
    double emp_risk_raw_fhat = 0.0;  // raw-block risk of the quantized-ERM pick
    std::size_t fhat_index = 0;
    double true_risk = 0.0;
    double sqrt_true_risk = 0.0;
    double chain_worst_slack = 0.0;
    bool ok = true;
    std::string error;
};

struct Aggregate {
    double rate = 0.0;
    int n = 0;
    int trials = 0;
    double mean_distortion = 0.0;
    double mean_achieved_rate = 0.0;
    double mean_true_risk = 0.0;
    double se_true_risk = 0.0;
    double mean_sqrt_risk = 0.0;
    double se_sqrt_risk = 0.0;
    double min_chain_slack = 0.0;
    double gaussian_root_bound = 0.0;
    bool bound_holds = false;  // mean sqrt risk + 2 SE <= gaussian root bound
};

struct SweepResult {
    std::vector<TrialRow> rows;
    std::vector<Aggregate> aggregates;

    std::string rows_csv() const;
    nlohmann::json aggregates_json(const ExperimentConfig& config) const;
};

TrialRow run_trial(const ExperimentConfig& config, double rate, int n,
                   std::uint64_t trial_seed, int trial_id = 0);

/// Executes all (rate, n, trial) cells on a thread pool. Each cell draws from
/// its own derived substream and results are merged in task order, so output
/// bytes do not depend on the thread count or scheduling.
SweepResult run_sweep(const ExperimentConfig& config);

/// Writes trials.csv and aggregate.json under config.output_dir via temp-file
/// rename; returns the two paths.
std::pair<std::string, std::string> write_sweep_outputs(const ExperimentConfig& config,
                                                        const SweepResult& result);

}  // namespace complearn
