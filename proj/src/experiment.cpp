#include "complearn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "complearn/bounds.hpp"
#include "complearn/chain_check.hpp"
#include "complearn/erm.hpp"
#include "complearn/errors.hpp"
#include "complearn/rng.hpp"

namespace complearn {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double monte_carlo_true_risk(const ExperimentConfig& config, std::size_t member,
                             std::uint64_t seed) {
    // fallback for losses without a closed-form risk
    Rng rng(seed);
    const int m = 200000;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        const double x = rng.uniform(config.model.domain_lo, config.model.domain_hi);
        const double y = config.model.f0(x) + config.model.sigma * rng.normal();
        acc += config.loss(config.grid.value(member, x), y);
    }
    return acc / m;
}

}  // namespace

void ExperimentConfig::validate() const {
    model.validate();
    if (grid.size() == 0) throw UsageError("config: empty hypothesis grid");
    if (rates.empty()) throw UsageError("config: rates must be nonempty");
    for (double r : rates)
        if (r < 0.0) throw UsageError("config: rates must be >= 0");
    if (n_list.empty()) throw UsageError("config: n_list must be nonempty");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1) throw UsageError("config: sample sizes must be >= 1");
        if (i > 0 && n_list[i] < n_list[i - 1])
            throw UsageError("config: n_list must be ascending");
    }
    if (trials < 1) throw UsageError("config: trials must be >= 1");
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["model"] = model.to_json();
    j["grid"] = grid.to_json();
    j["loss"] = loss.to_json();
    j["codec"] = {{"kind", codec_kind_name(codec_kind)}, {"x_bins", codec_x_bins}};
    j["held_out_training"] = held_out_training;
    j["rates"] = rates;
    j["n_list"] = n_list;
    j["trials"] = trials;
    j["seed"] = seed;
    j["output"] = output_dir;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.model = RegressionModel::from_json(j.at("model"));
    const auto& g = j.at("grid");
    if (g.contains("members")) {
        c.grid = HypothesisGrid::from_json(g);
    } else if (g.contains("levels")) {
        c.grid = HypothesisGrid::with_levels(c.model.domain_lo, c.model.domain_hi,
                                             g.at("cells").get<int>(),
                                             g.at("levels").get<std::vector<double>>(),
                                             g.value("max_jump", -1));
    } else {
        c.grid = HypothesisGrid::uniform_levels(c.model.domain_lo, c.model.domain_hi,
                                                g.at("cells").get<int>(),
                                                g.at("q").get<int>(),
                                                g.value("max_jump", -1));
    }
    if (j.contains("loss")) c.loss = LossFunction::from_json(j["loss"]);
    if (j.contains("codec")) {
        c.codec_kind = codec_kind_from_name(j["codec"].at("kind").get<std::string>());
        c.codec_x_bins = j["codec"].value("x_bins", 1);
    }
    c.held_out_training = j.value("held_out_training", false);
    c.rates = j.at("rates").get<std::vector<double>>();
    c.n_list = j.at("n_list").get<std::vector<int>>();
    c.trials = j.value("trials", 1);
    c.seed = j.value("seed", std::uint64_t{0});
    c.output_dir = j.value("output", std::string("."));
    c.threads = j.value("threads", 0);
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

TrialRow run_trial(const ExperimentConfig& config, double rate, int n,
                   std::uint64_t trial_seed, int trial_id) {
    TrialRow row;
    row.rate = rate;
    row.n = n;
    row.trial = trial_id;
    try {
        Rng rng(Rng::derive(trial_seed, 0xda7a));
        std::vector<double> xs(n), ys(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = rng.uniform(config.model.domain_lo, config.model.domain_hi);
            ys[i] = config.model.f0(xs[i]) + config.model.sigma * rng.normal();
        }

        CodecConfig cc;
        cc.x_bins = config.codec_x_bins;
        cc.pilot_grid = &config.grid;
        Codec codec;
        if (config.held_out_training) {
            Rng train_rng(Rng::derive(trial_seed, 0x7a1));
            std::vector<double> txs(n), tys(n);
            for (int i = 0; i < n; ++i) {
                txs[i] = train_rng.uniform(config.model.domain_lo, config.model.domain_hi);
                tys[i] = config.model.f0(txs[i]) + config.model.sigma * train_rng.normal();
            }
            codec = train_codec(config.codec_kind, txs, tys, rate, config.loss, cc);
        } else {
            codec = train_codec(config.codec_kind, xs, ys, rate, config.loss, cc);
        }

        const EncodedBlock block = encode(codec, xs, ys);
        const std::vector<double> yhat = decode(codec, xs, block);
        row.achieved_rate = codec.achieved_rate(static_cast<std::size_t>(n));
        double ln = 0.0;
        for (int i = 0; i < n; ++i) ln += config.loss(ys[i], yhat[i]);
        row.distortion_ln = ln / n;

        const ErmResult rec = erm(config.grid, xs, yhat, config.loss);
        const ErmResult raw = erm(config.grid, xs, ys, config.loss);
        row.fhat_index = rec.index;
        row.emp_risk_rec_star = rec.risk;
        row.emp_risk_raw_star = raw.risk;
        row.emp_risk_raw_fhat = empirical_risk(config.grid, rec.index, xs, ys, config.loss);

        if (config.loss.kind() == LossFunction::Kind::Squared) {
            row.true_risk = true_risk_regression(config.grid, rec.index, config.model,
                                                 config.loss);
        } else {
            row.true_risk = monte_carlo_true_risk(config, rec.index,
                                                  Rng::derive(trial_seed, 0xe5a));
        }
        row.sqrt_true_risk = std::sqrt(row.true_risk);

        const ChainReport chain =
            quantized_erm_chain_check(xs, ys, yhat, config.grid, config.loss, rec.index);
        row.chain_worst_slack = chain.worst_slack;
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
    }
    return row;
}

SweepResult run_sweep(const ExperimentConfig& config) {
    config.validate();
    struct Task {
        std::size_t rate_idx, n_idx;
        int trial;
    };
    std::vector<Task> tasks;
    for (std::size_t ri = 0; ri < config.rates.size(); ++ri)
        for (std::size_t ni = 0; ni < config.n_list.size(); ++ni)
            for (int t = 0; t < config.trials; ++t) tasks.push_back(Task{ri, ni, t});

    SweepResult result;
    result.rows.resize(tasks.size());

    const unsigned hw = std::thread::hardware_concurrency();
    const int workers =
        config.threads > 0 ? config.threads : static_cast<int>(hw ? hw : 1u);
    std::atomic<std::size_t> cursor{0};
    auto work = [&]() {
        while (true) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= tasks.size()) break;
            const Task& t = tasks[k];
            const std::uint64_t seed =
                Rng::derive(config.seed, t.rate_idx, t.n_idx, static_cast<std::uint64_t>(t.trial));
            result.rows[k] = run_trial(config, config.rates[t.rate_idx],
                                       config.n_list[t.n_idx], seed, t.trial);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    // ordered reduction per (rate, n) cell
    for (std::size_t ri = 0; ri < config.rates.size(); ++ri) {
        for (std::size_t ni = 0; ni < config.n_list.size(); ++ni) {
            Aggregate agg;
            agg.rate = config.rates[ri];
            agg.n = config.n_list[ni];
            agg.min_chain_slack = 1e300;
            std::vector<double> sqrts, risks;
            for (const TrialRow& row : result.rows) {
                if (row.rate != agg.rate || row.n != agg.n || !row.ok) continue;
                ++agg.trials;
                agg.mean_distortion += row.distortion_ln;
                agg.mean_achieved_rate += row.achieved_rate;
                agg.mean_true_risk += row.true_risk;
                agg.mean_sqrt_risk += row.sqrt_true_risk;
                agg.min_chain_slack = std::min(agg.min_chain_slack, row.chain_worst_slack);
                sqrts.push_back(row.sqrt_true_risk);
                risks.push_back(row.true_risk);
            }
            if (agg.trials == 0) continue;
            agg.mean_distortion /= agg.trials;
            agg.mean_achieved_rate /= agg.trials;
            agg.mean_true_risk /= agg.trials;
            agg.mean_sqrt_risk /= agg.trials;
            auto se = [&](const std::vector<double>& v, double mean) {
                if (v.size() < 2) return 0.0;
                double s2 = 0.0;
                for (double x : v) s2 += (x - mean) * (x - mean);
                s2 /= (v.size() - 1.0);
                return std::sqrt(s2 / v.size());
            };
            agg.se_sqrt_risk = se(sqrts, agg.mean_sqrt_risk);
            agg.se_true_risk = se(risks, agg.mean_true_risk);
            agg.gaussian_root_bound = gaussian_root_risk_bound(config.model.sigma, agg.rate);
            agg.bound_holds =
                agg.mean_sqrt_risk + 2.0 * agg.se_sqrt_risk <= agg.gaussian_root_bound;
            result.aggregates.push_back(agg);
        }
    }
    return result;
}

std::string SweepResult::rows_csv() const {
    std::string out =
        "rate,n,trial,achieved_rate,distortion_ln,emp_risk_raw_star,emp_risk_rec_star,"
        "emp_risk_raw_fhat,fhat_index,true_risk,sqrt_true_risk,chain_worst_slack,ok\n";
    for (const TrialRow& r : rows) {
        out += fmt(r.rate) + "," + std::to_string(r.n) + "," + std::to_string(r.trial) + "," +
               fmt(r.achieved_rate) + "," + fmt(r.distortion_ln) + "," +
               fmt(r.emp_risk_raw_star) + "," + fmt(r.emp_risk_rec_star) + "," +
               fmt(r.emp_risk_raw_fhat) + "," + std::to_string(r.fhat_index) + "," +
               fmt(r.true_risk) + "," + fmt(r.sqrt_true_risk) + "," +
               fmt(r.chain_worst_slack) + "," + (r.ok ? "1" : "0") + "\n";
    }
    return out;
}

nlohmann::json SweepResult::aggregates_json(const ExperimentConfig& config) const {
    nlohmann::json j;
    j["config"] = config.to_json();
    j["cells"] = nlohmann::json::array();
    for (const Aggregate& a : aggregates)
        j["cells"].push_back({{"rate", a.rate},
                              {"n", a.n},
                              {"trials", a.trials},
                              {"mean_distortion", a.mean_distortion},
                              {"mean_achieved_rate", a.mean_achieved_rate},
                              {"mean_true_risk", a.mean_true_risk},
                              {"se_true_risk", a.se_true_risk},
                              {"mean_sqrt_risk", a.mean_sqrt_risk},
                              {"se_sqrt_risk", a.se_sqrt_risk},
                              {"min_chain_slack", a.min_chain_slack},
                              {"gaussian_root_risk_bound", a.gaussian_root_bound},
                              {"bound_holds", a.bound_holds}});
    return j;
}

std::pair<std::string, std::string> write_sweep_outputs(const ExperimentConfig& config,
                                                        const SweepResult& result) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    const fs::path csv_path = fs::path(config.output_dir) / "trials.csv";
    const fs::path json_path = fs::path(config.output_dir) / "aggregate.json";
    auto atomic_write = [](const fs::path& path, const std::string& content) {
        const fs::path tmp = path.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + tmp.string());
            out << content;
        }
        fs::rename(tmp, path);
    };
    atomic_write(csv_path, result.rows_csv());
    atomic_write(json_path, result.aggregates_json(config).dump(2) + "\n");
    return {csv_path.string(), json_path.string()};
}

}  // namespace complearn
