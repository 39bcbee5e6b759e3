// complearn: rate-constrained learning laboratory.
//
// Subcommands:
//   rd              conditional rate-distortion curves and points
//   simulate        seeded compression + quantized-ERM sweeps
//   bounds          achievable-risk bound reports
//   verify-appendix exhaustive converse-chain verification on a tiny instance
//   covering        constructive covering numbers / nets

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "complearn/bounds.hpp"
#include "complearn/converse_verifier.hpp"
#include "complearn/covering.hpp"
#include "complearn/errors.hpp"
#include "complearn/experiment.hpp"
#include "complearn/rd_solver.hpp"

namespace cl = complearn;

namespace {

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cl::UsageError("cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    return j;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cl::UsageError("cannot write '" + path + "'");
    out << content;
}

struct RdArgs {
    bool gaussian = false;
    double sigma = 1.0;
    std::optional<double> rate;
    std::string instance;
    std::string loss = "squared";
    double p = 2.0;
    int slopes = 40;
    std::string curve_out;
    bool json = false;
};

int run_rd(const RdArgs& a) {
    if (a.gaussian) {
        if (!a.rate) throw cl::UsageError("rd --gaussian needs --rate");
        std::printf("D = %.10g\n", cl::gaussian_drf(a.sigma, *a.rate));
        return 0;
    }
    if (a.instance.empty())
        throw cl::UsageError("rd needs --instance <joint.json> or --gaussian");
    const cl::FiniteJoint joint = cl::FiniteJoint::from_json(load_json(a.instance));
    const cl::LossFunction loss = cl::LossFunction::from_name(a.loss, a.p);
    if (a.rate) {
        const cl::BAPoint pt = cl::solve_at_rate(joint, loss, *a.rate);
        std::printf("D = %.10g  (achieved rate %.8g, slope %.6g%s)\n", pt.distortion,
                    pt.rate_bits, pt.slope, pt.converged ? "" : ", NOT CONVERGED");
        return 0;
    }
    const cl::RDCurve curve =
        cl::rd_curve(joint, loss, cl::default_slope_grid(joint, loss, a.slopes));
    if (!a.curve_out.empty()) {
        write_file(a.curve_out, a.json ? curve.to_json().dump(2) + "\n" : curve.to_csv());
        std::printf("wrote %zu curve points to %s\n", curve.points.size(),
                    a.curve_out.c_str());
    } else {
        std::fputs(a.json ? (curve.to_json().dump(2) + "\n").c_str() : curve.to_csv().c_str(),
                   stdout);
    }
    return 0;
}

struct BoundsArgs {
    bool gaussian = false;
    double sigma = 1.0;
    double rate = 1.0;
    std::string loss = "squared";
    double p = 2.0;
    std::optional<double> lstar;
    std::optional<double> sup_drf;
    std::optional<double> measured_ln;
    double c_prime = 0.0;
    std::size_t n = 0;
    bool json = false;
};

int run_bounds(const BoundsArgs& a) {
    const cl::LossFunction loss = cl::LossFunction::from_name(a.loss, a.p);
    double sup_drf, lstar;
    std::optional<double> sigma;
    if (a.gaussian) {
        sigma = a.sigma;
        sup_drf = a.sup_drf.value_or(cl::gaussian_drf(a.sigma, a.rate));
        lstar = a.lstar.value_or(a.sigma * a.sigma);
    } else {
        if (!a.sup_drf || !a.lstar)
            throw cl::UsageError("bounds needs --gaussian or both --sup-drf and --lstar");
        sup_drf = *a.sup_drf;
        lstar = *a.lstar;
    }
    const cl::BoundReport report = cl::make_bound_report(
        a.rate, sup_drf, lstar, loss, sigma, a.measured_ln, a.c_prime, a.n);
    std::fputs(a.json ? (report.to_json().dump(2) + "\n").c_str() : report.to_text().c_str(),
               stdout);
    return 0;
}

int run_simulate(const std::string& config_path, const std::string& output_override,
                 int threads_override) {
    cl::ExperimentConfig config = cl::ExperimentConfig::load(config_path);
    if (!output_override.empty()) config.output_dir = output_override;
    if (const char* env = std::getenv("COMPLEARN_OUTPUT_DIR"); env && *env)
        config.output_dir = env;
    if (threads_override > 0) config.threads = threads_override;

    const cl::SweepResult result = cl::run_sweep(config);
    const auto [csv, json] = cl::write_sweep_outputs(config, result);
    for (const cl::Aggregate& a : result.aggregates)
        std::printf("R=%-6g n=%-6d trials=%-4d mean sqrt risk=%.6g (+2se %.6g)  bound=%.6g  %s\n",
                    a.rate, a.n, a.trials, a.mean_sqrt_risk,
                    a.mean_sqrt_risk + 2.0 * a.se_sqrt_risk, a.gaussian_root_bound,
                    a.bound_holds ? "ok" : "VIOLATED");
    std::printf("wrote %s and %s\n", csv.c_str(), json.c_str());
    for (const cl::TrialRow& row : result.rows)
        if (!row.ok) {
            std::fprintf(stderr, "trial failure (R=%g n=%d trial=%d): %s\n", row.rate, row.n,
                         row.trial, row.error.c_str());
            return 1;
        }
    return 0;
}

int run_verify_appendix(const std::string& instance_path, bool json) {
    const cl::ConverseReport report =
        cl::converse_chain_verify_json(load_json(instance_path));
    std::fputs(json ? (report.to_json().dump(2) + "\n").c_str() : report.to_text().c_str(),
               stdout);
    const bool ok = report.chain.all_hold(1e-9) && report.lstar_dominates;
    if (!ok) std::fprintf(stderr, "verification FAILED\n");
    return ok ? 0 : 1;
}

struct CoveringArgs {
    double lipschitz = 0.0;
    double epsilon = 0.1;
    std::string norm = "sup";
    double lo = 0.0, hi = 1.0;
    bool count_only = false;
    std::string net_out;
    bool json = false;
};

int run_covering(const CoveringArgs& a) {
    const cl::CoveringNorm norm = a.norm == "l2q" ? cl::CoveringNorm::L2Q
                                                  : cl::CoveringNorm::Sup;
    if (a.count_only) {
        const double log2n = cl::covering_log2_count(a.lipschitz, a.lo, a.hi, a.epsilon, norm);
        std::printf("log2 N(%g) = %.8g\n", a.epsilon, log2n);
        return 0;
    }
    const cl::CoveringResult res = cl::covering_number(a.lipschitz, a.lo, a.hi, a.epsilon, norm);
    if (a.json) {
        nlohmann::json j{{"epsilon", a.epsilon},
                         {"count", res.count},
                         {"log2_count", res.log2_count},
                         {"cells", res.net.cells()},
                         {"levels", res.net.levels()}};
        std::fputs((j.dump(2) + "\n").c_str(), stdout);
    } else {
        std::printf("N(%g) = %llu  (log2 %.6g; %d cells x %zu levels)\n", a.epsilon,
                    static_cast<unsigned long long>(res.count), res.log2_count,
                    res.net.cells(), res.net.levels().size());
    }
    if (!a.net_out.empty()) {
        write_file(a.net_out, res.net.to_json().dump(2) + "\n");
        std::printf("wrote net to %s\n", a.net_out.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate-constrained learning laboratory"};
    app.require_subcommand(1);

    RdArgs rd;
    CLI::App* rd_cmd = app.add_subcommand("rd", "rate-distortion curves and points");
    rd_cmd->add_flag("--gaussian", rd.gaussian, "use the Gaussian closed form");
    rd_cmd->add_option("--sigma", rd.sigma, "noise standard deviation");
    rd_cmd->add_option("--rate", rd.rate, "query rate in bits per sample");
    rd_cmd->add_option("--instance", rd.instance, "FiniteJoint JSON file");
    rd_cmd->add_option("--loss", rd.loss, "squared|absolute|hamming|p_power");
    rd_cmd->add_option("--p", rd.p, "exponent for p_power");
    rd_cmd->add_option("--slopes", rd.slopes, "slope grid size for curve sweeps");
    rd_cmd->add_option("--curve-out", rd.curve_out, "write the curve to this file");
    rd_cmd->add_flag("--json", rd.json, "JSON output instead of CSV/text");

    std::string sim_config, sim_output;
    int sim_threads = 0;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "run a seeded experiment sweep");
    sim_cmd->add_option("--config", sim_config, "experiment config JSON")->required();
    sim_cmd->add_option("--output", sim_output, "output directory override");
    sim_cmd->add_option("--threads", sim_threads, "worker thread count");

    BoundsArgs bounds;
    CLI::App* bounds_cmd = app.add_subcommand("bounds", "achievable-risk bound report");
    bounds_cmd->add_flag("--gaussian", bounds.gaussian, "Gaussian regression family");
    bounds_cmd->add_option("--sigma", bounds.sigma, "noise standard deviation");
    bounds_cmd->add_option("--rate", bounds.rate, "rate in bits per sample");
    bounds_cmd->add_option("--loss", bounds.loss, "loss kind");
    bounds_cmd->add_option("--p", bounds.p, "exponent for p_power");
    bounds_cmd->add_option("--lstar", bounds.lstar, "best-in-class risk L*");
    bounds_cmd->add_option("--sup-drf", bounds.sup_drf, "worst-case distortion at the rate");
    bounds_cmd->add_option("--ln", bounds.measured_ln, "measured block distortion l_n");
    bounds_cmd->add_option("--cprime", bounds.c_prime, "calibrated finite-sample constant");
    bounds_cmd->add_option("--n", bounds.n, "sample size for the finite-sample bound");
    bounds_cmd->add_flag("--json", bounds.json, "JSON output");

    std::string verify_instance;
    bool verify_json = false;
    CLI::App* verify_cmd =
        app.add_subcommand("verify-appendix", "exhaustive converse-chain verification");
    verify_cmd->add_option("--instance", verify_instance, "instance JSON file")->required();
    verify_cmd->add_flag("--json", verify_json, "JSON output");

    CoveringArgs cov;
    CLI::App* cov_cmd = app.add_subcommand("covering", "constructive covering numbers");
    cov_cmd->add_option("--lipschitz", cov.lipschitz, "Lipschitz constant of the class");
    cov_cmd->add_option("--epsilon", cov.epsilon, "covering radius")->required();
    cov_cmd->add_option("--norm", cov.norm, "sup|l2q");
    cov_cmd->add_option("--lo", cov.lo, "domain lower end");
    cov_cmd->add_option("--hi", cov.hi, "domain upper end");
    cov_cmd->add_flag("--count-only", cov.count_only, "skip materializing the net");
    cov_cmd->add_option("--net-out", cov.net_out, "write the net grid JSON here");
    cov_cmd->add_flag("--json", cov.json, "JSON output");

    try {
        app.parse(argc, argv);
        if (rd_cmd->parsed()) return run_rd(rd);
        if (sim_cmd->parsed()) return run_simulate(sim_config, sim_output, sim_threads);
        if (bounds_cmd->parsed()) return run_bounds(bounds);
        if (verify_cmd->parsed()) return run_verify_appendix(verify_instance, verify_json);
        if (cov_cmd->parsed()) return run_covering(cov);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const cl::UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
    return 0;
}
