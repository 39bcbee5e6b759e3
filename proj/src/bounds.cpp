#include "complearn/bounds.hpp"

#include <cmath>
#include <cstdio>

#include "complearn/errors.hpp"
#include "complearn/rd_solver.hpp"

namespace complearn {

double achievable_risk_bound(double lstar, const LossFunction& loss, double sup_drf) {
    if (lstar < 0.0 || sup_drf < 0.0)
        throw UsageError("achievable_risk_bound: inputs must be nonnegative");
    return lstar + 2.0 * loss.eta(sup_drf);
}

double root_risk_bound(double lstar, double metric_power, double sup_drf) {
    if (!(metric_power >= 1.0)) throw UsageError("root_risk_bound: metric power must be >= 1");
    if (lstar < 0.0 || sup_drf < 0.0)
        throw UsageError("root_risk_bound: inputs must be nonnegative");
    return std::pow(lstar, 1.0 / metric_power) + 2.0 * std::pow(sup_drf, 1.0 / metric_power);
}

double gaussian_root_risk_bound(double sigma, double rate) {
    if (!(sigma > 0.0)) throw UsageError("gaussian_root_risk_bound: sigma must be positive");
    if (rate < 0.0) throw UsageError("gaussian_root_risk_bound: rate must be >= 0");
    return sigma * (1.0 + std::pow(2.0, -rate + 1.0));
}

double finite_sample_risk_bound(double measured_ln, const LossFunction& loss, double lstar,
                                double c_prime, std::size_t n) {
    if (n < 1) throw UsageError("finite_sample_risk_bound: n must be >= 1");
    if (measured_ln < 0.0 || lstar < 0.0)
        throw UsageError("finite_sample_risk_bound: inputs must be nonnegative");
    return lstar + 2.0 * loss.eta(measured_ln) + c_prime / std::sqrt(static_cast<double>(n));
}

BoundReport make_bound_report(double rate, double sup_drf, double lstar,
                              const LossFunction& loss, std::optional<double> gaussian_sigma,
                              std::optional<double> measured_ln, double c_prime,
                              std::size_t n) {
    BoundReport r;
    r.rate = rate;
    r.sup_drf = sup_drf;
    r.lstar = lstar;
    r.loss_name = loss.name();
    r.risk_bound = achievable_risk_bound(lstar, loss, sup_drf);
    r.root_bound = root_risk_bound(lstar, loss.metric_power(), sup_drf);
    if (gaussian_sigma) r.gaussian_root_bound = gaussian_root_risk_bound(*gaussian_sigma, rate);
    if (measured_ln) r.finite_sample_bound =
        finite_sample_risk_bound(*measured_ln, loss, lstar, c_prime, n);
    return r;
}

nlohmann::json BoundReport::to_json() const {
    nlohmann::json j;
    j["rate"] = rate;
    j["sup_drf"] = sup_drf;
    j["lstar"] = lstar;
    j["loss"] = loss_name;
    j["risk_bound"] = risk_bound;
    j["root_risk_bound"] = root_bound;
    if (gaussian_root_bound) j["gaussian_root_risk_bound"] = *gaussian_root_bound;
    if (finite_sample_bound) j["finite_sample_risk_bound"] = *finite_sample_bound;
    return j;
}

std::string BoundReport::to_text() const {
    char buf[512];
    std::string out;
    std::snprintf(buf, sizeof(buf), "rate R               : %.6g\n", rate);
    out += buf;
    std::snprintf(buf, sizeof(buf), "worst-case D(R)      : %.6g\n", sup_drf);
    out += buf;
    std::snprintf(buf, sizeof(buf), "L* (best in class)   : %.6g\n", lstar);
    out += buf;
    std::snprintf(buf, sizeof(buf), "risk bound           : %.6g   (L* + 2 eta(D), loss: %s)\n",
                  risk_bound, loss_name.c_str());
    out += buf;
    std::snprintf(buf, sizeof(buf), "root-risk bound      : %.6g\n", root_bound);
    out += buf;
    if (gaussian_root_bound) {
        std::snprintf(buf, sizeof(buf), "gaussian root bound  : %.6g\n", *gaussian_root_bound);
        out += buf;
    }
    if (finite_sample_bound) {
        std::snprintf(buf, sizeof(buf), "finite-sample bound  : %.6g\n", *finite_sample_bound);
        out += buf;
    }
    return out;
}

}  // namespace complearn
