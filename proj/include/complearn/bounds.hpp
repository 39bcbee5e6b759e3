#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "complearn/loss.hpp"

namespace complearn {

/// Achievable excess-risk bound L* + 2 eta(D) at worst-case distortion D.
/// Every excess-risk slack Delta >= 2 eta(D) is achievable at the same rate.
double achievable_risk_bound(double lstar, const LossFunction& loss, double sup_drf);

/// Root-risk bound L*^(1/r) + 2 D^(1/r) for losses that are r-th powers of a
/// metric.
double root_risk_bound(double lstar, double metric_power, double sup_drf);

/// Gaussian-regression specialization sigma (1 + 2^(-R+1)): the root-risk
/// bound with r = 2, L* = sigma^2 and D = sigma^2 2^(-2R).
double gaussian_root_risk_bound(double sigma, double rate);

/// Finite-sample form L* + 2 eta(l_n) + C' / sqrt(n) with a calibrated C'.
double finite_sample_risk_bound(double measured_ln, const LossFunction& loss, double lstar,
                                double c_prime, std::size_t n);

struct BoundReport {
    double rate = 0.0;
    double sup_drf = 0.0;
    double lstar = 0.0;
    double risk_bound = 0.0;       // L* + 2 eta(sup_drf)
    double root_bound = 0.0;       // L*^(1/r) + 2 sup_drf^(1/r)
    std::optional<double> gaussian_root_bound;  // only for the Gaussian family
    std::optional<double> finite_sample_bound;
    std::string loss_name;

    nlohmann::json to_json() const;
    std::string to_text() const;
};

BoundReport make_bound_report(double rate, double sup_drf, double lstar,
                              const LossFunction& loss,
                              std::optional<double> gaussian_sigma = std::nullopt,
                              std::optional<double> measured_ln = std::nullopt,
                              double c_prime = 0.0, std::size_t n = 0);

}  // namespace complearn
