#pragma once

#include <string>

#include "json.hpp"

namespace complearn {

/// Per-sample loss l(y, u) together with its concave modulus eta, which
/// bounds |l(f(x), u) - l(f(x), u')| by eta(l(u, u')).
///
/// Kinds:
///   squared   - |y - u|^2, a metric power with r = 2; eta(t) = 2 sqrt(t)
///               (the p-power form with p = 2, valid for arguments in [0, 1])
///   absolute  - |y - u|, a metric; eta(t) = t
///   p_power   - |y - u|^p on [0, 1], p >= 1; eta(t) = p t^(1/p)
///   hamming   - 0/1 mismatch, a metric; eta(t) = t
class LossFunction {
public:
    enum class Kind { Squared, Absolute, PPower, Hamming };

    static LossFunction squared();
    static LossFunction absolute();
    static LossFunction p_power(double p);
    static LossFunction hamming();
    static LossFunction from_name(const std::string& name, double p = 2.0);

    Kind kind() const { return kind_; }
    /// Exponent r when the loss is the r-th power of a metric.
    double metric_power() const { return r_; }
    double p() const { return p_; }
    /// Delta of the uniform moment condition E[l(Y, y0)^(1+delta)] < inf.
    double moment_delta() const { return moment_delta_; }
    double reference_point() const { return y0_; }

    double operator()(double y, double u) const;
    /// eta(t); negative t is a usage error.
    double eta(double t) const;

    bool is_metric() const { return kind_ == Kind::Absolute || kind_ == Kind::Hamming; }
    std::string name() const;

    nlohmann::json to_json() const;
    static LossFunction from_json(const nlohmann::json& j);

private:
    LossFunction(Kind kind, double p, double r);

    Kind kind_;
    double p_;
    double r_;
    double moment_delta_ = 1.0;
    double y0_ = 0.0;
};

/// Largest midpoint-concavity violation of eta over sampled points in
/// [0, t_max]; a concave modulus keeps this <= 0 up to rounding.
double eta_concavity_violation(const LossFunction& loss, double t_max = 4.0,
                               int samples = 2000);

}  // namespace complearn
