#include "complearn/loss.hpp"

#include <algorithm>
#include <cmath>

#include "complearn/errors.hpp"
#include "complearn/rng.hpp"

namespace complearn {

LossFunction::LossFunction(Kind kind, double p, double r) : kind_(kind), p_(p), r_(r) {}

LossFunction LossFunction::squared() { return LossFunction(Kind::Squared, 2.0, 2.0); }
LossFunction LossFunction::absolute() { return LossFunction(Kind::Absolute, 1.0, 1.0); }
LossFunction LossFunction::hamming() { return LossFunction(Kind::Hamming, 1.0, 1.0); }

LossFunction LossFunction::p_power(double p) {
    if (!(p >= 1.0)) throw UsageError("p_power loss requires p >= 1");
    return LossFunction(Kind::PPower, p, p);
}

LossFunction LossFunction::from_name(const std::string& name, double p) {
    if (name == "squared") return squared();
    if (name == "absolute") return absolute();
    if (name == "hamming") return hamming();
    if (name == "p_power") return p_power(p);
    throw UsageError("unknown loss '" + name + "'");
}

double LossFunction::operator()(double y, double u) const {
    switch (kind_) {
        case Kind::Squared: {
            const double d = y - u;
            return d * d;
        }
        case Kind::Absolute:
            return std::fabs(y - u);
        case Kind::PPower:
            return std::pow(std::fabs(y - u), p_);
        case Kind::Hamming:
            return y == u ? 0.0 : 1.0;
    }
    return 0.0;
}

double LossFunction::eta(double t) const {
    if (t < 0.0) throw UsageError("eta is defined on nonnegative arguments");
    switch (kind_) {
        case Kind::Absolute:
        case Kind::Hamming:
            return t;
        case Kind::Squared:
            return 2.0 * std::sqrt(t);
        case Kind::PPower:
            return p_ * std::pow(t, 1.0 / p_);
    }
    return t;
}

std::string LossFunction::name() const {
    switch (kind_) {
        case Kind::Squared:
            return "squared";
        case Kind::Absolute:
            return "absolute";
        case Kind::PPower:
            return "p_power";
        case Kind::Hamming:
            return "hamming";
    }
    return "?";
}

nlohmann::json LossFunction::to_json() const {
    nlohmann::json j;
    j["kind"] = name();
    if (kind_ == Kind::PPower) j["p"] = p_;
    return j;
}

LossFunction LossFunction::from_json(const nlohmann::json& j) {
    return from_name(j.at("kind").get<std::string>(), j.value("p", 2.0));
}

double eta_concavity_violation(const LossFunction& loss, double t_max, int samples) {
    Rng rng(0x6574615f636f6eULL);
    double worst = -1.0;
    for (int i = 0; i < samples; ++i) {
        const double a = rng.uniform(0.0, t_max);
        const double b = rng.uniform(0.0, t_max);
        const double mid = loss.eta(0.5 * (a + b));
        const double avg = 0.5 * (loss.eta(a) + loss.eta(b));
        worst = std::max(worst, avg - mid);
    }
    return worst;
}

}  // namespace complearn
