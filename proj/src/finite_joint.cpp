#include "complearn/finite_joint.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "complearn/errors.hpp"

namespace complearn {

namespace {

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

FiniteJoint::FiniteJoint(std::vector<std::string> x_labels, std::vector<double> y_values,
                         std::vector<double> pmf_row_major)
    : x_labels_(std::move(x_labels)),
      y_values_(std::move(y_values)),
      pmf_(std::move(pmf_row_major)) {
    validate();
}

FiniteJoint FiniteJoint::with_numeric_x(std::vector<double> x_values,
                                        std::vector<double> y_values,
                                        std::vector<double> pmf_row_major) {
    std::vector<std::string> labels;
    labels.reserve(x_values.size());
    for (double v : x_values) labels.push_back(format_value(v));
    FiniteJoint j(std::move(labels), std::move(y_values), std::move(pmf_row_major));
    j.x_values_ = std::move(x_values);
    return j;
}

void FiniteJoint::validate() const {
    if (x_labels_.empty() || y_values_.empty())
        throw UsageError("FiniteJoint: alphabets must be nonempty");
    if (pmf_.size() != nx() * ny())
        throw UsageError("FiniteJoint: pmf size does not match alphabet sizes");
    double total = 0.0;
    for (double v : pmf_) {
        if (!(v >= 0.0)) throw UsageError("FiniteJoint: pmf entries must be nonnegative");
        total += v;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw UsageError("FiniteJoint: pmf must sum to 1 (got " + std::to_string(total) + ")");
}

std::vector<double> FiniteJoint::x_marginal() const {
    std::vector<double> m(nx(), 0.0);
    for (std::size_t i = 0; i < nx(); ++i)
        for (std::size_t j = 0; j < ny(); ++j) m[i] += p(i, j);
    return m;
}

std::vector<double> FiniteJoint::y_marginal() const {
    std::vector<double> m(ny(), 0.0);
    for (std::size_t i = 0; i < nx(); ++i)
        for (std::size_t j = 0; j < ny(); ++j) m[j] += p(i, j);
    return m;
}

std::vector<double> FiniteJoint::row_conditional(std::size_t i) const {
    std::vector<double> cond(ny(), 0.0);
    double mass = 0.0;
    for (std::size_t j = 0; j < ny(); ++j) mass += p(i, j);
    if (mass <= 0.0) return cond;
    for (std::size_t j = 0; j < ny(); ++j) cond[j] = p(i, j) / mass;
    return cond;
}

FiniteJoint FiniteJoint::pooled() const {
    return FiniteJoint({"*"}, y_values_, y_marginal());
}

bool FiniteJoint::same_alphabets(const FiniteJoint& other) const {
    return x_labels_ == other.x_labels_ && y_values_ == other.y_values_;
}

nlohmann::json FiniteJoint::to_json() const {
    nlohmann::json j;
    if (!x_values_.empty()) {
        j["x_alphabet"] = x_values_;
    } else {
        j["x_alphabet"] = x_labels_;
    }
    j["y_alphabet"] = y_values_;
    j["pmf"] = pmf_;
    return j;
}

FiniteJoint FiniteJoint::from_json(const nlohmann::json& j) {
    if (!j.contains("x_alphabet") || !j.contains("y_alphabet") || !j.contains("pmf"))
        throw UsageError("FiniteJoint JSON needs x_alphabet, y_alphabet and pmf");
    std::vector<double> y = j.at("y_alphabet").get<std::vector<double>>();
    std::vector<double> pmf = j.at("pmf").get<std::vector<double>>();
    const auto& xs = j.at("x_alphabet");
    bool numeric = !xs.empty() && xs.front().is_number();
    if (numeric) {
        return with_numeric_x(xs.get<std::vector<double>>(), std::move(y), std::move(pmf));
    }
    return FiniteJoint(xs.get<std::vector<std::string>>(), std::move(y), std::move(pmf));
}

ExtendedJoint::ExtendedJoint(std::size_t nx, std::size_t ny, std::size_t nyhat,
                             std::vector<double> pmf)
    : nx_(nx), ny_(ny), nyhat_(nyhat), pmf_(std::move(pmf)) {
    if (pmf_.size() != nx_ * ny_ * nyhat_)
        throw UsageError("ExtendedJoint: pmf size does not match dimensions");
    double total = 0.0;
    for (double v : pmf_) {
        if (!(v >= 0.0)) throw UsageError("ExtendedJoint: pmf entries must be nonnegative");
        total += v;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw UsageError("ExtendedJoint: pmf must sum to 1");
}

ExtendedJoint ExtendedJoint::from_channels(const FiniteJoint& base,
                                           const std::vector<std::vector<double>>& channels,
                                           std::size_t nyhat) {
    if (channels.size() != base.nx())
        throw UsageError("ExtendedJoint: one channel per side symbol required");
    std::vector<double> pmf(base.nx() * base.ny() * nyhat, 0.0);
    for (std::size_t i = 0; i < base.nx(); ++i) {
        if (channels[i].size() != base.ny() * nyhat)
            throw UsageError("ExtendedJoint: channel dimensions must be ny * nyhat");
        for (std::size_t j = 0; j < base.ny(); ++j)
            for (std::size_t k = 0; k < nyhat; ++k)
                pmf[(i * base.ny() + j) * nyhat + k] =
                    base.p(i, j) * channels[i][j * nyhat + k];
    }
    return ExtendedJoint(base.nx(), base.ny(), nyhat, std::move(pmf));
}

}  // namespace complearn
