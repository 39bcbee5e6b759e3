#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

namespace complearn {

/// Joint pmf over a finite side-information alphabet X and a finite output
/// alphabet Y with numeric symbol values. All information measures, the
/// rate-distortion solver and the converse verifier operate on this type.
///
/// Invariants (enforced at construction): entries nonnegative, total mass 1
/// within 1e-12, both marginals sum to 1 within 1e-12.
class FiniteJoint {
public:
    FiniteJoint(std::vector<std::string> x_labels, std::vector<double> y_values,
                std::vector<double> pmf_row_major);

    /// X symbols carrying numeric values; labels are generated from the values.
    static FiniteJoint with_numeric_x(std::vector<double> x_values,
                                      std::vector<double> y_values,
                                      std::vector<double> pmf_row_major);

    std::size_t nx() const { return x_labels_.size(); }
    std::size_t ny() const { return y_values_.size(); }

    double p(std::size_t i, std::size_t j) const { return pmf_[i * ny() + j]; }
    const std::vector<double>& pmf() const { return pmf_; }

    const std::vector<std::string>& x_labels() const { return x_labels_; }
    const std::vector<double>& y_values() const { return y_values_; }
    /// Numeric values attached to X symbols; empty when the labels are abstract.
    const std::vector<double>& x_values() const { return x_values_; }

    std::vector<double> x_marginal() const;
    std::vector<double> y_marginal() const;
    /// p(y | x = i); all-zero when the row has no mass.
    std::vector<double> row_conditional(std::size_t i) const;

    /// Same joint with the side information collapsed to one symbol.
    FiniteJoint pooled() const;

    /// True when both x alphabets (labels) and y alphabets (values) coincide.
    bool same_alphabets(const FiniteJoint& other) const;

    nlohmann::json to_json() const;
    static FiniteJoint from_json(const nlohmann::json& j);

private:
    void validate() const;

    std::vector<std::string> x_labels_;
    std::vector<double> x_values_;  // may be empty
    std::vector<double> y_values_;
    std::vector<double> pmf_;  // row-major nx * ny
};

/// Joint pmf over (X, Y, Yhat), used for conditional mutual informations
/// between an output and its reproduction.
class ExtendedJoint {
public:
    ExtendedJoint(std::size_t nx, std::size_t ny, std::size_t nyhat,
                  std::vector<double> pmf);

    /// Attach per-x channels q(yhat | y, x) to a base joint.
    /// channels[i] is row-major ny * nyhat.
    static ExtendedJoint from_channels(const FiniteJoint& base,
                                       const std::vector<std::vector<double>>& channels,
                                       std::size_t nyhat);

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    std::size_t nyhat() const { return nyhat_; }
    double p(std::size_t i, std::size_t j, std::size_t k) const {
        return pmf_[(i * ny_ + j) * nyhat_ + k];
    }
    const std::vector<double>& pmf() const { return pmf_; }

private:
    std::size_t nx_, ny_, nyhat_;
    std::vector<double> pmf_;
};

}  // namespace complearn
