#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "complearn/regression_model.hpp"

namespace complearn {

/// A finite class of piecewise-constant candidate predictors on a uniform
/// partition of [lo, hi] into `cells` cells. Each function picks one value
/// from a shared level grid per cell; an optional jump bound limits how far
/// the level index may move between adjacent cells.
///
/// The enumeration order is fixed (odometer over cell level indices, leftmost
/// cell most significant); ERM tie-breaking depends on it.
class HypothesisGrid {
public:
    /// Empty grid; fill via the named constructors before use.
    HypothesisGrid() = default;

    /// Levels {0, 1/q, ..., 1}.
    static HypothesisGrid uniform_levels(double lo, double hi, int cells, int q,
                                         int max_jump = -1,
                                         std::uint64_t size_cap = 2'000'000);
    /// Caller-supplied level values.
    static HypothesisGrid with_levels(double lo, double hi, int cells,
                                      std::vector<double> levels, int max_jump = -1,
                                      double epsilon = 0.0,
                                      std::uint64_t size_cap = 2'000'000);
    /// Explicit member list (level index per cell, one row per function).
    static HypothesisGrid explicit_members(double lo, double hi,
                                           std::vector<double> levels,
                                           std::vector<std::vector<int>> members,
                                           double epsilon = 0.0);

    std::size_t size() const { return members_.size(); }
    int cells() const { return cells_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<double>& levels() const { return levels_; }
    const std::vector<std::vector<int>>& members() const { return members_; }
    int max_jump() const { return max_jump_; }

    /// Net radius this grid certifies in the L2(Q) norm (0 when not built as a net).
    double epsilon() const { return epsilon_; }
    void set_epsilon(double e) { epsilon_ = e; }

    int cell_of(double x) const;
    double value(std::size_t member, double x) const;
    double cell_value(std::size_t member, int cell) const {
        return levels_[static_cast<std::size_t>(members_[member][cell])];
    }

    /// Index of the member matching the given per-cell values exactly, or -1.
    long long find_member(const std::vector<double>& cell_values) const;

    /// Piecewise-linear regression function equal to this member (staircase).
    RegressionModel as_regression(std::size_t member, double sigma) const;

    nlohmann::json to_json() const;
    static HypothesisGrid from_json(const nlohmann::json& j);

private:

    double lo_ = 0.0, hi_ = 1.0;
    int cells_ = 1;
    int max_jump_ = -1;
    double epsilon_ = 0.0;
    std::vector<double> levels_;
    std::vector<std::vector<int>> members_;
};

}  // namespace complearn
