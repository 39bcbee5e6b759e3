#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "complearn/erm.hpp"
#include "complearn/hypothesis_grid.hpp"
#include "complearn/loss.hpp"

namespace complearn {

struct ChainStep {
    std::string label;
    double lhs;
    double rhs;
    double slack;  // rhs - lhs for each "<=" as written; |diff| tolerance for "="
    bool is_equality;
};

struct ChainReport {
    std::vector<ChainStep> steps;
    double worst_slack = 0.0;

    nlohmann::json to_json() const;
    std::string to_text() const;
    bool all_hold(double tol) const { return worst_slack >= -tol; }
};

/// Per-realization check that ERM on the reconstructed block transfers to the
/// raw block: the sup deviation of empirical risks across the grid is within
/// eta(l_n), and the three-step estimate
///   (a) Lhat_raw(fhat) <= Lhat_rec(fhat) + eta(l_n)
///   (b) Lhat_rec(fhat)  = Lhat*_rec
///   (c) Lhat_raw(fhat) <= Lhat*_raw + 2 eta(l_n)
/// holds exactly on this block. `fhat_index` must be the ERM minimizer on the
/// reconstructed data (usage error otherwise, unless `allow_non_argmin` is set
/// for falsification runs).
ChainReport quantized_erm_chain_check(std::span<const double> xs, std::span<const double> ys,
                                      std::span<const double> yhats,
                                      const HypothesisGrid& grid, const LossFunction& loss,
                                      std::size_t fhat_index, bool allow_non_argmin = false);

}  // namespace complearn
