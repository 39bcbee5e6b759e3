#pragma once

#include <cstdint>

#include "complearn/hypothesis_grid.hpp"
#include "complearn/regression_model.hpp"

namespace complearn {

enum class CoveringNorm { Sup, L2Q };

/// Constructive covering of the Lipschitz(L) functions [lo, hi] -> [0, 1]:
/// a piecewise-constant net whose cell width and level spacing split the
/// epsilon budget, with a jump bound pruning sequences no Lipschitz function
/// discretizes to. The count is an upper bound on the true covering number;
/// the net doubles as an ERM grid.
struct CoveringResult {
    std::uint64_t count;
    double log2_count;
    HypothesisGrid net;
};

CoveringResult covering_number(double lipschitz, double lo, double hi, double epsilon,
                               CoveringNorm norm = CoveringNorm::Sup,
                               std::uint64_t size_cap = 2'000'000);

/// log2 of the same construction's count, computed without materializing the
/// net; usable far past the size cap (entropy-growth diagnostics).
double covering_log2_count(double lipschitz, double lo, double hi, double epsilon,
                           CoveringNorm norm = CoveringNorm::Sup);

/// An eps-net of regression functions induces a net of the noise-model family
/// in total variation with radius eps / sigma.
struct FamilyNetCertificate {
    double function_radius;  // in L2(Q), from the grid
    double sigma;
    double dv_radius;  // certified radius for the induced density family
};

FamilyNetCertificate family_net_from_function_net(const HypothesisGrid& grid, double sigma);

/// Spot check of the certificate's underlying inequality on sampled member
/// pairs: discretized d_V(P_f, P_g) <= ||f - g||_{2,Q} / sigma + slack.
/// Returns the largest violation found (expected <= discretization slack).
double family_net_spot_check(const HypothesisGrid& grid, double sigma,
                             const DiscretizationSpec& spec, int pairs,
                             std::uint64_t seed);

}  // namespace complearn
