#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "complearn/chain_check.hpp"
#include "complearn/finite_joint.hpp"
#include "complearn/loss.hpp"
#include "complearn/rd_solver.hpp"

namespace complearn {

/// Explicit encoder/decoder/learner tables for a block scheme on tiny finite
/// instances. Tuples over the alphabets are indexed with the first position
/// most significant (index = sum digits[i] * base^(n-1-i)).
struct SchemeTables {
    int index_count = 1;  // J ranges over [0, index_count)
    std::vector<std::vector<int>> encoder;               // [x^n][y^n] -> J
    std::vector<std::vector<std::vector<int>>> decoder;  // [x^n][J] -> n y-indices
    std::vector<std::vector<std::vector<int>>> learner;  // [x^n][yhat^n] -> y-index per x symbol

    nlohmann::json to_json() const;
    static SchemeTables from_json(const nlohmann::json& j);
};

/// Lossless per-sample scheme (index_count must cover |Y|^n) with an ERM
/// learner over all maps X -> Y under `loss`.
SchemeTables identity_scheme(const FiniteJoint& joint, int n, int index_count,
                             const LossFunction& loss);
/// Zero-bit scheme: the decoder emits the best constant reproduction per side
/// symbol; the learner is again ERM over all maps.
SchemeTables constant_scheme(const FiniteJoint& joint, int n, const LossFunction& loss);

struct ConverseLimits {
    std::size_t max_alphabet = 4;
    int max_n = 3;
};

struct ConverseReport {
    ChainReport chain;
    double rate_bits_per_sample = 0.0;
    int n = 0;
    double lstar = 0.0;                // best expected loss over the hypothesis maps
    double distortion_at_rate = 0.0;   // D(R) read off the curve
    double expected_block_loss = 0.0;  // E l_n(W^n, Y^n)
    /// (rate, distortion) at every sampled curve point, each checked against
    /// lstar >= distortion.
    std::vector<std::pair<double, double>> curve_dominance;
    bool lstar_dominates = false;  // lstar >= D(R) at every sampled point

    nlohmann::json to_json() const;
    std::string to_text() const;
};

/// Exhaustively enumerates the scheme's joint distribution over
/// (X^n, Y^n, J, Yhat^n, W^n) and evaluates every step of the information
/// chain nR >= H(J|X^n) >= ... >= n R(E l_n), reporting the slack of each
/// inequality. Curve-based steps use the supporting-line lower bound of the
/// sampled curve so a converged solver can never produce a false violation.
/// Also compares the rate-based lower bound D(R) with the best-in-class loss.
///
/// `hypotheses` optionally restricts the comparison class (defaults to all
/// maps X -> Y). Instances beyond `limits` are refused with a size report.
ConverseReport converse_chain_verify(const FiniteJoint& joint, const SchemeTables& scheme,
                                     int n, double rate_bits_per_sample,
                                     const LossFunction& loss, const RDCurve& curve,
                                     const std::vector<std::vector<int>>& hypotheses = {},
                                     const ConverseLimits& limits = {});

/// Full instance (joint + scheme + loss + rate) from JSON; builds the curve
/// with the default slope grid and runs the verifier.
ConverseReport converse_chain_verify_json(const nlohmann::json& instance,
                                          const ConverseLimits& limits = {});

}  // namespace complearn
