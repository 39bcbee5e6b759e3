#pragma once

#include <string>
#include <vector>

#include "complearn/finite_joint.hpp"

namespace complearn {

/// Variable bits for entropy selectors.
enum Var : unsigned { VarX = 1u, VarY = 2u, VarYhat = 4u };

/// H(vars | given). `given` may be 0 for an unconditional entropy.
struct Selector {
    unsigned vars = 0;
    unsigned given = 0;
};

/// Parse selectors like "Y", "X,Y", "Y|X", "Yhat|X,Y".
Selector parse_selector(const std::string& text);

/// Entropy in bits. Referencing Yhat on a two-variable joint is a usage error.
double entropy_bits(const FiniteJoint& dist, Selector sel);
double entropy_bits(const FiniteJoint& dist, const std::string& sel);
double entropy_bits(const ExtendedJoint& dist, Selector sel);
double entropy_bits(const ExtendedJoint& dist, const std::string& sel);

/// I(X;Y) of a two-variable joint, in bits.
double mutual_information_bits(const FiniteJoint& dist);
/// I(Y;Yhat) or, with `given_x`, I(Y;Yhat|X), in bits.
double mutual_information_bits(const ExtendedJoint& dist, bool given_x);

/// Entropy in bits of a raw (not necessarily normalized) weight vector.
double entropy_bits_of_pmf(const std::vector<double>& p);

struct Divergence {
    double kl_nats;  // +inf when q fails absolute continuity w.r.t. p
    double kl_bits;
    double dv;  // total variation, = sum |p - q| on finite alphabets, in [0, 2]
};

Divergence kl_and_variational(const std::vector<double>& p, const std::vector<double>& q);
/// Alphabets must match exactly.
Divergence kl_and_variational(const FiniteJoint& p, const FiniteJoint& q);

}  // namespace complearn
