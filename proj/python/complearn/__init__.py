"""Learning from rate-compressed observations.

Thin python surface over the C++ core: conditional rate-distortion curves,
scalar quantizers with side information, quantized empirical risk
minimization, and the bound/inequality verifiers.
"""

from ._core import (  # noqa: F401
    BAPoint,
    Codec,
    CodecKind,
    DiscretizationSpec,
    EncodedBlock,
    FiniteJoint,
    HypothesisGrid,
    LossFunction,
    RDCurve,
    RDPoint,
    RegressionModel,
    UsageError,
    achievable_risk_bound,
    ba_rd_point,
    covering_log2_count,
    covering_number,
    decode,
    discretize_regression,
    empirical_risk,
    encode,
    entropy_bits,
    erm,
    finite_sample_risk_bound,
    gaussian_drf,
    gaussian_root_risk_bound,
    kl_and_variational,
    l2q_sq_distance,
    measure_distortion,
    mutual_information_bits,
    quantized_erm_chain_check,
    rd_curve,
    root_risk_bound,
    run_sweep_json,
    solve_at_rate,
    train_codec,
    true_risk_regression,
    verify_appendix,
    zero_rate_distortion,
)

__all__ = [name for name in dir() if not name.startswith("_")]
