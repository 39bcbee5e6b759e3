#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "complearn/hypothesis_grid.hpp"
#include "complearn/loss.hpp"

namespace complearn {

enum class CodecKind { Uniform, LloydMax, ConditionalLloydMax, PilotShift };

CodecKind codec_kind_from_name(const std::string& name);
std::string codec_kind_name(CodecKind kind);

struct CodecConfig {
    int x_bins = 1;                           // side-information bins for conditional kinds
    const HypothesisGrid* pilot_grid = nullptr;  // required for pilot-shift
    int lm_max_iters = 1000;
    double lm_tol = 1e-8;  // relative distortion change
};

/// Fixed-rate scalar quantizer, optionally conditioned on binned side
/// information. The pilot-shift kind fits a hypothesis to the raw block at
/// the encoder, transmits its index once, and quantizes residuals.
///
/// Configured rates must satisfy 2^R = integer codebook size; the achieved
/// rate adds amortized header bits on top of log2(size).
struct Codec {
    CodecKind kind = CodecKind::Uniform;
    double rate_config = 0.0;
    int codebook_size = 1;
    double header_bits = 0.0;
    LossFunction loss = LossFunction::squared();

    std::vector<std::vector<double>> levels;  // one codebook per bin; size 1 for global kinds
    std::vector<double> bin_edges;            // x_bins + 1 edges; empty for global kinds
    std::vector<bool> bin_fallback;           // empty bins inheriting the global codebook

    // pilot-shift payload
    int hypothesis_index = -1;
    double pilot_lo = 0.0, pilot_hi = 1.0;
    std::vector<double> pilot_cell_values;

    std::vector<std::vector<double>> train_traces;  // per-iteration training distortion

    int bin_of(double x) const;
    double pilot_value(double x) const;
    double achieved_rate(std::size_t n) const;
    int bits_per_index() const;

    nlohmann::json to_json() const;
    static Codec from_json(const nlohmann::json& j);
};

struct EncodedBlock {
    std::uint32_t n = 0;
    std::vector<std::uint32_t> indices;
    std::optional<std::uint32_t> header;  // present iff pilot-shift

    /// Layout: u32 n, u8 bits-per-index, big-endian packed indices,
    /// optional trailing u32 header. Bit-exact round trip.
    std::vector<std::uint8_t> serialize(int bits_per_index) const;
    static EncodedBlock deserialize(std::span<const std::uint8_t> bytes);
};

Codec train_codec(CodecKind kind, std::span<const double> xs, std::span<const double> ys,
                  double rate, const LossFunction& loss, const CodecConfig& config = {});

/// Nearest-codeword assignment under the loss, conditioned on the x-bin
/// (residuals against the pilot fit for pilot-shift). Ties pick the lower index.
EncodedBlock encode(const Codec& codec, std::span<const double> xs,
                    std::span<const double> ys);

/// Reconstruction from side information and the index stream only.
std::vector<double> decode(const Codec& codec, std::span<const double> xs,
                           const EncodedBlock& block);

/// Normalized cumulative loss n^{-1} sum l(y_i, yhat_i) through the codec.
double measure_distortion(const Codec& codec, std::span<const double> xs,
                          std::span<const double> ys, const LossFunction& loss);

}  // namespace complearn
