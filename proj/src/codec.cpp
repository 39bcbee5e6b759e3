#include "complearn/codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "complearn/erm.hpp"
#include "complearn/errors.hpp"

namespace complearn {

namespace {

int resolve_codebook_size(double rate) {
    if (rate < 0.0) throw UsageError("codec rate must be >= 0 (2^R >= 1)");
    const double size = std::pow(2.0, rate);
    const double rounded = std::llround(size);
    if (std::fabs(size - rounded) > 1e-9)
        throw UsageError("codec rates must make 2^R an integer codebook size (got R = " +
                         std::to_string(rate) + ")");
    return static_cast<int>(rounded);
}

std::size_t nearest_level(const std::vector<double>& levels, double v,
                          const LossFunction& loss) {
    std::size_t best = 0;
    double best_cost = loss(v, levels[0]);
    for (std::size_t k = 1; k < levels.size(); ++k) {
        const double c = loss(v, levels[k]);
        if (c < best_cost) {  // strict: ties keep the lower index
            best_cost = c;
            best = k;
        }
    }
    return best;
}

// Loss-aware centroid of a sorted cell of samples.
double cell_centroid(const std::vector<double>& cell, const LossFunction& loss,
                     double fallback) {
    if (cell.empty()) return fallback;
    switch (loss.kind()) {
        case LossFunction::Kind::Squared: {
            double s = 0.0;
            for (double v : cell) s += v;
            return s / static_cast<double>(cell.size());
        }
        case LossFunction::Kind::Absolute:
            return cell[(cell.size() - 1) / 2];  // lower median
        case LossFunction::Kind::Hamming: {
            // mode, lowest value on ties; cell is sorted
            double best = cell.front();
            std::size_t best_run = 0, run = 1;
            for (std::size_t i = 1; i <= cell.size(); ++i) {
                if (i < cell.size() && cell[i] == cell[i - 1]) {
                    ++run;
                    continue;
                }
                if (run > best_run) {
                    best_run = run;
                    best = cell[i - 1];
                }
                run = 1;
            }
            return best;
        }
        case LossFunction::Kind::PPower: {
            // convex in the level for p >= 1; golden-section search
            double a = cell.front(), b = cell.back();
            auto cost = [&](double c) {
                double s = 0.0;
                for (double v : cell) s += loss(v, c);
                return s;
            };
            const double phi = 0.61803398874989484820458683436564;
            double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
            double f1 = cost(x1), f2 = cost(x2);
            for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::fabs(b)); ++it) {
                if (f1 < f2) {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - phi * (b - a);
                    f1 = cost(x1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + phi * (b - a);
                    f2 = cost(x2);
                }
            }
            return 0.5 * (a + b);
        }
    }
    return fallback;
}

// Lloyd-Max on a sample: quantile init (or a caller-provided codebook),
// alternate nearest assignment and loss-aware centroids until the training
// distortion stalls. The returned trace is the per-iteration distortion.
std::vector<double> lloyd_max(std::span<const double> ys, int size, const LossFunction& loss,
                              const CodecConfig& cfg, std::vector<double> init,
                              std::vector<double>* trace_out) {
    std::vector<double> sorted(ys.begin(), ys.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<double> levels = std::move(init);
    if (levels.empty()) {
        levels.resize(size);
        for (int k = 0; k < size; ++k) {
            const std::size_t idx = static_cast<std::size_t>(
                std::min<double>(sorted.size() - 1.0,
                                 std::floor((k + 0.5) / size * sorted.size())));
            levels[k] = sorted[idx];
        }
    }

    std::vector<double> trace;
    std::vector<std::vector<double>> cells(levels.size());
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.lm_max_iters; ++it) {
        for (auto& c : cells) c.clear();
        double dist = 0.0;
        for (double y : sorted) {
            const std::size_t k = nearest_level(levels, y, loss);
            cells[k].push_back(y);
            dist += loss(y, levels[k]);
        }
        dist /= static_cast<double>(sorted.size());
        trace.push_back(dist);
        if (std::fabs(prev - dist) <= cfg.lm_tol * std::max(dist, 1e-300)) break;
        prev = dist;
        for (std::size_t k = 0; k < levels.size(); ++k) {
            const double cand = cell_centroid(cells[k], loss, levels[k]);
            // keep the old level unless the candidate is at least as good
            double old_cost = 0.0, new_cost = 0.0;
            for (double v : cells[k]) {
                old_cost += loss(v, levels[k]);
                new_cost += loss(v, cand);
            }
            if (new_cost <= old_cost) levels[k] = cand;
        }
    }
    if (trace_out) *trace_out = std::move(trace);
    return levels;
}

std::vector<double> uniform_levels(std::span<const double> ys, int size) {
    double lo = ys[0], hi = ys[0];
    for (double y : ys) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
    }
    std::vector<double> levels(size);
    const double w = (hi - lo) / size;
    for (int k = 0; k < size; ++k) levels[k] = lo + (k + 0.5) * w;
    if (size == 1) levels[0] = 0.5 * (lo + hi);
    return levels;
}

}  // namespace

CodecKind codec_kind_from_name(const std::string& name) {
    if (name == "uniform") return CodecKind::Uniform;
    if (name == "lloyd-max") return CodecKind::LloydMax;
    if (name == "conditional-lloyd-max") return CodecKind::ConditionalLloydMax;
    if (name == "pilot-shift") return CodecKind::PilotShift;
    throw UsageError("unknown codec kind '" + name + "'");
}

std::string codec_kind_name(CodecKind kind) {
    switch (kind) {
        case CodecKind::Uniform:
            return "uniform";
        case CodecKind::LloydMax:
            return "lloyd-max";
        case CodecKind::ConditionalLloydMax:
            return "conditional-lloyd-max";
        case CodecKind::PilotShift:
            return "pilot-shift";
    }
    return "?";
}

int Codec::bin_of(double x) const {
    if (bin_edges.empty()) return 0;
    const int bins = static_cast<int>(bin_edges.size()) - 1;
    const double lo = bin_edges.front(), hi = bin_edges.back();
    if (hi <= lo) return 0;
    const int b = static_cast<int>(std::floor((x - lo) / (hi - lo) * bins));
    return std::clamp(b, 0, bins - 1);
}

double Codec::pilot_value(double x) const {
    const int cells = static_cast<int>(pilot_cell_values.size());
    if (cells == 0) return 0.0;
    const double t = (x - pilot_lo) / (pilot_hi - pilot_lo);
    const int c = std::clamp(static_cast<int>(std::floor(t * cells)), 0, cells - 1);
    return pilot_cell_values[static_cast<std::size_t>(c)];
}

double Codec::achieved_rate(std::size_t n) const {
    return std::log2(static_cast<double>(codebook_size)) +
           header_bits / static_cast<double>(n);
}

int Codec::bits_per_index() const {
    if (codebook_size <= 1) return 0;
    int bits = 0;
    while ((1 << bits) < codebook_size) ++bits;
    return bits;
}

Codec train_codec(CodecKind kind, std::span<const double> xs, std::span<const double> ys,
                  double rate, const LossFunction& loss, const CodecConfig& config) {
    if (xs.empty() || xs.size() != ys.size())
        throw UsageError("train_codec: need equal-length nonempty samples");
    Codec codec;
    codec.kind = kind;
    codec.rate_config = rate;
    codec.codebook_size = resolve_codebook_size(rate);
    codec.loss = loss;

    switch (kind) {
        case CodecKind::Uniform:
            codec.levels = {uniform_levels(ys, codec.codebook_size)};
            break;
        case CodecKind::LloydMax: {
            std::vector<double> trace;
            codec.levels = {lloyd_max(ys, codec.codebook_size, loss, config, {}, &trace)};
            codec.train_traces.push_back(std::move(trace));
            break;
        }
        case CodecKind::ConditionalLloydMax: {
            if (config.x_bins < 1) throw UsageError("conditional codec needs x_bins >= 1");
            double lo = xs[0], hi = xs[0];
            for (double x : xs) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
            codec.bin_edges.resize(config.x_bins + 1);
            for (int b = 0; b <= config.x_bins; ++b)
                codec.bin_edges[b] = lo + (hi - lo) * b / config.x_bins;

            // global codebook first; per-bin runs start from it, so each bin
            // can only improve on the global training distortion
            std::vector<double> gtrace;
            const std::vector<double> global =
                lloyd_max(ys, codec.codebook_size, loss, config, {}, &gtrace);
            codec.train_traces.push_back(std::move(gtrace));

            std::vector<std::vector<double>> bin_ys(config.x_bins);
            for (std::size_t i = 0; i < xs.size(); ++i)
                bin_ys[static_cast<std::size_t>(codec.bin_of(xs[i]))].push_back(ys[i]);
            codec.bin_fallback.assign(config.x_bins, false);
            for (int b = 0; b < config.x_bins; ++b) {
                if (bin_ys[b].empty()) {
                    codec.levels.push_back(global);
                    codec.bin_fallback[b] = true;
                    continue;
                }
                std::vector<double> trace;
                codec.levels.push_back(
                    lloyd_max(bin_ys[b], codec.codebook_size, loss, config, global, &trace));
                codec.train_traces.push_back(std::move(trace));
            }
            break;
        }
        case CodecKind::PilotShift: {
            if (!config.pilot_grid) throw UsageError("pilot-shift codec needs a hypothesis grid");
            const HypothesisGrid& grid = *config.pilot_grid;
            const ErmResult fit = erm(grid, xs, ys, loss);
            codec.hypothesis_index = static_cast<int>(fit.index);
            codec.pilot_lo = grid.lo();
            codec.pilot_hi = grid.hi();
            codec.pilot_cell_values.resize(grid.cells());
            for (int c = 0; c < grid.cells(); ++c)
                codec.pilot_cell_values[c] = grid.cell_value(fit.index, c);
            codec.header_bits =
                grid.size() <= 1 ? 0.0 : std::ceil(std::log2(static_cast<double>(grid.size())));

            std::vector<double> residuals(ys.size());
            for (std::size_t i = 0; i < ys.size(); ++i)
                residuals[i] = ys[i] - codec.pilot_value(xs[i]);
            std::vector<double> trace;
            codec.levels = {
                lloyd_max(residuals, codec.codebook_size, loss, config, {}, &trace)};
            codec.train_traces.push_back(std::move(trace));
            break;
        }
    }
    return codec;
}

EncodedBlock encode(const Codec& codec, std::span<const double> xs,
                    std::span<const double> ys) {
    if (xs.size() != ys.size()) throw UsageError("encode: block lengths differ");
    if (codec.levels.empty()) throw UsageError("encode: codec is untrained");
    EncodedBlock block;
    block.n = static_cast<std::uint32_t>(xs.size());
    block.indices.resize(xs.size());
    const bool pilot = codec.kind == CodecKind::PilotShift;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double v = pilot ? ys[i] - codec.pilot_value(xs[i]) : ys[i];
        const auto& levels =
            codec.levels[codec.bin_edges.empty() ? 0u
                                                 : static_cast<std::size_t>(codec.bin_of(xs[i]))];
        block.indices[i] = static_cast<std::uint32_t>(nearest_level(levels, v, codec.loss));
    }
    if (pilot) block.header = static_cast<std::uint32_t>(codec.hypothesis_index);
    return block;
}

std::vector<double> decode(const Codec& codec, std::span<const double> xs,
                           const EncodedBlock& block) {
    if (xs.size() != block.indices.size()) throw UsageError("decode: block length mismatch");
    const bool pilot = codec.kind == CodecKind::PilotShift;
    if (pilot && !block.header) throw UsageError("decode: pilot-shift block lacks a header");
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto& levels =
            codec.levels[codec.bin_edges.empty() ? 0u
                                                 : static_cast<std::size_t>(codec.bin_of(xs[i]))];
        const std::uint32_t idx = block.indices[i];
        if (idx >= levels.size()) throw UsageError("decode: index out of codebook range");
        out[i] = levels[idx] + (pilot ? codec.pilot_value(xs[i]) : 0.0);
    }
    return out;
}

double measure_distortion(const Codec& codec, std::span<const double> xs,
                          std::span<const double> ys, const LossFunction& loss) {
    const std::vector<double> yhat = decode(codec, xs, encode(codec, xs, ys));
    double acc = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) acc += loss(ys[i], yhat[i]);
    return acc / static_cast<double>(ys.size());
}

std::vector<std::uint8_t> EncodedBlock::serialize(int bits_per_index) const {
    std::vector<std::uint8_t> out;
    auto push_u32 = [&](std::uint32_t v) {
        out.push_back(static_cast<std::uint8_t>(v >> 24));
        out.push_back(static_cast<std::uint8_t>(v >> 16));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
        out.push_back(static_cast<std::uint8_t>(v));
    };
    push_u32(n);
    out.push_back(static_cast<std::uint8_t>(bits_per_index));
    std::uint8_t cur = 0;
    int filled = 0;
    for (std::uint32_t idx : indices) {
        for (int b = bits_per_index - 1; b >= 0; --b) {
            cur = static_cast<std::uint8_t>((cur << 1) | ((idx >> b) & 1u));
            if (++filled == 8) {
                out.push_back(cur);
                cur = 0;
                filled = 0;
            }
        }
    }
    if (filled > 0) out.push_back(static_cast<std::uint8_t>(cur << (8 - filled)));
    if (header) push_u32(*header);
    return out;
}

EncodedBlock EncodedBlock::deserialize(std::span<const std::uint8_t> bytes) {
    auto read_u32 = [&](std::size_t at) {
        return (static_cast<std::uint32_t>(bytes[at]) << 24) |
               (static_cast<std::uint32_t>(bytes[at + 1]) << 16) |
               (static_cast<std::uint32_t>(bytes[at + 2]) << 8) |
               static_cast<std::uint32_t>(bytes[at + 3]);
    };
    if (bytes.size() < 5) throw UsageError("EncodedBlock: truncated stream");
    EncodedBlock block;
    block.n = read_u32(0);
    const int bits = bytes[4];
    const std::size_t payload = (static_cast<std::size_t>(block.n) * bits + 7) / 8;
    if (bytes.size() < 5 + payload) throw UsageError("EncodedBlock: truncated index payload");

    block.indices.assign(block.n, 0);
    std::size_t bitpos = 0;
    for (std::uint32_t i = 0; i < block.n; ++i) {
        std::uint32_t v = 0;
        for (int b = 0; b < bits; ++b, ++bitpos)
            v = (v << 1) | ((bytes[5 + bitpos / 8] >> (7 - bitpos % 8)) & 1u);
        block.indices[i] = v;
    }
    const std::size_t rest = bytes.size() - 5 - payload;
    if (rest == 4)
        block.header = read_u32(5 + payload);
    else if (rest != 0)
        throw UsageError("EncodedBlock: trailing bytes are not a header");
    return block;
}

nlohmann::json Codec::to_json() const {
    nlohmann::json j;
    j["kind"] = codec_kind_name(kind);
    j["rate"] = rate_config;
    j["codebook_size"] = codebook_size;
    j["header_bits"] = header_bits;
    j["loss"] = loss.to_json();
    j["levels"] = levels;
    if (!bin_edges.empty()) j["bin_edges"] = bin_edges;
    if (!bin_fallback.empty()) j["bin_fallback"] = std::vector<int>(bin_fallback.begin(),
                                                                    bin_fallback.end());
    if (kind == CodecKind::PilotShift) {
        j["hypothesis_index"] = hypothesis_index;
        j["pilot"] = {{"domain", {pilot_lo, pilot_hi}}, {"cell_values", pilot_cell_values}};
    }
    return j;
}

Codec Codec::from_json(const nlohmann::json& j) {
    Codec c;
    c.kind = codec_kind_from_name(j.at("kind").get<std::string>());
    c.rate_config = j.at("rate").get<double>();
    c.codebook_size = j.at("codebook_size").get<int>();
    c.header_bits = j.value("header_bits", 0.0);
    c.loss = LossFunction::from_json(j.at("loss"));
    c.levels = j.at("levels").get<std::vector<std::vector<double>>>();
    if (j.contains("bin_edges")) c.bin_edges = j["bin_edges"].get<std::vector<double>>();
    if (j.contains("bin_fallback")) {
        for (int v : j["bin_fallback"].get<std::vector<int>>()) c.bin_fallback.push_back(v != 0);
    }
    if (c.kind == CodecKind::PilotShift) {
        c.hypothesis_index = j.at("hypothesis_index").get<int>();
        c.pilot_lo = j.at("pilot").at("domain").at(0).get<double>();
        c.pilot_hi = j.at("pilot").at("domain").at(1).get<double>();
        c.pilot_cell_values = j.at("pilot").at("cell_values").get<std::vector<double>>();
    }
    return c;
}

}  // namespace complearn
