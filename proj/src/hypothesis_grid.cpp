#include "complearn/hypothesis_grid.hpp"

#include <algorithm>
#include <cmath>

#include "complearn/errors.hpp"

namespace complearn {

namespace {

// Depth-first enumeration extending only jump-admissible prefixes, so the
// work is proportional to the emitted members (plus the cap overflow, which
// throws). Leftmost cell is the most significant digit: lexicographic order.
std::vector<std::vector<int>> enumerate_members(int cells, int n_levels, int max_jump,
                                                std::uint64_t size_cap) {
    std::vector<std::vector<int>> out;
    std::vector<int> digits(cells, 0);
    auto emit = [&]() {
        out.push_back(digits);
        if (out.size() > size_cap)
            throw UsageError("hypothesis grid enumeration exceeds size cap " +
                             std::to_string(size_cap));
    };
    auto dfs = [&](auto&& self, int cell) -> void {
        if (cell == cells) {
            emit();
            return;
        }
        const int lo = cell == 0 || max_jump < 0 ? 0 : std::max(0, digits[cell - 1] - max_jump);
        const int hi = cell == 0 || max_jump < 0 ? n_levels - 1
                                                 : std::min(n_levels - 1,
                                                            digits[cell - 1] + max_jump);
        for (int level = lo; level <= hi; ++level) {
            digits[cell] = level;
            self(self, cell + 1);
        }
    };
    dfs(dfs, 0);
    return out;
}

}  // namespace

HypothesisGrid HypothesisGrid::uniform_levels(double lo, double hi, int cells, int q,
                                              int max_jump, std::uint64_t size_cap) {
    if (q < 1) throw UsageError("HypothesisGrid: q must be >= 1");
    std::vector<double> levels(q + 1);
    for (int k = 0; k <= q; ++k) levels[k] = static_cast<double>(k) / q;
    return with_levels(lo, hi, cells, std::move(levels), max_jump, 0.0, size_cap);
}

HypothesisGrid HypothesisGrid::with_levels(double lo, double hi, int cells,
                                           std::vector<double> levels, int max_jump,
                                           double epsilon, std::uint64_t size_cap) {
    if (cells < 1) throw UsageError("HypothesisGrid: cells must be >= 1");
    if (levels.empty()) throw UsageError("HypothesisGrid: empty level grid");
    for (double v : levels)
        if (v < 0.0 || v > 1.0) throw UsageError("HypothesisGrid: levels must lie in [0, 1]");
    HypothesisGrid g;
    g.lo_ = lo;
    g.hi_ = hi;
    g.cells_ = cells;
    g.max_jump_ = max_jump;
    g.epsilon_ = epsilon;
    g.levels_ = std::move(levels);
    g.members_ = enumerate_members(cells, static_cast<int>(g.levels_.size()), max_jump, size_cap);
    return g;
}

HypothesisGrid HypothesisGrid::explicit_members(double lo, double hi,
                                                std::vector<double> levels,
                                                std::vector<std::vector<int>> members,
                                                double epsilon) {
    if (members.empty()) throw UsageError("HypothesisGrid: empty member list");
    HypothesisGrid g;
    g.lo_ = lo;
    g.hi_ = hi;
    g.cells_ = static_cast<int>(members.front().size());
    g.epsilon_ = epsilon;
    g.levels_ = std::move(levels);
    for (const auto& m : members) {
        if (static_cast<int>(m.size()) != g.cells_)
            throw UsageError("HypothesisGrid: ragged member list");
        for (int idx : m)
            if (idx < 0 || idx >= static_cast<int>(g.levels_.size()))
                throw UsageError("HypothesisGrid: level index out of range");
    }
    g.members_ = std::move(members);
    return g;
}

int HypothesisGrid::cell_of(double x) const {
    const double t = (x - lo_) / (hi_ - lo_);
    int c = static_cast<int>(std::floor(t * cells_));
    return std::clamp(c, 0, cells_ - 1);
}

double HypothesisGrid::value(std::size_t member, double x) const {
    return cell_value(member, cell_of(x));
}

long long HypothesisGrid::find_member(const std::vector<double>& cell_values) const {
    if (static_cast<int>(cell_values.size()) != cells_) return -1;
    for (std::size_t m = 0; m < members_.size(); ++m) {
        bool match = true;
        for (int c = 0; c < cells_ && match; ++c)
            match = cell_value(m, c) == cell_values[static_cast<std::size_t>(c)];
        if (match) return static_cast<long long>(m);
    }
    return -1;
}

RegressionModel HypothesisGrid::as_regression(std::size_t member, double sigma) const {
    RegressionModel m;
    m.sigma = sigma;
    m.domain_lo = lo_;
    m.domain_hi = hi_;
    const double w = (hi_ - lo_) / cells_;
    for (int c = 0; c < cells_; ++c) {
        const double v = cell_value(member, c);
        m.breakpoints.emplace_back(lo_ + c * w, v);
        m.breakpoints.emplace_back(lo_ + (c + 1) * w, v);
    }
    m.validate();
    return m;
}

nlohmann::json HypothesisGrid::to_json() const {
    nlohmann::json j;
    j["domain"] = {lo_, hi_};
    j["cells"] = cells_;
    j["levels"] = levels_;
    j["epsilon"] = epsilon_;
    if (max_jump_ >= 0) j["max_jump"] = max_jump_;
    j["members"] = members_;
    return j;
}

HypothesisGrid HypothesisGrid::from_json(const nlohmann::json& j) {
    auto g = explicit_members(j.at("domain").at(0).get<double>(),
                              j.at("domain").at(1).get<double>(),
                              j.at("levels").get<std::vector<double>>(),
                              j.at("members").get<std::vector<std::vector<int>>>(),
                              j.value("epsilon", 0.0));
    return g;
}

}  // namespace complearn
