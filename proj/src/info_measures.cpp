#include "complearn/info_measures.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <type_traits>

#include "complearn/errors.hpp"

namespace complearn {

namespace {

constexpr double kLog2E = 1.4426950408889634073599246810019;

unsigned parse_var_list(const std::string& text) {
    unsigned mask = 0;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        // allow bare concatenations like "XY"
        std::string t;
        for (char c : token)
            if (!std::isspace(static_cast<unsigned char>(c))) t += c;
        if (t.empty()) continue;
        std::size_t pos = 0;
        while (pos < t.size()) {
            if (t.compare(pos, 4, "Yhat") == 0) {
                mask |= VarYhat;
                pos += 4;
            } else if (t[pos] == 'X') {
                mask |= VarX;
                pos += 1;
            } else if (t[pos] == 'Y') {
                mask |= VarY;
                pos += 1;
            } else {
                throw UsageError("unknown variable in selector: '" + t.substr(pos) + "'");
            }
        }
    }
    return mask;
}

// Entropy in bits of weights aggregated by a key function over tensor cells.
template <typename NextCell>
double grouped_entropy_bits(NextCell&& next) {
    std::map<std::vector<std::size_t>, double> groups;
    std::vector<std::size_t> key;
    double prob;
    while (next(key, prob)) {
        if (prob > 0.0) groups[key] += prob;
    }
    double h = 0.0;
    for (const auto& [k, p] : groups) h -= p * std::log2(p);
    return h;
}

std::vector<std::size_t> selected_axes(unsigned mask, bool has_yhat) {
    if (mask == 0) throw UsageError("empty selector");
    if ((mask & VarYhat) && !has_yhat)
        throw UsageError("selector references Yhat but the joint has no third variable");
    std::vector<std::size_t> axes;
    if (mask & VarX) axes.push_back(0);
    if (mask & VarY) axes.push_back(1);
    if (mask & VarYhat) axes.push_back(2);
    return axes;
}

template <typename Joint>
double marginal_entropy(const Joint& dist, unsigned mask, bool has_yhat) {
    auto axes = selected_axes(mask, has_yhat);
    std::size_t dims[3] = {dist.nx(), dist.ny(), 1};
    if constexpr (std::is_same_v<Joint, ExtendedJoint>) dims[2] = dist.nyhat();
    std::size_t idx[3] = {0, 0, 0};
    std::size_t flat = 0;
    const auto& pmf = dist.pmf();
    auto next = [&](std::vector<std::size_t>& key, double& prob) {
        if (flat >= pmf.size()) return false;
        key.clear();
        for (std::size_t a : axes) key.push_back(idx[a]);
        prob = pmf[flat];
        ++flat;
        for (int a = 2; a >= 0; --a) {
            if (++idx[a] < dims[a]) break;
            idx[a] = 0;
        }
        return true;
    };
    return grouped_entropy_bits(next);
}

template <typename Joint>
double entropy_impl(const Joint& dist, Selector sel, bool has_yhat) {
    if (sel.vars & sel.given) throw UsageError("selector conditions a variable on itself");
    double h = marginal_entropy(dist, sel.vars | sel.given, has_yhat);
    if (sel.given != 0) h -= marginal_entropy(dist, sel.given, has_yhat);
    // absorb -0.0 and summation noise on deterministic joints
    return h < 0.0 && h > -1e-12 ? 0.0 : h;
}

}  // namespace

Selector parse_selector(const std::string& text) {
    Selector sel;
    auto bar = text.find('|');
    sel.vars = parse_var_list(text.substr(0, bar));
    if (bar != std::string::npos) sel.given = parse_var_list(text.substr(bar + 1));
    if (sel.vars == 0) throw UsageError("selector has no target variable: '" + text + "'");
    return sel;
}

double entropy_bits(const FiniteJoint& dist, Selector sel) {
    return entropy_impl(dist, sel, /*has_yhat=*/false);
}

double entropy_bits(const FiniteJoint& dist, const std::string& sel) {
    return entropy_bits(dist, parse_selector(sel));
}

double entropy_bits(const ExtendedJoint& dist, Selector sel) {
    return entropy_impl(dist, sel, /*has_yhat=*/true);
}

double entropy_bits(const ExtendedJoint& dist, const std::string& sel) {
    return entropy_bits(dist, parse_selector(sel));
}

double mutual_information_bits(const FiniteJoint& dist) {
    return entropy_bits(dist, Selector{VarY, 0}) - entropy_bits(dist, Selector{VarY, VarX});
}

double mutual_information_bits(const ExtendedJoint& dist, bool given_x) {
    if (given_x) {
        return entropy_bits(dist, Selector{VarY, VarX}) -
               entropy_bits(dist, Selector{VarY, VarX | VarYhat});
    }
    return entropy_bits(dist, Selector{VarY, 0}) - entropy_bits(dist, Selector{VarY, VarYhat});
}

double entropy_bits_of_pmf(const std::vector<double>& p) {
    double total = 0.0;
    for (double v : p) total += v;
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= (v / total) * std::log2(v / total);
    return h;
}

Divergence kl_and_variational(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw UsageError("kl_and_variational: size mismatch");
    double kl = 0.0;
    double dv = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        dv += std::fabs(p[i] - q[i]);
        if (p[i] > 0.0) {
            if (q[i] <= 0.0) {
                kl = std::numeric_limits<double>::infinity();
            } else if (kl != std::numeric_limits<double>::infinity()) {
                kl += p[i] * std::log(p[i] / q[i]);
            }
        }
    }
    if (kl < 0.0 && kl > -1e-15) kl = 0.0;
    return Divergence{kl, kl * kLog2E, dv};
}

Divergence kl_and_variational(const FiniteJoint& p, const FiniteJoint& q) {
    if (!p.same_alphabets(q))
        throw UsageError("kl_and_variational: joints must share the same alphabets");
    return kl_and_variational(p.pmf(), q.pmf());
}

}  // namespace complearn
