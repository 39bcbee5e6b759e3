#include "complearn/converse_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "complearn/errors.hpp"

namespace complearn {

namespace {

using Key = std::vector<int>;

std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::vector<int> digits_of(std::size_t index, std::size_t base, int n) {
    std::vector<int> d(n);
    for (int i = n - 1; i >= 0; --i) {
        d[i] = static_cast<int>(index % base);
        index /= base;
    }
    return d;
}

std::size_t index_of(const std::vector<int>& digits, std::size_t base) {
    std::size_t idx = 0;
    for (int d : digits) idx = idx * base + static_cast<std::size_t>(d);
    return idx;
}

double map_entropy_bits(const std::map<Key, double>& groups) {
    double h = 0.0;
    for (const auto& [k, p] : groups)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

/// All maps X -> Y as per-x y-indices, lexicographic (x = 0 most significant).
std::vector<std::vector<int>> all_maps(std::size_t nx, std::size_t ny) {
    const std::size_t count = ipow(ny, static_cast<int>(nx));
    std::vector<std::vector<int>> maps;
    maps.reserve(count);
    for (std::size_t m = 0; m < count; ++m)
        maps.push_back(digits_of(m, ny, static_cast<int>(nx)));
    return maps;
}

// ERM over all maps X -> Y on the realized block (x^n, yhat^n), flattened as
// [x^n * yn_count + yhat^n]; ties resolve to the lowest map index.
std::vector<std::vector<int>> erm_learner_tables(const FiniteJoint& joint, int n,
                                                 const LossFunction& loss) {
    const std::size_t nx = joint.nx(), ny = joint.ny();
    const std::size_t xn_count = ipow(nx, n), yn_count = ipow(ny, n);
    const auto maps = all_maps(nx, ny);
    std::vector<std::vector<int>> table;
    table.reserve(xn_count * yn_count);
    for (std::size_t xi = 0; xi < xn_count; ++xi) {
        const auto xd = digits_of(xi, nx, n);
        for (std::size_t yi = 0; yi < yn_count; ++yi) {
            const auto yd = digits_of(yi, ny, n);
            std::size_t best = 0;
            double best_risk = 0.0;
            for (std::size_t m = 0; m < maps.size(); ++m) {
                double risk = 0.0;
                for (int i = 0; i < n; ++i)
                    risk += loss(joint.y_values()[static_cast<std::size_t>(maps[m][xd[i]])],
                                 joint.y_values()[static_cast<std::size_t>(yd[i])]);
                if (m == 0 || risk < best_risk) {
                    best_risk = risk;
                    best = m;
                }
            }
            table.push_back(maps[best]);
        }
    }
    return table;
}

}  // namespace

SchemeTables identity_scheme(const FiniteJoint& joint, int n, int index_count,
                             const LossFunction& loss) {
    const std::size_t nx = joint.nx(), ny = joint.ny();
    const std::size_t xn_count = ipow(nx, n), yn_count = ipow(ny, n);
    if (static_cast<std::size_t>(index_count) < yn_count)
        throw UsageError("identity_scheme: index_count must cover |Y|^n");
    SchemeTables s;
    s.index_count = index_count;
    s.encoder.assign(xn_count, std::vector<int>(yn_count));
    s.decoder.assign(xn_count, {});
    for (std::size_t xi = 0; xi < xn_count; ++xi) {
        for (std::size_t yi = 0; yi < yn_count; ++yi)
            s.encoder[xi][yi] = static_cast<int>(yi);
        s.decoder[xi].resize(index_count);
        for (int j = 0; j < index_count; ++j)
            s.decoder[xi][j] =
                digits_of(static_cast<std::size_t>(j) < yn_count ? j : 0, ny, n);
    }
    auto flat = erm_learner_tables(joint, n, loss);
    s.learner.assign(xn_count, {});
    for (std::size_t xi = 0; xi < xn_count; ++xi)
        s.learner[xi].assign(flat.begin() + static_cast<long>(xi * yn_count),
                             flat.begin() + static_cast<long>((xi + 1) * yn_count));
    return s;
}

SchemeTables constant_scheme(const FiniteJoint& joint, int n, const LossFunction& loss) {
    const std::size_t nx = joint.nx(), ny = joint.ny();
    const std::size_t xn_count = ipow(nx, n), yn_count = ipow(ny, n);
    SchemeTables s;
    s.index_count = 1;
    // best constant reproduction for each side symbol
    std::vector<int> best_y(nx, 0);
    for (std::size_t x = 0; x < nx; ++x) {
        const auto cond = joint.row_conditional(x);
        double best = 0.0;
        for (std::size_t r = 0; r < ny; ++r) {
            double e = 0.0;
            for (std::size_t y = 0; y < ny; ++y)
                e += cond[y] * loss(joint.y_values()[y], joint.y_values()[r]);
            if (r == 0 || e < best) {
                best = e;
                best_y[x] = static_cast<int>(r);
            }
        }
    }
    s.encoder.assign(xn_count, std::vector<int>(yn_count, 0));
    s.decoder.assign(xn_count, {});
    for (std::size_t xi = 0; xi < xn_count; ++xi) {
        const auto xd = digits_of(xi, nx, n);
        std::vector<int> rep(n);
        for (int i = 0; i < n; ++i) rep[i] = best_y[static_cast<std::size_t>(xd[i])];
        s.decoder[xi] = {rep};
    }
    auto flat = erm_learner_tables(joint, n, loss);
    s.learner.assign(xn_count, {});
    for (std::size_t xi = 0; xi < xn_count; ++xi)
        s.learner[xi].assign(flat.begin() + static_cast<long>(xi * yn_count),
                             flat.begin() + static_cast<long>((xi + 1) * yn_count));
    return s;
}

ConverseReport converse_chain_verify(const FiniteJoint& joint, const SchemeTables& scheme,
                                     int n, double rate_bits_per_sample,
                                     const LossFunction& loss, const RDCurve& curve,
                                     const std::vector<std::vector<int>>& hypotheses,
                                     const ConverseLimits& limits) {
    const std::size_t nx = joint.nx(), ny = joint.ny();
    if (nx > limits.max_alphabet || ny > limits.max_alphabet || n > limits.max_n || n < 1)
        throw UsageError("converse verifier: instance too large (|X|=" + std::to_string(nx) +
                         ", |Y|=" + std::to_string(ny) + ", n=" + std::to_string(n) +
                         "; cap |X|,|Y| <= " + std::to_string(limits.max_alphabet) +
                         ", n <= " + std::to_string(limits.max_n) + ")");
    const std::size_t xn_count = ipow(nx, n), yn_count = ipow(ny, n);
    if (scheme.encoder.size() != xn_count || scheme.decoder.size() != xn_count ||
        scheme.learner.size() != xn_count)
        throw UsageError("converse verifier: scheme tables do not match |X|^n");
    const double nr = n * rate_bits_per_sample;
    if (std::pow(2.0, nr) + 1e-9 < scheme.index_count)
        throw UsageError("converse verifier: index_count exceeds 2^(nR)");

    // exhaustive enumeration of (x^n, y^n); everything else is a function of it
    std::map<Key, double> g_x, g_xj, g_xyh, g_xy, g_xy_yh, g_x_yh_w, g_xy_yh_w;
    std::vector<std::map<Key, double>> g_prefix(n), g_prefix_y(n);  // per position i
    std::vector<std::map<Key, double>> g_xyw(n);                    // (x_i, y_i, w_i)
    std::vector<double> exp_loss_w(n, 0.0);

    const auto& yv = joint.y_values();
    for (std::size_t xi = 0; xi < xn_count; ++xi) {
        const auto xd = digits_of(xi, nx, n);
        for (std::size_t yi = 0; yi < yn_count; ++yi) {
            const auto yd = digits_of(yi, ny, n);
            double prob = 1.0;
            for (int i = 0; i < n; ++i)
                prob *= joint.p(static_cast<std::size_t>(xd[i]), static_cast<std::size_t>(yd[i]));
            if (prob <= 0.0) continue;

            const int j = scheme.encoder[xi][yi];
            if (j < 0 || j >= scheme.index_count)
                throw UsageError("converse verifier: encoder index out of range");
            const auto& yhat_d = scheme.decoder[xi][static_cast<std::size_t>(j)];
            const std::size_t yhi = index_of(yhat_d, ny);
            const auto& hyp = scheme.learner[xi][yhi];

            std::vector<int> wd(n);
            for (int i = 0; i < n; ++i) wd[i] = hyp[static_cast<std::size_t>(xd[i])];

            const int xik = static_cast<int>(xi);
            g_x[{xik}] += prob;
            g_xj[{xik, j}] += prob;
            g_xyh[{xik, static_cast<int>(yhi)}] += prob;
            g_xy[{xik, static_cast<int>(yi)}] += prob;
            g_xy_yh[{xik, static_cast<int>(yi), static_cast<int>(yhi)}] += prob;
            Key xw{xik, static_cast<int>(yhi)};
            for (int d : wd) xw.push_back(d);
            g_x_yh_w[xw] += prob;
            Key xyw = xw;
            xyw.push_back(static_cast<int>(yi));
            g_xy_yh_w[xyw] += prob;

            for (int i = 0; i < n; ++i) {
                Key prefix = xw;
                for (int t = 0; t < i; ++t) prefix.push_back(yd[t]);
                g_prefix[i][prefix] += prob;
                prefix.push_back(yd[i]);
                g_prefix_y[i][prefix] += prob;
                g_xyw[i][{xd[i], yd[i], wd[i]}] += prob;
                exp_loss_w[i] += prob * loss(yv[static_cast<std::size_t>(wd[i])],
                                             yv[static_cast<std::size_t>(yd[i])]);
            }
        }
    }

    const double h_x = map_entropy_bits(g_x);
    const double h_j_given_x = map_entropy_bits(g_xj) - h_x;
    const double h_yh_given_x = map_entropy_bits(g_xyh) - h_x;
    const double h_y_given_x = map_entropy_bits(g_xy) - h_x;
    const double h_y_given_x_yh = map_entropy_bits(g_xy_yh) - map_entropy_bits(g_xyh);
    const double h_y_given_x_yh_w = map_entropy_bits(g_xy_yh_w) - map_entropy_bits(g_x_yh_w);
    const double mi_yh_y_given_x = h_y_given_x - h_y_given_x_yh;

    // single-letter H(Y_i | X_i) from the instance joint (i.i.d. across i)
    double h_y1_given_x1 = 0.0;
    {
        std::map<Key, double> gx, gxy;
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y) {
                gx[{static_cast<int>(x)}] += joint.p(x, y);
                gxy[{static_cast<int>(x), static_cast<int>(y)}] += joint.p(x, y);
            }
        h_y1_given_x1 = map_entropy_bits(gxy) - map_entropy_bits(gx);
    }

    double per_i_chain_sum = 0.0, per_i_mi_sum = 0.0, per_i_rate_sum = 0.0;
    double mean_loss_w = 0.0;
    for (int i = 0; i < n; ++i) {
        const double h_cond =
            map_entropy_bits(g_prefix_y[i]) - map_entropy_bits(g_prefix[i]);
        per_i_chain_sum += h_y1_given_x1 - h_cond;

        std::map<Key, double> gxw, gxyw;
        for (const auto& [k, p] : g_xyw[i]) {
            gxw[{k[0], k[2]}] += p;
            gxyw[k] += p;
        }
        const double h_y_given_xw = map_entropy_bits(gxyw) - map_entropy_bits(gxw);
        per_i_mi_sum += h_y1_given_x1 - h_y_given_xw;
        per_i_rate_sum += curve.rate_lower_bound_at_distortion(exp_loss_w[i]);
        mean_loss_w += exp_loss_w[i];
    }
    mean_loss_w /= n;

    ConverseReport report;
    report.n = n;
    report.rate_bits_per_sample = rate_bits_per_sample;
    report.expected_block_loss = mean_loss_w;

    auto push = [&](const std::string& label, double lhs, double rhs, bool eq) {
        const double slack = eq ? -std::fabs(lhs - rhs) : lhs - rhs;
        report.chain.steps.push_back(ChainStep{label, lhs, rhs, slack, eq});
    };
    // slack convention here: lhs - rhs for each ">=" as the chain descends
    push("nR >= H(J|X^n)", nr, h_j_given_x, false);
    push("H(J|X^n) >= H(Yhat^n|X^n)", h_j_given_x, h_yh_given_x, false);
    push("H(Yhat^n|X^n) >= I(Yhat^n;Y^n|X^n)", h_yh_given_x, mi_yh_y_given_x, false);
    push("I(Yhat^n;Y^n|X^n) = H(Y^n|X^n) - H(Y^n|X^n,Yhat^n)", mi_yh_y_given_x,
         h_y_given_x - h_y_given_x_yh, true);
    push("H(Y^n|X^n,Yhat^n) = H(Y^n|X^n,Yhat^n,W^n)", h_y_given_x_yh, h_y_given_x_yh_w, true);
    push("... = sum_i [H(Y_i|X_i) - H(Y_i|X^n,Yhat^n,W^n,Y^<i)]",
         h_y_given_x - h_y_given_x_yh_w, per_i_chain_sum, true);
    push("sum_i [...] >= sum_i I(Y_i;W_i|X_i)", per_i_chain_sum, per_i_mi_sum, false);
    push("sum_i I(Y_i;W_i|X_i) >= sum_i R(E l(W_i,Y_i))", per_i_mi_sum, per_i_rate_sum, false);
    push("sum_i R(E l(W_i,Y_i)) >= n R(E l_n(W^n,Y^n))", per_i_rate_sum,
         n * curve.rate_lower_bound_at_distortion(mean_loss_w), false);

    report.chain.worst_slack = report.chain.steps.front().slack;
    for (const auto& s : report.chain.steps)
        report.chain.worst_slack = std::min(report.chain.worst_slack, s.slack);

    // rate-based lower bound vs best-in-class loss
    const auto maps = hypotheses.empty() ? all_maps(nx, ny) : hypotheses;
    double lstar = 0.0;
    for (std::size_t m = 0; m < maps.size(); ++m) {
        double risk = 0.0;
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y)
                risk += joint.p(x, y) *
                        loss(yv[static_cast<std::size_t>(maps[m][x])], yv[y]);
        if (m == 0 || risk < lstar) lstar = risk;
    }
    report.lstar = lstar;
    report.distortion_at_rate = curve.distortion_at_rate(rate_bits_per_sample);
    report.lstar_dominates = true;
    for (const RDPoint& p : curve.points) {
        report.curve_dominance.emplace_back(p.rate_bits, p.distortion);
        if (lstar < p.distortion - 1e-9) report.lstar_dominates = false;
    }
    return report;
}

ConverseReport converse_chain_verify_json(const nlohmann::json& instance,
                                          const ConverseLimits& limits) {
    const FiniteJoint joint = FiniteJoint::from_json(instance.at("joint"));
    const LossFunction loss = LossFunction::from_json(instance.at("loss"));
    const int n = instance.at("n").get<int>();
    const double rate = instance.at("rate_bits_per_sample").get<double>();
    const SchemeTables scheme = SchemeTables::from_json(instance.at("scheme"));
    const RDCurve curve = rd_curve(joint, loss);
    std::vector<std::vector<int>> hyps;
    if (instance.contains("hypotheses"))
        hyps = instance["hypotheses"].get<std::vector<std::vector<int>>>();
    return converse_chain_verify(joint, scheme, n, rate, loss, curve, hyps, limits);
}

nlohmann::json SchemeTables::to_json() const {
    nlohmann::json j;
    j["index_count"] = index_count;
    j["encoder"] = encoder;
    j["decoder"] = decoder;
    j["learner"] = learner;
    return j;
}

SchemeTables SchemeTables::from_json(const nlohmann::json& j) {
    SchemeTables s;
    s.index_count = j.at("index_count").get<int>();
    s.encoder = j.at("encoder").get<std::vector<std::vector<int>>>();
    s.decoder = j.at("decoder").get<std::vector<std::vector<std::vector<int>>>>();
    s.learner = j.at("learner").get<std::vector<std::vector<std::vector<int>>>>();
    return s;
}

nlohmann::json ConverseReport::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["rate_bits_per_sample"] = rate_bits_per_sample;
    j["chain"] = chain.to_json();
    j["lstar"] = lstar;
    j["distortion_at_rate"] = distortion_at_rate;
    j["expected_block_loss"] = expected_block_loss;
    j["lstar_dominates"] = lstar_dominates;
    j["curve_dominance"] = nlohmann::json::array();
    for (const auto& [r, d] : curve_dominance)
        j["curve_dominance"].push_back({{"rate", r}, {"distortion", d}});
    return j;
}

std::string ConverseReport::to_text() const {
    std::string out = chain.to_text();
    char buf[256];
    std::snprintf(buf, sizeof(buf), "L* (best map)        : %.8g\n", lstar);
    out += buf;
    std::snprintf(buf, sizeof(buf), "D(R) at R=%.4g       : %.8g\n", rate_bits_per_sample,
                  distortion_at_rate);
    out += buf;
    std::snprintf(buf, sizeof(buf), "E l_n(W^n,Y^n)       : %.8g\n", expected_block_loss);
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "L* >= D(R) at every sampled rate: %s (the rate-based lower bound is the "
                  "weaker one)\n",
                  lstar_dominates ? "yes" : "NO");
    out += buf;
    return out;
}

}  // namespace complearn
