#include "complearn/rd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "complearn/errors.hpp"

namespace complearn {

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;

struct PerSourceResult {
    double distortion = 0.0;
    double rate_bits = 0.0;
    bool converged = true;
    bool descent_ok = true;
    int iterations = 0;
    double dual_nats = 0.0;  // sum_y p(y) ln sum_r q(r) exp(-s d(y, r))
    std::vector<double> channel;   // ny * nrep
    std::vector<double> marginal;  // nrep
};

// Alternating minimization of I(Y; Yhat) + lambda E d on a single source.
// Slope is in bits per loss unit; internally the exponent uses nats.
PerSourceResult ba_single_source(const std::vector<double>& p,
                                 const std::vector<double>& dist_matrix,  // ny * nrep
                                 std::size_t nrep, double slope, const BAOptions& opts,
                                 const std::vector<double>* warm_marginal) {
    const std::size_t ny = p.size();
    const double s = slope * kLn2;

    PerSourceResult out;
    out.channel.assign(ny * nrep, 0.0);
    out.marginal.assign(nrep, 1.0 / static_cast<double>(nrep));
    if (warm_marginal && warm_marginal->size() == nrep) {
        // keep every reproduction reachable when reusing a nearby solution
        for (std::size_t r = 0; r < nrep; ++r)
            out.marginal[r] = 0.99 * (*warm_marginal)[r] + 0.01 / static_cast<double>(nrep);
    }

    // exp(-s * d) with a per-row shift so the largest entry is 1
    std::vector<double> gain(ny * nrep);
    std::vector<double> row_shift(ny, 0.0);
    for (std::size_t y = 0; y < ny; ++y) {
        double dmin = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < nrep; ++r) dmin = std::min(dmin, dist_matrix[y * nrep + r]);
        row_shift[y] = dmin;
        for (std::size_t r = 0; r < nrep; ++r)
            gain[y * nrep + r] = std::exp(-s * (dist_matrix[y * nrep + r] - dmin));
    }

    std::vector<double> q = out.marginal;
    std::vector<double> next_q(nrep);
    double prev_obj = std::numeric_limits<double>::infinity();
    out.converged = false;
    for (int it = 0; it < opts.max_iters; ++it) {
        std::fill(next_q.begin(), next_q.end(), 0.0);
        double dist_acc = 0.0;
        for (std::size_t y = 0; y < ny; ++y) {
            if (p[y] <= 0.0) continue;
            const double* g = &gain[y * nrep];
            double z = 0.0;
            for (std::size_t r = 0; r < nrep; ++r) z += q[r] * g[r];
            double* w = &out.channel[y * nrep];
            const double py = p[y];
            for (std::size_t r = 0; r < nrep; ++r) {
                const double c = q[r] * g[r] / z;
                w[r] = c;
                next_q[r] += py * c;
                dist_acc += py * c * dist_matrix[y * nrep + r];
            }
        }
        double info_nats = 0.0;
        for (std::size_t y = 0; y < ny; ++y) {
            if (p[y] <= 0.0) continue;
            const double* w = &out.channel[y * nrep];
            for (std::size_t r = 0; r < nrep; ++r)
                if (w[r] > 0.0 && next_q[r] > 0.0)
                    info_nats += p[y] * w[r] * std::log(w[r] / next_q[r]);
        }
        const double rate = std::max(0.0, info_nats / kLn2);
        const double obj = rate + slope * dist_acc;
        if (obj > prev_obj + 1e-9 * std::max(1.0, std::fabs(prev_obj))) out.descent_ok = false;

        out.distortion = dist_acc;
        out.rate_bits = rate;
        out.iterations = it + 1;
        q = next_q;
        if (std::fabs(prev_obj - obj) <= opts.tol * std::max(1.0, std::fabs(obj))) {
            out.converged = true;
            break;
        }
        prev_obj = obj;
    }
    out.marginal = q;
    // dual value of the final marginal (ln Z needs the row shift undone)
    for (std::size_t y = 0; y < ny; ++y) {
        if (p[y] <= 0.0) continue;
        double z = 0.0;
        for (std::size_t r = 0; r < nrep; ++r) z += q[r] * gain[y * nrep + r];
        out.dual_nats += p[y] * (std::log(z) - s * row_shift[y]);
    }
    return out;
}

std::vector<double> build_dist_matrix(const std::vector<double>& y_values,
                                      const std::vector<double>& rep,
                                      const LossFunction& loss) {
    std::vector<double> d(y_values.size() * rep.size());
    for (std::size_t y = 0; y < y_values.size(); ++y)
        for (std::size_t r = 0; r < rep.size(); ++r) {
            const double v = loss(y_values[y], rep[r]);
            if (!std::isfinite(v))
                throw UsageError("rd solver: loss must be finite on the alphabets");
            d[y * rep.size() + r] = v;
        }
    return d;
}

}  // namespace

BAPoint ba_rd_point(const FiniteJoint& dist, const LossFunction& loss, double slope,
                    const BAOptions& opts, const std::vector<std::vector<double>>* warm) {
    if (!(slope > 0.0)) throw UsageError("ba_rd_point: slope must be positive");
    const std::vector<double> rep = opts.reproduction.empty() ? dist.y_values() : opts.reproduction;
    const std::vector<double> dmat = build_dist_matrix(dist.y_values(), rep, loss);
    const std::vector<double> px = dist.x_marginal();

    BAPoint point;
    point.slope = slope;
    point.reproduction = rep;
    point.channels.resize(dist.nx());
    point.output_marginals.resize(dist.nx());
    for (std::size_t i = 0; i < dist.nx(); ++i) {
        if (px[i] <= 0.0) {
            point.channels[i].assign(dist.ny() * rep.size(), 0.0);
            point.output_marginals[i].assign(rep.size(), 0.0);
            continue;
        }
        const std::vector<double> cond = dist.row_conditional(i);
        const std::vector<double>* warm_i =
            warm && i < warm->size() ? &(*warm)[i] : nullptr;
        const PerSourceResult r = ba_single_source(cond, dmat, rep.size(), slope, opts, warm_i);
        point.distortion += px[i] * r.distortion;
        point.rate_bits += px[i] * r.rate_bits;
        point.dual_intercept_bits -= px[i] * r.dual_nats / kLn2;
        point.converged = point.converged && r.converged;
        point.descent_ok = point.descent_ok && r.descent_ok;
        point.iterations = std::max(point.iterations, r.iterations);
        point.channels[i] = r.channel;
        point.output_marginals[i] = r.marginal;
    }
    return point;
}

double zero_rate_distortion(const FiniteJoint& dist, const LossFunction& loss,
                            const std::vector<double>& reproduction) {
    const std::vector<double> rep = reproduction.empty() ? dist.y_values() : reproduction;
    const std::vector<double> dmat = build_dist_matrix(dist.y_values(), rep, loss);
    const std::vector<double> px = dist.x_marginal();
    double total = 0.0;
    for (std::size_t i = 0; i < dist.nx(); ++i) {
        if (px[i] <= 0.0) continue;
        const std::vector<double> cond = dist.row_conditional(i);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < rep.size(); ++r) {
            double e = 0.0;
            for (std::size_t y = 0; y < dist.ny(); ++y) e += cond[y] * dmat[y * rep.size() + r];
            best = std::min(best, e);
        }
        total += px[i] * best;
    }
    return total;
}

std::vector<double> default_slope_grid(const FiniteJoint& dist, const LossFunction& loss,
                                       int count) {
    const double scale = std::max(zero_rate_distortion(dist, loss), 1e-12);
    std::vector<double> slopes(count);
    for (int k = 0; k < count; ++k) {
        const double t = count == 1 ? 0.5 : static_cast<double>(k) / (count - 1);
        slopes[k] = std::pow(10.0, -3.0 + 6.0 * t) / scale;
    }
    return slopes;
}

RDCurve rd_curve(const FiniteJoint& dist, const LossFunction& loss,
                 std::vector<double> slopes, const BAOptions& opts) {
    RDCurve curve;
    curve.loss_id = loss.name();
    curve.source_id = "finite_joint[" + std::to_string(dist.nx()) + "x" +
                      std::to_string(dist.ny()) + "]";

    const double d_max = zero_rate_distortion(dist, loss, opts.reproduction);
    if (d_max <= 1e-14) {
        curve.points.push_back(RDPoint{0.0, 0.0, 1.0, true});
        return curve;
    }

    if (slopes.empty()) slopes = default_slope_grid(dist, loss);
    std::sort(slopes.begin(), slopes.end());
    if (slopes.front() <= 0.0) throw UsageError("rd_curve: slopes must be positive");

    std::vector<RDPoint> raw;
    raw.push_back(RDPoint{d_max, 0.0, slopes.front() * 0.5, true});
    std::vector<std::vector<double>> warm;
    for (double lam : slopes) {
        const BAPoint p = ba_rd_point(dist, loss, lam, opts, warm.empty() ? nullptr : &warm);
        warm = p.output_marginals;
        // near-zero slopes can stall above the zero-rate optimum; such points
        // are dominated by the analytic endpoint and never on the envelope
        if (p.distortion > d_max - 1e-12) continue;
        raw.push_back(RDPoint{p.distortion, std::max(0.0, p.rate_bits), lam, p.converged,
                              p.dual_intercept_bits});
    }

    // the true curve is convex, so solver noise is removed by keeping the
    // lower convex envelope of the solved points (distortion ascending)
    std::sort(raw.begin(), raw.end(), [](const RDPoint& a, const RDPoint& b) {
        if (a.distortion != b.distortion) return a.distortion < b.distortion;
        return a.rate_bits < b.rate_bits;
    });
    std::vector<RDPoint> dedup;
    for (const RDPoint& p : raw) {
        if (!dedup.empty() && p.distortion <= dedup.back().distortion + 1e-12) {
            if (p.rate_bits < dedup.back().rate_bits) dedup.back() = p;
            continue;
        }
        dedup.push_back(p);
    }
    std::vector<RDPoint> hull;
    auto cross = [](const RDPoint& o, const RDPoint& a, const RDPoint& b) {
        return (a.distortion - o.distortion) * (b.rate_bits - o.rate_bits) -
               (a.rate_bits - o.rate_bits) * (b.distortion - o.distortion);
    };
    for (const RDPoint& p : dedup) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0.0)
            hull.pop_back();
        hull.push_back(p);
    }
    curve.points.assign(hull.rbegin(), hull.rend());
    return curve;
}

BAPoint solve_at_rate(const FiniteJoint& dist, const LossFunction& loss, double target_rate,
                      double rate_tol, const BAOptions& opts) {
    if (target_rate < 0.0) throw UsageError("solve_at_rate: rate must be >= 0");
    const double scale = std::max(zero_rate_distortion(dist, loss, opts.reproduction), 1e-12);
    double lo = 1e-6 / scale, hi = 1e6 / scale;

    BAPoint best;
    double best_gap = std::numeric_limits<double>::infinity();
    // Bisection on the slope; the achieved rate is nondecreasing in it.
    // Warm-start each solve from the previous output marginals.
    std::vector<std::vector<double>> warm;
    for (int it = 0; it < 60; ++it) {
        const double lam = std::sqrt(lo * hi);
        BAPoint p = ba_rd_point(dist, loss, lam, opts, warm.empty() ? nullptr : &warm);
        warm = p.output_marginals;
        const double rate = p.rate_bits;
        const double gap = std::fabs(rate - target_rate);
        if (gap < best_gap) {
            best_gap = gap;
            best = std::move(p);
        }
        if (best_gap <= rate_tol) break;
        if (rate < target_rate)
            lo = lam;
        else
            hi = lam;
    }
    return best;
}

double gaussian_drf(double sigma, double rate) {
    if (!(sigma > 0.0)) throw UsageError("gaussian_drf: sigma must be positive");
    if (rate < 0.0) throw UsageError("gaussian_drf: rate must be >= 0");
    return sigma * sigma * std::pow(2.0, -2.0 * rate);
}

SupDrfResult sup_drf(const std::vector<FiniteJoint>& family, const LossFunction& loss,
                     double rate, const BAOptions& opts) {
    if (family.empty()) throw UsageError("sup_drf: family must be nonempty");
    if (rate < 0.0) throw UsageError("sup_drf: rate must be >= 0");
    SupDrfResult res{-std::numeric_limits<double>::infinity(), 0, false};
    for (std::size_t m = 0; m < family.size(); ++m) {
        const BAPoint p = solve_at_rate(family[m], loss, rate, 1e-6, opts);
        res.flagged = res.flagged || !p.converged;
        double d = p.distortion;
        if (rate <= 1e-12) d = zero_rate_distortion(family[m], loss, opts.reproduction);
        if (d > res.value) {
            res.value = d;
            res.argmax = m;
        }
    }
    return res;
}

void RDCurve::validate(double tol) const {
    if (points.empty()) throw UsageError("RDCurve: empty curve");
    for (const RDPoint& p : points) {
        if (!(p.slope > 0.0)) throw UsageError("RDCurve: slopes must be positive");
        if (p.distortion < -tol || p.rate_bits < -tol)
            throw UsageError("RDCurve: negative coordinates");
    }
    for (std::size_t k = 1; k < points.size(); ++k) {
        if (!(points[k].distortion < points[k - 1].distortion))
            throw UsageError("RDCurve: distortion must strictly decrease");
        if (points[k].rate_bits < points[k - 1].rate_bits - tol)
            throw UsageError("RDCurve: rate must be nondecreasing");
    }
    for (std::size_t k = 0; k + 2 < points.size(); ++k) {
        const auto& a = points[k];      // largest distortion of the triple
        const auto& b = points[k + 1];
        const auto& c = points[k + 2];
        const double outer = (a.rate_bits - b.rate_bits) / (a.distortion - b.distortion);
        const double inner = (b.rate_bits - c.rate_bits) / (b.distortion - c.distortion);
        if (inner > outer + tol)
            throw UsageError("RDCurve: chords must steepen as distortion decreases");
    }
}

double RDCurve::max_rate() const {
    double m = 0.0;
    for (const RDPoint& p : points) m = std::max(m, p.rate_bits);
    return m;
}

double RDCurve::zero_rate_distortion() const {
    double m = 0.0;
    for (const RDPoint& p : points) m = std::max(m, p.distortion);
    return m;
}

double RDCurve::distortion_at_rate(double rate, bool* clamped) const {
    if (points.empty()) throw UsageError("RDCurve: empty curve");
    if (clamped) *clamped = false;
    if (rate <= points.front().rate_bits) {
        if (clamped && rate < points.front().rate_bits) *clamped = true;
        return points.front().distortion;
    }
    for (std::size_t k = 1; k < points.size(); ++k) {
        if (rate <= points[k].rate_bits) {
            const auto& a = points[k - 1];
            const auto& b = points[k];
            const double t = (rate - a.rate_bits) / (b.rate_bits - a.rate_bits);
            return a.distortion + t * (b.distortion - a.distortion);
        }
    }
    if (clamped) *clamped = true;
    return points.back().distortion;
}

double RDCurve::rate_at_distortion(double distortion) const {
    if (points.empty()) throw UsageError("RDCurve: empty curve");
    if (distortion >= points.front().distortion) return points.front().rate_bits;
    for (std::size_t k = 1; k < points.size(); ++k) {
        if (distortion >= points[k].distortion) {
            const auto& a = points[k - 1];
            const auto& b = points[k];
            const double t = (distortion - a.distortion) / (b.distortion - a.distortion);
            return a.rate_bits + t * (b.rate_bits - a.rate_bits);
        }
    }
    return points.back().rate_bits;
}

double RDCurve::rate_lower_bound_at_distortion(double distortion) const {
    if (points.empty()) throw UsageError("RDCurve: empty curve");
    double best = 0.0;
    for (const RDPoint& p : points)
        if (std::isfinite(p.dual_intercept_bits))
            best = std::max(best, p.dual_intercept_bits - p.slope * distortion);
    return best;
}

std::string RDCurve::to_csv() const {
    std::string out = "slope,distortion,rate\n";
    char line[128];
    for (const RDPoint& p : points) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", p.slope, p.distortion,
                      p.rate_bits);
        out += line;
    }
    return out;
}

nlohmann::json RDCurve::to_json() const {
    nlohmann::json j;
    j["source_id"] = source_id;
    j["loss_id"] = loss_id;
    j["points"] = nlohmann::json::array();
    for (const RDPoint& p : points) {
        nlohmann::json pj{{"slope", p.slope},
                          {"distortion", p.distortion},
                          {"rate", p.rate_bits},
                          {"converged", p.converged}};
        if (std::isfinite(p.dual_intercept_bits)) pj["dual_intercept"] = p.dual_intercept_bits;
        j["points"].push_back(std::move(pj));
    }
    return j;
}

RDCurve RDCurve::from_json(const nlohmann::json& j) {
    RDCurve c;
    c.source_id = j.value("source_id", "");
    c.loss_id = j.value("loss_id", "");
    for (const auto& pj : j.at("points"))
        c.points.push_back(RDPoint{
            pj.at("distortion").get<double>(), pj.at("rate").get<double>(),
            pj.at("slope").get<double>(), pj.value("converged", true),
            pj.value("dual_intercept", std::numeric_limits<double>::quiet_NaN())});
    return c;
}

}  // namespace complearn
