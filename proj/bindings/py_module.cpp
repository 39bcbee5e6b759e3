#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "complearn/bounds.hpp"
#include "complearn/codec.hpp"
#include "complearn/converse_verifier.hpp"
#include "complearn/covering.hpp"
#include "complearn/dobrushin.hpp"
#include "complearn/erm.hpp"
#include "complearn/errors.hpp"
#include "complearn/experiment.hpp"
#include "complearn/info_measures.hpp"
#include "complearn/rd_solver.hpp"
#include "complearn/regression_model.hpp"

namespace py = pybind11;
using namespace complearn;

namespace {

nlohmann::json parse_json(const std::string& text) { return nlohmann::json::parse(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Learning from rate-compressed observations: conditional rate-distortion "
              "solver, quantizers, quantized ERM and bound/inequality checkers.";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

    py::class_<FiniteJoint>(m, "FiniteJoint")
        .def(py::init<std::vector<std::string>, std::vector<double>, std::vector<double>>(),
             py::arg("x_labels"), py::arg("y_values"), py::arg("pmf"))
        .def_static("from_json",
                    [](const std::string& s) { return FiniteJoint::from_json(parse_json(s)); })
        .def("to_json", [](const FiniteJoint& j) { return j.to_json().dump(); })
        .def_property_readonly("nx", &FiniteJoint::nx)
        .def_property_readonly("ny", &FiniteJoint::ny)
        .def_property_readonly("pmf", &FiniteJoint::pmf)
        .def_property_readonly("y_values", &FiniteJoint::y_values)
        .def("x_marginal", &FiniteJoint::x_marginal)
        .def("y_marginal", &FiniteJoint::y_marginal)
        .def("pooled", &FiniteJoint::pooled);

    m.def("entropy_bits",
          [](const FiniteJoint& j, const std::string& sel) { return entropy_bits(j, sel); },
          py::arg("joint"), py::arg("selector"));
    m.def("mutual_information_bits",
          [](const FiniteJoint& j) { return mutual_information_bits(j); });
    m.def("kl_and_variational",
          [](const std::vector<double>& p, const std::vector<double>& q) {
              const Divergence d = kl_and_variational(p, q);
              return py::make_tuple(d.kl_nats, d.kl_bits, d.dv);
          },
          "Returns (kl_nats, kl_bits, total_variation).");

    py::class_<RegressionModel>(m, "RegressionModel")
        .def(py::init([](std::vector<std::pair<double, double>> breakpoints, double sigma,
                         double lo, double hi) {
                 RegressionModel mm;
                 mm.breakpoints = std::move(breakpoints);
                 mm.sigma = sigma;
                 mm.domain_lo = lo;
                 mm.domain_hi = hi;
                 mm.validate();
                 return mm;
             }),
             py::arg("breakpoints"), py::arg("sigma"), py::arg("domain_lo") = 0.0,
             py::arg("domain_hi") = 1.0)
        .def("f0", &RegressionModel::f0)
        .def_readonly("sigma", &RegressionModel::sigma);

    py::class_<DiscretizationSpec>(m, "DiscretizationSpec")
        .def(py::init([](int x_bins, int y_grid, double y_span) {
                 DiscretizationSpec s;
                 s.x_bins = x_bins;
                 s.y_grid = y_grid;
                 s.y_span = y_span;
                 s.validate();
                 return s;
             }),
             py::arg("x_bins") = 1, py::arg("y_grid") = 257, py::arg("y_span") = 6.0);

    m.def("discretize_regression",
          [](const RegressionModel& mm, const DiscretizationSpec& s) {
              return discretize_regression(mm, s);
          });
    m.def("l2q_sq_distance", &l2q_sq_distance);

    py::class_<LossFunction>(m, "LossFunction")
        .def_static("squared", &LossFunction::squared)
        .def_static("absolute", &LossFunction::absolute)
        .def_static("hamming", &LossFunction::hamming)
        .def_static("p_power", &LossFunction::p_power)
        .def("__call__", &LossFunction::operator())
        .def("eta", &LossFunction::eta)
        .def_property_readonly("name", &LossFunction::name)
        .def_property_readonly("metric_power", &LossFunction::metric_power);

    py::class_<RDPoint>(m, "RDPoint")
        .def_readonly("distortion", &RDPoint::distortion)
        .def_readonly("rate_bits", &RDPoint::rate_bits)
        .def_readonly("slope", &RDPoint::slope)
        .def_readonly("converged", &RDPoint::converged);

    py::class_<RDCurve>(m, "RDCurve")
        .def_readonly("points", &RDCurve::points)
        .def("validate", [](const RDCurve& c) { c.validate(); })
        .def("distortion_at_rate",
             [](const RDCurve& c, double r) { return c.distortion_at_rate(r); })
        .def("rate_at_distortion", &RDCurve::rate_at_distortion)
        .def("max_rate", &RDCurve::max_rate)
        .def("zero_rate_distortion", &RDCurve::zero_rate_distortion)
        .def("to_csv", &RDCurve::to_csv)
        .def("to_json", [](const RDCurve& c) { return c.to_json().dump(); });

    py::class_<BAPoint>(m, "BAPoint")
        .def_readonly("distortion", &BAPoint::distortion)
        .def_readonly("rate_bits", &BAPoint::rate_bits)
        .def_readonly("slope", &BAPoint::slope)
        .def_readonly("converged", &BAPoint::converged)
        .def_readonly("iterations", &BAPoint::iterations);

    m.def("ba_rd_point",
          [](const FiniteJoint& j, const LossFunction& l, double slope) {
              return ba_rd_point(j, l, slope);
          },
          py::arg("joint"), py::arg("loss"), py::arg("slope"));
    m.def("rd_curve",
          [](const FiniteJoint& j, const LossFunction& l, int slopes) {
              return rd_curve(j, l, default_slope_grid(j, l, slopes));
          },
          py::arg("joint"), py::arg("loss"), py::arg("slopes") = 40);
    m.def("solve_at_rate",
          [](const FiniteJoint& j, const LossFunction& l, double rate, double tol) {
              return solve_at_rate(j, l, rate, tol);
          },
          py::arg("joint"), py::arg("loss"), py::arg("rate"), py::arg("rate_tol") = 1e-5);
    m.def("gaussian_drf", &gaussian_drf, py::arg("sigma"), py::arg("rate"));
    m.def("zero_rate_distortion",
          [](const FiniteJoint& j, const LossFunction& l) { return zero_rate_distortion(j, l); });

    py::class_<HypothesisGrid>(m, "HypothesisGrid")
        .def_static("uniform_levels",
                    [](double lo, double hi, int cells, int q, int max_jump) {
                        return HypothesisGrid::uniform_levels(lo, hi, cells, q, max_jump);
                    },
                    py::arg("lo"), py::arg("hi"), py::arg("cells"), py::arg("q"),
                    py::arg("max_jump") = -1)
        .def_static("with_levels",
                    [](double lo, double hi, int cells, std::vector<double> levels,
                       int max_jump) {
                        return HypothesisGrid::with_levels(lo, hi, cells, std::move(levels),
                                                           max_jump);
                    },
                    py::arg("lo"), py::arg("hi"), py::arg("cells"), py::arg("levels"),
                    py::arg("max_jump") = -1)
        .def("__len__", &HypothesisGrid::size)
        .def("value", &HypothesisGrid::value)
        .def_property_readonly("cells", &HypothesisGrid::cells)
        .def_property_readonly("levels", &HypothesisGrid::levels)
        .def("to_json", [](const HypothesisGrid& g) { return g.to_json().dump(); });

    m.def("empirical_risk",
          [](const HypothesisGrid& g, std::size_t member, const std::vector<double>& xs,
             const std::vector<double>& ys, const LossFunction& l) {
              return empirical_risk(g, member, xs, ys, l);
          });
    m.def("erm",
          [](const HypothesisGrid& g, const std::vector<double>& xs,
             const std::vector<double>& ys, const LossFunction& l) {
              const ErmResult r = erm(g, xs, ys, l);
              return py::make_tuple(r.index, r.risk);
          },
          "Returns (index, risk); ties resolve to the lowest index.");
    m.def("true_risk_regression",
          [](const HypothesisGrid& g, std::size_t member, const RegressionModel& mm,
             const LossFunction& l) { return true_risk_regression(g, member, mm, l); });

    m.def("covering_number",
          [](double lipschitz, double lo, double hi, double eps) {
              const CoveringResult r = covering_number(lipschitz, lo, hi, eps);
              return py::make_tuple(r.count, r.net);
          },
          py::arg("lipschitz"), py::arg("lo"), py::arg("hi"), py::arg("epsilon"));
    m.def("covering_log2_count",
          [](double lipschitz, double lo, double hi, double eps) {
              return covering_log2_count(lipschitz, lo, hi, eps);
          });

    py::enum_<CodecKind>(m, "CodecKind")
        .value("uniform", CodecKind::Uniform)
        .value("lloyd_max", CodecKind::LloydMax)
        .value("conditional_lloyd_max", CodecKind::ConditionalLloydMax)
        .value("pilot_shift", CodecKind::PilotShift);

    py::class_<EncodedBlock>(m, "EncodedBlock")
        .def_readonly("n", &EncodedBlock::n)
        .def_readonly("indices", &EncodedBlock::indices)
        .def_property_readonly("header",
                               [](const EncodedBlock& b) -> py::object {
                                   if (b.header) return py::int_(*b.header);
                                   return py::none();
                               })
        .def("serialize",
             [](const EncodedBlock& b, int bits) {
                 const auto bytes = b.serialize(bits);
                 return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
             })
        .def_static("deserialize", [](const py::bytes& data) {
            const std::string s = data;
            return EncodedBlock::deserialize(
                std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
        });

    py::class_<Codec>(m, "Codec")
        .def_readonly("codebook_size", &Codec::codebook_size)
        .def_readonly("header_bits", &Codec::header_bits)
        .def_readonly("levels", &Codec::levels)
        .def_readonly("hypothesis_index", &Codec::hypothesis_index)
        .def("achieved_rate", &Codec::achieved_rate)
        .def("bits_per_index", &Codec::bits_per_index)
        .def("to_json", [](const Codec& c) { return c.to_json().dump(); })
        .def_static("from_json",
                    [](const std::string& s) { return Codec::from_json(parse_json(s)); });

    m.def("train_codec",
          [](CodecKind kind, const std::vector<double>& xs, const std::vector<double>& ys,
             double rate, const LossFunction& l, int x_bins, const HypothesisGrid* pilot) {
              CodecConfig cfg;
              cfg.x_bins = x_bins;
              cfg.pilot_grid = pilot;
              return train_codec(kind, xs, ys, rate, l, cfg);
          },
          py::arg("kind"), py::arg("xs"), py::arg("ys"), py::arg("rate"), py::arg("loss"),
          py::arg("x_bins") = 1, py::arg("pilot_grid") = nullptr);
    m.def("encode", [](const Codec& c, const std::vector<double>& xs,
                       const std::vector<double>& ys) { return encode(c, xs, ys); });
    m.def("decode", [](const Codec& c, const std::vector<double>& xs,
                       const EncodedBlock& b) { return decode(c, xs, b); });
    m.def("measure_distortion",
          [](const Codec& c, const std::vector<double>& xs, const std::vector<double>& ys,
             const LossFunction& l) { return measure_distortion(c, xs, ys, l); });

    m.def("achievable_risk_bound", &achievable_risk_bound);
    m.def("root_risk_bound", &root_risk_bound);
    m.def("gaussian_root_risk_bound", &gaussian_root_risk_bound, py::arg("sigma"),
          py::arg("rate"));
    m.def("finite_sample_risk_bound", &finite_sample_risk_bound);

    m.def("quantized_erm_chain_check",
          [](const std::vector<double>& xs, const std::vector<double>& ys,
             const std::vector<double>& yhats, const HypothesisGrid& g, const LossFunction& l,
             std::size_t fhat_index) {
              return quantized_erm_chain_check(xs, ys, yhats, g, l, fhat_index).to_json().dump();
          },
          "Returns the chain report as a JSON string.");

    m.def("verify_appendix",
          [](const std::string& instance_json) {
              return converse_chain_verify_json(parse_json(instance_json)).to_json().dump();
          },
          "Exhaustive converse-chain verification; takes and returns JSON strings.");

    m.def("run_sweep_json",
          [](const std::string& config_json) {
              const ExperimentConfig cfg = ExperimentConfig::from_json(parse_json(config_json));
              const SweepResult res = run_sweep(cfg);
              return py::make_tuple(res.rows_csv(), res.aggregates_json(cfg).dump());
          },
          "Runs a sweep from a config JSON string; returns (trials_csv, aggregates_json).");
}
