#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ridge/approx.hpp"
#include "ridge/cli.hpp"
#include "ridge/errors.hpp"
#include "ridge/greedy.hpp"
#include "ridge/penalty.hpp"
#include "ridge/risk.hpp"

namespace py = pybind11;
using namespace ridge;

namespace {

PenaltyFn penalty_from(const std::string& kind, double lambda) {
    if (kind == "zero") return PenaltyFn::zero();
    if (kind == "linear") return PenaltyFn::linear(lambda);
    if (kind == "power43") return PenaltyFn::power43(lambda);
    throw InputError("unknown penalty '" + kind + "'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "l1-penalized greedy pursuit for ridge combinations";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<SizeError>(m, "SizeError", PyExc_OverflowError);

    py::enum_<Activation>(m, "Activation")
        .value("ramp", Activation::ramp)
        .value("sine", Activation::sine)
        .value("tanh_sigmoid", Activation::tanh_sigmoid);
    py::enum_<Regime>(m, "Regime")
        .value("highdim", Regime::highdim)
        .value("nonoise", Regime::nonoise)
        .value("moderate", Regime::moderate)
        .value("mixed", Regime::mixed);

    py::class_<RidgeUnit>(m, "RidgeUnit")
        .def(py::init([](Vector theta, int sign, Activation a) {
                 RidgeUnit u;
                 u.theta = std::move(theta);
                 u.sign = sign;
                 u.activation = a;
                 return u;
             }),
             py::arg("theta"), py::arg("sign") = 1, py::arg("activation") = Activation::ramp)
        .def_readwrite("theta", &RidgeUnit::theta)
        .def_readwrite("sign", &RidgeUnit::sign)
        .def_readwrite("activation", &RidgeUnit::activation)
        .def("__call__", [](const RidgeUnit& u, const Matrix& X) { return eval_unit_rows(u, X); });

    py::class_<RidgeModel>(m, "RidgeModel")
        .def(py::init<Eigen::Index>(), py::arg("input_dim"))
        .def("add_term", &RidgeModel::add_term, py::arg("weight"), py::arg("unit"))
        .def("evaluate", &RidgeModel::evaluate)
        .def_property_readonly("v", &RidgeModel::v)
        .def_property_readonly("input_dim", &RidgeModel::input_dim)
        .def_property_readonly("weights", &RidgeModel::weights)
        .def_property_readonly("units", [](const RidgeModel& f) {
            std::vector<RidgeUnit> out;
            for (const auto& t : f.terms()) out.push_back(t.unit);
            return out;
        })
        .def("__len__", &RidgeModel::size);

    m.def("cover_count", [](int d, int m_grid, double radius) { return enumerate_cover(d, m_grid, radius).size(); },
          py::arg("d"), py::arg("m_grid"), py::arg("radius") = 2.0);
    m.def("cover_count_library", &cover_count_library, py::arg("library_size"), py::arg("terms"));

    m.def("gamma_tau", [](double B, double B_n, double sigma2, double eta, double delta1, double delta2) {
        PenaltyConfig c;
        c.B = B;
        c.B_n = B_n;
        c.sigma2 = sigma2;
        c.eta = eta;
        c.delta1 = delta1;
        c.delta2 = delta2;
        const GammaTau g = gamma_tau(c);
        return py::make_tuple(g.gamma, g.tau);
    }, py::arg("B"), py::arg("B_n"), py::arg("sigma2"), py::arg("eta") = 0.0, py::arg("delta1") = 1.0,
          py::arg("delta2") = 1.0);
    m.def("pen_highdim", [](double v, double n, double d, double L, double g, double Bn, double T) {
        return pen_highdim(v, n, d, L, g, Bn, T).total;
    }, py::arg("v_f"), py::arg("n"), py::arg("d"), py::arg("Lambda"), py::arg("gamma"), py::arg("B_n"), py::arg("T_n") = 0.0);
    m.def("pen_nonoise", [](double v, double n, double d, double L, double g) { return pen_nonoise(v, n, d, L, g).total; },
          py::arg("v_f"), py::arg("n"), py::arg("d"), py::arg("Lambda"), py::arg("gamma"));
    m.def("truncate", py::overload_cast<const Vector&, double>(&truncate), py::arg("values"), py::arg("B_n"));
    m.def("tail_tn", [](const Vector& Y, double Bn) { return tail_tn(Y, Bn); }, py::arg("Y"), py::arg("B_n"));

    m.def("fit_lpgp",
          [](const Matrix& X, const Vector& Y, int m_max, const std::string& penalty, double lam, int cover_m,
             double Lambda, std::uint64_t seed) {
              GreedyConfig c;
              c.m_max = m_max;
              c.w = penalty_from(penalty, lam);
              c.cover_m = cover_m;
              c.Lambda = Lambda;
              c.seed = seed;
              const GreedyPath p = fit_lpgp(X, Y, c);
              py::list steps;
              for (const auto& s : p.steps) {
                  py::dict row;
                  row["m"] = s.m;
                  row["v"] = s.v;
                  row["alpha"] = s.alpha;
                  row["beta"] = s.beta;
                  row["train_mse"] = s.train_mse;
                  row["objective"] = s.objective;
                  steps.append(row);
              }
              return py::make_tuple(p.model(static_cast<int>(p.steps.size())), steps);
          },
          py::arg("X"), py::arg("Y"), py::arg("m_max") = 10, py::arg("penalty") = "zero", py::arg("lam") = 0.0,
          py::arg("cover_m") = 2, py::arg("Lambda") = 2.0, py::arg("seed") = 0);

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));
}
