#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kinlab/acceptance.hpp"
#include "kinlab/combinatorics.hpp"
#include "kinlab/geometry.hpp"
#include "kinlab/hierarchy.hpp"
#include "kinlab/io.hpp"
#include "kinlab/landau.hpp"
#include "kinlab/run_config.hpp"
#include "kinlab/spectral_ops.hpp"

namespace py = pybind11;
using namespace kinlab;

namespace {

py::dict audit_dict(const comb::AuditReport& r) {
    py::list recs;
    for (const auto& x : r.records) {
        py::dict d;
        d["signs"] = x.signs;
        d["degree"] = x.degree;
        d["histories"] = x.histories;
        d["max_bad"] = x.max_bad;
        d["bound_violations"] = x.bound_violations;
        d["tent_violations"] = x.tent_violations;
        recs.append(d);
    }
    py::dict out;
    out["m0"] = r.m0;
    out["n_max"] = r.n_max;
    out["total_histories"] = r.total_histories;
    out["bound_violations"] = r.bound_violations;
    out["tent_violations"] = r.tent_violations;
    out["ok"] = r.ok();
    out["records"] = recs;
    return out;
}

// Python dicts of key -> value go through the same schema as config files.
io::Config config_from(const std::map<std::string, std::string>& settings) {
    io::Config c;
    for (const auto& [k, v] : settings) c.set(k + "=" + v);
    return c;
}

}  // namespace

PYBIND11_MODULE(_kinlab, m) {
    m.doc() = "Diagram combinatorics, Landau coefficients, resolvent scalings and m0 = 1 hierarchy runs.";
    m.attr("__version__") = io::version;

    // combinatorics
    m.def("validate_abstract", &comb::validate_abstract, py::arg("signs"), py::arg("m"), py::arg("m0"));
    m.def(
        "enumerate_abstracts",
        [](int deg, int m0, int max_len) {
            std::vector<comb::Signs> out;
            for (const auto& a : comb::enumerate_abstracts(deg, m0, max_len)) out.push_back(a.signs);
            return out;
        },
        py::arg("m"), py::arg("m0"), py::arg("max_len"));
    m.def(
        "admissible_closure",
        [](int m0, int K) {
            const auto s = comb::admissible_closure(m0, K);
            return std::vector<comb::Signs>(s.begin(), s.end());
        },
        py::arg("m0"), py::arg("K"));
    m.def(
        "boundary",
        [](const std::vector<comb::Signs>& omega, int m0) {
            const auto s = comb::boundary(comb::AbstractSet(omega.begin(), omega.end()), m0);
            return std::vector<comb::Signs>(s.begin(), s.end());
        },
        py::arg("omega"), py::arg("m0"));
    m.def(
        "count_histories",
        [](const comb::Signs& s, int deg, int m0) { return comb::count_histories({s, deg, m0}); },
        py::arg("signs"), py::arg("m"), py::arg("m0"));
    m.def(
        "tent_decomposition",
        [](const comb::Signs& s) {
            const auto t = comb::tent_decomposition(s);
            std::vector<std::tuple<int, int, int>> tents;
            for (const auto& x : t.tents) tents.emplace_back(x.alpha, x.beta, x.type);
            return std::make_pair(tents, t.down_steps);
        },
        py::arg("signs"), "Returns ([(alpha, beta, type)], down_steps), 1-based.");
    m.def(
        "bad_index_audit",
        [](int m0, int n_max) {
            comb::AuditReport r;
            {
                py::gil_scoped_release release;
                r = comb::bad_index_audit(m0, n_max);
            }
            return audit_dict(r);
        },
        py::arg("m0"), py::arg("n_max"));

    // landau
    py::class_<landau::Potential>(m, "Potential")
        .def_static("gaussian", &landau::Potential::gaussian, py::arg("d"), py::arg("amplitude") = 1.0,
                    py::arg("width") = 1.0, py::arg("k_max") = 8.0)
        .def_static("zero", &landau::Potential::zero, py::arg("d"))
        .def("__call__", &landau::Potential::operator(), py::arg("k"))
        .def_readonly("d", &landau::Potential::d)
        .def_readonly("k_max", &landau::Potential::k_max);
    m.def("lambda_V", &landau::lambda_V, py::arg("potential"));
    m.def("c_s_constant", &landau::c_s_constant, py::arg("potential"), py::arg("s"), py::arg("power") = 2);
    m.def("landau_kernel", &landau::landau_kernel, py::arg("w"), py::arg("potential"));
    m.def(
        "landau_kernel_extrapolated",
        [](const Eigen::VectorXd& w, const landau::Potential& p, double delta) {
            return landau::landau_kernel_extrapolated(w, p, delta).value;
        },
        py::arg("w"), py::arg("potential"), py::arg("delta") = 0.1);
    m.def("diffusion_tensor", &landau::diffusion_tensor, py::arg("v"), py::arg("potential"), py::arg("beta") = 1.0,
          py::arg("check") = false, py::arg("tol") = 1e-9);
    m.def("dispersion_function", &landau::dispersion_function, py::arg("k"), py::arg("z"), py::arg("potential"),
          py::arg("beta") = 1.0);

    // spectral
    m.def(
        "airy_resolvent_norm",
        [](double eta, double L, int n) {
            spectral::AiryOptions o;
            o.L = L;
            o.n = n;
            return spectral::airy_resolvent_norm(eta, o);
        },
        py::arg("eta"), py::arg("L") = 12.0, py::arg("n") = 2400);
    m.def(
        "airy_scaling_fit",
        [](const std::vector<double>& N, const std::vector<double>& k, double kappa, int d) {
            const auto f = spectral::airy_scaling_fit(N, k, kappa, d);
            py::dict out;
            out["exponent_N"] = f.exponent_N;
            out["exponent_k"] = f.exponent_k;
            out["se_N"] = f.se_N;
            out["se_k"] = f.se_k;
            out["max_residual"] = f.max_residual;
            return out;
        },
        py::arg("N_list"), py::arg("k_list"), py::arg("kappa") = 1.0, py::arg("d") = 2);
    m.def(
        "deformed_velocity_average",
        [](const Eigen::VectorXd& k, int n, double vmax, double t_N, double kappa, double N, double beta) {
            const spectral::Spectral sp(spectral::VelocityGrid{static_cast<int>(k.size()), n, vmax});
            const auto a = spectral::deformed_velocity_average(sp, k, t_N, kappa, N, beta);
            return std::make_pair(a.direct, a.deformed);
        },
        py::arg("k"), py::arg("n") = 64, py::arg("vmax") = 8.0, py::arg("t_N") = 100.0, py::arg("kappa") = 1.0,
        py::arg("N") = 100.0, py::arg("beta") = 1.0);

    // geometry
    m.def("simplex_volume", &geom::simplex_volume, py::arg("u"), py::arg("include_origin") = true,
          "Columns of u are the vertices.");
    m.def("normal_direction", &geom::normal_direction, py::arg("u"));
    m.def("pyramid_residual", &geom::pyramid_residual, py::arg("u"));
    m.def("common_positive_direction", &geom::common_positive_direction, py::arg("k"));
    m.def("wendel_probability", &geom::wendel_probability, py::arg("n"), py::arg("d"));
    m.def("d0_threshold", &geom::d0_threshold, py::arg("m0"));

    // hierarchy
    m.def(
        "convergence_study",
        [](const std::map<std::string, std::string>& settings) {
            const auto hc = hierarchy_config(config_from(settings));
            sim::ConvergenceResult res;
            {
                py::gil_scoped_release release;
                res = sim::convergence_study(hc.scenario);
            }
            py::list rows;
            for (const auto& r : res.rows) {
                py::dict d;
                d["N"] = r.N;
                d["error"] = r.error;
                d["sup_error"] = r.sup_error;
                d["tail_bound"] = r.tail_bound;
                d["max_energy_increase"] = r.max_energy_increase;
                rows.append(d);
            }
            py::dict out;
            out["rows"] = rows;
            out["rate"] = res.rate;
            out["rate_se"] = res.rate_se;
            out["monotone"] = res.monotone;
            return out;
        },
        py::arg("settings") = std::map<std::string, std::string>{},
        "Settings use the config-file keys, e.g. {'run.N_list': '10,20'}.");

    // acceptance
    m.def(
        "run_suite",
        [](bool quick, const std::set<int>& only) {
            acceptance::SuiteOptions o;
            o.quick = quick;
            o.only = only;
            std::vector<acceptance::CheckResult> res;
            {
                py::gil_scoped_release release;
                res = acceptance::run_suite(o);
            }
            py::list out;
            for (const auto& r : res) {
                py::dict d;
                d["id"] = r.id;
                d["name"] = r.name;
                d["pass"] = r.pass;
                d["summary"] = r.summary;
                d["line"] = acceptance::format_line(r);
                out.append(d);
            }
            return out;
        },
        py::arg("quick") = true, py::arg("only") = std::set<int>{});
}
