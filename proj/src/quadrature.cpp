#include <cmath>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "kinlab/numerics.hpp"

namespace kinlab {

namespace {

Rule fixed_rule(const gsl_integration_fixed_type* type, int n, double a, double b) {
    gsl_integration_fixed_workspace* ws = gsl_integration_fixed_alloc(type, n, a, b, 0.0, 0.0);
    if (!ws) throw std::runtime_error("quadrature: allocation failed");
    Rule r;
    const double* x = gsl_integration_fixed_nodes(ws);
    const double* w = gsl_integration_fixed_weights(ws);
    r.x.assign(x, x + n);
    r.w.assign(w, w + n);
    gsl_integration_fixed_free(ws);
    return r;
}

}  // namespace

Rule gauss_legendre(int n, double a, double b) { return fixed_rule(gsl_integration_fixed_legendre, n, a, b); }

Rule gauss_hermite(int n) { return fixed_rule(gsl_integration_fixed_hermite, n, 0.0, 1.0); }

Rule composite_gauss(const RVec& edges, int per_panel) {
    Rule out;
    Rule ref = gauss_legendre(per_panel, 0.0, 1.0);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i], len = edges[i + 1] - edges[i];
        for (int q = 0; q < per_panel; ++q) {
            out.x.push_back(a + len * ref.x[q]);
            out.w.push_back(len * ref.w[q]);
        }
    }
    return out;
}

RVec geometric_edges(double t0, double t1, double ratio) {
    if (!(t0 > 0 && t1 > t0 && ratio > 1)) throw std::invalid_argument("geometric_edges: bad arguments");
    RVec e{0.0, t0};
    double t = t0;
    while (t < t1) {
        t = std::min(t * ratio, t1);
        e.push_back(t);
    }
    return e;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel, double abs) {
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(2000);
    gsl_function F;
    F.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
    F.params = const_cast<std::function<double(double)>*>(&f);
    double result = 0, err = 0;
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    int status = gsl_integration_qags(&F, a, b, abs, rel, 2000, ws, &result, &err);
    gsl_set_error_handler(old);
    gsl_integration_workspace_free(ws);
    if (status && status != GSL_EROUND) throw std::runtime_error(std::string("integrate: ") + gsl_strerror(status));
    return result;
}

}  // namespace kinlab
