#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "kinlab/spectral_ops.hpp"

namespace kinlab::spectral {

namespace {

// Tridiagonal complex system with constant off-diagonal c (Thomas algorithm).
void solve_tridiagonal(const CVec& diag, double off, CVec& x) {
    const std::size_t n = diag.size();
    CVec cp(n);
    cplx den = diag[0];
    cp[0] = off / den;
    x[0] /= den;
    for (std::size_t i = 1; i < n; ++i) {
        den = diag[i] - off * cp[i - 1];
        cp[i] = off / den;
        x[i] = (x[i] - off * x[i - 1]) / den;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
}

// Top singular value of (eps + i a z - s d^2/dz^2)^{-1} on [-L, L], Dirichlet.
double dirichlet_norm(double eps, double a, double s, double L, int n, double tol, int max_iter, unsigned seed) {
    if (n < 8) throw std::invalid_argument("resolvent norm: need at least 8 interior points");
    const double h = 2 * L / (n + 1);
    CVec dg(n), dga(n);
    for (int j = 0; j < n; ++j) {
        const double z = -L + (j + 1) * h;
        dg[j] = cplx(eps + 2 * s / (h * h), a * z);
        dga[j] = std::conj(dg[j]);
    }
    const double off = -s / (h * h);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    CVec x(n);
    for (auto& z : x) z = cplx(nd(rng), nd(rng));
    double lam = 0;
    for (int it = 0; it < max_iter; ++it) {
        const double nx = l2_norm(x);
        for (auto& z : x) z /= nx;
        solve_tridiagonal(dg, off, x);
        const double next = std::pow(l2_norm(x), 2);
        solve_tridiagonal(dga, off, x);
        if (it > 0 && std::abs(next - lam) <= tol * next) return std::sqrt(next);
        lam = next;
    }
    throw std::runtime_error("resolvent norm: power iteration did not converge in " + std::to_string(max_iter) +
                             " iterations");
}

}  // namespace

double airy_resolvent_norm(double eta, const AiryOptions& o) {
    if (!(eta > 0)) throw std::invalid_argument("airy_resolvent_norm: eta must be positive");
    return dirichlet_norm(eta, 1.0, 1.0, o.L, o.n, o.tol, o.max_iter, o.seed);
}

double transport_resolvent_norm(double kn, double sigma, double eps, double L, int n, double tol, unsigned seed) {
    if (!(sigma > 0) || !(eps > 0)) throw std::invalid_argument("transport_resolvent_norm: sigma, eps must be > 0");
    return dirichlet_norm(eps, kn, sigma, L, n, tol, 2000, seed);
}

AiryFit airy_scaling_fit(const std::vector<double>& N_list, const std::vector<double>& k_list, double kappa, int d,
                         const AiryFitOptions& o) {
    if (!(kappa > 0)) throw std::invalid_argument("airy_scaling_fit: kappa must be positive");
    if (d < 1) throw std::invalid_argument("airy_scaling_fit: d must be >= 1");
    auto span = [](const std::vector<double>& v) {
        if (v.size() < 2) return 0.0;
        auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *lo > 0 ? std::log10(*hi / *lo) : 0.0;
    };
    if (span(N_list) < 2 - 1e-12) throw std::invalid_argument("airy_scaling_fit: N_list must span >= 2 decades");
    if (span(k_list) < 1) throw std::invalid_argument("airy_scaling_fit: k_list must span >= 1 decade");
    // The transverse directions only add dissipation and the supremum sits at
    // zero transverse frequency, so the one-dimensional reduction is exact.
    AiryFit fit;
    for (double N : N_list)
        for (double k : k_list) {
            const double sigma = kappa / N;
            const double eps = o.eps_rel * std::cbrt(k * k * sigma);
            fit.points.push_back({N, k, transport_resolvent_norm(k, sigma, eps, o.L, o.n)});
        }
    const int m = static_cast<int>(fit.points.size());
    Eigen::MatrixXd X(m, 3);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) {
        X(i, 0) = 1;
        X(i, 1) = std::log(fit.points[i].N);
        X(i, 2) = std::log(fit.points[i].k);
        y(i) = std::log(fit.points[i].norm);
    }
    Eigen::VectorXd c = X.colPivHouseholderQr().solve(y);
    Eigen::VectorXd r = y - X * c;
    fit.log_c = c(0);
    fit.exponent_N = c(1);
    fit.exponent_k = c(2);
    fit.max_residual = r.cwiseAbs().maxCoeff();
    const double s2 = m > 3 ? r.squaredNorm() / (m - 3) : 0.0;
    Eigen::MatrixXd cov = s2 * (X.transpose() * X).inverse();
    fit.se_N = std::sqrt(cov(1, 1));
    fit.se_k = std::sqrt(cov(2, 2));
    if (fit.max_residual > o.max_residual)
        throw std::runtime_error("airy_scaling_fit: log residual " + std::to_string(fit.max_residual) +
                                 " above threshold");
    return fit;
}

}  // namespace kinlab::spectral
