#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <gsl/gsl_integration.h>

#include "kinlab/landau.hpp"

using namespace kinlab::landau;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double pi = std::numbers::pi;

// Adaptive GSL oracle on [a, b] (or [a, inf) when b is infinite).
double qags(const std::function<double(double)>& f, double a, double b, double rel = 1e-12, const double* pts = nullptr,
            int npts = 0) {
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4000);
    gsl_function F;
    F.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
    F.params = const_cast<std::function<double(double)>*>(&f);
    double r = 0, err = 0;
    if (std::isinf(b))
        gsl_integration_qagiu(&F, a, 0, rel, 4000, ws, &r, &err);
    else if (pts)
        gsl_integration_qagp(&F, const_cast<double*>(pts), npts, 0, rel, 4000, ws, &r, &err);
    else
        gsl_integration_qags(&F, a, b, 0, rel, 4000, ws, &r, &err);
    gsl_integration_workspace_free(ws);
    return r;
}

MatrixXd rotation(int d, double a, double b) {
    MatrixXd R = MatrixXd::Identity(d, d);
    MatrixXd Rz = MatrixXd::Identity(d, d), Rx = MatrixXd::Identity(d, d);
    Rz(0, 0) = Rz(1, 1) = std::cos(a);
    Rz(0, 1) = -std::sin(a);
    Rz(1, 0) = std::sin(a);
    if (d == 3) {
        Rx(1, 1) = Rx(2, 2) = std::cos(b);
        Rx(1, 2) = -std::sin(b);
        Rx(2, 1) = std::sin(b);
    }
    return Rz * Rx * R;
}

double min_eig(const MatrixXd& A) { return Eigen::SelfAdjointEigenSolver<MatrixXd>(A).eigenvalues().minCoeff(); }

}  // namespace

TEST_SUITE("landau") {

TEST_CASE("lambda_V against a radial oracle") {
    const auto p = Potential::gaussian(3, 1.0, 1.0, 8.0);
    // |B^2| / (3 |B^3|) * |S^2| * int r^3 pi e^{-2r^2} dr / (2pi)^3
    const double pref = pi / (3 * 4 * pi / 3) * 4 * pi / std::pow(2 * pi, 3);
    const double oracle = pref * qags([](double r) { return r * r * r * pi * std::exp(-2 * r * r); }, 0, 8);
    CHECK(lambda_V(p) == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(lambda_V(Potential::zero(3)) == 0.0);
    CHECK(lambda_V(p.scaled(3.0)) == doctest::Approx(9 * lambda_V(p)).epsilon(1e-12));
}

TEST_CASE("c_s constants") {
    const auto p = Potential::gaussian(2, 1.0, 1.0, 8.0);
    const double oracle = 2 * pi * qags([](double r) { return (1 + r * r) * std::exp(-2 * r * r); }, 0, 8);
    CHECK(c_s_constant(p, 2) == doctest::Approx(oracle).epsilon(1e-8));
    const double s0 = 2 * pi * qags([](double r) { return r * r * std::exp(-2 * r * r); }, 0, 8);
    CHECK(c_s_constant(p, 0) == doctest::Approx(s0).epsilon(1e-8));
    CHECK(c_s_constant(Potential::zero(2), 1) == 0.0);
    CHECK(c_s_constant(p.scaled(2.0), 1) == doctest::Approx(4 * c_s_constant(p, 1)).epsilon(1e-12));
    const auto th = kappa_thresholds(p);
    CHECK(th.with_vhat_sq == doctest::Approx(s0).epsilon(1e-10));
    const double lin = 2 * pi * qags([](double r) { return r * r * std::exp(-r * r); }, 0, 8);
    CHECK(th.with_vhat == doctest::Approx(lin).epsilon(1e-8));
    CHECK(kappa_thresholds(p.scaled(2.0)).with_vhat == doctest::Approx(2 * lin).epsilon(1e-8));
}

TEST_CASE("landau kernel closed form") {
    const auto p = Potential::gaussian(2);
    const double lam = lambda_V(p);
    MatrixXd B = landau_kernel(VectorXd::Unit(2, 0), p);
    CHECK(B(0, 0) == doctest::Approx(0.0));
    CHECK(B(1, 1) == doctest::Approx(lam).epsilon(1e-14));
    CHECK(std::abs(B(0, 1)) < 1e-15);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (int d : {2, 3}) {
        const auto q = Potential::gaussian(d);
        for (int t = 0; t < 10; ++t) {
            VectorXd w(d);
            for (int i = 0; i < d; ++i) w(i) = g(rng);
            MatrixXd Bw = landau_kernel(w, q);
            CHECK((Bw - Bw.transpose()).norm() == 0.0);
            CHECK((Bw * w).norm() < 1e-14 * Bw.norm() * w.norm());
            CHECK(Bw.trace() == doctest::Approx(lambda_V(q) * (d - 1) / w.norm()).epsilon(1e-12));
            CHECK(((landau_kernel(2 * w, q) - Bw / 2).norm()) < 1e-14 * Bw.norm());
            CHECK(min_eig(Bw) > -1e-14 * Bw.norm());
        }
    }
    CHECK_THROWS_AS(landau_kernel(VectorXd::Zero(2), p), std::invalid_argument);
}

TEST_CASE("brute-force kernel converges to the closed form") {
    const auto p = Potential::gaussian(3);
    const VectorXd w = VectorXd::Unit(3, 2);
    const auto e = landau_kernel_extrapolated(w, p, 0.1);
    const MatrixXd B = landau_kernel(w, p);
    CHECK((e.value - B).norm() / B.norm() < 0.01);
    CHECK((e.value - e.value.transpose()).norm() < 1e-12 * B.norm());
    // B.w shrinks with delta; the extrapolated residual is O(delta^6)
    CHECK((e.levels[2] * w).norm() < (e.levels[0] * w).norm());
    CHECK((landau_kernel_extrapolated(w, p, 0.02).value * w).norm() < 1e-10);
}

TEST_CASE("diffusion tensor") {
    const double beta = 1.0;
    for (int d : {2, 3}) {
        const auto p = Potential::gaussian(d);
        // A_0(0) = Lambda_V (1 - 1/d) int M(u)/|u| du
        const double area = d == 2 ? 2 * pi : 4 * pi;
        const double radial = area * qags(
                                         [&](double r) {
                                             return std::pow(r, d - 2) * std::pow(beta / (2 * pi), d / 2.0) *
                                                    std::exp(-beta * r * r / 2);
                                         },
                                         0, INFINITY);
        const double c = lambda_V(p) * (1 - 1.0 / d) * radial;
        const MatrixXd A0 = diffusion_tensor(VectorXd::Zero(d), p, beta, true);
        CHECK((A0 - c * MatrixXd::Identity(d, d)).norm() < 1e-8 * c);

        VectorXd v(d);
        v.setLinSpaced(0.3, 1.1);
        const MatrixXd R = rotation(d, 0.7, -0.4);
        const MatrixXd Av = diffusion_tensor(v, p, beta);
        const MatrixXd ARv = diffusion_tensor(R * v, p, beta);
        CHECK((ARv - R * Av * R.transpose()).norm() < 1e-8 * Av.norm());

        for (double x : {-2.0, 0.0, 0.5, 3.0})
            for (double y : {-1.0, 1.5}) {
                VectorXd u = VectorXd::Constant(d, y);
                u(0) = x;
                CHECK(min_eig(diffusion_tensor(u, p, beta)) >= -1e-10);
            }
    }
}

TEST_CASE("dispersion function") {
    const auto p = Potential::gaussian(2);
    VectorXd k(2);
    k << 0.6, -0.8;
    CHECK(dispersion_function(k, 0.4, Potential::zero(2), 1.0) == std::complex<double>(1.0, 0.0));
    for (double z : {0.3, 1.2}) {
        const auto a = dispersion_function(k, z, p, 1.0), b = dispersion_function(k, -z, p, 1.0);
        CHECK(a.imag() == doctest::Approx(-b.imag()).epsilon(1e-12));
    }
    CHECK_THROWS_AS(dispersion_function(VectorXd::Zero(2), 0.1, p, 1.0), std::invalid_argument);

    // Contour-shifted oracle: 1 + Vhat int M_1'(x) / (z - x - i eta) dx,
    // Richardson in eta -> 0+ over three levels.
    const double beta = 1.0;
    auto dM = [beta](double x) { return -beta * x * std::sqrt(beta / (2 * pi)) * std::exp(-beta * x * x / 2); };
    for (double z : {0.0, 0.7, 1.9}) {
        auto shifted = [&](double eta) {
            const double pts[3] = {z - 14, z, z + 14};
            const double re = qags([&](double x) { return dM(x) * (z - x) / ((z - x) * (z - x) + eta * eta); },
                                   0, 0, 1e-11, pts, 3);
            const double im = qags([&](double x) { return dM(x) * eta / ((z - x) * (z - x) + eta * eta); }, 0, 0,
                                   1e-11, pts, 3);
            return std::complex<double>(re, im);
        };
        const double eta = 0.02;
        const auto f0 = shifted(eta), f1 = shifted(eta / 2), f2 = shifted(eta / 4);
        const auto r1 = 2.0 * f1 - f0, r2 = 2.0 * f2 - f1;
        const auto lim = (4.0 * r2 - r1) / 3.0;
        const auto oracle = 1.0 + p(k.norm()) * lim;
        const auto got = dispersion_function(k, z, p, beta);
        CHECK(std::abs(got - oracle) < 1e-4);
    }
}

TEST_CASE("Lenard-Balescu kernel") {
    const auto p = Potential::gaussian(2);
    VectorXd v(2), w(2);
    v << 0.5, -0.3;
    w << 0.8, 0.4;
    const MatrixXd plain = lenard_balescu_kernel(v, w, p, 1.0, 0.05, false);
    CHECK((plain - landau_kernel_bruteforce(w, p, 0.05)).norm() < 1e-12 * plain.norm());
    const MatrixXd lb = lenard_balescu_kernel(v, w, p, 1.0, 0.05, true);
    CHECK((lb - lb.transpose()).norm() < 1e-12 * lb.norm());
    CHECK(min_eig(lb) > -1e-12 * lb.norm());
    // at this pair the screened kernel stays below the plain one
    CHECK(min_eig(plain - lb) > -1e-10 * plain.norm());
}

}  // TEST_SUITE
