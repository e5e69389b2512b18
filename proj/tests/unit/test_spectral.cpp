#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kinlab/spectral_ops.hpp"

using namespace kinlab;
using namespace kinlab::spectral;
using Eigen::VectorXd;

namespace {

constexpr double pi = std::numbers::pi;

double rel(const CVec& a, const CVec& b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / den);
}

CVec smooth_field(const Spectral& sp, double shift = 0.0) {
    return sp.sample([shift](const VectorXd& v) {
        const double r2 = v.squaredNorm();
        return cplx(std::exp(-r2 / 2) * (1 + 0.3 * v(0) + shift), 0.4 * v(0) * std::exp(-r2 / 3));
    });
}

CVec axpy(cplx a, const CVec& x, const CVec& y) {
    CVec out(y);
    for (std::size_t i = 0; i < y.size(); ++i) out[i] += a * x[i];
    return out;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("grid validation") {
    CHECK_THROWS_AS((VelocityGrid{1, 7, 6.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((VelocityGrid{1, 8, -1.0}.validate()), std::invalid_argument);
    CHECK_NOTHROW((VelocityGrid{2, 8, 6.0}.validate(1.0)));
}

TEST_CASE("semigroup: identity, heat closed form, composition") {
    const Spectral sp(VelocityGrid{1, 64, 10.0});
    const CVec f = smooth_field(sp);
    const VectorXd a = VectorXd::Constant(1, 0.8);
    CHECK(rel(semigroup_step(sp, f, 0.0, a, 0.3), f) < 1e-15);

    // k = 0: exp(-v^2/2) -> (1 + 2 s t)^{-1/2} exp(-v^2 / (2 (1 + 2 s t)))
    const double sigma = 0.25, t = 1.5, var = 1 + 2 * sigma * t;
    const CVec g = sp.sample([](const VectorXd& v) { return cplx(std::exp(-v.squaredNorm() / 2)); });
    const CVec want =
        sp.sample([var](const VectorXd& v) { return cplx(std::exp(-v.squaredNorm() / (2 * var)) / std::sqrt(var)); });
    CHECK(rel(semigroup_step(sp, g, t, VectorXd::Zero(1), sigma), want) < 1e-12);

    for (int d : {1, 2}) {
        const Spectral s(VelocityGrid{d, 64, 10.0});
        const CVec h = smooth_field(s);
        const VectorXd k = VectorXd::LinSpaced(d, 0.5, 1.0);
        const CVec ab = semigroup_step(s, semigroup_step(s, h, 0.4, k, 0.1), 0.7, k, 0.1);
        CHECK(rel(ab, semigroup_step(s, h, 1.1, k, 0.1)) < 1e-10);
    }
}

TEST_CASE("resolvent: constants, oracle, identity") {
    const Spectral sp(VelocityGrid{1, 8, 6.0});
    const cplx om(0.7, 0.3);
    const CVec one(sp.size(), 1.0);
    const CVec r = resolvent_green(sp, om, VectorXd::Zero(1), 0.2, one);
    for (const auto& x : r) CHECK(std::abs(x - 1.0 / om) < 1e-10);
    const auto dr = resolvent_direct(sp, om, VectorXd::Zero(1), 0.2, one);
    CHECK(dr.converged);
    for (const auto& x : dr.x) CHECK(std::abs(x - 1.0 / om) < 1e-10);

    // the Green path propagates exactly in the continuum, the direct path
    // solves the grid operator; they agree once the grid resolves the field
    const Spectral fine(VelocityGrid{1, 48, 8.0});
    const VectorXd a = VectorXd::Constant(1, 0.9);
    const CVec f = smooth_field(fine);
    const CVec green = resolvent_green(fine, om, a, 0.3, f);
    const auto direct = resolvent_direct(fine, om, a, 0.3, f);
    CHECK(rel(green, direct.x) < 1e-6);
    // residual of the direct solve
    CHECK(rel(transport_diffusion_apply(fine, om, a, 0.3, direct.x), f) <= 1e-10);

    // (w2 - w1) R(w1) R(w2) f = R(w1) f - R(w2) f
    const Spectral s2(VelocityGrid{2, 24, 8.0});
    const CVec f2 = smooth_field(s2);
    const VectorXd a2 = VectorXd::LinSpaced(2, 0.4, -0.6);
    const cplx w1(0.5, 0.2), w2(1.3, -0.7);
    const CVec r1 = resolvent_green(s2, w1, a2, 0.15, f2), r2 = resolvent_green(s2, w2, a2, 0.15, f2);
    CVec lhs = resolvent_green(s2, w1, a2, 0.15, r2);
    for (auto& x : lhs) x *= (w2 - w1);
    CHECK(rel(lhs, axpy(-1.0, r2, r1)) < 1e-6);
}

TEST_CASE("dissipativity identity") {
    for (int d : {1, 2}) {
        const Spectral sp(VelocityGrid{d, 32, 8.0});
        const CVec f = smooth_field(sp);
        const VectorXd a = VectorXd::LinSpaced(d, 1.0, -0.5);
        const cplx om(0.6, -1.7);
        const double sigma = 0.37;
        const double lhs = sp.inner(f, transport_diffusion_apply(sp, om, a, sigma, f)).real();
        double grad2 = 0;
        for (int ax = 0; ax < d; ++ax) grad2 += std::pow(sp.norm(sp.gradient(f, ax)), 2);
        const double rhs = om.real() * std::pow(sp.norm(f), 2) + sigma * grad2;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("creation and annihilation operators") {
    const auto p = Potential::gaussian(2);
    const Spectral sp(VelocityGrid{2, 32, 8.0});
    const auto& g = sp.grid();
    VectorXd k(2);
    k << 0.7, -0.4;

    // Gaussian g0: k.grad g0 = -(k.v) g0, so S^- g0 = Vhat sqrt(M)(v1) (k.v0) g0(v0)
    const CVec g0 = sp.sample([](const VectorXd& v) { return cplx(std::exp(-v.squaredNorm() / 2)); });
    const CVec s = apply_S_minus(sp, g0, k, p, 1.0);
    double err = 0, ref = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) {
            const VectorXd v0 = g.point(i), v1 = g.point(j);
            const double want = p(k.norm()) * std::sqrt(std::exp(-v1.squaredNorm() / 2) / (2 * pi)) * k.dot(v0) *
                                std::exp(-v0.squaredNorm() / 2);
            err = std::max(err, std::abs(s[i * g.size() + j] - want));
            ref = std::max(ref, std::abs(want));
        }
    CHECK(err < 1e-7 * ref);

    const auto z = Potential::zero(2);
    for (const auto& x : apply_S_minus(sp, g0, k, z, 1.0)) CHECK(x == cplx(0.0));
    const auto kq = polar_kquad(2, 3, 4, radial_cutoff(p));
    std::vector<CVec> g1(kq.size(), CVec(g.size() * g.size(), 1.0));
    for (const auto& x : apply_S_plus(sp, g1, kq, z, 1.0)) CHECK(x == cplx(0.0));
    CHECK_THROWS_AS(apply_S_minus(sp, CVec(3), k, p, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(apply_S_plus(sp, std::vector<CVec>(1), kq, p, 1.0), std::invalid_argument);

    // <g0, S^+ g1> = sum_k w_k <S^- g0, g1_k>
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    const CVec h0 = smooth_field(sp, 0.5);
    for (auto& x : g1)
        for (auto& y : x) y = cplx(nd(rng), nd(rng));
    const cplx lhs = sp.inner(h0, apply_S_plus(sp, g1, kq, p, 1.0));
    cplx rhs = 0;
    for (std::size_t q = 0; q < kq.size(); ++q)
        rhs += kq.w[q] * dot(apply_S_minus(sp, h0, kq.k[q], p, 1.0), g1[q], g.cell() * g.cell());
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
}

TEST_CASE("wavenumber rules") {
    const auto kq = polar_kquad(2, 8, 12, 5.0);
    double area = 0;
    for (double w : kq.w) area += w;
    CHECK(area * std::pow(2 * pi, 2) == doctest::Approx(pi * 25).epsilon(1e-12));
    const auto half = polar_kquad(2, 8, 12, 5.0, true);
    CHECK(half.size() * 2 == kq.size());
    CHECK(half.full().size() == kq.size());
}

TEST_CASE("hat operator") {
    const auto p = Potential::gaussian(2);
    const Spectral sp(VelocityGrid{2, 12, 6.0});
    const auto kq = polar_kquad(2, 3, 4, radial_cutoff(p), true);
    HatParams hp;
    hp.alpha = 0.7;
    hp.t_N = 1;
    hp.N = 10;
    const CVec g = smooth_field(sp);
    for (const auto& x : hat_apply(sp, hp, g, Potential::zero(2), kq)) CHECK(x == cplx(0.0));
    const CVec sep = hat_apply(sp, hp, g, p, kq);
    GreenOptions o;
    o.tol = 1e-6;
    const CVec full = hat_apply_full(sp, hp, g, p, kq, o);
    CHECK(rel(sep, full) < 1e-6);
    CHECK(sp.inner(g, sep).real() >= 0);

    // ||hat g|| <= C (||grad^2 g|| + ||grad g||) with one C across a Gaussian family
    double worst = 0;
    const Spectral s24(VelocityGrid{2, 24, 6.0});
    const auto kq24 = polar_kquad(2, 6, 8, radial_cutoff(p), true);
    for (double width : {0.6, 1.0, 1.6}) {
        const CVec gw =
            s24.sample([width](const VectorXd& v) { return cplx(std::exp(-v.squaredNorm() / (2 * width * width))); });
        double g1 = 0, g2 = 0;
        for (int a = 0; a < 2; ++a) {
            const CVec da = s24.gradient(gw, a);
            g1 += std::pow(s24.norm(da), 2);
            for (int b = 0; b < 2; ++b) g2 += std::pow(s24.norm(s24.gradient(da, b)), 2);
        }
        const double ratio = s24.norm(hat_apply(s24, hp, gw, p, kq24)) / (std::sqrt(g2) + std::sqrt(g1));
        worst = std::max(worst, ratio);
    }
    const double C = landau::c_s_constant(p, 0) + landau::c_s_constant(p, 2);
    CHECK(worst <= C);
}

TEST_CASE("deformation identity") {
    const Spectral sp(VelocityGrid{1, 64, 8.0});
    double prev = INFINITY;
    for (double kk : {0.1, 1.0, 10.0, 100.0}) {
        const auto a = deformed_velocity_average(sp, VectorXd::Constant(1, kk), 100, 1, 100, 1);
        if (kk <= 10) CHECK(a.rel_diff() < 1e-6);
        CHECK(std::abs(a.direct) < prev);
        prev = std::abs(a.direct);
    }
    CHECK(prev < 0.02);
    const Spectral s2(VelocityGrid{2, 32, 8.0});
    VectorXd k(2);
    k << -0.3, 1.1;
    CHECK(deformed_velocity_average(s2, k, 100, 1, 100, 1).rel_diff() < 1e-6);
}

TEST_CASE("Airy resolvent norms") {
    AiryOptions o;
    o.n = 800;
    // at large eta the top singular values crowd together; a short domain keeps
    // the power iteration quick and the truncation is irrelevant there
    AiryOptions small = o;
    small.L = 3;
    small.n = 200;
    CHECK(airy_resolvent_norm(1e3, small) * 1e3 == doctest::Approx(1.0).epsilon(1e-3));
    // monotone in eta
    double prev = INFINITY;
    for (double eta : {1e-3, 1e-2, 0.1, 1.0, 10.0}) {
        const double nrm = airy_resolvent_norm(eta, o);
        CHECK(std::isfinite(nrm));
        CHECK(nrm <= prev * (1 + 1e-6));
        prev = nrm;
    }
    // stable under doubling the domain at fixed spacing
    AiryOptions big = o;
    big.L = 2 * o.L;
    big.n = 2 * o.n;
    const double a = airy_resolvent_norm(1e-3, o), b = airy_resolvent_norm(1e-3, big);
    CHECK(std::abs(a - b) < 0.01 * b);
    CHECK_THROWS_AS(airy_resolvent_norm(0.0, o), std::invalid_argument);

    // kappa doubled: norm scales by 2^{-1/3}
    const double kk = 1.0, N = 1e3;
    AiryFitOptions fo;
    auto nrm = [&](double kappa) {
        const double sigma = kappa / N;
        return transport_resolvent_norm(kk, sigma, fo.eps_rel * std::cbrt(kk * kk * sigma), fo.L, fo.n);
    };
    CHECK(nrm(2.0) / nrm(1.0) == doctest::Approx(std::pow(2.0, -1.0 / 3)).epsilon(0.02));
}

}  // TEST_SUITE
