#include <doctest.h>

#include <cmath>

#include "kinlab/hierarchy.hpp"

using namespace kinlab;
using namespace kinlab::sim;

namespace {

double rel(const CVec& a, const CVec& b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / den);
}

// Coarse scenario: each run takes well under a second.
Scenario small() {
    Scenario s;
    s.n_v0 = 16;
    s.n_w = 32;
    s.w_cut = 3;
    s.k_radial = 6;
    s.k_angular = 6;
    s.tau_max = 0.25;
    return s;
}

CVec mass_weights(const spectral::Spectral& sp) { return CVec(sp.size(), sp.cell()); }

}  // namespace

TEST_SUITE("hierarchy") {

TEST_CASE("scenario validation") {
    Scenario s = small();
    CHECK_NOTHROW(s.validate());
    s.n_w = 7;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small();
    s.kappa = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small();
    s.tau_max = -1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("zero potential gives the heat flow") {
    Scenario s = small();
    s.potential = landau::Potential::zero(2);
    const spectral::Spectral sp(s.v0_grid());
    const CVec g = initial_datum(sp, s);
    const auto tr = run_hierarchy(s, 10);
    CHECK(rel(tr.g0.back(), sp.heat(g, s.kappa * tr.tau.back())) < 1e-12);
    const auto an = solve_ansatz_laplace(s, 10, {0.0, 0.1, 0.25});
    CHECK(rel(an.g0.back(), sp.heat(g, s.kappa * 0.25)) < 1e-10);
}

TEST_CASE("zero data stays zero") {
    const Scenario s = small();
    const Hierarchy h(s, 10);
    auto st = h.initial(CVec(h.v0().size(), 0.0));
    for (int i = 0; i < 5; ++i) h.step(st);
    CHECK(h.energy(st) == 0.0);
    for (const auto& x : st.g0) CHECK(x == cplx(0.0));
}

TEST_CASE("energy and symmetry along a run") {
    const Scenario s = small();
    const auto tr = run_hierarchy(s, 20);
    CHECK(tr.max_energy_increase <= s.energy_tol);
    for (std::size_t i = 1; i < tr.energy.size(); ++i) CHECK(tr.energy[i] <= tr.energy[i - 1] * (1 + 1e-9));
    CHECK(tr.tau.back() == doctest::Approx(s.tau_max));
    double im = 0, mx = 0;
    for (const auto& x : tr.g0.back()) {
        im = std::max(im, std::abs(x.imag()));
        mx = std::max(mx, std::abs(x));
    }
    CHECK(im < 1e-10 * mx);
}

TEST_CASE("second order in the step") {
    std::vector<CVec> r;
    for (double dt : {0.5, 0.25, 0.125, 0.0625}) {
        Scenario s = small();
        s.dt = dt;
        r.push_back(run_hierarchy(s, 10).g0.back());
    }
    const double p1 = std::log2(rel(r[0], r[1]) / rel(r[1], r[2]));
    const double p2 = std::log2(rel(r[1], r[2]) / rel(r[2], r[3]));
    CHECK(p1 >= 1.9);
    CHECK(p2 >= 1.9);
}

TEST_CASE("Fokker-Planck solver") {
    const Scenario s = small();
    const spectral::Spectral sp(s.v0_grid());
    const CVec g = initial_datum(sp, s);
    const RVec taus{0.0, 0.1, 0.25, 0.5};

    // A_0 = 0: heat flow
    TensorField zero;
    zero.d = 2;
    zero.comp.assign(4, RVec(sp.size(), 0.0));
    const FokkerPlanck heat(sp, zero, s.kappa);
    const auto ht = solve_fokker_planck(heat, sp, g, taus);
    for (std::size_t i = 0; i < taus.size(); ++i) CHECK(rel(ht.g[i], sp.heat(g, s.kappa * taus[i])) < 1e-10);

    const FokkerPlanck fp(sp, kspace_tensor(sp, s.k_rule().full(), s.potential, s.beta), s.kappa);
    CHECK(fp.eigenvalues().maxCoeff() < 1e-10);
    const auto ex = solve_fokker_planck(fp, sp, g, taus);
    for (std::size_t i = 1; i < taus.size(); ++i) {
        CHECK(std::abs(ex.mass[i] - ex.mass[0]) < 1e-10 * std::abs(ex.mass[0]));
        CHECK(ex.norm2[i] <= ex.norm2[i - 1]);
    }
    // mass by an explicit weighted sum
    CHECK(std::abs(dot(mass_weights(sp), ex.g.back()) - dot(mass_weights(sp), g)) < 1e-10 * std::abs(ex.mass[0]));

    // implicit midpoint: second order towards the exact propagator
    double prev = 0, order = 0;
    for (int sub : {4, 8, 16}) {
        const auto cn = solve_fokker_planck(fp, sp, g, taus, FpMethod::CrankNicolson, sub);
        const double e = rel(cn.g.back(), ex.g.back());
        if (prev > 0) order = std::log2(prev / e);
        prev = e;
    }
    CHECK(order >= 1.9);
}

TEST_CASE("Laplace inversion round trip") {
    // panels of geometrically growing width, nodes in consecutive triples
    RVec alpha{0.0};
    for (double w = 0.05; alpha.back() < 1e5; w *= 1.08) {
        const double a = alpha.back();
        alpha.push_back(a + w / 2);
        alpha.push_back(a + w);
    }
    const std::size_t n = alpha.size();
    std::vector<CVec> one(n), ramp(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx s(1.0, alpha[i]);
        one[i] = CVec{1.0 / s};
        ramp[i] = CVec{1.0 / (s * s)};
    }
    for (double tau : {0.0, 0.3, 1.0, 2.0}) {
        CHECK(std::abs(invert_laplace(alpha, one, tau, true)[0] - 1.0) < 1e-6);
        if (tau > 0) CHECK(std::abs(invert_laplace(alpha, ramp, tau, true)[0] - tau) < 1e-4);
    }
}

TEST_CASE("ansatz: a priori bound and agreement with the hierarchy") {
    const Scenario s = small();
    const spectral::Spectral sp(s.v0_grid());
    const double g_norm = sp.norm(initial_datum(sp, s));
    const auto tr = run_hierarchy(s, 10);
    const auto an = solve_ansatz_laplace(s, 10, tr.tau);
    double sup = 0;
    for (std::size_t i = 0; i < an.tau.size(); ++i) sup = std::max(sup, std::exp(-an.tau[i]) * sp.norm(an.g0[i]));
    CHECK(sup <= g_norm * (1 + 1e-4));
    const double d = weighted_distance(sp, tr.tau, tr.g0, an.g0) / weighted_norm(sp, tr.tau, tr.g0);
    CHECK(d < 1e-3);
}

TEST_CASE("convergence study on a coarse grid") {
    Scenario s = small();
    s.N_list = {10, 20, 40};
    const auto res = convergence_study(s);
    REQUIRE(res.rows.size() == 3);
    CHECK(res.monotone);
    CHECK(res.rows[2].error < res.rows[0].error);
    CHECK(res.rate > 0);
    s.N_list = {10};
    CHECK_THROWS_AS(convergence_study(s), std::invalid_argument);
}

TEST_CASE("error plateau under velocity-grid refinement") {
    std::vector<double> err;
    for (int n : {16, 20, 24}) {
        Scenario s = small();
        s.n_v0 = n;
        s.N_list = {10, 20};
        err.push_back(convergence_study(s).rows[0].error);
    }
    CHECK(std::abs(err[2] - err[1]) < 0.02 * err[2]);
    CHECK(std::abs(err[2] - err[1]) < std::abs(err[1] - err[0]));
}

}  // TEST_SUITE
