#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kinlab/hierarchy.hpp"

namespace kinlab::sim {

using spectral::Spectral;

namespace {

// int_{-1}^{1} x^m e^{i theta x} dx for m = 0, 1, 2
void filon_moments(double t, cplx& m0, cplx& m1, cplx& m2) {
    if (std::abs(t) < 0.1) {
        const double t2 = t * t;
        m0 = 2 * (1 - t2 / 6 + t2 * t2 / 120 - t2 * t2 * t2 / 5040);
        m1 = cplx(0, 2 * (t / 3 - t * t2 / 30 + t * t2 * t2 / 840));
        m2 = 2 * (1.0 / 3 - t2 / 10 + t2 * t2 / 168 - t2 * t2 * t2 / 6480);
        return;
    }
    const double s = std::sin(t), c = std::cos(t);
    m0 = 2 * s / t;
    m1 = cplx(0, 2 * (s - t * c) / (t * t));
    m2 = 2 * ((t * t - 2) * s + 2 * t * c) / (t * t * t);
}

}  // namespace

CVec invert_laplace(const RVec& alpha, const std::vector<CVec>& values, double tau, bool subtract_leading) {
    if (alpha.size() < 3 || alpha.size() % 2 == 0 || values.size() != alpha.size())
        throw std::invalid_argument("invert_laplace: need an odd number (>= 3) of nodes with values");
    if (alpha[0] != 0) throw std::invalid_argument("invert_laplace: first node must be alpha = 0");
    const std::size_t n = values[0].size();
    // c / (1 + i alpha) with c matched at the last node; its original is the constant c
    CVec lead(n, 0.0);
    if (subtract_leading)
        for (std::size_t i = 0; i < n; ++i) lead[i] = cplx(1, alpha.back()) * values.back()[i];
    auto value = [&](std::size_t p, std::size_t i) { return values[p][i] - lead[i] / cplx(1, alpha[p]); };
    CVec acc(n, 0.0);
    for (std::size_t p = 0; p + 2 < alpha.size(); p += 2) {
        const double a = alpha[p], b = alpha[p + 2], c = alpha[p + 1], half = (b - a) / 2;
        if (!(half > 0) || std::abs(c - (a + b) / 2) > 1e-12 * b)
            throw std::invalid_argument("invert_laplace: panels must be increasing with centred midpoints");
        cplx m0, m1, m2;
        filon_moments(half * tau, m0, m1, m2);
        const cplx ph = half * std::exp(cplx(0, c * tau));
        const cplx wl = ph * (m2 - m1) / 2.0, wc = ph * (m0 - m2), wr = ph * (m2 + m1) / 2.0;
        for (std::size_t i = 0; i < n; ++i) acc[i] += wl * value(p, i) + wc * value(p + 1, i) + wr * value(p + 2, i);
    }
    const double f = std::exp(tau) / std::numbers::pi;
    for (std::size_t i = 0; i < n; ++i) acc[i] = f * acc[i].real() + lead[i].real();
    return acc;
}

AnsatzSolution solve_ansatz_laplace(const Scenario& s, double N, const RVec& tau, const LaplaceOptions& o) {
    s.validate();
    if (!(N >= 1)) throw std::invalid_argument("solve_ansatz_laplace: N must be >= 1");
    if (!(o.panel > 0) || !(o.growth >= 1) || !(o.alpha_max > o.alpha_switch))
        throw std::invalid_argument("solve_ansatz_laplace: bad alpha ladder");
    const Spectral sp(s.v0_grid());
    const auto kq = s.k_rule();
    const FokkerPlanck fp(sp, kspace_tensor(sp, kq, s.potential, s.beta), s.kappa);
    const CVec g = initial_datum(sp, s);
    const double gnorm = sp.norm(g);

    AnsatzSolution sol;
    LaplaceProfile& prof = sol.profile;
    auto solve_at = [&](double alpha) {
        const cplx sa(1.0, alpha);
        spectral::HatParams hp;
        hp.alpha = alpha;
        hp.t_N = N;
        hp.N = N;
        hp.kappa = s.kappa;
        hp.beta = s.beta;
        hp.perp = spectral::HatParams::Perp::Galerkin;
        LinOp A = [&](const CVec& x, CVec& y) {
            const CVec lap = sp.laplacian(x);
            y = spectral::hat_apply(sp, hp, x, s.potential, kq);
            for (std::size_t i = 0; i < x.size(); ++i) y[i] += sa * x[i] - s.kappa * lap[i];
        };
        LinOp P = [&](const CVec& x, CVec& y) { y = fp.resolvent(x, sa); };
        GmresResult r = gmres(A, g, &P, o.gmres_tol, 40, o.max_iter);
        if (!r.converged)
            throw std::runtime_error("solve_ansatz_laplace: GMRES did not converge at alpha=" + std::to_string(alpha) +
                                     " (residual " + std::to_string(r.residual) + ")");
        CVec rem = fp.resolvent(g, sa);
        for (std::size_t i = 0; i < rem.size(); ++i) rem[i] = r.x[i] - rem[i];
        prof.alpha.push_back(alpha);
        prof.values.push_back(r.x);
        prof.remainder.push_back(rem);
        prof.iterations.push_back(r.iterations);
        return sp.norm(rem);
    };
    solve_at(0.0);
    double a = 0, width = o.panel;
    for (;;) {
        solve_at(a + width / 2);
        const double rb = solve_at(a + width);
        a += width;
        // weighted-L2 size of the dropped tail by Plancherel, assuming 1/alpha decay or faster
        prof.tail_estimate = rb * std::sqrt(2 * a / std::numbers::pi) / gnorm;
        if (a >= o.alpha_switch && prof.tail_estimate < o.tail_tol) break;
        if (a >= o.alpha_max)
            throw std::runtime_error("solve_ansatz_laplace: alpha window reached " + std::to_string(a) +
                                     " with tail estimate " + std::to_string(prof.tail_estimate));
        if (a >= o.alpha_switch) width *= o.growth;
    }
    prof.A = a;
    for (double t : tau) {
        CVec base = fp.propagate(g, t);
        CVec corr = invert_laplace(prof.alpha, prof.remainder, t);
        for (std::size_t i = 0; i < base.size(); ++i) base[i] += corr[i];
        sol.tau.push_back(t);
        sol.g0.push_back(std::move(base));
    }
    return sol;
}

}  // namespace kinlab::sim
