#include "kinlab/hierarchy.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kinlab::sim {

using spectral::KQuadrature;
using spectral::Spectral;

void Scenario::validate() const {
    auto fail = [](const std::string& key, const std::string& why) {
        throw std::invalid_argument("scenario: " + key + " " + why);
    };
    if (d < 1 || d > 3) fail("d", "must be 1, 2 or 3");
    v0_grid().validate(beta);
    if (n_w < 8 || n_w % 2) fail("n_w", "must be even and >= 8");
    if (w_max < 6 / std::sqrt(beta)) fail("w_max", "must be >= 6/sqrt(beta)");
    if (k_radial < 1) fail("k_radial", "must be >= 1");
    if (d > 1 && (k_angular < 2 || k_angular % 2)) fail("k_angular", "must be even and >= 2");
    if (!(beta > 0)) fail("beta", "must be positive");
    if (!(kappa > 0)) fail("kappa", "must be positive");
    if (!(tau_max > 0)) fail("tau_max", "must be positive");
    if (!(dt > 0)) fail("dt", "must be positive");
    if (fixed_point < 1) fail("fixed_point", "must be >= 1");
    if (!(w_cut > 0) || w_cut * std::sqrt(beta) >= std::numbers::pi * n_w / (2 * w_max))
        fail("w_cut", "must be positive and below the w Nyquist frequency");
    if (static_cast<int>(v_star.size()) != d) fail("v_star", "must have d components");
    for (double N : N_list)
        if (!(N >= 1)) fail("N_list", "entries must be >= 1");
    if (potential.d != d) fail("potential", "dimension differs from d");
}

KQuadrature Scenario::k_rule() const {
    return spectral::polar_kquad(d, k_radial, k_angular, spectral::radial_cutoff(potential), true);
}

CVec initial_datum(const Spectral& sp, const Scenario& s) {
    VectorXd vs = Eigen::Map<const VectorXd>(s.v_star.data(), static_cast<Eigen::Index>(s.v_star.size()));
    return sp.sample([&](const VectorXd& v) {
        return cplx(spectral::sqrt_maxwellian(v, s.beta) * std::exp(-(v - vs).squaredNorm()));
    });
}

namespace {

// phi_1, phi_2, phi_3 of the exponential integrators.
void phi_functions(cplx z, cplx& p1, cplx& p2, cplx& p3) {
    if (std::abs(z) < 0.5) {
        // sum_m z^m / (m + j)!
        cplx t1 = 1.0, t2 = 0.5, t3 = 1.0 / 6;
        p1 = t1, p2 = t2, p3 = t3;
        for (int m = 1; m < 16; ++m) {
            t1 *= z / double(m + 1);
            t2 *= z / double(m + 2);
            t3 *= z / double(m + 3);
            p1 += t1, p2 += t2, p3 += t3;
        }
        return;
    }
    p1 = (std::exp(z) - 1.0) / z;
    p2 = (p1 - 1.0) / z;
    p3 = (p2 - 0.5) / z;
}

}  // namespace

struct Hierarchy::Mode {
    VectorXd k;
    double kn = 0, vhat = 0, weight = 0;
    double heat_scalar = 1;
    CVec sym;            // i k.xi on the v0 frequency grid (zero Nyquist)
    CVec ez, p1, p2;     // exp(z), tau_s phi_1(z), tau_s phi_2(z) on (v0, w)
    CVec q2, q3;         // v0 fields: sum_w h_w M1(w) tau_s^2 phi_{2,3}(z)
};

Hierarchy::Hierarchy(const Scenario& s, double N) : s_(s), N_(N), sp0_(s.v0_grid()), kq_(s.k_rule()) {
    s_.validate();
    if (!(N >= 1)) throw std::invalid_argument("Hierarchy: N must be >= 1");
    const int d = s.d, nw = s.n_w;
    const std::size_t n0 = sp0_.size();
    std::vector<int> dims(d, s.n_v0);
    dims.push_back(nw);
    fft01_ = std::make_shared<Fft>(dims);
    const double hw = 2 * s.w_max / nw;
    w_.resize(nw);
    sqrt_m1_.resize(nw);
    for (int j = 0; j < nw; ++j) {
        w_[j] = -s.w_max + j * hw;
        sqrt_m1_[j] = std::sqrt(landau::maxwellian_1d(w_[j], s.beta));
    }
    const double sigma = s.kappa / N, dt = s.dt, ts = dt / 2;
    const RVec xw = fft_frequencies(nw, hw, false);
    heat_.resize(n0 * nw);
    for (std::size_t i = 0; i < n0; ++i) {
        const double e0 = sp0_.freq_sq(i);
        for (int j = 0; j < nw; ++j) {
            const bool keep = xw[j] >= -s.w_cut * std::sqrt(s.beta);
            heat_[i * nw + j] = keep ? std::exp(-sigma * dt * (e0 + xw[j] * xw[j])) : 0.0;
        }
    }
    modes_.resize(kq_.size());
    parallel_for(kq_.size(), [&](std::size_t q) {
        auto m = std::make_shared<Mode>();
        m->k = kq_.k[q];
        m->kn = m->k.norm();
        m->vhat = s.potential(m->kn);
        m->weight = kq_.w[q];
        // transverse Hermite-mode decay and the phase/heat/phase correction
        m->heat_scalar = std::exp(-(d - 1) * sigma * s.beta * dt / 4 - sigma * 2 * m->kn * m->kn * dt * dt * dt / 12);
        m->sym.resize(n0);
        for (std::size_t i = 0; i < n0; ++i) {
            double a = 0;
            for (int ax = 0; ax < d; ++ax) a += m->k(ax) * sp0_.freq(i, ax, true);
            m->sym[i] = cplx(0, a);
        }
        m->ez.resize(n0 * nw);
        m->p1.resize(n0 * nw);
        m->p2.resize(n0 * nw);
        m->q2.assign(n0, 0.0);
        m->q3.assign(n0, 0.0);
        for (std::size_t i = 0; i < n0; ++i) {
            const double kv = m->k.dot(sp0_.grid().point(i));
            for (int j = 0; j < nw; ++j) {
                const cplx z(0, -(m->kn * w_[j] - kv) * ts);
                cplx f1, f2, f3;
                phi_functions(z, f1, f2, f3);
                const std::size_t idx = i * nw + j;
                m->ez[idx] = std::exp(z);
                m->p1[idx] = ts * f1;
                m->p2[idx] = ts * f2;
                const double mw = sqrt_m1_[j] * sqrt_m1_[j] * hw;
                m->q2[i] += mw * ts * ts * f2;
                m->q3[i] += mw * ts * ts * f3;
            }
        }
        modes_[q] = std::move(m);
    });
}

HierarchyState Hierarchy::initial(const CVec& g0) const {
    if (g0.size() != sp0_.size()) throw std::invalid_argument("Hierarchy: initial field has the wrong size");
    HierarchyState st;
    st.g0 = g0;
    st.h.assign(modes_.size(), CVec(sp0_.size() * s_.n_w, 0.0));
    return st;
}

double Hierarchy::energy(const HierarchyState& st) const {
    const double hw = 2 * s_.w_max / s_.n_w;
    double e = std::pow(sp0_.norm(st.g0), 2);
    for (std::size_t q = 0; q < modes_.size(); ++q)
        e += 2 / N_ * modes_[q]->weight * std::pow(l2_norm(st.h[q], sp0_.cell() * hw), 2);
    return e;
}

void Hierarchy::coupling(HierarchyState& st) const {
    const int nw = s_.n_w;
    const std::size_t n0 = sp0_.size(), nq = modes_.size();
    const double hw = 2 * s_.w_max / nw;
    auto derivatives = [&](const CVec& g) {
        CVec gh = g;
        sp0_.forward(gh);
        std::vector<CVec> u(nq, CVec(n0));
        parallel_for(nq, [&](std::size_t q) {
            const Mode& m = *modes_[q];
            for (std::size_t i = 0; i < n0; ++i) u[q][i] = m.vhat * m.sym[i] * gh[i];
            sp0_.backward(u[q]);
        });
        return u;
    };
    const auto u0 = derivatives(st.g0);
    // projection of the free part: sum_w h_w sqrt(M1) tau_s phi_1 H0
    std::vector<CVec> base(nq, CVec(n0, 0.0));
    parallel_for(nq, [&](std::size_t q) {
        const Mode& m = *modes_[q];
        const CVec& H = st.h[q];
        for (std::size_t i = 0; i < n0; ++i) {
            cplx s = 0;
            for (int j = 0; j < nw; ++j) s += sqrt_m1_[j] * m.p1[i * nw + j] * H[i * nw + j];
            base[q][i] = s * hw;
        }
    });
    auto g0_update = [&](const std::vector<CVec>& u1) {
        std::vector<CVec> parts(nq, CVec(n0));
        parallel_for(nq, [&](std::size_t q) {
            const Mode& m = *modes_[q];
            CVec im(n0);
            for (std::size_t i = 0; i < n0; ++i) {
                const cplx pint = base[q][i] + cplx(0, -1) * (m.q2[i] * u0[q][i] + m.q3[i] * (u1[q][i] - u0[q][i]));
                im[i] = pint.imag();
            }
            sp0_.forward(im);
            const double c = -2 / N_ * m.weight * m.vhat;
            for (std::size_t i = 0; i < n0; ++i) parts[q][i] = c * m.sym[i] * im[i];
        });
        CVec acc(n0, 0.0);
        for (const auto& p : parts)
            for (std::size_t i = 0; i < n0; ++i) acc[i] += p[i];
        sp0_.backward(acc);
        CVec g = st.g0;
        for (std::size_t i = 0; i < n0; ++i) g[i] = (g[i] + acc[i]).real();
        return g;
    };
    CVec g1 = st.g0;
    std::vector<CVec> u1 = u0;
    for (int it = 0; it < s_.fixed_point; ++it) {
        g1 = g0_update(u1);
        u1 = derivatives(g1);
    }
    parallel_for(nq, [&](std::size_t q) {
        const Mode& m = *modes_[q];
        CVec& H = st.h[q];
        for (std::size_t i = 0; i < n0; ++i) {
            const cplx a0 = cplx(0, -1) * u0[q][i], a1 = cplx(0, -1) * u1[q][i];
            for (int j = 0; j < nw; ++j) {
                const std::size_t idx = i * nw + j;
                const cplx s0 = sqrt_m1_[j] * a0, s1 = sqrt_m1_[j] * a1;
                H[idx] = m.ez[idx] * H[idx] + m.p1[idx] * s0 + m.p2[idx] * (s1 - s0);
            }
        }
    });
    st.g0 = std::move(g1);
}

void Hierarchy::diffusion(HierarchyState& st) const {
    st.g0 = sp0_.heat(st.g0, s_.kappa / N_ * s_.dt);
    parallel_for(modes_.size(), [&](std::size_t q) {
        CVec& H = st.h[q];
        fft01_->forward(H.data());
        const double c = modes_[q]->heat_scalar;
        for (std::size_t i = 0; i < H.size(); ++i) H[i] *= c * heat_[i];
        fft01_->backward(H.data());
    });
}

void Hierarchy::step(HierarchyState& st) const {
    coupling(st);
    diffusion(st);
    coupling(st);
    st.tau += dtau();
}

Trajectory run_hierarchy(const Scenario& s, double N, const std::function<void(double)>& progress) {
    Hierarchy hs(s, N);
    HierarchyState st = hs.initial(initial_datum(hs.v0(), s));
    const int steps = static_cast<int>(std::lround(s.tau_max / hs.dtau()));
    Trajectory tr;
    const double e0 = hs.energy(st);
    tr.tau.push_back(0);
    tr.energy.push_back(e0);
    tr.g0.push_back(st.g0);
    for (int n = 0; n < steps; ++n) {
        hs.step(st);
        const double e = hs.energy(st);
        const double inc = (e - tr.energy.back()) / std::max(e0, 1e-300);
        tr.max_energy_increase = std::max(tr.max_energy_increase, inc);
        tr.tau.push_back(st.tau);
        tr.energy.push_back(e);
        tr.g0.push_back(st.g0);
        if (inc > s.energy_tol)
            throw std::runtime_error("run_hierarchy: energy increased by " + std::to_string(inc) + " (relative) at tau=" +
                                     std::to_string(st.tau) + ", N=" + std::to_string(N));
        if (progress) progress(st.tau);
    }
    return tr;
}

double weighted_distance(const Spectral& sp, const RVec& tau, const std::vector<CVec>& a,
                         const std::vector<CVec>& b) {
    if (a.size() != tau.size() || b.size() != tau.size())
        throw std::invalid_argument("weighted_distance: series lengths differ");
    double s = 0, prev = 0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        CVec d(a[i].size());
        for (std::size_t j = 0; j < d.size(); ++j) d[j] = a[i][j] - b[i][j];
        const double f = std::exp(-2 * tau[i]) * std::pow(sp.norm(d), 2);
        if (i > 0) s += 0.5 * (tau[i] - tau[i - 1]) * (f + prev);
        prev = f;
    }
    return std::sqrt(s);
}

double weighted_norm(const Spectral& sp, const RVec& tau, const std::vector<CVec>& a) {
    std::vector<CVec> zero(a.size(), CVec(a.empty() ? 0 : a[0].size(), 0.0));
    return weighted_distance(sp, tau, a, zero);
}

ConvergenceResult convergence_study(const Scenario& s,
                                    const std::function<void(const ConvergenceRow&, const Trajectory&)>& each) {
    s.validate();
    if (s.N_list.size() < 2) throw std::invalid_argument("convergence_study: need at least 2 values of N");
    const Spectral sp(s.v0_grid());
    const FokkerPlanck fp(sp, kspace_tensor(sp, s.k_rule(), s.potential, s.beta), s.kappa);
    const CVec g_init = initial_datum(sp, s);
    ConvergenceResult res;
    for (double N : s.N_list) {
        const auto t0 = std::chrono::steady_clock::now();
        Trajectory tr = run_hierarchy(s, N);
        FpTrajectory ref = solve_fokker_planck(fp, sp, g_init, tr.tau);
        ConvergenceRow row{};
        row.N = N;
        row.error = weighted_distance(sp, tr.tau, tr.g0, ref.g);
        for (std::size_t i = 0; i < tr.tau.size(); ++i) {
            CVec d(g_init.size());
            for (std::size_t j = 0; j < d.size(); ++j) d[j] = tr.g0[i][j] - ref.g[i][j];
            row.sup_error = std::max(row.sup_error, sp.norm(d));
        }
        const double tm = tr.tau.back();
        row.tail_bound = std::exp(-2 * tm) * std::pow(std::sqrt(tr.energy.back()) + std::sqrt(ref.norm2.back()), 2) / 2;
        row.max_energy_increase = tr.max_energy_increase;
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        res.rows.push_back(row);
        if (each) each(row, tr);
    }
    const int m = static_cast<int>(res.rows.size());
    Eigen::MatrixXd X(m, 2);
    Eigen::VectorXd y(m);
    res.monotone = true;
    for (int i = 0; i < m; ++i) {
        X(i, 0) = 1;
        X(i, 1) = std::log(res.rows[i].N);
        y(i) = std::log(res.rows[i].error);
        if (i > 0 && !(res.rows[i].error < res.rows[i - 1].error)) res.monotone = false;
    }
    Eigen::VectorXd c = X.colPivHouseholderQr().solve(y);
    res.rate = -c(1);
    if (m > 2) {
        const double s2 = (y - X * c).squaredNorm() / (m - 2);
        res.rate_se = std::sqrt(s2 * (X.transpose() * X).inverse()(1, 1));
    }
    return res;
}

}  // namespace kinlab::sim
