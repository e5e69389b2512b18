#include "kinlab/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kinlab::spectral {

namespace {

constexpr double pi = std::numbers::pi;

// f *= prod_axis fac[axis][i_axis] over a row-major n^D block.
void multiply_separable(CVec& f, const std::vector<CVec>& fac) {
    CVec full{1.0};
    for (const auto& a : fac) {
        CVec next(full.size() * a.size());
        for (std::size_t i = 0; i < full.size(); ++i)
            for (std::size_t j = 0; j < a.size(); ++j) next[i * a.size() + j] = full[i] * a[j];
        full.swap(next);
    }
    if (full.size() != f.size()) throw std::logic_error("multiply_separable: size mismatch");
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= full[i];
}

// exp(-i s a.v) as per-axis factors.
std::vector<CVec> phase_factors(const VelocityGrid& g, const VectorXd& a, double s) {
    std::vector<CVec> fac(g.d, CVec(g.n));
    for (int ax = 0; ax < g.d; ++ax)
        for (int i = 0; i < g.n; ++i) fac[ax][i] = std::polar(1.0, -s * a(ax) * g.coord(i));
    return fac;
}

double max_abs_av(const VelocityGrid& g, const VectorXd& a) { return a.cwiseAbs().sum() * g.vmax; }

}  // namespace

double VelocityGrid::cell() const { return std::pow(h(), d); }

std::size_t VelocityGrid::size() const {
    std::size_t s = 1;
    for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(n);
    return s;
}

VectorXd VelocityGrid::point(std::size_t idx) const {
    VectorXd v(d);
    for (int ax = d - 1; ax >= 0; --ax) {
        v(ax) = coord(static_cast<int>(idx % n));
        idx /= n;
    }
    return v;
}

void VelocityGrid::validate(double beta) const {
    if (d < 1) throw std::invalid_argument("VelocityGrid: d must be >= 1");
    if (n < 2 || n % 2) throw std::invalid_argument("VelocityGrid: n_pts must be even and >= 2");
    if (!(vmax > 0)) throw std::invalid_argument("VelocityGrid: v_max must be positive");
    if (beta > 0 && vmax < 6 / std::sqrt(beta) - 1e-12)
        throw std::invalid_argument("VelocityGrid: v_max must be >= 6/sqrt(beta)");
}

Spectral::Spectral(const VelocityGrid& g) : g_(g) {
    g_.validate();
    fft_ = std::make_shared<Fft>(std::vector<int>(g.d, g.n));
    xi_d_.assign(g.d, fft_frequencies(g.n, g.h(), true));
    xi_full_.assign(g.d, fft_frequencies(g.n, g.h(), false));
}

double Spectral::freq(std::size_t idx, int axis, bool zero_nyquist) const {
    for (int ax = g_.d - 1; ax > axis; --ax) idx /= g_.n;
    return (zero_nyquist ? xi_d_ : xi_full_)[axis][idx % g_.n];
}

double Spectral::freq_sq(std::size_t idx) const {
    double s = 0;
    for (int ax = g_.d - 1; ax >= 0; --ax) {
        double x = xi_full_[ax][idx % g_.n];
        s += x * x;
        idx /= g_.n;
    }
    return s;
}

CVec Spectral::gradient(const CVec& f, int axis) const {
    VectorXd a = VectorXd::Zero(g_.d);
    a(axis) = 1;
    return directional(f, a);
}

CVec Spectral::directional(const CVec& f, const VectorXd& a) const {
    CVec u = f;
    forward(u);
    std::vector<CVec> fac(g_.d, CVec(g_.n));
    // i (a . xi) is additive, so build it as a sum rather than a product
    CVec sym(size(), 0.0);
    std::size_t stride = 1;
    for (int ax = g_.d - 1; ax >= 0; --ax) {
        for (std::size_t i = 0; i < size(); ++i) sym[i] += cplx(0, a(ax) * xi_d_[ax][(i / stride) % g_.n]);
        stride *= g_.n;
    }
    for (std::size_t i = 0; i < size(); ++i) u[i] *= sym[i];
    backward(u);
    return u;
}

CVec Spectral::laplacian(const CVec& f) const {
    CVec u = f;
    forward(u);
    for (std::size_t i = 0; i < size(); ++i) u[i] *= -freq_sq(i);
    backward(u);
    return u;
}

CVec Spectral::heat(const CVec& f, double s) const {
    CVec u = f;
    forward(u);
    std::vector<CVec> fac(g_.d, CVec(g_.n));
    for (int ax = 0; ax < g_.d; ++ax)
        for (int i = 0; i < g_.n; ++i) fac[ax][i] = std::exp(-s * xi_full_[ax][i] * xi_full_[ax][i]);
    multiply_separable(u, fac);
    backward(u);
    return u;
}

CVec Spectral::sample(const std::function<cplx(const VectorXd&)>& f) const {
    CVec out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = f(g_.point(i));
    return out;
}

CVec semigroup_step(const Spectral& sp, const CVec& f, double t, const VectorXd& a, double sigma) {
    if (t < 0 || sigma < 0) throw std::invalid_argument("semigroup_step: t and sigma must be >= 0");
    if (t == 0) return f;
    const auto ph = phase_factors(sp.grid(), a, t / 2);
    CVec u = f;
    multiply_separable(u, ph);
    u = sp.heat(u, sigma * t);
    multiply_separable(u, ph);
    const double s = std::exp(-sigma * a.squaredNorm() * t * t * t / 12);
    for (auto& z : u) z *= s;
    return u;
}

Rule green_ladder(const Spectral& sp, cplx omega, const VectorXd& a, const GreenOptions& o, int per_panel) {
    const double re = omega.real();
    if (!(re > 0)) throw std::invalid_argument("resolvent_green: Re omega must be positive");
    const double t1 = std::min(o.t_max_factor / re, o.t_cap);
    const double t0 = std::min(o.t_min_factor / re, t1 / 2);
    RVec edges = geometric_edges(t0, t1, o.ratio);
    const double rate = std::abs(omega.imag()) + max_abs_av(sp.grid(), a);
    RVec fine{edges[0]};
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double len = edges[i + 1] - edges[i];
        const int parts = std::max(1, static_cast<int>(std::ceil(len * rate / o.max_phase)));
        for (int j = 1; j <= parts; ++j) fine.push_back(edges[i] + len * j / parts);
    }
    return composite_gauss(fine, per_panel);
}

CVec resolvent_green(const Spectral& sp, cplx omega, const VectorXd& a, double sigma, const CVec& f,
                     const GreenOptions& o) {
    if (!(sigma > 0)) throw std::invalid_argument("resolvent_green: sigma must be positive");
    auto eval = [&](int per_panel) {
        Rule r = green_ladder(sp, omega, a, o, per_panel);
        CVec acc(f.size(), 0.0);
        for (std::size_t j = 0; j < r.size(); ++j) {
            CVec u = semigroup_step(sp, f, r.x[j], a, sigma);
            const cplx c = r.w[j] * std::exp(-omega * r.x[j]);
            for (std::size_t i = 0; i < u.size(); ++i) acc[i] += c * u[i];
        }
        return acc;
    };
    CVec out = eval(o.per_panel);
    if (o.check) {
        CVec ref = eval(o.per_panel + 8);
        CVec diff(out.size());
        for (std::size_t i = 0; i < out.size(); ++i) diff[i] = out[i] - ref[i];
        const double rel = l2_norm(diff) / std::max(l2_norm(ref), 1e-300);
        if (rel > o.tol)
            throw std::runtime_error("resolvent_green: ladder refinement disagrees (" + std::to_string(rel) + ")");
        return ref;
    }
    return out;
}

CVec transport_diffusion_apply(const Spectral& sp, cplx omega, const VectorXd& a, double sigma, const CVec& f) {
    CVec lap = sp.laplacian(f);
    CVec out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double av = a.dot(sp.grid().point(i));
        out[i] = (omega + cplx(0, av)) * f[i] - sigma * lap[i];
    }
    return out;
}

GmresResult resolvent_direct(const Spectral& sp, cplx omega, const VectorXd& a, double sigma, const CVec& f,
                             double tol, int max_iter) {
    if (sp.size() > 100000) throw std::invalid_argument("resolvent_direct: at most 1e5 unknowns");
    if (!(omega.real() > 0)) throw std::invalid_argument("resolvent_direct: Re omega must be positive");
    RVec av(sp.size()), ksq(sp.size());
    for (std::size_t i = 0; i < sp.size(); ++i) {
        av[i] = a.dot(sp.grid().point(i));
        ksq[i] = sp.freq_sq(i);
    }
    LinOp A = [&](const CVec& x, CVec& y) {
        CVec u = x;
        sp.forward(u);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] *= sigma * ksq[i];
        sp.backward(u);
        y.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = (omega + cplx(0, av[i])) * x[i] + u[i];
    };
    LinOp P = [&](const CVec& x, CVec& y) {
        y = x;
        sp.forward(y);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] /= omega + sigma * ksq[i];
        sp.backward(y);
    };
    GmresResult r = gmres(A, f, &P, tol, 60, max_iter);
    if (!r.converged)
        throw std::runtime_error("resolvent_direct: GMRES did not converge (residual " + std::to_string(r.residual) +
                                 ")");
    return r;
}

KQuadrature KQuadrature::full() const {
    if (!half) return *this;
    KQuadrature q;
    for (std::size_t i = 0; i < size(); ++i) {
        q.k.push_back(k[i]);
        q.w.push_back(w[i]);
        q.k.push_back(-k[i]);
        q.w.push_back(w[i]);
    }
    return q;
}

KQuadrature polar_kquad(int d, int n_radial, int n_angular, double k_cut, bool half) {
    if (d < 1 || d > 3) throw std::invalid_argument("polar_kquad: d must be 1, 2 or 3");
    if (n_radial < 1 || !(k_cut > 0)) throw std::invalid_argument("polar_kquad: bad radial spec");
    if (d > 1 && (n_angular < 2 || n_angular % 2))
        throw std::invalid_argument("polar_kquad: n_angular must be even");
    Rule r = gauss_legendre(n_radial, 0.0, k_cut);
    const double norm = std::pow(2 * pi, -d);
    std::vector<VectorXd> dirs;
    RVec dw;
    if (d == 1) {
        for (double s : {1.0, -1.0}) dirs.push_back(VectorXd::Constant(1, s)), dw.push_back(1.0);
    } else if (d == 2) {
        for (int j = 0; j < n_angular; ++j) {
            double th = 2 * pi * (j + 0.5) / n_angular;
            VectorXd u(2);
            u << std::cos(th), std::sin(th);
            dirs.push_back(u);
            dw.push_back(2 * pi / n_angular);
        }
    } else {
        Rule c = gauss_legendre(n_angular / 2 % 2 ? n_angular / 2 + 1 : n_angular / 2, -1.0, 1.0);
        for (std::size_t q = 0; q < c.size(); ++q)
            for (int j = 0; j < n_angular; ++j) {
                double ph = 2 * pi * (j + 0.5) / n_angular, st = std::sqrt(1 - c.x[q] * c.x[q]);
                VectorXd u(3);
                u << st * std::cos(ph), st * std::sin(ph), c.x[q];
                dirs.push_back(u);
                dw.push_back(c.w[q] * 2 * pi / n_angular);
            }
    }
    KQuadrature kq;
    kq.half = half;
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < dirs.size(); ++j) {
            const VectorXd& u = dirs[j];
            if (half) {
                // keep the member of {u, -u} whose first nonzero coordinate is positive
                int ax = 0;
                while (ax < d - 1 && std::abs(u(ax)) < 1e-12) ++ax;
                if (u(ax) < 0) continue;
            }
            kq.k.push_back(r.x[i] * u);
            kq.w.push_back(r.w[i] * std::pow(r.x[i], d - 1) * dw[j] * norm);
        }
    return kq;
}

double radial_cutoff(const Potential& p, double rel) {
    const int n = 4000;
    RVec f(n + 1);
    double peak = 0;
    for (int i = 0; i <= n; ++i) {
        double r = p.k_max * i / n, v = p(r);
        f[i] = std::pow(r, p.d + 1) * v * v;
        peak = std::max(peak, f[i]);
    }
    if (peak == 0) return p.k_max;
    for (int i = n; i >= 0; --i)
        if (f[i] >= rel * peak) return std::min(p.k_max, p.k_max * (i + 1) / n);
    return p.k_max;
}

double sqrt_maxwellian(const VectorXd& v, double beta) { return std::sqrt(landau::maxwellian(v, beta)); }

CVec apply_S_minus(const Spectral& sp0, const CVec& g0, const VectorXd& k, const Potential& p, double beta) {
    const VelocityGrid& g = sp0.grid();
    if (g0.size() != sp0.size()) throw std::invalid_argument("apply_S_minus: slot mismatch");
    const double vh = p(k.norm());
    CVec dg = sp0.directional(g0, k);
    RVec sm(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) sm[j] = sqrt_maxwellian(g.point(j), beta);
    CVec out(g.size() * g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) out[i * g.size() + j] = -vh * sm[j] * dg[i];
    return out;
}

CVec apply_S_plus(const Spectral& sp0, const std::vector<CVec>& g1, const KQuadrature& kq, const Potential& p,
                  double beta) {
    const VelocityGrid& g = sp0.grid();
    if (kq.half) throw std::invalid_argument("apply_S_plus: expects a full wavenumber rule");
    if (g1.size() != kq.size()) throw std::invalid_argument("apply_S_plus: one field per node expected");
    RVec sm(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) sm[j] = sqrt_maxwellian(g.point(j), beta);
    CVec out(g.size(), 0.0);
    for (std::size_t q = 0; q < kq.size(); ++q) {
        if (g1[q].size() != g.size() * g.size()) throw std::invalid_argument("apply_S_plus: slot mismatch");
        CVec proj(g.size(), 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            cplx s = 0;
            for (std::size_t j = 0; j < g.size(); ++j) s += sm[j] * g1[q][i * g.size() + j];
            proj[i] = s * g.cell();
        }
        CVec d = sp0.directional(proj, kq.k[q]);
        const double c = kq.w[q] * p(kq.k[q].norm());
        for (std::size_t i = 0; i < g.size(); ++i) out[i] += c * d[i];
    }
    return out;
}

double correlation(double t, double kn, const HatParams& hp, int d) {
    const double s = hp.sigma(), b = hp.beta;
    double c = std::exp(-s * kn * kn * t * t * t / 12 - kn * kn * t * t / (2 * b)) / std::sqrt(1 + s * b * t / 2);
    if (hp.perp == HatParams::Perp::Exact)
        c *= std::pow(1 + s * b * t / 2, -(d - 1) / 2.0);
    else
        c *= std::exp(-(d - 1) * s * b * t / 4);
    return c;
}

CVec hat_apply(const Spectral& sp0, const HatParams& hp, const CVec& g, const Potential& p, const KQuadrature& kq) {
    if (!(hp.kappa > 0) || !(hp.N >= 1)) throw std::invalid_argument("hat_apply: need kappa > 0 and N >= 1");
    const KQuadrature q = kq.full();
    const VelocityGrid& grid = sp0.grid();
    const cplx omega = hp.omega();
    const double sigma = hp.sigma();
    std::vector<CVec> parts(q.size());
    parallel_for(q.size(), [&](std::size_t n) {
        const VectorXd& k = q.k[n];
        const double kn = k.norm(), vh = p(kn);
        if (kn == 0 || vh == 0) return;
        const CVec u = sp0.directional(g, k);
        const double T = std::min(40 / omega.real(), std::sqrt(80 * hp.beta) / kn);
        const double rate = std::abs(omega.imag()) + kn * grid.vmax * std::sqrt(grid.d);
        const int panels = std::max(2, static_cast<int>(std::ceil(T * rate / hp.max_phase)));
        RVec edges(panels + 1);
        for (int i = 0; i <= panels; ++i) edges[i] = T * i / panels;
        const Rule r = composite_gauss(edges, hp.per_panel);
        const VectorXd a = -k;
        CVec acc(u.size(), 0.0);
        for (std::size_t j = 0; j < r.size(); ++j) {
            const double t = r.x[j];
            const cplx c = r.w[j] * std::exp(-omega * t) * correlation(t, kn, hp, grid.d);
            CVec s = semigroup_step(sp0, u, t, a, sigma);
            for (std::size_t i = 0; i < s.size(); ++i) acc[i] += c * s[i];
        }
        CVec out = sp0.directional(acc, k);
        const double f = -q.w[n] * vh * vh;
        for (auto& z : out) z *= f;
        parts[n] = std::move(out);
    });
    CVec total(g.size(), 0.0);
    for (const auto& part : parts)
        for (std::size_t i = 0; i < part.size(); ++i) total[i] += part[i];
    return total;
}

CVec hat_apply_full(const Spectral& sp0, const HatParams& hp, const CVec& g, const Potential& p,
                    const KQuadrature& kq, const GreenOptions& o) {
    if (!(hp.kappa > 0) || !(hp.N >= 1)) throw std::invalid_argument("hat_apply_full: need kappa > 0 and N >= 1");
    const KQuadrature q = kq.full();
    const Spectral sp01(sp0.grid().doubled());
    const int d = sp0.grid().d;
    CVec total(g.size(), 0.0);
    for (std::size_t n = 0; n < q.size(); ++n) {
        CVec h = apply_S_minus(sp0, g, q.k[n], p, hp.beta);
        VectorXd a(2 * d);
        a << -q.k[n], q.k[n];
        CVec r = resolvent_green(sp01, hp.omega(), a, hp.sigma(), h, o);
        KQuadrature one;
        one.k = {q.k[n]};
        one.w = {q.w[n]};
        CVec part = apply_S_plus(sp0, {r}, one, p, hp.beta);
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += part[i];
    }
    return total;
}

DeformedAverage deformed_velocity_average(const Spectral& sp, const VectorXd& k, double t_N, double kappa, double N,
                                          double beta) {
    const double kn = k.norm();
    if (!(kn > 0)) throw std::invalid_argument("deformed_velocity_average: k must be nonzero");
    if (!(kappa > 0)) throw std::invalid_argument("deformed_velocity_average: kappa must be positive");
    const VectorXd kh = k / kn;
    const double sigma = kappa / N;
    GreenOptions o;
    // stop before the grid phases recur (2 pi / (h |k_i|))
    o.t_cap = pi / (sp.grid().h() * k.cwiseAbs().maxCoeff());
    o.per_panel = 20;
    CVec m = sp.sample([&](const VectorXd& v) { return cplx(landau::maxwellian(v, beta)); });
    CVec ms = sp.sample([&](const VectorXd& v) {
        return landau::maxwellian(v, beta) * std::exp(cplx(beta / 2, beta * kh.dot(v)));
    });
    auto total = [&](const CVec& f) {
        cplx s = 0;
        for (const auto& z : f) s += z;
        return s * sp.cell();
    };
    DeformedAverage r;
    r.direct = total(resolvent_green(sp, 1.0 / t_N, k, sigma, m, o));
    r.deformed = total(resolvent_green(sp, 1.0 / t_N + kn, k, sigma, ms, o));
    return r;
}

}  // namespace kinlab::spectral
