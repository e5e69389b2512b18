#include "kinlab/landau.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <gsl/gsl_spline.h>

#include "kinlab/numerics.hpp"

namespace kinlab::landau {

namespace {

constexpr double pi = std::numbers::pi;

double ball_volume(int n) { return std::pow(pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0); }
double sphere_area(int n) { return n * ball_volume(n); }  // |S^{n-1}|

void require_dim(const Potential& p, int lo, int hi) {
    if (p.d < lo || p.d > hi) throw std::invalid_argument("landau: unsupported dimension");
}

// Composite Gauss-Legendre on [a, b] with unit-ish panels.
Rule panels(double a, double b, double width, int per_panel) {
    int np = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
    RVec edges(np + 1);
    for (int i = 0; i <= np; ++i) edges[i] = a + (b - a) * i / np;
    return composite_gauss(edges, per_panel);
}

// Radial integral of f over [0, k_max] at two resolutions; throws if they disagree.
double radial(const Potential& p, const std::function<double(double)>& f) {
    auto eval = [&](int n) {
        Rule r = panels(0.0, p.k_max, 1.0, n);
        double s = 0;
        for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * f(r.x[i]);
        return s;
    };
    const int n = std::max(4, p.radial_nodes / 8);
    double a = eval(n), b = eval(2 * n);
    if (std::abs(a - b) > 1e-10 * std::max(std::abs(b), 1e-300) && std::abs(a - b) > 1e-300)
        throw std::runtime_error("landau: radial quadrature did not converge");
    return b;
}

// Panels on [0, kmax], graded geometrically towards 0 where khat varies fastest.
Rule graded(double kmax, int per_panel) {
    RVec e{0.0};
    for (double t = 1.0 / 64; t < 1.0; t *= 2) e.push_back(t);
    for (double t = 1.0; t < kmax; t += 1.0) e.push_back(t);
    e.push_back(kmax);
    return composite_gauss(e, per_panel);
}

// Orthonormal basis of the complement of w (columns).
MatrixXd complement_basis(const VectorXd& w) {
    const int d = static_cast<int>(w.size());
    Eigen::HouseholderQR<MatrixXd> qr(w);
    MatrixXd Q = qr.householderQ() * MatrixXd::Identity(d, d);
    return Q.rightCols(d - 1);
}

Extrapolated richardson(const std::function<MatrixXd(double)>& B, double delta) {
    Extrapolated e;
    for (int i = 0; i < 3; ++i) e.levels[i] = B(delta / (1 << i));
    MatrixXd r1 = (4 * e.levels[1] - e.levels[0]) / 3;
    MatrixXd r2 = (4 * e.levels[2] - e.levels[1]) / 3;
    e.value = (16 * r2 - r1) / 15;
    e.change = (e.value - r2).norm();
    return e;
}

// Sum over the delta-regularized measure: k = x what + y, y in the complement.
// weight(k) multiplies pi Vhat^2 (k x k)/(2pi)^d.
MatrixXd regularized(const VectorXd& w, const Potential& p, double delta,
                     const std::function<double(const VectorXd&)>& weight, int refine) {
    require_dim(p, 2, 3);
    if (w.size() != p.d) throw std::invalid_argument("landau: dimension mismatch");
    const double wn = w.norm();
    if (!(wn > 0)) throw std::invalid_argument("landau: w must be nonzero");
    if (!(delta > 0)) throw std::invalid_argument("landau: delta must be positive");
    const int d = p.d;
    const VectorXd wh = w / wn;
    const MatrixXd E = complement_basis(w);
    const Rule gh = gauss_hermite(40);
    const double xs = std::sqrt(2.0) * delta / wn;
    const int per = std::max(4, p.radial_nodes / 8) * refine / 2;
    MatrixXd out = MatrixXd::Zero(d, d);
    VectorXd k(d);
    auto add = [&](double wt) {
        double kn = k.norm();
        double vh = p(kn);
        if (vh == 0) return;
        out.noalias() += (wt * pi * vh * vh * weight(k)) * (k * k.transpose());
    };
    for (std::size_t a = 0; a < gh.size(); ++a) {
        const double x = xs * gh.x[a];
        const double wx = gh.w[a] / std::sqrt(pi);
        if (std::abs(x) > p.k_max) continue;
        const Rule r = graded(p.k_max, per);
        if (d == 2) {
            for (std::size_t i = 0; i < r.size(); ++i)
                for (double sgn : {-1.0, 1.0}) {
                    k = x * wh + sgn * r.x[i] * E.col(0);
                    add(wx * r.w[i]);
                }
        } else {
            const int na = p.angular_nodes * refine / 2;
            for (std::size_t i = 0; i < r.size(); ++i)
                for (int j = 0; j < na; ++j) {
                    double phi = 2 * pi * j / na;
                    k = x * wh + r.x[i] * (std::cos(phi) * E.col(0) + std::sin(phi) * E.col(1));
                    add(wx * r.w[i] * r.x[i] * 2 * pi / na);
                }
        }
    }
    // rho_delta(x |w|) has mass 1/|w| in x
    out /= std::pow(2 * pi, d) * wn;
    return (out + out.transpose()) / 2;
}

MatrixXd checked(const std::function<MatrixXd(int)>& f, double tol) {
    MatrixXd a = f(2), b = f(3);
    if ((a - b).norm() > tol * std::max(b.norm(), 1e-300) && (a - b).norm() > 1e-300)
        throw std::runtime_error("landau: quadrature did not converge (" + std::to_string((a - b).norm() / b.norm()) + ")");
    return b;
}

// PV integral of M_1'(x)/(z - x) by subtraction on [z - L, z + L].
double pv_part(double z, double beta) {
    const double s = 1 / std::sqrt(beta);
    const double L = std::abs(z) + 12 * s;
    auto f = [beta](double x) { return -beta * x * maxwellian_1d(x, beta); };
    const double fz = f(z);
    Rule r = panels(z - L, z + L, 0.5 * s, 8);
    double sum = 0;
    for (std::size_t i = 0; i < r.size(); ++i) sum += r.w[i] * (f(r.x[i]) - fz) / (z - r.x[i]);
    return sum;
}

}  // namespace

Potential Potential::gaussian(int d, double amplitude, double width, double k_max) {
    Potential p;
    p.name = "gaussian";
    p.d = d;
    p.k_max = k_max;
    p.profile = [amplitude, width](double k) { return amplitude * std::exp(-(k / width) * (k / width)); };
    return p;
}

Potential Potential::zero(int d) {
    Potential p;
    p.name = "zero";
    p.d = d;
    p.profile = [](double) { return 0.0; };
    return p;
}

Potential Potential::scaled(double c) const {
    Potential q = *this;
    auto f = profile;
    q.profile = [f, c](double k) { return c * f(k); };
    return q;
}

double maxwellian(const VectorXd& v, double beta) {
    const double d = static_cast<double>(v.size());
    return std::pow(beta / (2 * pi), d / 2) * std::exp(-beta * v.squaredNorm() / 2);
}

double maxwellian_1d(double x, double beta) { return std::sqrt(beta / (2 * pi)) * std::exp(-beta * x * x / 2); }

double lambda_V(const Potential& p) {
    require_dim(p, 2, 64);
    const double I = radial(p, [&](double r) {
        double v = p(r);
        return std::pow(r, p.d) * v * v;
    });
    return ball_volume(p.d - 1) * pi * I / std::pow(2 * pi, p.d);
}

double c_s_constant(const Potential& p, double s, int power) {
    if (s < 0) throw std::invalid_argument("c_s_constant: s must be >= 0");
    if (p.d - s <= -1) throw std::invalid_argument("c_s_constant: integrand not integrable at k = 0");
    if (power != 1 && power != 2) throw std::invalid_argument("c_s_constant: power must be 1 or 2");
    const double I = radial(p, [&](double r) {
        double v = p(r);
        return std::pow(1 + r * r, s / 2) * std::pow(r, p.d - s) * (power == 2 ? v * v : v);
    });
    return sphere_area(p.d) * I;
}

KappaThresholds kappa_thresholds(const Potential& p) { return {c_s_constant(p, 0, 1), c_s_constant(p, 0, 2)}; }

MatrixXd landau_kernel(const VectorXd& w, const Potential& p) {
    const double n = w.norm();
    if (!(n > 0)) throw std::invalid_argument("landau_kernel: w must be nonzero");
    const VectorXd u = w / n;
    const int d = static_cast<int>(w.size());
    return lambda_V(p) / n * (MatrixXd::Identity(d, d) - u * u.transpose());
}

MatrixXd landau_kernel_bruteforce(const VectorXd& w, const Potential& p, double delta) {
    auto one = [](const VectorXd&) { return 1.0; };
    return checked([&](int refine) { return regularized(w, p, delta, one, refine); }, 1e-8);
}

Extrapolated landau_kernel_extrapolated(const VectorXd& w, const Potential& p, double delta) {
    return richardson([&](double dl) { return landau_kernel_bruteforce(w, p, dl); }, delta);
}

MatrixXd diffusion_tensor(const VectorXd& v, const Potential& p, double beta, bool check, double tol) {
    require_dim(p, 2, 3);
    if (v.size() != p.d) throw std::invalid_argument("diffusion_tensor: dimension mismatch");
    const int d = p.d;
    const double lam = lambda_V(p);
    const double R = v.norm() + 10 / std::sqrt(beta);
    auto eval = [&](int refine) {
        Rule r = panels(0.0, R, 0.75 / std::sqrt(beta), 6 * refine);
        const MatrixXd I = MatrixXd::Identity(d, d);
        MatrixXd out = MatrixXd::Zero(d, d);
        VectorXd th(d);
        if (d == 2) {
            const int na = 48 * refine;
            for (int j = 0; j < na; ++j) {
                double a = 2 * pi * j / na;
                th << std::cos(a), std::sin(a);
                double m = 0;
                for (std::size_t i = 0; i < r.size(); ++i) m += r.w[i] * maxwellian(v - r.x[i] * th, beta);
                out.noalias() += (m * 2 * pi / na) * (I - th * th.transpose());
            }
        } else {
            Rule c = gauss_legendre(16 * refine, -1.0, 1.0);
            const int na = 32 * refine;
            for (std::size_t q = 0; q < c.size(); ++q) {
                double st = std::sqrt(1 - c.x[q] * c.x[q]);
                for (int j = 0; j < na; ++j) {
                    double a = 2 * pi * j / na;
                    th << st * std::cos(a), st * std::sin(a), c.x[q];
                    double m = 0;
                    for (std::size_t i = 0; i < r.size(); ++i)
                        m += r.w[i] * r.x[i] * maxwellian(v - r.x[i] * th, beta);
                    out.noalias() += (m * c.w[q] * 2 * pi / na) * (I - th * th.transpose());
                }
            }
        }
        out *= lam;
        return MatrixXd((out + out.transpose()) / 2);
    };
    if (!check) return eval(2);
    MatrixXd a = eval(2), b = eval(3);
    if ((a - b).norm() > tol * b.norm()) throw std::runtime_error("diffusion_tensor: quadrature did not converge");
    return b;
}

MatrixXd diffusion_tensor_kspace(const VectorXd& v, const std::vector<VectorXd>& k, const std::vector<double>& wk,
                                 const Potential& p, double beta) {
    const int d = static_cast<int>(v.size());
    MatrixXd out = MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double kn = k[i].norm();
        if (kn == 0) continue;
        const double vh = p(kn);
        out.noalias() += (wk[i] * pi * vh * vh * maxwellian_1d(k[i].dot(v) / kn, beta) / kn) * (k[i] * k[i].transpose());
    }
    return out;
}

std::complex<double> dispersion_function(const VectorXd& k, double z, const Potential& p, double beta) {
    const double kn = k.norm();
    if (!(kn > 0)) throw std::invalid_argument("dispersion_function: k must be nonzero");
    const double vh = p(kn);
    if (vh == 0) return 1.0;
    const double fz = -beta * z * maxwellian_1d(z, beta);
    return 1.0 + vh * std::complex<double>(pv_part(z, beta), pi * fz);
}

MatrixXd lenard_balescu_kernel(const VectorXd& v, const VectorXd& w, const Potential& p, double beta, double delta,
                               bool screening) {
    // z = khat.v stays in [-|v|, |v|]; tabulate the PV part there once.
    const double zr = v.norm() + 1.0;
    const int nz = 4001;
    std::vector<double> zs(nz), pv(nz);
    if (screening)
        for (int i = 0; i < nz; ++i) {
            zs[i] = -zr + 2 * zr * i / (nz - 1);
            pv[i] = pv_part(zs[i], beta);
        }
    gsl_interp_accel* acc = gsl_interp_accel_alloc();
    gsl_spline* sp = gsl_spline_alloc(gsl_interp_cspline, nz);
    if (screening) gsl_spline_init(sp, zs.data(), pv.data(), nz);
    auto weight = [&](const VectorXd& k) {
        if (!screening) return 1.0;
        const double kn = k.norm();
        const double z = k.dot(v) / kn;
        const std::complex<double> eps =
            1.0 + p(kn) * std::complex<double>(gsl_spline_eval(sp, z, acc), -pi * beta * z * maxwellian_1d(z, beta));
        return 1.0 / std::norm(eps);
    };
    MatrixXd out;
    try {
        out = checked([&](int refine) { return regularized(w, p, delta, weight, refine); }, 1e-7);
    } catch (...) {
        gsl_spline_free(sp);
        gsl_interp_accel_free(acc);
        throw;
    }
    gsl_spline_free(sp);
    gsl_interp_accel_free(acc);
    return out;
}

Extrapolated lenard_balescu_extrapolated(const VectorXd& v, const VectorXd& w, const Potential& p, double beta,
                                         double delta, bool screening) {
    return richardson([&](double dl) { return lenard_balescu_kernel(v, w, p, beta, dl, screening); }, delta);
}

}  // namespace kinlab::landau
