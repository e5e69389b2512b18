#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "kinlab/landau.hpp"
#include "kinlab/numerics.hpp"

namespace kinlab::spectral {

using Eigen::VectorXd;
using landau::Potential;

// Periodic grid on [-vmax, vmax)^d, n points per axis, row-major (axis 0 slowest).
struct VelocityGrid {
    int d = 2;
    int n = 24;
    double vmax = 6.0;

    double h() const { return 2 * vmax / n; }
    double cell() const;
    std::size_t size() const;
    double coord(int i) const { return -vmax + i * h(); }
    VectorXd point(std::size_t idx) const;
    // Grid on (v, v') with the same per-axis layout, dimension 2d.
    VelocityGrid doubled() const { return {2 * d, n, vmax}; }
    // n even, vmax > 0; with beta > 0 also the Maxwellian decay requirement.
    void validate(double beta = 0) const;
};

// FFT-based differential operators on one grid.
class Spectral {
public:
    explicit Spectral(const VelocityGrid& g);
    const VelocityGrid& grid() const { return g_; }
    std::size_t size() const { return g_.size(); }
    double cell() const { return g_.cell(); }

    void forward(CVec& f) const { fft_->forward(f.data()); }
    void backward(CVec& f) const { fft_->backward(f.data()); }
    // Frequency of flat index idx along axis (derivative version has zero Nyquist).
    double freq(std::size_t idx, int axis, bool zero_nyquist) const;
    double freq_sq(std::size_t idx) const;  // |xi|^2 with the full Nyquist entry

    CVec gradient(const CVec& f, int axis) const;
    CVec directional(const CVec& f, const VectorXd& a) const;  // a . grad f
    CVec laplacian(const CVec& f) const;
    CVec heat(const CVec& f, double s) const;  // exp(s Laplacian) f, s >= 0

    double norm(const CVec& f) const { return l2_norm(f, cell()); }
    cplx inner(const CVec& a, const CVec& b) const { return dot(a, b, cell()); }
    CVec sample(const std::function<cplx(const VectorXd&)>& f) const;

private:
    VelocityGrid g_;
    std::shared_ptr<Fft> fft_;
    std::vector<RVec> xi_d_, xi_full_;
};

// exp(-t (i a.v - sigma Laplacian)) by the phase / heat / phase factorization.
CVec semigroup_step(const Spectral& sp, const CVec& f, double t, const VectorXd& a, double sigma);

struct GreenOptions {
    double t_min_factor = 1e-4;  // first panel ends at t_min_factor / Re(omega)
    double t_max_factor = 30.0;  // ladder ends at t_max_factor / Re(omega)
    double t_cap = std::numeric_limits<double>::infinity();
    double ratio = 1.6;
    int per_panel = 16;
    double max_phase = 8.0;  // largest phase change allowed across one panel
    bool check = true;       // second evaluation with more nodes per panel
    double tol = 1e-8;
};

// Time ladder used by resolvent_green (exposed for diagnostics).
Rule green_ladder(const Spectral& sp, cplx omega, const VectorXd& a, const GreenOptions& o, int per_panel);

// (omega + i a.v - sigma Laplacian)^{-1} f by the Green representation.
CVec resolvent_green(const Spectral& sp, cplx omega, const VectorXd& a, double sigma, const CVec& f,
                     const GreenOptions& o = {});

// The same resolvent by preconditioned GMRES on the grid operator.
GmresResult resolvent_direct(const Spectral& sp, cplx omega, const VectorXd& a, double sigma, const CVec& f,
                             double tol = 1e-11, int max_iter = 4000);
// Applies omega + i a.v - sigma Laplacian.
CVec transport_diffusion_apply(const Spectral& sp, cplx omega, const VectorXd& a, double sigma, const CVec& f);

// Polar wavenumber quadrature (radial Gauss nodes on [0, k_cut] times angles).
// With half = true only one of each pair {k, -k} is stored; weights are those
// of the full rule.
struct KQuadrature {
    std::vector<VectorXd> k;
    RVec w;  // includes (2 pi)^-d
    bool half = false;
    std::size_t size() const { return k.size(); }
    KQuadrature full() const;  // adds the mirrored nodes of a half rule
};

KQuadrature polar_kquad(int d, int n_radial, int n_angular, double k_cut, bool half = false);
// Smallest radius beyond which r^{d+1} Vhat(r)^2 stays below rel times its peak.
double radial_cutoff(const Potential& p, double rel = 1e-16);

double sqrt_maxwellian(const VectorXd& v, double beta);

// Level-one creation/annihilation operators. Fields on (v0, v1) use the doubled
// grid with v0 as the slow index.
CVec apply_S_minus(const Spectral& sp0, const CVec& g0, const VectorXd& k, const Potential& p, double beta);
CVec apply_S_plus(const Spectral& sp0, const std::vector<CVec>& g1, const KQuadrature& kq, const Potential& p,
                  double beta);

struct HatParams {
    double alpha = 0;
    double t_N = 100;
    double kappa = 1;
    double N = 100;
    double beta = 1;
    // Galerkin: the transverse part of v1 is kept on its lowest Hermite mode
    // (matches the hierarchy discretization); Exact: closed-form decay.
    enum class Perp { Exact, Galerkin } perp = Perp::Exact;
    int per_panel = 16;
    double max_phase = 10.0;

    cplx omega() const { return cplx(1.0, alpha) / t_N; }
    double sigma() const { return kappa / N; }
};

// <sqrt M, exp(-t(i k.v - sigma Laplacian)) sqrt M> over R^d.
double correlation(double t, double kn, const HatParams& hp, int d);

// The hat operator by the separable Green form (one v0 field per node).
CVec hat_apply(const Spectral& sp0, const HatParams& hp, const CVec& g, const Potential& p, const KQuadrature& kq);
// Oracle: S_plus R S_minus with the resolvent on the full (v0, v1) grid.
CVec hat_apply_full(const Spectral& sp0, const HatParams& hp, const CVec& g, const Potential& p,
                    const KQuadrature& kq, const GreenOptions& o = {});

struct DeformedAverage {
    cplx direct;
    cplx deformed;
    double rel_diff() const { return std::abs(direct - deformed) / std::abs(direct); }
};
// Integral of (1/t_N + i k.v - (kappa/N) Laplacian)^{-1} M dv, evaluated on the
// grid as is and after the shift v -> v - i khat.
DeformedAverage deformed_velocity_average(const Spectral& sp, const VectorXd& k, double t_N, double kappa, double N,
                                          double beta);

// Largest singular value of (eta + i z - d^2/dz^2)^{-1} on [-L, L] with
// Dirichlet conditions, n interior points.
struct AiryOptions {
    double L = 12.0;
    int n = 2400;
    double tol = 1e-6;
    int max_iter = 500;
    unsigned seed = 7;
};
double airy_resolvent_norm(double eta, const AiryOptions& o = {});

// Same for (eps + i|k|w - sigma d^2/dw^2) on a fixed physical grid [-L, L].
double transport_resolvent_norm(double kn, double sigma, double eps, double L, int n, double tol = 1e-6,
                                unsigned seed = 7);

struct AiryFit {
    double exponent_N = 0, exponent_k = 0, log_c = 0;
    double se_N = 0, se_k = 0;  // standard errors
    double max_residual = 0;
    struct Point {
        double N, k, norm;
    };
    std::vector<Point> points;
};
struct AiryFitOptions {
    double L = 3.0;
    int n = 12000;
    double eps_rel = 1e-6;  // eps as a fraction of (|k|^2 sigma)^{1/3}
    double max_residual = 0.05;
};
AiryFit airy_scaling_fit(const std::vector<double>& N_list, const std::vector<double>& k_list, double kappa, int d,
                         const AiryFitOptions& o = {});

}  // namespace kinlab::spectral
