#pragma once

#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

namespace kinlab::landau {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Potential {
    std::string name = "gaussian";
    std::function<double(double)> profile;  // radial Fourier profile, >= 0
    double k_max = 8.0;
    int d = 2;
    int radial_nodes = 96;
    int angular_nodes = 64;

    double operator()(double k) const { return k <= k_max ? profile(k) : 0.0; }

    // amplitude * exp(-(k/width)^2), truncated at k_max.
    static Potential gaussian(int d, double amplitude = 1.0, double width = 1.0, double k_max = 8.0);
    static Potential zero(int d);
    Potential scaled(double c) const;
};

// Maxwellian (beta/2pi)^{d/2} exp(-beta|v|^2/2) and its one-dimensional marginal.
double maxwellian(const VectorXd& v, double beta);
double maxwellian_1d(double x, double beta);

double lambda_V(const Potential& p);
// integral of <k>^s |k|^{1-s} Vhat(k)^power dk over R^d.
double c_s_constant(const Potential& p, double s, int power = 2);

struct KappaThresholds {
    double with_vhat;     // integral of |k| Vhat(k) dk
    double with_vhat_sq;  // integral of |k| Vhat(k)^2 dk
};
KappaThresholds kappa_thresholds(const Potential& p);

MatrixXd landau_kernel(const VectorXd& w, const Potential& p);

// Integral of (k x k) pi Vhat^2 rho_delta(k.w) dk/(2pi)^d with a unit-mass
// Gaussian rho_delta of width delta in the scalar k.w. d = 2 or 3.
MatrixXd landau_kernel_bruteforce(const VectorXd& w, const Potential& p, double delta);

struct Extrapolated {
    MatrixXd value;
    MatrixXd levels[3];  // delta, delta/2, delta/4
    double change = 0;   // norm of the last Richardson correction
};

Extrapolated landau_kernel_extrapolated(const VectorXd& w, const Potential& p, double delta);

// A_0(v) = (B_0 * M)(v) by polar coordinates centred at v. d = 2 or 3.
// With check, a second evaluation at doubled resolution must agree to tol.
MatrixXd diffusion_tensor(const VectorXd& v, const Potential& p, double beta, bool check = false,
                          double tol = 1e-9);

// The same tensor from the wavenumber side: sum over a quadrature of
// w_k pi Vhat^2 (k x k) M_1(khat.v)/|k| (with the (2pi)^-d already in w_k).
MatrixXd diffusion_tensor_kspace(const VectorXd& v, const std::vector<VectorXd>& k, const std::vector<double>& wk,
                                 const Potential& p, double beta);

// epsilon(k, k.v) with z = khat.v: Plemelj evaluation.
std::complex<double> dispersion_function(const VectorXd& k, double z, const Potential& p, double beta);

MatrixXd lenard_balescu_kernel(const VectorXd& v, const VectorXd& w, const Potential& p, double beta, double delta,
                               bool screening = true);
Extrapolated lenard_balescu_extrapolated(const VectorXd& v, const VectorXd& w, const Potential& p, double beta,
                                         double delta, bool screening = true);

}  // namespace kinlab::landau
