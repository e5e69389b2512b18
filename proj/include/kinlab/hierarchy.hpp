#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kinlab/fokker_planck.hpp"
#include "kinlab/spectral_ops.hpp"

namespace kinlab::sim {

// Parameters of the m0 = 1 experiment. Fast time t and slow time tau are
// related by t = N tau (t_N = N).
struct Scenario {
    int d = 2;
    int n_v0 = 24;
    double v_max = 6.0;
    int n_w = 64;  // grid for w = khat . v1
    double w_max = 8.0;
    int k_radial = 16;
    int k_angular = 12;  // angles on the full circle; half of them are stored
    double beta = 1.0;
    double kappa = 1.0;
    double tau_max = 1.0;
    double dt = 0.5;  // fast-time step
    int fixed_point = 3;
    double w_cut = 6.0;  // w-frequency content below -w_cut sqrt(beta) is dropped
    double energy_tol = 1e-9;
    std::vector<double> v_star{1.0, 0.0};
    std::vector<double> N_list{25, 50, 100, 200};
    landau::Potential potential = landau::Potential::gaussian(2);

    void validate() const;
    spectral::VelocityGrid v0_grid() const { return {d, n_v0, v_max}; }
    spectral::KQuadrature k_rule() const;  // half rule
};

// sqrt(M) times exp(-|v - v_star|^2).
CVec initial_datum(const spectral::Spectral& sp, const Scenario& s);

struct HierarchyState {
    CVec g0;
    std::vector<CVec> h;  // one (v0, w) field per stored wavenumber
    double tau = 0;
};

// Truncated hierarchy at m0 = 1 in the unknowns g0 and h = sqrt(N) g1, with v1
// stored as (w, lowest transverse Hermite mode). Only one of each pair
// {k, -k} is stored; the other is its conjugate reflection in w.
class Hierarchy {
public:
    Hierarchy(const Scenario& s, double N);

    HierarchyState initial(const CVec& g0) const;
    // One fast step of length dt: (transport + coupling) dt/2, diffusion dt,
    // (transport + coupling) dt/2.
    void step(HierarchyState& st) const;
    double energy(const HierarchyState& st) const;
    double dtau() const { return s_.dt / N_; }
    const spectral::Spectral& v0() const { return sp0_; }
    const spectral::KQuadrature& k_rule() const { return kq_; }

private:
    struct Mode;
    void coupling(HierarchyState& st) const;
    void diffusion(HierarchyState& st) const;

    Scenario s_;
    double N_;
    spectral::Spectral sp0_;
    spectral::KQuadrature kq_;
    std::shared_ptr<Fft> fft01_;
    RVec w_, sqrt_m1_;
    RVec heat_;  // diffusion multiplier on the (v0, w) frequency grid, cutoff applied
    std::vector<std::shared_ptr<Mode>> modes_;
};

struct Trajectory {
    RVec tau, energy;
    std::vector<CVec> g0;
    double max_energy_increase = 0;  // relative to the initial energy, per step
};

// Runs to tau_max; throws if the energy grows by more than energy_tol * E(0) in a step.
Trajectory run_hierarchy(const Scenario& s, double N, const std::function<void(double)>& progress = {});

// Laplace-domain ansatz:
// (1 + i alpha - kappa Lap + hat_alpha) Lg = g_init, inverted on tau.
struct LaplaceOptions {
    double panel = 0.5;         // panel width for alpha below alpha_switch
    double alpha_switch = 8.0;  // panels grow geometrically beyond this
    double growth = 1.25;
    double alpha_max = 4000.0;
    double tail_tol = 1e-5;  // estimated weighted-L2 tail / |g_init|
    double gmres_tol = 1e-10;
    int max_iter = 200;
};

struct LaplaceProfile {
    RVec alpha;                   // nodes (odd count, panels are consecutive triples)
    std::vector<CVec> values;     // L g at each node
    std::vector<CVec> remainder;  // L g minus the Fokker-Planck transform
    std::vector<int> iterations;
    double A = 0;
    double tail_estimate = 0;
};

// e^tau / pi Re int_0^A e^{i alpha tau} F(alpha) d alpha with quadratic Filon
// panels (for real-valued originals). With subtract_leading, c/(1 + i alpha)
// matched at the last node is removed first and its original c added back.
CVec invert_laplace(const RVec& alpha, const std::vector<CVec>& values, double tau, bool subtract_leading = false);

struct AnsatzSolution {
    LaplaceProfile profile;
    RVec tau;
    std::vector<CVec> g0;
};

AnsatzSolution solve_ansatz_laplace(const Scenario& s, double N, const RVec& tau,
                                    const LaplaceOptions& o = {});

// (int_0^tau_max e^{-2 tau} |a - b|^2 dtau)^{1/2} by the trapezoid rule on the shared times.
double weighted_distance(const spectral::Spectral& sp, const RVec& tau, const std::vector<CVec>& a,
                         const std::vector<CVec>& b);
double weighted_norm(const spectral::Spectral& sp, const RVec& tau, const std::vector<CVec>& a);

struct ConvergenceRow {
    double N;
    double error;       // weighted distance to the Fokker-Planck solution
    double sup_error;   // max over the stored times
    double tail_bound;  // bound on the squared tail beyond tau_max
    double max_energy_increase;
    double seconds;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    double rate = 0;  // -slope of log error vs log N
    double rate_se = 0;
    bool monotone = false;
};

// The Fokker-Planck reference uses A_0 on the same wavenumber rule as the hierarchy.
ConvergenceResult convergence_study(const Scenario& s,
                                    const std::function<void(const ConvergenceRow&, const Trajectory&)>& each = {});

}  // namespace kinlab::sim
