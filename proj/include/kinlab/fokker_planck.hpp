#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "kinlab/spectral_ops.hpp"

namespace kinlab::sim {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Symmetric d x d tensor sampled at every point of a velocity grid.
struct TensorField {
    int d = 0;
    std::vector<RVec> comp;  // row-major (i, j) components, each of grid size
    const RVec& operator()(int i, int j) const { return comp[i * d + j]; }
};

TensorField sample_tensor(const spectral::Spectral& sp, const std::function<MatrixXd(const VectorXd&)>& a);
// A_0 from its convolution definition at every grid point.
TensorField landau_tensor(const spectral::Spectral& sp, const landau::Potential& p, double beta);
// A_0 from the wavenumber side on a given rule (what a hierarchy on that rule converges to).
TensorField kspace_tensor(const spectral::Spectral& sp, const spectral::KQuadrature& kq, const landau::Potential& p,
                          double beta);

// d/dtau g = kappa Lap g + div(A grad g) on the periodic grid, with spectral
// derivatives. Real symmetric, negative semidefinite, mass conserving.
class FokkerPlanck {
public:
    FokkerPlanck(const spectral::Spectral& sp, const TensorField& a, double kappa);

    const MatrixXd& matrix() const { return L_; }
    const VectorXd& eigenvalues() const { return lambda_; }
    std::size_t size() const { return static_cast<std::size_t>(L_.rows()); }

    CVec apply(const CVec& g) const;
    CVec propagate(const CVec& g, double tau) const;                 // exp(tau L) g
    CVec crank_nicolson(const CVec& g, double tau, int steps) const;  // implicit midpoint
    CVec resolvent(const CVec& g, cplx s) const;                      // (s - L)^{-1} g

private:
    CVec in_basis(const CVec& g, const std::function<cplx(double)>& f) const;
    MatrixXd L_, V_;
    VectorXd lambda_;
};

struct FpTrajectory {
    RVec tau;
    std::vector<CVec> g;
    RVec mass, norm2;
};

enum class FpMethod { Exact, CrankNicolson };

// g0 at every tau in tau_grid (increasing, starting at 0). CrankNicolson uses
// `substeps` implicit-midpoint steps per interval.
FpTrajectory solve_fokker_planck(const FokkerPlanck& fp, const spectral::Spectral& sp, const CVec& g0,
                                 const RVec& tau_grid, FpMethod method = FpMethod::Exact, int substeps = 1);

}  // namespace kinlab::sim
