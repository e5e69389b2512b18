#include "kinlab/fokker_planck.hpp"

#include <cmath>
#include <stdexcept>

namespace kinlab::sim {

using spectral::Spectral;

TensorField sample_tensor(const Spectral& sp, const std::function<MatrixXd(const VectorXd&)>& a) {
    const int d = sp.grid().d;
    TensorField t{d, std::vector<RVec>(d * d, RVec(sp.size()))};
    std::vector<MatrixXd> vals(sp.size());
    parallel_for(sp.size(), [&](std::size_t i) { vals[i] = a(sp.grid().point(i)); });
    for (std::size_t i = 0; i < sp.size(); ++i) {
        if (vals[i].rows() != d || vals[i].cols() != d) throw std::invalid_argument("sample_tensor: wrong shape");
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) t.comp[r * d + c][i] = 0.5 * (vals[i](r, c) + vals[i](c, r));
    }
    return t;
}

TensorField landau_tensor(const Spectral& sp, const landau::Potential& p, double beta) {
    return sample_tensor(sp, [&](const VectorXd& v) { return landau::diffusion_tensor(v, p, beta); });
}

TensorField kspace_tensor(const Spectral& sp, const spectral::KQuadrature& kq, const landau::Potential& p,
                          double beta) {
    const auto full = kq.full();
    return sample_tensor(
        sp, [&](const VectorXd& v) { return landau::diffusion_tensor_kspace(v, full.k, full.w, p, beta); });
}

FokkerPlanck::FokkerPlanck(const Spectral& sp, const TensorField& a, double kappa) {
    const int d = sp.grid().d;
    const auto n = static_cast<Eigen::Index>(sp.size());
    if (a.d != d || a.comp.size() != static_cast<std::size_t>(d * d))
        throw std::invalid_argument("FokkerPlanck: tensor dimension mismatch");
    if (kappa < 0) throw std::invalid_argument("FokkerPlanck: kappa must be >= 0");
    if (n > 5000) throw std::invalid_argument("FokkerPlanck: dense solver limited to 5000 grid points");
    std::vector<MatrixXd> D(d, MatrixXd(n, n));
    MatrixXd lap(n, n);
    CVec e(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        for (int ax = 0; ax < d; ++ax) {
            CVec col = sp.gradient(e, ax);
            for (Eigen::Index i = 0; i < n; ++i) D[ax](i, j) = col[i].real();
        }
        CVec col = sp.laplacian(e);
        for (Eigen::Index i = 0; i < n; ++i) lap(i, j) = col[i].real();
    }
    L_ = kappa * lap;
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            Eigen::Map<const VectorXd> arc(a(r, c).data(), n);
            L_.noalias() += D[r] * (arc.asDiagonal() * D[c]);
        }
    L_ = 0.5 * (L_ + L_.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(L_);
    if (es.info() != Eigen::Success) throw std::runtime_error("FokkerPlanck: eigendecomposition failed");
    V_ = es.eigenvectors();
    lambda_ = es.eigenvalues();
    if (lambda_.maxCoeff() > 1e-9 * std::max(1.0, -lambda_.minCoeff()))
        throw std::invalid_argument("FokkerPlanck: operator is not dissipative (A not PSD?)");
}

CVec FokkerPlanck::apply(const CVec& g) const {
    if (g.size() != size()) throw std::invalid_argument("FokkerPlanck: size mismatch");
    Eigen::Map<const Eigen::VectorXcd> x(g.data(), static_cast<Eigen::Index>(g.size()));
    Eigen::VectorXcd y = L_.cast<cplx>() * x;
    return CVec(y.data(), y.data() + y.size());
}

CVec FokkerPlanck::in_basis(const CVec& g, const std::function<cplx(double)>& f) const {
    if (g.size() != size()) throw std::invalid_argument("FokkerPlanck: size mismatch");
    Eigen::Map<const Eigen::VectorXcd> x(g.data(), static_cast<Eigen::Index>(g.size()));
    const Eigen::VectorXd xr = x.real(), xi = x.imag();
    Eigen::VectorXd re = V_.transpose() * xr, im = V_.transpose() * xi;
    Eigen::VectorXcd c(re.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = f(lambda_(i)) * cplx(re(i), im(i));
    const Eigen::VectorXd cr = c.real(), ci = c.imag();
    Eigen::VectorXcd y = (V_ * cr).cast<cplx>() + cplx(0, 1) * (V_ * ci).cast<cplx>();
    return CVec(y.data(), y.data() + y.size());
}

CVec FokkerPlanck::propagate(const CVec& g, double tau) const {
    return in_basis(g, [tau](double l) { return cplx(std::exp(tau * l)); });
}

CVec FokkerPlanck::crank_nicolson(const CVec& g, double tau, int steps) const {
    if (steps < 1) throw std::invalid_argument("crank_nicolson: steps must be >= 1");
    const double h = tau / steps;
    return in_basis(g, [h, steps](double l) { return cplx(std::pow((1 + h * l / 2) / (1 - h * l / 2), steps)); });
}

CVec FokkerPlanck::resolvent(const CVec& g, cplx s) const {
    return in_basis(g, [s](double l) { return 1.0 / (s - l); });
}

FpTrajectory solve_fokker_planck(const FokkerPlanck& fp, const Spectral& sp, const CVec& g0, const RVec& tau_grid,
                                 FpMethod method, int substeps) {
    if (tau_grid.empty() || tau_grid[0] != 0) throw std::invalid_argument("solve_fokker_planck: tau grid starts at 0");
    FpTrajectory tr;
    CVec g = g0;
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (i > 0) {
            const double dtau = tau_grid[i] - tau_grid[i - 1];
            if (!(dtau > 0)) throw std::invalid_argument("solve_fokker_planck: tau grid must increase");
            g = method == FpMethod::Exact ? fp.propagate(g, dtau) : fp.crank_nicolson(g, dtau, substeps);
        }
        cplx m = 0;
        for (const auto& z : g) m += z;
        tr.tau.push_back(tau_grid[i]);
        tr.mass.push_back((m * sp.cell()).real());
        tr.norm2.push_back(std::pow(sp.norm(g), 2));
        tr.g.push_back(g);
    }
    return tr;
}

}  // namespace kinlab::sim
