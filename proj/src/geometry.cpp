#include "kinlab/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace kinlab::geom {

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

constexpr double kDegenerate = 1e-12;

// Volumes and normals are computed in extended precision: for thin simplices
// the height is a small difference of O(|u|) quantities.
using Real = long double;
using MatX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using VecX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// Gram determinant of the columns, relative to the product of squared norms.
// Taken from the R factor of a Householder QR so the conditioning is not squared.
Real relative_gram(const MatX& a, Real& gram) {
    if (a.cols() == 0) {
        gram = 1;
        return 1;
    }
    const MatX qr = Eigen::HouseholderQR<MatX>(a).matrixQR();
    Real vol = 1, rel = 1;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        const Real nj = a.col(j).norm();
        vol *= std::abs(qr(j, j));
        rel *= nj > 0 ? std::abs(qr(j, j)) / nj : 0;
    }
    gram = vol * vol;
    return rel * rel;
}

MatX differences(const MatX& u) {
    MatX d(u.rows(), u.cols() - 1);
    for (Eigen::Index j = 1; j < u.cols(); ++j) d.col(j - 1) = u.col(j) - u.col(0);
    return d;
}

Real volume(const MatX& u, bool include_origin) {
    const MatX a = include_origin ? u : differences(u);
    const auto k = a.cols();
    if (k == 0) return 1;  // a point has unit 0-measure
    if (k > a.rows()) return 0;
    Real gram = 0;
    if (relative_gram(a, gram) < kDegenerate || gram <= 0) return 0;
    return std::sqrt(gram) / factorial(static_cast<int>(k));
}

VecX normal(const MatX& u) {
    const auto n = u.cols();
    const auto d = u.rows();
    if (n < 1 || d < n) throw std::invalid_argument("normal_direction: need 1 <= n <= d");
    const VecX u1 = u.col(0);
    VecX r = u1;
    if (n > 1) {
        const MatX diff = differences(u);
        Real gram = 0;
        if (relative_gram(diff, gram) < kDegenerate) throw std::invalid_argument("normal_direction: affinely dependent");
        // component of u1 orthogonal to span(diff), with one reorthogonalization pass
        const MatX q = Eigen::HouseholderQR<MatX>(diff).householderQ() * MatX::Identity(d, n - 1);
        r -= q * (q.transpose() * r);
        r -= q * (q.transpose() * r);
    }
    const Real nr = r.norm();
    if (nr <= kDegenerate * std::max<Real>(1, u1.norm()))
        throw std::invalid_argument("normal_direction: affine hull contains the origin");
    return r / nr;
}

}  // namespace

double unit_ball_volume(int n) { return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0); }

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

double simplex_volume(const MatrixXd& u, bool include_origin) {
    return static_cast<double>(volume(u.cast<Real>(), include_origin));
}

VectorXd normal_direction(const MatrixXd& u) { return normal(u.cast<Real>()).cast<double>(); }

double pyramid_residual(const MatrixXd& u) {
    const MatX ul = u.cast<Real>();
    const auto n = ul.cols();
    const VecX o = normal(ul);
    const Real rhs = n * volume(ul, true) / volume(ul, false);
    Real worst = 0;
    for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, std::abs(ul.col(i).dot(o) - rhs));
    return static_cast<double>(worst / std::abs(rhs));
}

std::optional<VectorXd> common_positive_direction(const MatrixXd& k) {
    const int n = static_cast<int>(k.cols());
    const int d = static_cast<int>(k.rows());
    if (n == 0) return VectorXd::Unit(d, 0);
    MatrixXd p(d, n);
    for (int j = 0; j < n; ++j) {
        double nj = k.col(j).norm();
        if (nj == 0) return std::nullopt;
        p.col(j) = k.col(j) / nj;
    }
    // Wolfe's minimum-norm-point algorithm on conv(p_j).
    std::vector<int> S;
    std::vector<double> lam;
    int start = 0;
    S.push_back(start);
    lam.push_back(1.0);
    VectorXd x = p.col(start);
    const double tol = 1e-12;
    for (int outer = 0; outer < 1000; ++outer) {
        Eigen::Index jmin = 0;
        VectorXd dots = p.transpose() * x;
        dots.minCoeff(&jmin);
        if (x.squaredNorm() - dots(jmin) <= tol * std::max(1.0, x.squaredNorm())) break;
        bool in_set = false;
        for (int s : S) in_set |= (s == jmin);
        if (in_set) break;
        S.push_back(static_cast<int>(jmin));
        lam.push_back(0.0);
        for (int inner = 0; inner < 1000; ++inner) {
            // Affine minimizer over the current corral.
            const int m = static_cast<int>(S.size());
            MatrixXd A(m + 1, m + 1);
            A.setZero();
            for (int a = 0; a < m; ++a) {
                for (int b = 0; b < m; ++b) A(a, b) = p.col(S[a]).dot(p.col(S[b]));
                A(a, m) = A(m, a) = 1.0;
            }
            VectorXd rhs = VectorXd::Zero(m + 1);
            rhs(m) = 1.0;
            VectorXd sol = A.completeOrthogonalDecomposition().solve(rhs);
            VectorXd mu = sol.head(m);
            if (mu.minCoeff() > tol) {
                for (int a = 0; a < m; ++a) lam[a] = mu(a);
                break;
            }
            double theta = 1.0;
            for (int a = 0; a < m; ++a)
                if (mu(a) <= tol) theta = std::min(theta, lam[a] / (lam[a] - mu(a)));
            for (int a = 0; a < m; ++a) lam[a] = theta * mu(a) + (1 - theta) * lam[a];
            std::vector<int> S2;
            std::vector<double> l2;
            for (int a = 0; a < m; ++a)
                if (lam[a] > tol) S2.push_back(S[a]), l2.push_back(lam[a]);
            S = S2;
            lam = l2;
        }
        x.setZero();
        for (std::size_t a = 0; a < S.size(); ++a) x += lam[a] * p.col(S[a]);
    }
    double nx = x.norm();
    if (nx < 1e-9) return std::nullopt;
    VectorXd nu = x / nx;
    for (int j = 0; j < n; ++j)
        if (!(nu.dot(k.col(j)) > 0)) return std::nullopt;
    return nu;
}

double wendel_probability(int n, int d) {
    if (n <= d) return 1.0;
    double sum = 0;
    for (int k = 0; k < d; ++k) sum += std::exp(std::lgamma(n) - std::lgamma(k + 1.0) - std::lgamma(n - k));
    return sum * std::pow(2.0, 1 - n);
}

namespace {

// Estimate of the integral restricted to Gram-Schmidt factors r_i >= eps.
// Each k_i is written as (parallel part, perpendicular radius r_i, direction)
// and the parallel part is integrated out. r_i is drawn from an equal mixture
// of the log-uniform law on [eps, 1], which spreads samples evenly over the
// scales near the degenerate set, and the natural radial law r^{d-i+1}.
double truncated_integral(int n, int d, double s, double eps, std::uint64_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double L = std::log(1.0 / eps);
    double sum = 0;
    for (std::uint64_t t = 0; t < samples; ++t) {
        double weight = 1.0, vol = 1.0 / factorial(n);
        for (int i = 1; i <= n; ++i) {
            const int p = d - i + 1;  // natural density ~ r^p on [0, 1]
            const double zp = 1.0 - std::pow(eps, p + 1);
            double r;
            if (unif(rng) < 0.5)
                r = eps * std::exp(L * unif(rng));
            else
                r = std::pow(std::pow(eps, p + 1) + zp * unif(rng), 1.0 / (p + 1));
            double q = 0.5 / (r * L) + 0.5 * (p + 1) * std::pow(r, p) / zp;
            weight *= unit_sphere_area(d - i + 1) * unit_ball_volume(i - 1) *
                      std::pow(1 - r * r, (i - 1) / 2.0) * std::pow(r, p - 1) / q;
            vol *= r;
        }
        sum += weight * std::pow(vol, s);
    }
    return sum / static_cast<double>(samples);
}

}  // namespace

std::vector<ScanRow> integrability_scan(int n, int d, const std::vector<double>& s_list, const ScanConfig& cfg) {
    if (n < 1 || d < n - 1) throw std::invalid_argument("integrability_scan: need d >= n - 1");
    if (d < n) throw std::invalid_argument("integrability_scan: the polyball volume degenerates for d < n");
    std::vector<ScanRow> out;
    for (std::size_t q = 0; q < s_list.size(); ++q) {
        ScanRow row;
        row.s = s_list[q];
        row.coarse = truncated_integral(n, d, row.s, cfg.coarse_cutoff, cfg.coarse_samples, cfg.seed + 2 * q);
        row.fine = truncated_integral(n, d, row.s, cfg.fine_cutoff, cfg.fine_samples, cfg.seed + 2 * q + 1);
        row.ratio = row.fine / row.coarse;
        if (row.ratio < cfg.finite_below)
            row.verdict = "finite";
        else if (row.ratio > cfg.divergent_above)
            row.verdict = "divergent";
        else
            row.verdict = "inconclusive";
        out.push_back(row);
    }
    return out;
}

int d0_threshold(int m0) {
    if (m0 < 1) throw std::invalid_argument("d0_threshold: m0 >= 1");
    if (m0 == 1) return 2;
    if (m0 == 2) return 8;
    return 28 * m0 + 70;
}

}  // namespace kinlab::geom
