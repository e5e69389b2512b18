#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace kinlab::geom {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Columns of the matrix are the vertices u_1..u_n.
double simplex_volume(const MatrixXd& u, bool include_origin);

// Unit normal to aff(u_1..u_n); throws std::invalid_argument on degeneracy.
VectorXd normal_direction(const MatrixXd& u);

// max_i |u_i.o - n|conv(0,u)|_n / |conv(u)|_{n-1}| relative to the right side.
double pyramid_residual(const MatrixXd& u);

// nu with nu.k_j > 0 for all columns k_j, or nullopt. The search maximizes
// min_j nu.k_j/|k_j| over the unit sphere through the minimum-norm point of
// conv(k_j/|k_j|); a returned direction has been checked by dot products.
std::optional<VectorXd> common_positive_direction(const MatrixXd& k);

// Probability that n i.i.d. symmetric random vectors in R^d lie in an open half-space.
double wendel_probability(int n, int d);

struct ScanRow {
    double s = 0;
    double coarse = 0, fine = 0;  // truncated integral estimates
    double ratio = 0;             // fine / coarse
    std::string verdict;          // finite, divergent or inconclusive
};

struct ScanConfig {
    std::uint64_t seed = 12345;
    std::uint64_t coarse_samples = 100'000;
    std::uint64_t fine_samples = 1'000'000;
    double coarse_cutoff = 1e-3;  // lower bound on each Gram-Schmidt factor
    double fine_cutoff = 1e-6;
    double finite_below = 1.6;    // ratio thresholds; in between is inconclusive
    double divergent_above = 2.5;
};

// Estimates the integral of |conv(0,k_1..k_n)|^s over the unit polyball at two
// truncation levels and classifies each s by how the estimate moves.
std::vector<ScanRow> integrability_scan(int n, int d, const std::vector<double>& s_list,
                                        const ScanConfig& cfg = {});

int d0_threshold(int m0);

double unit_ball_volume(int n);
double unit_sphere_area(int n);  // area of S^{n-1} in R^n

}  // namespace kinlab::geom
