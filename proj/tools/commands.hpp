#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace kinlab::cli {

struct Global {
    std::string out;  // output root; empty: $KINLAB_OUTPUT_ROOT or ./kinlab_out
    int threads = 0;  // 0: hardware concurrency
};

struct DiagramsArgs {
    int m0 = 2;
    int degree = -1;  // -1: every degree 0..m0
    int max_len = 6;
    bool enumerate = false;  // admissible closure, boundary and remainder catalog
    bool audit = false;
    std::uint64_t history_cap = 1'000'000;
};

struct LandauArgs {
    int d = 2;
    double beta = 1, amplitude = 1, width = 1, k_max = 8;
    int grid_n = 9;
    double grid_vmax = 3;
    std::vector<double> s_list{0, 1, 2};
    int samples = 3;
    std::uint64_t seed = 1;
};

struct ResolventArgs {
    std::vector<double> N_list{1e2, 1e3, 1e4, 1e5};
    std::vector<double> k_list{0.5, 1, 2, 4, 8};
    double kappa = 1;
    int d = 2;
    int deform_points = 13;  // log grid on [0.1, 10]
    double t_N = 100, N_deform = 100;
};

struct HierarchyArgs {
    std::string config;
    std::vector<std::string> set;
};

struct GeometryArgs {
    int n = 3, d = 4;
    std::vector<double> s_list;  // empty: threshold +- 0.2 and +- 0.5
    std::uint64_t seed = 12345;
    std::uint64_t coarse_samples = 100'000, fine_samples = 1'000'000;
    int simplices = 1000;
    int max_n = 6, max_d = 8;
};

struct AuditArgs {
    bool quick = false;
    std::vector<int> only;
};

// Each returns the process exit status: 0 iff every check passed.
int run_diagrams(const Global& g, const DiagramsArgs& a);
int run_landau(const Global& g, const LandauArgs& a);
int run_resolvent(const Global& g, const ResolventArgs& a);
int run_hierarchy_cmd(const Global& g, const HierarchyArgs& a);
int run_geometry(const Global& g, const GeometryArgs& a);
int run_audit(const Global& g, const AuditArgs& a);

}  // namespace kinlab::cli
