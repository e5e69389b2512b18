#pragma once

#include <string>

#include "kinlab/hierarchy.hpp"
#include "kinlab/io.hpp"

namespace kinlab {

// Schema of the `hierarchy` config file. Keys (defaults from sim::Scenario):
//   [grid]    d, n_v0, v_max, n_w, w_max, k_radial, k_angular, w_cut
//   [physics] beta, kappa, v_star, amplitude, width, k_max   (Gaussian potential)
//   [run]     N_list, tau_max, dt, fixed_point, energy_tol
//   [ansatz]  enabled (false), N (100), tail_tol (1e-5)
//   [output]  dir (hierarchy)   subdirectory of the output root
struct HierarchyConfig {
    sim::Scenario scenario;
    bool ansatz = false;
    double ansatz_N = 100;
    sim::LaplaceOptions laplace;
    std::string dir = "hierarchy";
};

// Unknown keys and invalid values throw std::invalid_argument naming the key.
HierarchyConfig hierarchy_config(const io::Config& c);

}  // namespace kinlab
