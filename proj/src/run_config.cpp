#include "kinlab/run_config.hpp"

#include <map>
#include <stdexcept>

namespace kinlab {

HierarchyConfig hierarchy_config(const io::Config& c) {
    c.check_known({"grid.d", "grid.n_v0", "grid.v_max", "grid.n_w", "grid.w_max", "grid.k_radial", "grid.k_angular",
                   "grid.w_cut", "physics.beta", "physics.kappa", "physics.v_star", "physics.amplitude",
                   "physics.width", "physics.k_max", "run.N_list", "run.tau_max", "run.dt", "run.fixed_point",
                   "run.energy_tol", "ansatz.enabled", "ansatz.N", "ansatz.tail_tol", "output.dir"});
    HierarchyConfig h;
    auto& s = h.scenario;
    s.d = c.get("grid.d", s.d);
    s.n_v0 = c.get("grid.n_v0", s.n_v0);
    s.v_max = c.get("grid.v_max", s.v_max);
    s.n_w = c.get("grid.n_w", s.n_w);
    s.w_max = c.get("grid.w_max", s.w_max);
    s.k_radial = c.get("grid.k_radial", s.k_radial);
    s.k_angular = c.get("grid.k_angular", s.k_angular);
    s.w_cut = c.get("grid.w_cut", s.w_cut);
    s.beta = c.get("physics.beta", s.beta);
    s.kappa = c.get("physics.kappa", s.kappa);
    std::vector<double> vs = s.v_star;
    vs.resize(s.d, 0.0);
    s.v_star = c.get("physics.v_star", vs);
    const double amp = c.get("physics.amplitude", 1.0), width = c.get("physics.width", 1.0),
                 kmax = c.get("physics.k_max", 8.0);
    if (!(amp > 0)) throw std::invalid_argument("physics.amplitude must be positive");
    if (!(width > 0)) throw std::invalid_argument("physics.width must be positive");
    if (!(kmax > 0)) throw std::invalid_argument("physics.k_max must be positive");
    s.potential = landau::Potential::gaussian(s.d, amp, width, kmax);
    s.N_list = c.get("run.N_list", s.N_list);
    if (s.N_list.empty()) throw std::invalid_argument("run.N_list must not be empty");
    s.tau_max = c.get("run.tau_max", s.tau_max);
    s.dt = c.get("run.dt", s.dt);
    s.fixed_point = c.get("run.fixed_point", s.fixed_point);
    s.energy_tol = c.get("run.energy_tol", s.energy_tol);
    h.ansatz = c.get("ansatz.enabled", false);
    h.ansatz_N = c.get("ansatz.N", h.ansatz_N);
    h.laplace.tail_tol = c.get("ansatz.tail_tol", h.laplace.tail_tol);
    if (!(h.laplace.tail_tol > 0)) throw std::invalid_argument("ansatz.tail_tol must be positive");
    h.dir = c.get("output.dir", h.dir);
    if (h.dir.empty() || h.dir.find("..") != std::string::npos)
        throw std::invalid_argument("output.dir must be a plain relative name");
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        // "scenario: <field> <reason>" -> "<section>.<field> <reason>"
        static const std::map<std::string, std::string> section{
            {"d", "grid"},        {"n_w", "grid"},          {"w_max", "grid"},   {"k_radial", "grid"},
            {"k_angular", "grid"}, {"w_cut", "grid"},        {"beta", "physics"}, {"kappa", "physics"},
            {"v_star", "physics"}, {"potential", "physics"}, {"tau_max", "run"},  {"dt", "run"},
            {"fixed_point", "run"}, {"N_list", "run"}};
        std::string m = e.what();
        const std::string prefix = "scenario: ";
        if (m.rfind(prefix, 0) == 0) {
            m = m.substr(prefix.size());
            const auto it = section.find(m.substr(0, m.find(' ')));
            if (it != section.end()) m = it->second + "." + m;
        } else if (m.find("n_pts") != std::string::npos) {
            m = "grid.n_v0 must be even and >= 2";
        } else if (m.find("v_max") != std::string::npos) {
            m = "grid.v_max" + m.substr(m.find("v_max") + 5);
        }
        throw std::invalid_argument("invalid config: " + m);
    }
    return h;
}

}  // namespace kinlab
