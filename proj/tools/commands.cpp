#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>

#include "kinlab/acceptance.hpp"
#include "kinlab/combinatorics.hpp"
#include "kinlab/geometry.hpp"
#include "kinlab/hierarchy.hpp"
#include "kinlab/io.hpp"
#include "kinlab/landau.hpp"
#include "kinlab/numerics.hpp"
#include "kinlab/run_config.hpp"
#include "kinlab/spectral_ops.hpp"

namespace kinlab::cli {

namespace fs = std::filesystem;
using io::Json;
using io::Table;

namespace {

// State of one subcommand run. The manifest is written whatever happens;
// wall-clock times go to timings.json so manifest.json stays reproducible.
struct Run {
    std::string command;
    fs::path dir;
    Json config = Json::object();
    Json diagnostics = Json::object();
    Json checks = Json::object();
    Json timings = Json::object();
    std::map<std::string, Table> tables;
    std::map<std::string, std::string> texts;  // extra files, name -> content
    bool all_pass = true;
    bool print_checks = true;

    void check(const std::string& name, bool ok) {
        checks[name] = ok;
        all_pass = all_pass && ok;
    }
};

std::string num(double x) { return io::format_double(x); }

int execute(const Global& g, const std::string& command, const std::function<void(Run&)>& body) {
    Run r;
    r.command = command;
    r.dir = io::output_root(g.out) / command;
    std::string error;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        set_threads(g.threads);
        body(r);
    } catch (const std::exception& e) {
        error = e.what();
    }
    r.timings["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Json m;
    m["tool"] = "kinlab";
    m["version"] = io::version;
    m["command"] = command;
    m["config"] = r.config;
    m["diagnostics"] = r.diagnostics;
    m["checks"] = r.checks;
    m["status"] = !error.empty() ? "error" : r.all_pass ? "ok" : "checks_failed";
    if (!error.empty()) m["error"] = error;
    try {
        io::persist(r.dir, r.tables, m);
        io::write_text(r.dir / "timings.json", r.timings.dump(2) + "\n");
        for (const auto& [name, text] : r.texts) io::write_text(r.dir / name, text);
        std::cout << "wrote " << r.dir.string() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (!error.empty()) {
        std::cerr << "error: " << error << "\n";
        return 1;
    }
    if (r.print_checks)
        for (const auto& [name, ok] : r.checks.items())
            std::cout << (ok.get<bool>() ? "[PASS] " : "[FAIL] ") << name << "\n";
    return r.all_pass ? 0 : 1;
}

Json signs_json(const comb::Signs& s) {
    Json a = Json::array();
    for (int x : s) a.push_back(x);
    return a;
}

Json abstract_record(const comb::Signs& s, int m0, std::uint64_t cap) {
    const comb::Abstract a{s, comb::degree_of(s), m0};
    Json j;
    j["signs"] = signs_json(s);
    j["degree"] = a.degree;
    j["length"] = a.length();
    const std::uint64_t count = comb::count_histories(a);
    j["histories"] = count;
    try {
        const auto td = comb::tent_decomposition(s);
        Json tents = Json::array();
        for (const auto& t : td.tents) tents.push_back({{"alpha", t.alpha}, {"beta", t.beta}, {"type", t.type}});
        j["tents"] = {{"tents", tents}, {"down_steps", td.down_steps}};
    } catch (const std::invalid_argument&) {
        j["tents"] = nullptr;
    }
    if (count == 0) {
        j["max_bad"] = nullptr;
    } else if (count <= cap) {
        int worst = 0;
        comb::for_each_history(a, [&](const comb::History& h) {
            const auto w = comb::varpi_sequence(h);
            worst = std::max(worst, static_cast<int>(std::count(w.begin(), w.end(), 0)));
        });
        j["max_bad"] = worst;
    } else {
        j["max_bad"] = nullptr;  // above --history-cap
    }
    return j;
}

}  // namespace

int run_diagrams(const Global& g, const DiagramsArgs& a) {
    return execute(g, "diagrams", [&](Run& r) {
        r.config = {{"m0", a.m0},           {"degree", a.degree}, {"max_len", a.max_len},
                    {"enumerate", a.enumerate}, {"audit", a.audit}, {"history_cap", a.history_cap}};
        if (a.m0 < 1) throw std::invalid_argument("--m0 must be >= 1");
        if (a.max_len < 1) throw std::invalid_argument("--max-len must be >= 1");
        if (a.degree > a.m0) throw std::invalid_argument("--degree must not exceed --m0");
        std::vector<comb::Signs> list;
        auto keep = [&](const comb::Signs& s) { return a.degree < 0 || comb::degree_of(s) == a.degree; };
        Json catalog;
        catalog["m0"] = a.m0;
        catalog["max_len"] = a.max_len;
        if (a.enumerate) {
            const auto omega = comb::admissible_closure(a.m0, a.max_len);
            for (const auto& s : omega)
                if (keep(s)) list.push_back(s);
            catalog["mode"] = "admissible_closure";
            Json bd = Json::array();
            for (const auto& s : comb::boundary(omega, a.m0)) bd.push_back(signs_json(s));
            catalog["boundary"] = bd;
            Json rem = Json::array();
            for (const auto& e : comb::remainder_catalog(omega, a.m0))
                rem.push_back({{"m", e.m},
                               {"signs", signs_json(e.signs)},
                               {"kind", e.kind},
                               {"n", e.n},
                               {"half_power", e.half_power},
                               {"i_power", e.i_power},
                               {"diagrams", e.diagrams}});
            catalog["remainder"] = rem;
            r.diagnostics["admissible"] = comb::is_admissible(omega, a.m0);
            r.check("closure_admissible", comb::is_admissible(omega, a.m0));
        } else {
            catalog["mode"] = "abstracts";
            for (int m = 0; m <= a.m0; ++m)
                if (a.degree < 0 || m == a.degree)
                    for (const auto& x : comb::enumerate_abstracts(m, a.m0, a.max_len)) list.push_back(x.signs);
        }
        Json recs = Json::array();
        for (const auto& s : list) recs.push_back(abstract_record(s, a.m0, a.history_cap));
        catalog["abstracts"] = recs;
        r.texts["catalog.json"] = catalog.dump(2) + "\n";
        r.diagnostics["abstracts"] = list.size();
        std::cout << list.size() << " abstracts\n";

        if (a.audit) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto rep = comb::bad_index_audit(a.m0, a.max_len);
            r.timings["audit_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::string txt = "bad-index audit m0=" + std::to_string(a.m0) + " n<=" + std::to_string(a.max_len) + "\n";
            txt += "abstracts " + std::to_string(rep.records.size()) + "\n";
            txt += "histories " + std::to_string(rep.total_histories) + "\n";
            txt += "bound violations " + std::to_string(rep.bound_violations) + "\n";
            txt += "tent violations " + std::to_string(rep.tent_violations) + "\n";
            txt += std::string("result ") + (rep.ok() ? "OK" : "VIOLATIONS") + "\n\n";
            txt += "signs degree histories max_bad\n";
            for (const auto& rec : rep.records)
                txt += comb::to_string(rec.signs) + " " + std::to_string(rec.degree) + " " +
                       std::to_string(rec.histories) + " " + std::to_string(rec.max_bad) + "\n";
            r.texts["audit.txt"] = txt;
            r.diagnostics["audit"] = {{"abstracts", rep.records.size()},
                                      {"histories", rep.total_histories},
                                      {"bound_violations", rep.bound_violations},
                                      {"tent_violations", rep.tent_violations}};
            std::cout << rep.total_histories << " histories audited\n";
            r.check("counting_bound", rep.bound_violations == 0);
            r.check("tent_interior_goodness", rep.tent_violations == 0);
        }
    });
}

int run_landau(const Global& g, const LandauArgs& a) {
    return execute(g, "landau", [&](Run& r) {
        r.config = {{"d", a.d},
                    {"beta", a.beta},
                    {"potential", {{"kind", "gaussian"}, {"amplitude", a.amplitude}, {"width", a.width}, {"k_max", a.k_max}}},
                    {"grid_n", a.grid_n},
                    {"grid_vmax", a.grid_vmax},
                    {"s_list", a.s_list},
                    {"samples", a.samples},
                    {"seed", a.seed}};
        if (a.d != 2 && a.d != 3) throw std::invalid_argument("--d must be 2 or 3");
        if (!(a.beta > 0)) throw std::invalid_argument("--beta must be positive");
        if (a.grid_n < 1) throw std::invalid_argument("--grid-n must be >= 1");
        const auto p = landau::Potential::gaussian(a.d, a.amplitude, a.width, a.k_max);
        r.config["quadrature"] = {{"radial_nodes", p.radial_nodes}, {"angular_nodes", p.angular_nodes}};

        const double lam = landau::lambda_V(p);
        const auto kt = landau::kappa_thresholds(p);
        r.diagnostics["lambda_V"] = lam;
        r.diagnostics["kappa_threshold_vhat"] = kt.with_vhat;
        r.diagnostics["kappa_threshold_vhat_sq"] = kt.with_vhat_sq;
        std::cout << "Lambda_V " << num(lam) << "\nkappa thresholds: int|k|Vhat " << num(kt.with_vhat)
                  << ", int|k|Vhat^2 " << num(kt.with_vhat_sq) << "\n";

        Table cs{{"s", "c_s_vhat", "c_s_vhat_sq"}, {}};
        for (double s : a.s_list) cs.add({s, landau::c_s_constant(p, s, 1), landau::c_s_constant(p, s, 2)});
        r.tables["c_s"] = cs;

        // A_0 eigenvalues on a uniform grid over [-vmax, vmax]^d
        std::vector<Eigen::VectorXd> pts;
        const int n = a.grid_n;
        std::size_t total = 1;
        for (int i = 0; i < a.d; ++i) total *= n;
        for (std::size_t idx = 0; idx < total; ++idx) {
            Eigen::VectorXd v(a.d);
            std::size_t rem = idx;
            for (int ax = a.d - 1; ax >= 0; --ax) {
                const int i = static_cast<int>(rem % n);
                rem /= n;
                v(ax) = n == 1 ? 0.0 : -a.grid_vmax + 2 * a.grid_vmax * i / (n - 1);
            }
            pts.push_back(v);
        }
        std::vector<Eigen::VectorXd> eig(pts.size());
        parallel_for(pts.size(), [&](std::size_t i) {
            const auto A = landau::diffusion_tensor(pts[i], p, a.beta, true);
            eig[i] = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A).eigenvalues();
        });
        Table et;
        for (int i = 0; i < a.d; ++i) et.columns.push_back("v_" + std::to_string(i + 1));
        for (int i = 0; i < a.d; ++i) et.columns.push_back("lambda_" + std::to_string(i + 1));
        double min_eig = INFINITY;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::vector<double> row(pts[i].data(), pts[i].data() + a.d);
            for (int j = 0; j < a.d; ++j) row.push_back(eig[i](j));
            min_eig = std::min(min_eig, eig[i](0));
            et.add(row);
        }
        r.tables["a0_eigenvalues"] = et;
        r.diagnostics["a0_min_eigenvalue"] = min_eig;
        r.check("a0_positive_semidefinite", min_eig >= -1e-12);

        // extrapolated brute-force kernel against the closed form
        std::mt19937_64 rng(a.seed);
        std::normal_distribution<double> nd;
        Json ex = Json::array();
        double worst = 0;
        for (int i = 0; i < a.samples; ++i) {
            Eigen::VectorXd w(a.d);
            for (auto& x : w) x = nd(rng);
            const auto e = landau::landau_kernel_extrapolated(w, p, 0.1);
            const auto B = landau::landau_kernel(w, p);
            const double rel = Eigen::JacobiSVD<Eigen::MatrixXd>(e.value - B).singularValues()(0) /
                               Eigen::JacobiSVD<Eigen::MatrixXd>(B).singularValues()(0);
            worst = std::max(worst, rel);
            ex.push_back({{"w", std::vector<double>(w.data(), w.data() + a.d)},
                          {"delta", 0.1},
                          {"last_correction", e.change},
                          {"rel_error", rel}});
        }
        r.diagnostics["kernel_extrapolation"] = ex;
        if (a.samples > 0) r.check("kernel_identity_1pct", worst < 0.01);
    });
}

int run_resolvent(const Global& g, const ResolventArgs& a) {
    return execute(g, "resolvent", [&](Run& r) {
        const spectral::AiryFitOptions fo;
        r.config = {{"N_list", a.N_list},
                    {"k_list", a.k_list},
                    {"kappa", a.kappa},
                    {"d", a.d},
                    {"fit", {{"L", fo.L}, {"n", fo.n}, {"eps_rel", fo.eps_rel}}},
                    {"deformation", {{"points", a.deform_points}, {"k_min", 0.1}, {"k_max", 10.0},
                                     {"t_N", a.t_N}, {"N", a.N_deform}, {"grid", {{"d", 1}, {"n", 64}, {"vmax", 8.0}}}}}};
        const auto fit = spectral::airy_scaling_fit(a.N_list, a.k_list, a.kappa, a.d, fo);
        Table t{{"N", "k", "norm"}, {}};
        for (const auto& p : fit.points) t.add({p.N, p.k, p.norm});
        r.tables["airy_norms"] = t;
        r.diagnostics["fit"] = {
            {"exponent_N", fit.exponent_N},
            {"exponent_N_ci95", {fit.exponent_N - 1.96 * fit.se_N, fit.exponent_N + 1.96 * fit.se_N}},
            {"exponent_k", fit.exponent_k},
            {"exponent_k_ci95", {fit.exponent_k - 1.96 * fit.se_k, fit.exponent_k + 1.96 * fit.se_k}},
            {"log_c", fit.log_c},
            {"max_residual", fit.max_residual}};
        std::cout << "exponents: N " << num(fit.exponent_N) << " +- " << num(1.96 * fit.se_N) << ", |k| "
                  << num(fit.exponent_k) << " +- " << num(1.96 * fit.se_k) << "\n";
        r.check("exponent_N_one_third", std::abs(fit.exponent_N - 1.0 / 3) <= 0.05);
        r.check("exponent_k_minus_two_thirds", std::abs(fit.exponent_k + 2.0 / 3) <= 0.05);

        if (a.deform_points < 2) throw std::invalid_argument("deformation grid needs at least 2 points");
        const spectral::Spectral sp(spectral::VelocityGrid{1, 64, 8.0});
        Table dt{{"k", "rel_diff", "k_times_integral"}, {}};
        double worst = 0;
        for (int i = 0; i < a.deform_points; ++i) {
            const double k = std::pow(10.0, -1 + 2.0 * i / (a.deform_points - 1));
            const auto d = spectral::deformed_velocity_average(sp, Eigen::VectorXd::Constant(1, k), a.t_N, a.kappa,
                                                               a.N_deform, 1.0);
            dt.add({k, d.rel_diff(), k * std::abs(d.direct)});
            worst = std::max(worst, d.rel_diff());
        }
        r.tables["deformation"] = dt;
        r.diagnostics["deformation_max_rel_diff"] = worst;
        r.check("deformation_identity", worst < 1e-6);
    });
}

int run_hierarchy_cmd(const Global& g, const HierarchyArgs& a) {
    Global gl = g;
    // the output subdirectory comes from the config; read it first so failures land there too
    std::string dir = "hierarchy";
    try {
        io::Config c = a.config.empty() ? io::Config{} : io::Config::from_file(a.config);
        for (const auto& s : a.set) c.set(s);
        dir = c.get("output.dir", dir);
        if (dir.empty() || dir.find("..") != std::string::npos) dir = "hierarchy";
    } catch (const std::exception&) {
    }
    return execute(gl, dir, [&](Run& r) {
        r.config["config_file"] = a.config;
        io::Config c = a.config.empty() ? io::Config{} : io::Config::from_file(a.config);
        for (const auto& s : a.set) c.set(s);
        r.config["values"] = c.to_json();
        const HierarchyConfig hc = hierarchy_config(c);
        const auto& s = hc.scenario;
        r.config["resolved"] = {{"d", s.d},
                                {"n_v0", s.n_v0},
                                {"v_max", s.v_max},
                                {"n_w", s.n_w},
                                {"w_max", s.w_max},
                                {"k_radial", s.k_radial},
                                {"k_angular", s.k_angular},
                                {"w_cut", s.w_cut},
                                {"beta", s.beta},
                                {"kappa", s.kappa},
                                {"v_star", s.v_star},
                                {"N_list", s.N_list},
                                {"tau_max", s.tau_max},
                                {"dt", s.dt},
                                {"fixed_point", s.fixed_point},
                                {"energy_tol", s.energy_tol},
                                {"ansatz", {{"enabled", hc.ansatz}, {"N", hc.ansatz_N}, {"tail_tol", hc.laplace.tail_tol}}}};

        const spectral::Spectral sp(s.v0_grid());
        const sim::FokkerPlanck fp(sp, sim::kspace_tensor(sp, s.k_rule(), s.potential, s.beta), s.kappa);
        const CVec g_init = sim::initial_datum(sp, s);
        Table conv{{"N", "error", "sup_error", "tail_bound", "max_energy_increase"}, {}};
        Json runs = Json::array();
        double worst_increase = 0;
        std::map<double, sim::Trajectory> kept;
        auto record = [&](const sim::ConvergenceRow& row, const sim::Trajectory& tr) {
            const auto ref = sim::solve_fokker_planck(fp, sp, g_init, tr.tau);
            Table series{{"tau", "energy", "error_vs_fp", "norm_g0", "norm_fp"}, {}};
            for (std::size_t i = 0; i < tr.tau.size(); ++i) {
                CVec d(g_init.size());
                for (std::size_t j = 0; j < d.size(); ++j) d[j] = tr.g0[i][j] - ref.g[i][j];
                series.add({tr.tau[i], tr.energy[i], sp.norm(d), sp.norm(tr.g0[i]), std::sqrt(ref.norm2[i])});
            }
            r.tables["series_N" + num(row.N)] = series;
            conv.add({row.N, row.error, row.sup_error, row.tail_bound, row.max_energy_increase});
            r.timings["N=" + num(row.N)] = row.seconds;
            worst_increase = std::max(worst_increase, row.max_energy_increase);
            std::cout << "N=" << num(row.N) << " error " << num(row.error) << "\n";
            if (hc.ansatz && row.N == hc.ansatz_N) kept[row.N] = tr;
        };
        bool monotone = true;
        if (s.N_list.size() >= 2) {
            const auto res = sim::convergence_study(s, record);
            r.diagnostics["rate"] = res.rate;
            r.diagnostics["rate_se"] = res.rate_se;
            r.diagnostics["monotone"] = res.monotone;
            monotone = res.monotone;
            std::cout << "rate " << num(res.rate) << " +- " << num(res.rate_se) << "\n";
        } else {
            // a single run: no rate
            const auto tr = sim::run_hierarchy(s, s.N_list[0]);
            const auto ref = sim::solve_fokker_planck(fp, sp, g_init, tr.tau);
            sim::ConvergenceRow row{};
            row.N = s.N_list[0];
            row.error = sim::weighted_distance(sp, tr.tau, tr.g0, ref.g);
            row.max_energy_increase = tr.max_energy_increase;
            record(row, tr);
        }
        r.tables["convergence"] = conv;
        r.diagnostics["max_energy_increase"] = worst_increase;
        r.check("energy_non_increasing", worst_increase <= s.energy_tol);
        if (s.N_list.size() >= 2) r.check("error_monotone_in_N", monotone);

        if (hc.ansatz) {
            sim::Trajectory tr = kept.count(hc.ansatz_N) ? kept[hc.ansatz_N] : sim::run_hierarchy(s, hc.ansatz_N);
            const auto t0 = std::chrono::steady_clock::now();
            const auto an = sim::solve_ansatz_laplace(s, hc.ansatz_N, tr.tau, hc.laplace);
            r.timings["ansatz_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const double rel =
                sim::weighted_distance(sp, tr.tau, tr.g0, an.g0) / sim::weighted_norm(sp, tr.tau, tr.g0);
            Table prof{{"alpha", "norm_value", "norm_remainder", "gmres_iterations"}, {}};
            for (std::size_t i = 0; i < an.profile.alpha.size(); ++i)
                prof.add({an.profile.alpha[i], sp.norm(an.profile.values[i]), sp.norm(an.profile.remainder[i]),
                          static_cast<double>(an.profile.iterations[i])});
            r.tables["laplace_profile"] = prof;
            Table cmp{{"tau", "norm_ansatz", "norm_hierarchy", "difference"}, {}};
            for (std::size_t i = 0; i < tr.tau.size(); ++i) {
                CVec d(g_init.size());
                for (std::size_t j = 0; j < d.size(); ++j) d[j] = an.g0[i][j] - tr.g0[i][j];
                cmp.add({tr.tau[i], sp.norm(an.g0[i]), sp.norm(tr.g0[i]), sp.norm(d)});
            }
            r.tables["ansatz_vs_hierarchy"] = cmp;
            r.diagnostics["ansatz"] = {{"N", hc.ansatz_N},
                                       {"rel_diff", rel},
                                       {"alpha_window", an.profile.A},
                                       {"nodes", an.profile.alpha.size()},
                                       {"tail_estimate", an.profile.tail_estimate}};
            std::cout << "ansatz vs hierarchy: " << num(rel) << "\n";
            r.check("ansatz_agrees_1e-3", rel <= 1e-3);
        }
    });
}

int run_geometry(const Global& g, const GeometryArgs& a) {
    return execute(g, "geometry", [&](Run& r) {
        const double c = a.n - 1 - a.d;
        std::vector<double> s_list = a.s_list;
        if (s_list.empty()) s_list = {c - 0.5, c - 0.2, c + 0.2, c + 0.5};
        geom::ScanConfig cfg;
        cfg.seed = a.seed;
        cfg.coarse_samples = a.coarse_samples;
        cfg.fine_samples = a.fine_samples;
        r.config = {{"n", a.n},
                    {"d", a.d},
                    {"s_list", s_list},
                    {"seed", a.seed},
                    {"coarse_samples", a.coarse_samples},
                    {"fine_samples", a.fine_samples},
                    {"coarse_cutoff", cfg.coarse_cutoff},
                    {"fine_cutoff", cfg.fine_cutoff},
                    {"simplices", a.simplices},
                    {"max_n", a.max_n},
                    {"max_d", a.max_d}};
        if (a.max_n < 1 || a.max_d < a.max_n) throw std::invalid_argument("need 1 <= --max-n <= --max-d");
        const auto rows = geom::integrability_scan(a.n, a.d, s_list, cfg);
        Table scan{{"s", "coarse", "fine", "ratio", "verdict_code"}, {}};
        bool sides = true;
        for (const auto& row : rows) {
            const double code = row.verdict == "finite" ? 1 : row.verdict == "divergent" ? -1 : 0;
            scan.add({row.s, row.coarse, row.fine, row.ratio, code});
            if (row.s > c + 0.1 && code != 1) sides = false;
            if (row.s < c - 0.1 && code != -1) sides = false;
            std::cout << "s=" << num(row.s) << " ratio " << num(row.ratio) << " " << row.verdict << "\n";
        }
        r.tables["scan"] = scan;
        r.diagnostics["threshold"] = c;
        r.check("scan_matches_threshold", sides);

        std::mt19937_64 rng(a.seed);
        std::normal_distribution<double> nd;
        Table res{{"trial", "n", "d", "residual"}, {}};
        double worst = 0;
        for (int t = 0; t < a.simplices; ++t) {
            const int n = 1 + static_cast<int>(rng() % a.max_n);
            const int d = n + static_cast<int>(rng() % (a.max_d - n + 1));
            Eigen::MatrixXd u(d, n);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < n; ++j) u(i, j) = nd(rng);
            const double x = geom::pyramid_residual(u);
            worst = std::max(worst, x);
            res.add({static_cast<double>(t), static_cast<double>(n), static_cast<double>(d), x});
        }
        r.tables["pyramid_residuals"] = res;
        r.diagnostics["pyramid_max_residual"] = worst;
        std::cout << "pyramid max residual " << num(worst) << "\n";
        if (a.simplices > 0) r.check("pyramid_residual_1e-9", worst < 1e-9);
    });
}

int run_audit(const Global& g, const AuditArgs& a) {
    return execute(g, "audit", [&](Run& r) {
        acceptance::SuiteOptions o;
        o.quick = a.quick;
        o.only.insert(a.only.begin(), a.only.end());
        for (int id : o.only)
            if (id < 1 || id > acceptance::criterion_count)
                throw std::invalid_argument("--only: no criterion " + std::to_string(id));
        r.config = {{"quick", a.quick}, {"only", a.only}, {"seed", o.seed}};
        r.print_checks = false;
        o.report = [](const acceptance::CheckResult& c) { std::cout << acceptance::format_line(c) << std::endl; };
        o.log = [](const std::string& m) { std::cerr << "  " << m << std::endl; };
        const auto results = acceptance::run_suite(o);
        r.diagnostics["criteria"] = acceptance::to_json(results, false);
        Table t{{"id", "pass"}, {}};
        for (const auto& c : results) {
            t.add({static_cast<double>(c.id), c.pass ? 1.0 : 0.0});
            r.timings["criterion_" + std::to_string(c.id)] = c.seconds;
            r.check("criterion_" + std::to_string(c.id), c.pass);
        }
        r.tables["verdicts"] = t;
    });
}

}  // namespace kinlab::cli
