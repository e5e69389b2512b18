#include "kinlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "kinlab/combinatorics.hpp"
#include "kinlab/geometry.hpp"
#include "kinlab/hierarchy.hpp"
#include "kinlab/landau.hpp"
#include "kinlab/spectral_ops.hpp"

namespace kinlab::acceptance {

using io::Json;
using spectral::Spectral;
using spectral::VelocityGrid;

namespace {

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double rel_diff(const CVec& a, const CVec& b) {
    CVec d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return l2_norm(d) / l2_norm(b);
}

double spectral_norm(const Eigen::MatrixXd& m) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

CheckResult counting_bound() {
    CheckResult r{1, "counting bound audit", false, ""};
    std::uint64_t histories = 0, bound = 0, tent = 0;
    for (int m0 = 1; m0 <= 4; ++m0) {
        const auto rep = comb::bad_index_audit(m0, 12);
        histories += rep.total_histories;
        bound += rep.bound_violations;
        tent += rep.tent_violations;
        r.details["m0=" + std::to_string(m0)] = {{"abstracts", rep.records.size()},
                                                  {"histories", rep.total_histories},
                                                  {"bound_violations", rep.bound_violations},
                                                  {"tent_violations", rep.tent_violations}};
    }
    r.pass = bound == 0 && tent == 0;
    r.summary = std::to_string(histories) + " histories (m0<=4, n<=12), " + std::to_string(bound) +
                " bound and " + std::to_string(tent) + " tent violations";
    return r;
}

CheckResult boundary_example() {
    CheckResult r{2, "boundary set example", false, ""};
    const auto omega = comb::admissible_closure_of({{-1}}, 2);
    const auto bd = comb::boundary(omega, 2);
    const comb::AbstractSet expected{{1, -1}, {1, -1, -1}};
    std::uint64_t diagrams_m1 = 0;
    for (const auto& e : comb::remainder_catalog(omega, 2))
        if (e.m == 1) diagrams_m1 += e.diagrams;
    Json b = Json::array();
    for (const auto& s : bd) b.push_back(comb::to_string(s));
    r.details["boundary"] = b;
    r.details["diagrams_m1"] = diagrams_m1;
    r.pass = bd == expected && diagrams_m1 == 6;
    std::string list;
    for (const auto& s : bd) list += (list.empty() ? "" : " ") + comb::to_string(s);
    r.summary = "boundary {" + list + "}, " + std::to_string(diagrams_m1) + " diagrams at m=1 (expected 6)";
    return r;
}

CheckResult momentum_bookkeeping(std::uint64_t seed) {
    CheckResult r{3, "momentum bookkeeping", false, ""};
    std::mt19937_64 rng(seed);
    std::vector<comb::Abstract> pool;
    for (int m0 = 1; m0 <= 4; ++m0)
        for (int m = 0; m <= m0; ++m)
            for (auto& a : comb::enumerate_abstracts(m, m0, 12)) {
                try {
                    comb::sample_history(a, rng);
                    pool.push_back(a);
                } catch (const std::invalid_argument&) {
                    // no history
                }
            }
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const int samples = 10000;
    int invalid = 0, conservation = 0, column = 0;
    for (int i = 0; i < samples; ++i) {
        const auto h = comb::sample_history(pool[pick(rng)], rng);
        if (!comb::validate_history(h)) ++invalid;
        const auto q = comb::wave_vector_table(h);
        if (!q.momentum_conserved()) ++conservation;
        if (!q.column_property()) ++column;
    }
    r.pass = invalid == 0 && conservation == 0 && column == 0;
    r.details = {{"samples", samples},
                 {"abstract_pool", pool.size()},
                 {"invalid", invalid},
                 {"conservation_failures", conservation},
                 {"column_failures", column}};
    r.summary = std::to_string(samples) + " sampled histories, " + std::to_string(conservation) +
                " conservation and " + std::to_string(column) + " column-property failures";
    return r;
}

CheckResult landau_identity(std::uint64_t seed) {
    CheckResult r{4, "landau kernel identity", false, ""};
    const auto p = landau::Potential::gaussian(3);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    double worst = 0;
    Json pts = Json::array();
    for (int i = 0; i < 5; ++i) {
        Eigen::VectorXd w(3);
        for (auto& x : w) x = nd(rng);
        const auto e = landau::landau_kernel_extrapolated(w, p, 0.1);
        const auto B = landau::landau_kernel(w, p);
        const double rel = spectral_norm(e.value - B) / spectral_norm(B);
        worst = std::max(worst, rel);
        pts.push_back({{"w", {w(0), w(1), w(2)}}, {"rel_error", rel}});
    }
    r.details["points"] = pts;
    r.pass = worst < 0.01;
    r.summary = "max relative operator-norm error " + fmt("%.2e", worst) + " at 5 points (tol 1e-2)";
    return r;
}

CheckResult pyramid(std::uint64_t seed) {
    CheckResult r{5, "pyramid formula", false, ""};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const int d = n + static_cast<int>(rng() % (9 - n));
        Eigen::MatrixXd u(d, n);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < n; ++j) u(i, j) = nd(rng);
        worst = std::max(worst, geom::pyramid_residual(u));
    }
    r.details["max_residual"] = worst;
    r.pass = worst < 1e-9;
    r.summary = "max relative residual " + fmt("%.2e", worst) + " over 1000 simplices (tol 1e-9)";
    return r;
}

CheckResult integrability(std::uint64_t seed) {
    CheckResult r{6, "integrability threshold", false, ""};
    geom::ScanConfig cfg;
    cfg.seed = seed;
    r.pass = true;
    std::string s;
    for (auto [n, d] : std::vector<std::pair<int, int>>{{3, 4}, {4, 5}, {2, 2}}) {
        const double c = n - 1 - d;
        const auto rows = geom::integrability_scan(n, d, {c + 0.2, c - 0.2}, cfg);
        const bool ok = rows[0].verdict == "finite" && rows[1].verdict == "divergent";
        r.pass = r.pass && ok;
        r.details[std::to_string(n) + "," + std::to_string(d)] = {
            {"above", {{"s", rows[0].s}, {"ratio", rows[0].ratio}, {"verdict", rows[0].verdict}}},
            {"below", {{"s", rows[1].s}, {"ratio", rows[1].ratio}, {"verdict", rows[1].verdict}}}};
        s += (s.empty() ? "" : ", ") + std::string("(") + std::to_string(n) + "," + std::to_string(d) +
             "): " + rows[0].verdict + "/" + rows[1].verdict;
    }
    r.summary = s + " (expected finite/divergent)";
    return r;
}

CheckResult airy_scaling() {
    CheckResult r{7, "airy scaling", false, ""};
    const auto fit = spectral::airy_scaling_fit({1e2, 1e3, 1e4, 1e5}, {0.5, 1, 2, 4, 8}, 1.0, 2);
    r.details = {{"exponent_N", fit.exponent_N}, {"se_N", fit.se_N},   {"exponent_k", fit.exponent_k},
                 {"se_k", fit.se_k},             {"log_c", fit.log_c}, {"max_residual", fit.max_residual}};
    r.pass = std::abs(fit.exponent_N - 1.0 / 3) <= 0.05 && std::abs(fit.exponent_k + 2.0 / 3) <= 0.05;
    r.summary = "exponents N " + fmt("%.4f", fit.exponent_N) + " (1/3 +- 0.05), |k| " + fmt("%.4f", fit.exponent_k) +
                " (-2/3 +- 0.05)";
    return r;
}

CheckResult resolvent_equivalence() {
    CheckResult r{8, "resolvent oracle equivalence", false, ""};
    double worst = 0;
    Json cases = Json::array();
    for (int d : {1, 2}) {
        const VelocityGrid g{d, 64, 10.0};
        const Spectral sp(g);
        const Eigen::VectorXd a = Eigen::VectorXd::Constant(d, 0.7);
        const CVec f = sp.sample([](const Eigen::VectorXd& v) {
            return cplx(std::exp(-v.squaredNorm() / 2), 0.3 * v(0) * std::exp(-v.squaredNorm()));
        });
        for (double sigma : {0.05, 0.2})
            for (cplx om : {cplx(1, 0.5), cplx(0.2, -1)}) {
                const CVec green = spectral::resolvent_green(sp, om, a, sigma, f);
                const auto direct = spectral::resolvent_direct(sp, om, a, sigma, f);
                const double rel = rel_diff(green, direct.x);
                worst = std::max(worst, rel);
                cases.push_back({{"d", d}, {"unknowns", g.size()}, {"sigma", sigma},
                                 {"omega", {om.real(), om.imag()}}, {"rel_diff", rel}});
            }
    }
    r.details["cases"] = cases;
    r.pass = worst < 1e-6;
    r.summary = "max relative difference " + fmt("%.2e", worst) + " over 8 cases, d=1,2 (tol 1e-6)";
    return r;
}

CheckResult hat_positivity(std::uint64_t seed) {
    CheckResult r{9, "hat positivity and adjointness", false, ""};
    const auto p = landau::Potential::gaussian(2);
    // adjointness of the creation/annihilation pair
    double adj;
    {
        const Spectral sp(VelocityGrid{2, 12, 6.0});
        const auto& g = sp.grid();
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> nd;
        const CVec g0 = sp.sample([](const Eigen::VectorXd& v) {
            return cplx(std::exp(-v.squaredNorm() / 3) * (1 + v(0)), 0.2 * v(1) * std::exp(-v.squaredNorm() / 2));
        });
        const auto kq = spectral::polar_kquad(2, 4, 6, spectral::radial_cutoff(p), false);
        std::vector<CVec> g1(kq.size(), CVec(g.size() * g.size()));
        for (auto& x : g1)
            for (std::size_t i = 0; i < g.size(); ++i)
                for (std::size_t j = 0; j < g.size(); ++j)
                    x[i * g.size() + j] = cplx(nd(rng), nd(rng)) *
                                          std::exp(-(g.point(i).squaredNorm() + g.point(j).squaredNorm()) / 4);
        const cplx lhs = sp.inner(g0, spectral::apply_S_plus(sp, g1, kq, p, 1.0));
        cplx rhs = 0;
        for (std::size_t q = 0; q < kq.size(); ++q)
            rhs += kq.w[q] * dot(spectral::apply_S_minus(sp, g0, kq.k[q], p, 1.0), g1[q], g.cell() * g.cell());
        adj = std::abs(lhs - rhs) / std::abs(lhs);
    }
    // positivity on random smooth fields
    const sim::Scenario sc;
    const Spectral sp(sc.v0_grid());
    const auto kq = sc.k_rule();
    spectral::HatParams hp;
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> u(-1, 1);
    double worst = INFINITY;
    for (int t = 0; t < 100; ++t) {
        struct Bump {
            Eigen::Vector2d c, q;
            double width;
            cplx amp;
        };
        std::vector<Bump> bumps(3);
        for (auto& b : bumps) {
            b.c = {2 * u(rng), 2 * u(rng)};
            b.q = {1.5 * u(rng), 1.5 * u(rng)};
            b.width = 1.0 + 0.5 * u(rng);
            b.amp = cplx(u(rng), u(rng));
        }
        const CVec g = sp.sample([&](const Eigen::VectorXd& v) {
            cplx s = 0;
            for (const auto& b : bumps)
                s += b.amp * std::exp(-(v - b.c).squaredNorm() / (2 * b.width * b.width)) *
                     std::exp(cplx(0, b.q.dot(v)));
            return s;
        });
        double grad2 = 0;
        for (int ax = 0; ax < 2; ++ax) grad2 += std::pow(sp.norm(sp.gradient(g, ax)), 2);
        const double q = sp.inner(g, spectral::hat_apply(sp, hp, g, p, kq)).real();
        worst = std::min(worst, q / grad2);
    }
    r.details = {{"adjoint_rel_error", adj}, {"min_re_form_over_grad2", worst}, {"fields", 100}};
    r.pass = adj < 1e-10 && worst >= -1e-8;
    r.summary = "min Re<g,hat g>/|grad g|^2 " + fmt("%.3e", worst) + " (>= -1e-8), adjointness " + fmt("%.2e", adj) +
                " (tol 1e-10)";
    return r;
}

CheckResult deformation() {
    CheckResult r{10, "contour deformation identity", false, ""};
    double worst = 0, sup = 0, upper_min = INFINITY, upper_max = 0;
    Json pts = Json::array();
    const Spectral sp(VelocityGrid{1, 64, 8.0});
    const int m = 13;
    for (int i = 0; i < m; ++i) {
        const double kk = std::pow(10.0, -1 + 2.0 * i / (m - 1));
        const auto a = spectral::deformed_velocity_average(sp, Eigen::VectorXd::Constant(1, kk), 100, 1, 100, 1);
        const double kI = kk * std::abs(a.direct);
        worst = std::max(worst, a.rel_diff());
        sup = std::max(sup, kI);
        if (i >= m / 2) {
            upper_min = std::min(upper_min, kI);
            upper_max = std::max(upper_max, kI);
        }
        pts.push_back({{"k", kk}, {"rel_diff", a.rel_diff()}, {"k_times_integral", kI}});
    }
    {
        const Spectral sp2(VelocityGrid{2, 32, 8.0});
        Eigen::VectorXd k(2);
        k << 0.6, 0.8;
        const auto a = spectral::deformed_velocity_average(sp2, k, 100, 1, 100, 1);
        worst = std::max(worst, a.rel_diff());
        pts.push_back({{"k", {0.6, 0.8}}, {"rel_diff", a.rel_diff()}, {"k_times_integral", std::abs(a.direct)}});
    }
    // bounded: finite sup and a plateau (spread < 5%) over the upper decade
    const bool bounded = std::isfinite(sup) && upper_max <= 1.05 * upper_min;
    r.details = {{"points", pts}, {"sup_k_times_integral", sup}};
    r.pass = worst < 1e-6 && bounded;
    r.summary = "max two-sided difference " + fmt("%.2e", worst) + " (tol 1e-6), sup |k||I| " + fmt("%.4f", sup) +
                " over k in [0.1, 10]";
    return r;
}

}  // namespace

const std::set<int>& quick_ids() {
    static const std::set<int> ids{1, 2, 3, 5};
    return ids;
}

std::vector<CheckResult> run_suite(const SuiteOptions& o) {
    auto wanted = [&](int id) { return (!o.quick || quick_ids().count(id)) && (o.only.empty() || o.only.count(id)); };
    auto log = [&](const std::string& m) {
        if (o.log) o.log(m);
    };
    std::vector<CheckResult> out;
    auto timed = [&](int id, const std::string& name, const std::function<CheckResult()>& f) {
        if (!wanted(id)) return;
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult r;
        try {
            r = f();
        } catch (const std::exception& e) {
            r = CheckResult{id, name, false, std::string("error: ") + e.what()};
        }
        r.id = id;
        r.name = name;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(r);
        if (o.report) o.report(r);
    };
    const std::uint64_t s = o.seed;
    timed(1, "counting bound audit", counting_bound);
    timed(2, "boundary set example", boundary_example);
    timed(3, "momentum bookkeeping", [&] { return momentum_bookkeeping(s + 3); });
    timed(4, "landau kernel identity", [&] { return landau_identity(s + 4); });
    timed(5, "pyramid formula", [&] { return pyramid(s + 5); });
    timed(6, "integrability threshold", [&] { return integrability(s + 6); });
    timed(7, "airy scaling", airy_scaling);
    timed(8, "resolvent oracle equivalence", resolvent_equivalence);
    timed(9, "hat positivity and adjointness", [&] { return hat_positivity(s + 9); });
    timed(10, "contour deformation identity", deformation);

    // 11-13 share the hierarchy runs
    if (!wanted(11) && !wanted(12) && !wanted(13)) return out;
    const sim::Scenario sc;
    sim::ConvergenceResult conv;
    sim::Trajectory at100;
    std::string conv_error;
    double conv_seconds = 0;
    {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const bool full = wanted(11) || wanted(12);
            sim::Scenario run = sc;
            if (!full) run.N_list = {100};
            if (full)
                conv = sim::convergence_study(run, [&](const sim::ConvergenceRow& row, const sim::Trajectory& tr) {
                    log("hierarchy N=" + io::format_double(row.N) + " error " + fmt("%.4e", row.error) + " (" +
                        fmt("%.1f", row.seconds) + " s)");
                    if (row.N == 100) at100 = tr;
                });
            else
                at100 = sim::run_hierarchy(run, 100);
        } catch (const std::exception& e) {
            conv_error = e.what();
        }
        conv_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    auto emit = [&](CheckResult r) {
        out.push_back(r);
        if (o.report) o.report(r);
    };
    if (wanted(11)) {
        CheckResult r{11, "energy dissipation", false, ""};
        r.seconds = conv_seconds;
        if (!conv_error.empty()) {
            r.summary = "error: " + conv_error;
        } else {
            double worst = -INFINITY;
            Json rows = Json::array();
            for (const auto& row : conv.rows) {
                worst = std::max(worst, row.max_energy_increase);
                rows.push_back({{"N", row.N}, {"max_energy_increase", row.max_energy_increase}});
            }
            r.details["runs"] = rows;
            r.pass = worst <= 1e-9;
            r.summary = "max per-step relative energy increase " + fmt("%.2e", worst) + " over " +
                        std::to_string(conv.rows.size()) + " runs (tol 1e-9)";
        }
        emit(r);
    }
    if (wanted(12)) {
        CheckResult r{12, "kinetic limit rate", false, ""};
        r.seconds = conv_seconds;
        if (!conv_error.empty()) {
            r.summary = "error: " + conv_error;
        } else {
            Json rows = Json::array();
            std::string errs;
            for (const auto& row : conv.rows) {
                rows.push_back({{"N", row.N}, {"error", row.error}, {"sup_error", row.sup_error},
                                {"tail_bound", row.tail_bound}});
                errs += (errs.empty() ? "" : " ") + fmt("%.3e", row.error);
            }
            r.details = {{"rows", rows}, {"rate", conv.rate}, {"rate_se", conv.rate_se}, {"monotone", conv.monotone}};
            r.pass = conv.monotone && conv.rate >= 0.7 && conv.rate <= 1.3;
            r.summary = "errors " + errs + (conv.monotone ? " (monotone)" : " (NOT monotone)") + ", rate " +
                        fmt("%.3f", conv.rate) + " (in [0.7, 1.3])";
        }
        emit(r);
    }
    if (wanted(13)) {
        CheckResult r{13, "ansatz cross-validation", false, ""};
        const auto t0 = std::chrono::steady_clock::now();
        if (!conv_error.empty() || at100.tau.empty()) {
            r.summary = "error: " + (conv_error.empty() ? std::string("no N=100 trajectory") : conv_error);
        } else {
            try {
                log("ansatz N=100: Laplace-domain solve");
                const auto an = sim::solve_ansatz_laplace(sc, 100, at100.tau);
                const Spectral sp(sc.v0_grid());
                const double rel = sim::weighted_distance(sp, at100.tau, at100.g0, an.g0) /
                                   sim::weighted_norm(sp, at100.tau, at100.g0);
                r.details = {{"rel_diff", rel},
                             {"alpha_window", an.profile.A},
                             {"nodes", an.profile.alpha.size()},
                             {"tail_estimate", an.profile.tail_estimate}};
                r.pass = rel <= 1e-3;
                r.summary = "relative weighted difference " + fmt("%.2e", rel) + " at N=100 (tol 1e-3)";
            } catch (const std::exception& e) {
                r.summary = std::string("error: ") + e.what();
            }
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        emit(r);
    }
    return out;
}

std::string format_line(const CheckResult& r) {
    char head[64];
    std::snprintf(head, sizeof head, "[%s] %2d ", r.pass ? "PASS" : "FAIL", r.id);
    return head + r.name + ": " + r.summary;
}

Json to_json(const std::vector<CheckResult>& results, bool with_timings) {
    Json arr = Json::array();
    for (const auto& r : results) {
        Json j = {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary", r.summary}, {"details", r.details}};
        if (with_timings) j["seconds"] = r.seconds;
        arr.push_back(j);
    }
    return arr;
}

}  // namespace kinlab::acceptance
