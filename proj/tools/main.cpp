#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "kinlab/io.hpp"

int main(int argc, char** argv) {
    using namespace kinlab::cli;
    CLI::App app{"kinlab: diagram audits, Landau coefficients, resolvent scalings and hierarchy runs"};
    app.set_version_flag("--version", std::string(kinlab::io::version));
    app.require_subcommand(1);

    Global g;
    app.add_option("--out", g.out, "Output root (default: $KINLAB_OUTPUT_ROOT, else ./kinlab_out)");
    app.add_option("--threads", g.threads, "Worker cap for parallel loops (0: all cores)")->check(CLI::NonNegativeNumber);

    DiagramsArgs da;
    auto* diagrams = app.add_subcommand("diagrams", "Abstract catalogs, histories and the bad-index audit");
    diagrams->add_option("--m0", da.m0, "Truncation order")->capture_default_str();
    diagrams->add_option("--degree", da.degree, "Only this degree (default: all)");
    diagrams->add_option("--max-len", da.max_len, "Maximum abstract length")->capture_default_str();
    diagrams->add_flag("--enumerate", da.enumerate, "Catalog the admissible closure with boundary and remainders");
    diagrams->add_flag("--audit", da.audit, "Run the exhaustive bad-index audit (abstracts with s_1 = 1)");
    diagrams->add_option("--history-cap", da.history_cap, "Skip max_bad above this many histories")
        ->capture_default_str();

    LandauArgs la;
    auto* landau = app.add_subcommand("landau", "Landau diffusion tensor, Lambda_V, C_s and kappa thresholds");
    landau->add_option("--d", la.d, "Dimension (2 or 3)")->capture_default_str();
    landau->add_option("--beta", la.beta, "Inverse temperature")->capture_default_str();
    landau->add_option("--amplitude", la.amplitude, "Gaussian potential amplitude")->capture_default_str();
    landau->add_option("--width", la.width, "Gaussian potential width")->capture_default_str();
    landau->add_option("--k-max", la.k_max, "Potential truncation radius")->capture_default_str();
    landau->add_option("--grid-n", la.grid_n, "Points per axis of the A_0 table")->capture_default_str();
    landau->add_option("--grid-vmax", la.grid_vmax, "Half-width of the A_0 table")->capture_default_str();
    landau->add_option("--s-list", la.s_list, "Exponents s for C_s")->delimiter(',');
    landau->add_option("--samples", la.samples, "Kernel extrapolation samples")->capture_default_str();
    landau->add_option("--seed", la.seed, "Seed for the sampled w")->capture_default_str();

    ResolventArgs ra;
    auto* resolvent = app.add_subcommand("resolvent", "Hypoelliptic resolvent scaling and the deformation identity");
    resolvent->add_option("--N-list", ra.N_list, "Values of N")->delimiter(',');
    resolvent->add_option("--k-list", ra.k_list, "Values of |k|")->delimiter(',');
    resolvent->add_option("--kappa", ra.kappa, "Diffusion strength")->capture_default_str();
    resolvent->add_option("--d", ra.d, "Dimension")->capture_default_str();
    resolvent->add_option("--deform-points", ra.deform_points, "Log grid size on [0.1, 10]")->capture_default_str();

    HierarchyArgs ha;
    auto* hierarchy = app.add_subcommand("hierarchy", "m0 = 1 hierarchy runs against the Fokker-Planck limit");
    hierarchy->add_option("--config", ha.config, "Config file (key = value with [sections])");
    hierarchy->add_option("--set", ha.set, "Override, e.g. --set run.N_list=25,50")->allow_extra_args(false);

    GeometryArgs ga;
    auto* geometry = app.add_subcommand("geometry", "Integrability scan and pyramid identity residuals");
    geometry->add_option("--n", ga.n, "Number of vectors in the scan")->capture_default_str();
    geometry->add_option("--d", ga.d, "Dimension in the scan")->capture_default_str();
    geometry->add_option("--s-list", ga.s_list, "Exponents (default: threshold +- 0.2, 0.5)")->delimiter(',');
    geometry->add_option("--seed", ga.seed, "Seed")->capture_default_str();
    geometry->add_option("--coarse-samples", ga.coarse_samples, "Samples at the coarse cutoff")->capture_default_str();
    geometry->add_option("--fine-samples", ga.fine_samples, "Samples at the fine cutoff")->capture_default_str();
    geometry->add_option("--simplices", ga.simplices, "Random simplices for the identity")->capture_default_str();
    geometry->add_option("--max-n", ga.max_n, "Largest simplex size")->capture_default_str();
    geometry->add_option("--max-d", ga.max_d, "Largest ambient dimension")->capture_default_str();

    AuditArgs aa;
    auto* audit = app.add_subcommand("audit", "Acceptance suite (criteria 1-13)");
    audit->add_flag("--quick", aa.quick, "Combinatorial audits and closed-form checks only");
    audit->add_option("--only", aa.only, "Run only these criteria")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (*diagrams) return run_diagrams(g, da);
    if (*landau) return run_landau(g, la);
    if (*resolvent) return run_resolvent(g, ra);
    if (*hierarchy) return run_hierarchy_cmd(g, ha);
    if (*geometry) return run_geometry(g, ga);
    return run_audit(g, aa);
}
