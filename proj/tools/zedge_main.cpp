#include <zedge/zedge.hpp>

#include <CLI11.hpp>

namespace {

void add_common_flags(CLI::App* cmd, zedge::RunConfig& cfg) {
    cmd->add_option("--n", cfg.n, "clock dimension N (>= 2)");
    cmd->add_option("--p", cfg.p, "SPT class p in 0..N-1");
    cmd->add_option("--sites", cfg.sites, "ring length M (default depends on N)");
    cmd->add_option("--lambda", cfg.lambda, "overall coupling (default depends on N)");
    cmd->add_option("--levels", cfg.levels, "number of energy levels to compute");
    cmd->add_option("--tol", cfg.tol, "eigensolver residual tolerance");
    cmd->add_option("--radius", cfg.radius, "compactification radius of the reference CFT");
    cmd->add_option("--seed", cfg.seed, "random seed for the solver start vector");
    cmd->add_option("--format", cfg.format, "stdout payload: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", cfg.out, "output file stem (writes <stem>.json and <stem>.csv)");
    cmd->add_flag("--gnuplot", cfg.gnuplot, "also write a <stem>.gp plot script");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Z_N clock chains with anomalous edge symmetry"};
    app.require_subcommand(1);

    zedge::RunConfig cfg;

    auto* verify = app.add_subcommand("verify", "run the named invariant suite");
    verify->add_option("--out", cfg.out, "output file stem");
    verify->add_option("--seed", cfg.seed, "random seed for probe vectors");
    verify
        ->add_flag("--inject-q-sign-error", cfg.inject_q_sign_error,
                   "flip one domain-wall coefficient to prove the suite catches it")
        ->group("");

    auto* spectrum = app.add_subcommand("spectrum", "periodic-ring spectrum vs CFT");
    add_common_flags(spectrum, cfg);

    auto* twisted =
        app.add_subcommand("twisted-spectrum", "symmetry-twisted spectrum vs CFT");
    add_common_flags(twisted, cfg);

    auto* cocycle = app.add_subcommand("cocycle", "three-cocycle checks for Z_N");
    cocycle->add_option("--n", cfg.n, "group order N (>= 2)");
    cocycle->add_option("--out", cfg.out, "output file stem");

    CLI11_PARSE(app, argc, argv);

    return zedge::run_guarded([&]() -> int {
        if (verify->parsed()) return zedge::cmd_verify(cfg);
        if (spectrum->parsed()) return zedge::cmd_spectrum(cfg);
        if (twisted->parsed()) return zedge::cmd_twisted_spectrum(cfg);
        return zedge::cmd_cocycle(cfg);
    });
}
