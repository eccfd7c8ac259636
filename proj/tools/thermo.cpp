// Command-line front end: phases | surface | precision | bec | verify.
// Exit codes: 0 success, 2 invalid configuration / failed verification,
// 3 numerical singularity that wiped out an entire run, 1 anything else.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "thermo/thermo.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "TOML configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_dir, "output directory (overrides config and environment)");
    cmd->add_option("--seed", args.seed, "master seed override for stochastic runs");
}

std::string resolve_out_dir(const CommonArgs& args, const thermo::RunConfig& cfg) {
    if (!args.out_dir.empty()) return args.out_dir;
    if (const char* env = std::getenv("THERMO_OUT_DIR"); env && *env) return env;
    return cfg.output.directory;
}

void report(const thermo::PipelineResult& res, const std::string& out_dir) {
    for (const std::string& name : res.outputs)
        std::cout << "wrote " << thermo::detail::join_path(out_dir, name) << "\n";
    for (const std::string& note : res.notes) std::cout << "note: " << note << "\n";
    if (res.rows_failed > 0)
        std::cout << res.rows_failed << " of " << res.rows_total
                  << " grid cells were flagged; see the output for details\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dressed-phase thermometry for a trapped quantum gas"};
    app.require_subcommand(1);

    CommonArgs phases_args, surface_args, precision_args, bec_args, verify_args;
    CLI::App* phases = app.add_subcommand("phases", "thermal phase curves over temperature");
    add_common(phases, phases_args);
    CLI::App* surface = app.add_subcommand("surface", "relative phase over the (g, delta) grid");
    add_common(surface, surface_args);
    CLI::App* precision =
        app.add_subcommand("precision", "theory bounds and Monte-Carlo estimation sweep");
    add_common(precision, precision_args);
    CLI::App* bec = app.add_subcommand("bec", "condensate-to-model mapping report");
    add_common(bec, bec_args);
    CLI::App* verify =
        app.add_subcommand("verify", "re-check artifacts in an existing output directory");
    add_common(verify, verify_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help / the parse error
        return code == 0 ? 0 : 2;
    }

    try {
        if (phases->parsed()) {
            const thermo::RunConfig cfg = thermo::RunConfig::load(phases_args.config_path);
            report(thermo::run_phases(cfg, resolve_out_dir(phases_args, cfg), phases_args.seed),
                   resolve_out_dir(phases_args, cfg));
        } else if (surface->parsed()) {
            const thermo::RunConfig cfg = thermo::RunConfig::load(surface_args.config_path);
            report(thermo::run_surface(cfg, resolve_out_dir(surface_args, cfg), surface_args.seed),
                   resolve_out_dir(surface_args, cfg));
        } else if (precision->parsed()) {
            const thermo::RunConfig cfg = thermo::RunConfig::load(precision_args.config_path);
            report(thermo::run_precision(cfg, resolve_out_dir(precision_args, cfg),
                                         precision_args.seed),
                   resolve_out_dir(precision_args, cfg));
        } else if (bec->parsed()) {
            const thermo::RunConfig cfg = thermo::RunConfig::load(bec_args.config_path);
            report(thermo::run_bec(cfg, resolve_out_dir(bec_args, cfg), bec_args.seed),
                   resolve_out_dir(bec_args, cfg));
        } else if (verify->parsed()) {
            const thermo::RunConfig cfg = thermo::RunConfig::load(verify_args.config_path);
            const thermo::VerifySummary s =
                thermo::run_verify(cfg, resolve_out_dir(verify_args, cfg));
            for (const std::string& line : s.lines) std::cout << line << "\n";
            std::cout << s.checks - s.failures << " of " << s.checks << " checks passed\n";
            if (s.failures > 0) return 2;
        }
    } catch (const thermo::SingularityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const thermo::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
