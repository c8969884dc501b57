// Command-line front end: catalog, simulate, and verify over one JSON
// config. Flags overwrite individual config fields; KOWTYPE_EPS_SING
// overrides the singularity guard with the environment winning over the
// config. Exit codes: 0 success, 1 failed check or stalled integration,
// 2 config error, 3 singularity abort.

#include "CLI11.hpp"

#include "kowtype/cli.hpp"
#include "kowtype/errors.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace kow;

namespace {

struct Flags {
    std::string config_path;
    std::string system;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> t_end;
    std::optional<double> tol;
    std::optional<double> sample_dt;
    bool json = false;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file");
    cmd->add_option("--system", f.system, "system id (see catalog)");
    cmd->add_option("--seed", f.seed, "sampler seed");
    cmd->add_option("--t-end", f.t_end, "integration span");
    cmd->add_option("--tol", f.tol, "relative tolerance; atol follows as tol/100");
    cmd->add_option("--sample-dt", f.sample_dt, "output sample spacing");
    cmd->add_option("--out", f.out_dir, "output directory");
    cmd->add_flag("--json", f.json, "machine-readable output");
}

int build_config(const Flags& f, RunConfig& cfg, std::ostream& err) {
    try {
        if (!f.config_path.empty()) {
            std::ifstream in(f.config_path);
            if (!in) {
                err << "config error: cannot read \"" << f.config_path << "\"\n";
                return 2;
            }
            nlohmann::json j;
            in >> j;
            cfg = config_from_json(j);
        }
        if (!f.system.empty()) {
            const auto id = system_from_name(f.system);
            if (!id) throw ConfigError("unknown system \"" + f.system + "\"", "--system");
            cfg.system = *id;
        }
        if (f.seed) cfg.seed = *f.seed;
        if (f.t_end) {
            if (!(*f.t_end > 0.0)) throw ConfigError("t_end must be positive", "--t-end");
            cfg.t_end = *f.t_end;
        }
        if (f.tol) {
            TolSpec tol = cfg.tol;
            tol.rtol = *f.tol;
            tol.atol = *f.tol / 100.0;
            validate(tol, "--tol");
            cfg.tol = tol;
        }
        if (f.sample_dt) {
            if (!(*f.sample_dt > 0.0))
                throw ConfigError("sample_dt must be positive", "--sample-dt");
            cfg.sample_dt = *f.sample_dt;
        }
        if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
        if (const char* env = std::getenv("KOWTYPE_EPS_SING")) {
            char* end = nullptr;
            const double eps = std::strtod(env, &end);
            if (end == env || *end != '\0' || !(eps > 0.0))
                throw ConfigError("KOWTYPE_EPS_SING must be a positive number",
                                  "env:KOWTYPE_EPS_SING");
            cfg.eps_sing_override = eps;
        }
        return 0;
    } catch (const nlohmann::json::parse_error& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kowalevski-type systems: catalog, simulation, verification"};
    app.require_subcommand(1);

    bool catalog_json = false;
    CLI::App* catalog = app.add_subcommand("catalog", "list the system catalog");
    catalog->add_flag("--json", catalog_json, "machine-readable output");

    Flags sim_flags;
    CLI::App* simulate =
        app.add_subcommand("simulate", "integrate one trajectory and export it");
    add_common(simulate, sim_flags);

    Flags ver_flags;
    std::string target;
    CLI::App* verify =
        app.add_subcommand("verify", "run the measured checks against their thresholds");
    verify->add_option("target", target,
                       "separability|theorem|measure|integrals|quadrature|all");
    add_common(verify, ver_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (app.got_subcommand(catalog)) return cmd_catalog(catalog_json, std::cout);

    if (app.got_subcommand(simulate)) {
        RunConfig cfg;
        if (const int rc = build_config(sim_flags, cfg, std::cerr)) return rc;
        return cmd_simulate(cfg, sim_flags.json, std::cout, std::cerr);
    }

    RunConfig cfg;
    if (const int rc = build_config(ver_flags, cfg, std::cerr)) return rc;
    if (!target.empty()) cfg.targets = {target};
    return cmd_verify(cfg, ver_flags.json, std::cout, std::cerr);
}
