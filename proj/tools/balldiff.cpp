// Command-line front end: one subcommand per experiment plus `describe`.
// Exit codes: 0 all checks pass, 1 a statistical check failed, 2 bad
// configuration or usage, 3 numerical failure during simulation.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "balldiff/errors.hpp"
#include "balldiff/experiments.hpp"

namespace {

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& what) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != tok.size())
            throw balldiff::ConfigError(what + ": bad number '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

struct SubState {
    balldiff::ExperimentConfig cfg;
    std::string x0_text;
    std::string dt_list_text;
    CLI::App* sub = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "balldiff: simulation and statistical verification of diffusions on "
        "the unit ball (sphere projections, Wright-Fisher and squared-Bessel "
        "comparisons, time changes, coupling experiments)"};
    app.require_subcommand(1);

    std::map<std::string, SubState> states;
    for (const std::string& name : balldiff::experiment_names()) {
        SubState st;
        st.cfg = balldiff::default_config(name);
        auto [it, _] = states.emplace(name, std::move(st));
        SubState& s = it->second;
        // First sentence of the long description doubles as the help blurb.
        std::string blurb = balldiff::describe_experiment(name);
        blurb = blurb.substr(0, blurb.find('.') + 1);

        CLI::App* sub = app.add_subcommand(name, blurb);
        s.sub = sub;
        auto& cfg = s.cfg;
        sub->add_option("--n", cfg.n, "state dimension of the ball process");
        sub->add_option("--ell", cfg.ell,
                        "auxiliary dimension parameter (drift/density shape)");
        sub->add_option("--gamma", cfg.gamma_spec,
                        "dispersion descriptor const:<v> | linear:<a>,<b> | "
                        "poly:<c0>,<c1>,...");
        sub->add_option("--g", cfg.g_spec,
                        "inward drift descriptor (default const:(n-1+ell)/2)");
        sub->add_option("--t", cfg.t_horizon, "time horizon");
        sub->add_option("--dt", cfg.dt, "Euler step size");
        sub->add_option("--paths", cfg.paths, "number of simulated paths");
        sub->add_option("--seed", cfg.seed,
                        "RNG seed (BALLDIFF_SEED env var used when absent)");
        sub->add_option("--process", cfg.process,
                        "process selector where applicable: projected, "
                        "sphere, wf, besq, u, radial");
        sub->add_option("--alpha", cfg.alpha, "first drift parameter");
        sub->add_option("--beta", cfg.beta, "second drift parameter");
        sub->add_option("--delta", cfg.delta, "squared-Bessel dimension");
        sub->add_option("--x0", s.x0_text,
                        "comma-separated start state (process-specific "
                        "default when absent)");
        sub->add_option("--dt-list", s.dt_list_text,
                        "comma-separated step sizes for refinement sweeps");
        sub->add_option("--samples", cfg.samples,
                        "target sample count for stationarity tests");
        sub->add_option("--direction", cfg.direction,
                        "boundary to probe: below (level 1e-4) or above "
                        "(level 1-1e-4)")
            ->check(CLI::IsMember({"below", "above"}));
        sub->add_flag("--dump-paths", cfg.dump_paths,
                      "write simulated paths to paths.csv");
        sub->add_option("--threads", cfg.threads,
                        "worker threads (0 = hardware concurrency)");
        sub->add_option("--output-dir", cfg.output_dir,
                        "directory for report.json / summary.txt / paths.csv");
    }

    std::string describe_target;
    CLI::App* describe =
        app.add_subcommand("describe", "explain an experiment and its defaults");
    describe
        ->add_option("experiment", describe_target,
                     "one of the experiment subcommand names")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (describe->parsed()) {
            std::fputs(balldiff::describe_experiment(describe_target).c_str(),
                       stdout);
            return 0;
        }
        for (auto& [name, s] : states) {
            if (!s.sub->parsed()) continue;
            balldiff::ExperimentConfig cfg = s.cfg;
            if (s.sub->count("--seed") == 0) {
                if (const char* env = std::getenv("BALLDIFF_SEED")) {
                    try {
                        std::size_t pos = 0;
                        cfg.seed = std::stoull(env, &pos);
                        if (env[pos] != '\0') throw std::invalid_argument(env);
                    } catch (const std::exception&) {
                        throw balldiff::ConfigError(
                            "BALLDIFF_SEED must be an unsigned integer, got '" +
                            std::string(env) + "'");
                    }
                }
            }
            if (s.sub->count("--x0"))
                cfg.x0 = parse_double_list(s.x0_text, "--x0");
            if (s.sub->count("--dt-list"))
                cfg.dt_list = parse_double_list(s.dt_list_text, "--dt-list");
            if (cfg.output_dir.empty()) cfg.output_dir = ".";

            const balldiff::ExperimentOutput out =
                balldiff::run_experiment(cfg);
            std::fputs(out.summary_text.c_str(), stdout);
            std::fprintf(stdout, "wrote %s/report.json\n",
                         cfg.output_dir.c_str());
            return out.summary.overall_pass ? 0 : 1;
        }
        std::fputs("no subcommand selected\n", stderr);
        return 2;
    } catch (const balldiff::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const balldiff::DimensionError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const balldiff::DomainError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const balldiff::SingularityError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const balldiff::AccuracyError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const balldiff::RangeError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
