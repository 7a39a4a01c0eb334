// Command-line front end: gfrag <subcommand> [--config PATH] [overrides...]

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "gfrag/commands.hpp"
#include "gfrag/config.hpp"
#include "gfrag/errors.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<int> n;
    std::optional<std::string> N;
    std::optional<double> gamma;
    std::optional<int> K_modes;
    std::optional<double> horizon_periods;
    std::optional<std::string> variant;
    std::optional<double> cfl_fraction;
    std::optional<std::string> mode;
    std::optional<std::string> profile;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "key = value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "output directory (overrides GFRAG_OUT_DIR and the config)");
    cmd->add_option("--n", o.n, "grid points per octave");
    cmd->add_option("--N", o.N, "half extent in grid points, or 'auto'");
    cmd->add_option("--gamma", o.gamma, "exponent of B(x) = K x^gamma");
    cmd->add_option("--K-modes", o.K_modes, "mode truncation K");
    cmd->add_option("--horizon-periods", o.horizon_periods, "horizon in multiples of log 2");
    cmd->add_option("--variant", o.variant, "exact | diffusive");
    cmd->add_option("--cfl-fraction", o.cfl_fraction, "CFL fraction of the diffusive variant");
    cmd->add_option("--mode", o.mode, "standard | conservative");
    cmd->add_option("--profile", o.profile, "peak | smooth");
}

gfrag::RunConfig resolve(const Overrides& o) {
    gfrag::RunConfig c = o.config_path.empty() ? gfrag::RunConfig{} : gfrag::load_config(o.config_path);
    if (const char* env = std::getenv("GFRAG_OUT_DIR"); env != nullptr && *env != '\0') c.out_dir = env;
    auto set = [&c](const char* key, const auto& value) {
        if (value) {
            if constexpr (std::is_same_v<std::decay_t<decltype(*value)>, std::string>)
                gfrag::apply_setting(c, key, *value);
            else
                gfrag::apply_setting(c, key, std::to_string(*value));
        }
    };
    set("out_dir", o.out);
    set("n", o.n);
    set("N", o.N);
    set("rate.gamma", o.gamma);
    set("K_modes", o.K_modes);
    set("horizon_periods", o.horizon_periods);
    set("variant", o.variant);
    set("cfl_fraction", o.cfl_fraction);
    set("mode", o.mode);
    set("profile", o.profile);
    gfrag::validate(c);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Growth-fragmentation simulator with a non-dissipative splitting scheme"};
    app.require_subcommand(1);
    Overrides o;

    using Command = nlohmann::json (*)(const gfrag::RunConfig&);
    const std::pair<const char*, Command> commands[] = {
        {"simulate", &gfrag::cli::cmd_simulate},
        {"eigen", &gfrag::cli::cmd_eigen},
        {"project", &gfrag::cli::cmd_project},
        {"compare-schemes", &gfrag::cli::cmd_compare_schemes},
        {"reproduce-figures", &gfrag::cli::cmd_reproduce_figures},
    };
    const char* help[] = {"run the scheme and write snapshots, series and a summary",
                          "compute the Perron eigenvector and the first modes",
                          "project the initial profile on the dominant modes",
                          "run the exact and the diffusive scheme side by side",
                          "write the four figure bundles"};
    std::vector<std::pair<CLI::App*, Command>> subs;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        auto* sub = app.add_subcommand(commands[i].first, help[i]);
        add_common_options(sub, o);
        subs.emplace_back(sub, commands[i].second);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const auto config = resolve(o);
        for (const auto& [sub, fn] : subs) {
            if (!sub->parsed()) continue;
            const auto summary = fn(config);
            std::cout << summary.dump(2) << '\n';
        }
    } catch (const gfrag::StabilityError& e) {
        std::cerr << "error: " << e.what() << '\n'
                  << "hint: max admissible N at this n = " << e.max_admissible_N()
                  << ", min admissible n at this extent = " << e.min_admissible_n() << '\n';
        return gfrag::cli::kExitConfig;
    } catch (const gfrag::NumericalError& e) {
        std::cerr << "error: " << e.what() << " (step " << e.step() << ")\n";
        return gfrag::cli::kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return gfrag::cli::exit_code_for(e);
    }
    return gfrag::cli::kExitOk;
}
