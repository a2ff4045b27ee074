// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "experiment.hpp"
#include "pdnn/errors.hpp"

#ifndef PDNN_VERSION
#define PDNN_VERSION "unknown"
#endif

namespace pdnn::cli
{

namespace
{

std::string env_name(const std::string &flag)
{
    std::string env = "PDNN_" + flag;
    std::transform(env.begin(), env.end(), env.begin(), [](unsigned char c) {
        return c == '-' ? '_' : static_cast<char>(std::toupper(c));
    });
    return env;
}

int fail(std::ostream &err, int code, nlohmann::json record)
{
    err << record.dump() << '\n';
    return code;
}

void apply_layers(ExperimentConfig &cfg, const std::vector<std::size_t> &layers)
{
    if (layers.empty())
        return;
    if (layers.size() > 2 || layers.front() == 0 || layers.back() == 0)
        throw ConfigError({"layers: expected <L> or <L_T>,<L_R> with every entry >= 1"});
    cfg.tx_layers = layers.front();
    cfg.rx_layers = layers.back();
}

// CLI11 reads the config file before the environment and lets the earlier
// source win, so environment values are forwarded as command-line arguments
// for every flag the user did not pass explicitly.
std::vector<std::string> with_environment(const CLI::App &app, int argc, const char *const *argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    const std::vector<std::string> given = args;
    for (const CLI::Option *o : app.get_options())
    {
        const std::string env = o->get_envname();
        const char *value = env.empty() ? nullptr : std::getenv(env.c_str());
        if (value == nullptr)
            continue;
        const std::string flag = o->get_name();
        const bool explicit_flag = std::any_of(given.begin(), given.end(), [&](const std::string &a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
        if (!explicit_flag)
            args.push_back(flag + "=" + value);
    }
    std::reverse(args.begin(), args.end());
    return args;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    ExperimentConfig cfg;
    std::vector<std::size_t> layers{cfg.tx_layers, cfg.rx_layers};
    std::string out_dir = cfg.out.string();

    CLI::App app{"Planar diffractive network SSK simulator", "pdnn_ssk"};
    app.set_version_flag("--version", PDNN_VERSION);
    app.set_config("--config", "", "TOML/INI experiment file; unknown keys are rejected");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.fallthrough();
    app.require_subcommand(1);

    auto opt = [&](const std::string &flag, auto &target, const std::string &help) {
        return app.add_option("--" + flag, target, help)->envname(env_name(flag))->capture_default_str();
    };
    auto list = [&](const std::string &flag, auto &target, const std::string &help) {
        return opt(flag, target, help)->delimiter(',');
    };

    opt("out", out_dir, "output directory, created when missing");
    opt("seed", cfg.seed, "root seed; channel seeds are seed, seed+1, ...");
    opt("workers", cfg.workers, "worker threads, 0 = available parallelism");
    list("m", cfg.m_orders, "modulation order(s); curves accept a list");
    opt("ebn0", cfg.ebn0, "Eb/N0 grid in dB, start:step:stop");
    opt("trials", cfg.trials, "Monte Carlo trials per point");
    opt("detector", cfg.detector, "noncoherent | ml");
    opt("n", cfg.n, "ports per interior layer");
    list("layers", layers, "layers per side: L or L_T,L_R");
    opt("interconnect", cfg.interconnect, "coupler | diffraction | identity");
    opt("cascade", cfg.cascade, "coupler cascade count M_c");
    opt("theta", cfg.theta, "direct-path phase delay in rad");
    opt("port-selection", cfg.port_selection, "first | center");
    opt("carrier-hz", cfg.carrier_hz, "diffraction carrier frequency");
    opt("layer-spacing-wl", cfg.layer_spacing_wl, "diffraction layer spacing in wavelengths");
    opt("element-spacing-wl", cfg.element_spacing_wl, "diffraction element pitch in wavelengths");
    opt("element-area", cfg.element_area, "diffraction element area in m^2, 0 = pitch^2");
    opt("sigma2", cfg.sigma2, "per-component noise variance used for training");
    list("tx-ports", cfg.tx_ports, "explicit TX port counts N^(0),...,N^(L)");
    list("rx-ports", cfg.rx_ports, "explicit RX port counts N^(0),...,N^(L)");
    opt("random-init", cfg.random_init, "draw initial phases from U(-pi, pi)");
    list("optimizer", cfg.optimizers, "adam | pga_armijo | random (comma list)");
    opt("lr", cfg.lr, "Adam learning rate");
    opt("epochs", cfg.epochs, "training epochs");
    opt("channels", cfg.channels, "number of channel seeds");
    list("n-grid", cfg.n_grid, "port counts swept by structural experiments");
    list("layer-configs", cfg.layer_configs, "TxR layer pairs, e.g. 1x1,2x2,1x3");
    list("mc-values", cfg.mc_values, "coupler cascade counts for sweep-coupling");
    opt("include-diffraction", cfg.include_diffraction, "add diffraction families to sweep-coupling");
    opt("phases", cfg.phases, "phase checkpoint JSON to install before running");
    opt("symbol", cfg.symbol, "0-based symbol for propagate-taps");

    auto *run = app.add_subcommand("run", "run an experiment and write its artifacts");
    run->add_option("kind", cfg.kind, "experiment kind")
        ->required()
        ->check(CLI::IsMember(std::vector<std::string>(std::begin(kExperimentKinds), std::end(kExperimentKinds))));
    auto *validate = app.add_subcommand("validate", "check a configuration without running it");
    cfg.kind = "train";
    validate->add_option("kind", cfg.kind, "experiment kind")->capture_default_str();

    try
    {
        std::vector<std::string> args = with_environment(app, argc, argv);
        app.parse(args);
    }
    catch (const CLI::Success &e)
    {
        return app.exit(e, out, err);
    }
    catch (const CLI::ParseError &e)
    {
        return fail(err, 2, {{"error", "config"}, {"violations", {e.what()}}});
    }

    try
    {
        cfg.out = out_dir;
        apply_layers(cfg, layers);
        if (*validate)
        {
            const nlohmann::json report = validate_experiment(cfg);
            out << report.dump(2) << '\n';
            return 0;
        }
        run_experiment(cfg, cfg.to_toml());
        out << (cfg.out / "manifest.json").string() << '\n';
        return 0;
    }
    catch (const ConfigError &e)
    {
        return fail(err, 2, {{"error", "config"}, {"violations", e.violations()}});
    }
    catch (const NumericError &e)
    {
        return fail(err, 3, {{"error", "numeric"}, {"module", e.module()}, {"op", e.op()}, {"detail", e.what()}});
    }
    catch (const std::invalid_argument &e)
    {
        return fail(err, 2, {{"error", "config"}, {"violations", {e.what()}}});
    }
    catch (const std::filesystem::filesystem_error &e)
    {
        return fail(err, 2, {{"error", "config"}, {"violations", {e.what()}}});
    }
    catch (const std::exception &e)
    {
        return fail(err, 1, {{"error", "internal"}, {"detail", e.what()}});
    }
}

int run_cli(int argc, const char *const *argv)
{
    return run_cli(argc, argv, std::cout, std::cerr);
}

} // namespace pdnn::cli
