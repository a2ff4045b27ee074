// SPDX-License-Identifier: Apache-2.0

#include "experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "pdnn/analysis.hpp"
#include "pdnn/errors.hpp"
#include "pdnn/matrix_io.hpp"

#ifndef PDNN_VERSION
#define PDNN_VERSION "unknown"
#endif

namespace pdnn::cli
{

namespace
{

namespace fs = std::filesystem;

Interconnect parse_interconnect(const std::string &name)
{
    if (name == "coupler")
        return Interconnect::coupler;
    if (name == "diffraction")
        return Interconnect::diffraction;
    if (name == "identity")
        return Interconnect::identity;
    throw InvalidArgument("interconnect: unknown value '" + name + "' (coupler, diffraction, identity)");
}

PortSelection parse_selection(const std::string &name)
{
    if (name == "first")
        return PortSelection::first;
    if (name == "center")
        return PortSelection::center;
    throw InvalidArgument("port-selection: unknown value '" + name + "' (first, center)");
}

Detector parse_detector(const std::string &name)
{
    if (name == "noncoherent" || name == "nc")
        return Detector::noncoherent;
    if (name == "ml")
        return Detector::ml;
    throw InvalidArgument("detector: unknown value '" + name + "' (noncoherent, ml)");
}

std::ofstream open_output(const fs::path &path)
{
    std::ofstream os(path);
    if (!os)
        throw ConfigError({"out: cannot write " + path.string()});
    return os;
}

std::string utc_now()
{
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

struct Artifacts
{
    fs::path root;
    std::vector<std::string> files;

    std::ofstream open(const std::string &name)
    {
        files.push_back(name);
        const fs::path path = root / name;
        if (path.has_parent_path())
            fs::create_directories(path.parent_path());
        return open_output(path);
    }
};

SystemState load_system(const ExperimentConfig &cfg, std::uint64_t channel_seed)
{
    SystemState state = assemble_system(cfg.system_spec(channel_seed));
    if (!cfg.phases.empty())
    {
        std::ifstream is(cfg.phases);
        if (!is)
            throw ConfigError({"phases: cannot read " + cfg.phases});
        const nlohmann::json j = nlohmann::json::parse(is);
        const nlohmann::json &src = j.contains("final_phases") ? j.at("final_phases") : j;
        state.tx.set_phases(PhaseParams::from_json(src.at("tx")));
        state.rx.set_phases(PhaseParams::from_json(src.at("rx")));
    }
    return state;
}

double to_db(double ratio)
{
    return 10.0 * std::log10(ratio);
}

nlohmann::json run_theory(const ExperimentConfig &cfg, Artifacts &art)
{
    const auto grid = parse_range(cfg.ebn0);
    for (std::size_t m : cfg.curve_orders())
    {
        auto os = art.open("theory_m" + std::to_string(m) + ".csv");
        write_theory_csv(os, theory_curve(m, grid));
    }
    return {{"qam_formula", kQamFormulaNote}, {"qam_note", "ser_qam is nan when M is not a power of 4"}};
}

nlohmann::json run_ser_interference_free(const ExperimentConfig &cfg, Artifacts &art)
{
    const auto grid = parse_range(cfg.ebn0);
    MonteCarloOptions mc{cfg.trials, cfg.seed, cfg.workers, 0};
    std::vector<SerCurve> curves;
    for (std::size_t m : cfg.curve_orders())
    {
        std::vector<double> gammas;
        for (double e : grid)
            gammas.push_back(gamma_from_ebn0(e, m));
        curves.push_back(ser_interference_free(m, gammas, mc, parse_detector(cfg.detector)));
    }
    auto os = art.open("ser_interference_free.csv");
    write_ser_csv(os, curves);
    return {{"detector", cfg.detector}, {"sigma2", NoiseSpec{}.sigma2}};
}

nlohmann::json run_train(const ExperimentConfig &cfg, Artifacts &art)
{
    const auto seeds = cfg.channel_seeds();
    const std::size_t n_opt = cfg.optimizers.size();
    struct Outcome
    {
        TrainRecord record;
        double initial_ir = 0.0;
        double final_ir = 0.0;
    };
    std::vector<Outcome> outcomes(seeds.size() * n_opt);
    parallel_for(outcomes.size(), cfg.workers, [&](std::size_t item) {
        const std::uint64_t seed = seeds[item / n_opt];
        SystemState state = load_system(cfg, seed);
        TrainConfig tc = cfg.train_config();
        tc.kind = optimizer_from_string(cfg.optimizers[item % n_opt]);
        tc.seed = seed;
        Outcome &o = outcomes[item];
        o.initial_ir = max_interference_ratio(effective_channel(state).c);
        o.record = train(state, tc);
        o.final_ir = max_interference_ratio(effective_channel(state).c);
    });

    auto traces = art.open("train_traces.csv");
    auto summary = art.open("train_summary.csv");
    traces.precision(17);
    summary.precision(17);
    traces << "optimizer,channel_seed,epoch,sum_rate,loss\n";
    summary << "optimizer,channel_seed,initial_sum_rate,final_sum_rate,initial_max_ir_db,final_max_ir_db,seconds\n";
    for (std::size_t item = 0; item < outcomes.size(); ++item)
    {
        const std::uint64_t seed = seeds[item / n_opt];
        const Outcome &o = outcomes[item];
        const std::string name = to_string(o.record.kind);
        for (std::size_t e = 0; e < o.record.sum_rate.size(); ++e)
            traces << name << ',' << seed << ',' << e << ',' << o.record.sum_rate[e] << ',' << o.record.loss[e] << '\n';
        double seconds = 0.0;
        for (double s : o.record.epoch_seconds)
            seconds += s;
        summary << name << ',' << seed << ',' << o.record.sum_rate.front() << ',' << o.record.final_sum_rate() << ','
                << to_db(o.initial_ir) << ',' << to_db(o.final_ir) << ',' << seconds << '\n';
        nlohmann::json checkpoint = o.record.to_json();
        checkpoint["channel_seed"] = seed;
        art.open("phases/" + name + "_seed" + std::to_string(seed) + ".json") << checkpoint.dump(1) << '\n';
    }
    const TrainConfig tc = cfg.train_config();
    return {{"channel_seeds", seeds},
            {"adam", {{"beta1", tc.adam.beta1}, {"beta2", tc.adam.beta2}, {"epsilon", tc.adam.epsilon}}},
            {"armijo",
             {{"initial_step", tc.armijo.initial_step},
              {"shrink", tc.armijo.shrink},
              {"slope", tc.armijo.slope},
              {"max_backtracks", tc.armijo.max_backtracks}}}};
}

nlohmann::json run_ser_trained(const ExperimentConfig &cfg, Artifacts &art)
{
    const auto grid = parse_range(cfg.ebn0);
    const auto seeds = cfg.channel_seeds();
    MonteCarloOptions mc{cfg.trials, cfg.seed, cfg.workers, 0};
    std::vector<SerCurve> curves;
    nlohmann::json per_symbol = nlohmann::json::object();
    const std::vector<std::string> kinds =
        cfg.phases.empty() ? cfg.optimizers : std::vector<std::string>{"checkpoint"};
    for (std::uint64_t seed : seeds)
        for (const auto &kind : kinds)
        {
            SystemState state = load_system(cfg, seed);
            if (cfg.phases.empty())
            {
                TrainConfig tc = cfg.train_config();
                tc.kind = optimizer_from_string(kind);
                tc.seed = seed;
                train(state, tc);
            }
            const std::string label = kind + "_seed" + std::to_string(seed);
            curves.push_back(ser_trained_system(state, grid, mc, label));
            per_symbol[label] = curves.back().gamma_per_symbol_unit_noise;
        }
    auto os = art.open("ser_trained.csv");
    write_ser_csv(os, curves);
    return {{"channel_seeds", seeds},
            {"diag_power_per_symbol", per_symbol},
            {"snr_convention", "sigma2 = mean_m |c_mm|^2 / (2 gamma), gamma = 2 log2(M) Eb/N0"}};
}

nlohmann::json write_sweep(const std::vector<SweepResult> &results, const std::string &stem, Artifacts &art)
{
    auto os = art.open(stem + ".csv");
    write_sweep_csv(os, results);
    nlohmann::json detail = nlohmann::json::array();
    for (const auto &r : results)
        detail.push_back(r.to_json());
    art.open(stem + ".json") << detail.dump(1) << '\n';
    return {{"channel_seeds", results.empty() ? std::vector<std::uint64_t>{} : results.front().seeds}};
}

nlohmann::json run_sweep_depth_width(const ExperimentConfig &cfg, Artifacts &art)
{
    std::vector<std::pair<std::size_t, std::size_t>> layers;
    for (const auto &s : cfg.layer_configs)
        layers.push_back(parse_layer_config(s));
    const SystemSpec base = cfg.system_spec(cfg.seed);
    return write_sweep(sweep_depth_width(layers, base.interconnect, cfg.sweep_options()), "sweep_depth_width", art);
}

nlohmann::json run_sweep_coupling(const ExperimentConfig &cfg, Artifacts &art)
{
    InterconnectSpec rs = cfg.system_spec(cfg.seed).interconnect;
    rs.kind = Interconnect::diffraction;
    return write_sweep(sweep_coupling(cfg.mc_values, rs, cfg.include_diffraction, cfg.sweep_options()),
                       "sweep_coupling", art);
}

nlohmann::json run_dump_matrices(const ExperimentConfig &cfg, Artifacts &art)
{
    const SystemState state = load_system(cfg, cfg.seed);
    for (const PdnnNetwork *net : {&state.tx, &state.rx})
    {
        const std::string side = to_string(net->side());
        for (std::size_t l = 0; l < net->num_layers(); ++l)
        {
            auto os = art.open("matrices/" + side + "_w" + std::to_string(l) + ".csv");
            write_matrix_csv(os, net->fixed(l));
        }
        auto os = art.open("matrices/" + side + "_transfer.csv");
        write_matrix_csv(os, net->transfer_matrix());
    }
    {
        auto os = art.open("matrices/channel.csv");
        write_matrix_csv(os, state.channel.h);
    }
    {
        auto os = art.open("matrices/channel.bin");
        write_channel_binary(os, state.channel);
    }
    auto os = art.open("matrices/effective.csv");
    write_matrix_csv(os, effective_channel(state).c);
    return {{"channel_seed", cfg.seed}, {"layout", "row-major, re,im pairs"}};
}

nlohmann::json run_propagate_taps(const ExperimentConfig &cfg, Artifacts &art)
{
    const SystemState state = load_system(cfg, cfg.seed);
    if (cfg.symbol >= state.modulation_order)
        throw ConfigError({"symbol: must be < M=" + std::to_string(state.modulation_order)});
    const auto tx_taps = state.tx.forward_with_taps(one_hot(cfg.symbol, state.tx.input_width()));
    const auto rx_taps = state.rx.forward_with_taps(state.channel.h * tx_taps.back());

    auto os = art.open("taps.csv");
    os.precision(17);
    os << "side,stage,port,re,im,power\n";
    auto emit = [&](const char *side, const std::vector<ComplexVector> &taps) {
        for (std::size_t s = 0; s < taps.size(); ++s)
            for (Eigen::Index p = 0; p < taps[s].size(); ++p)
                os << side << ',' << s << ',' << p << ',' << taps[s](p).real() << ',' << taps[s](p).imag() << ','
                   << std::norm(taps[s](p)) << '\n';
    };
    emit("tx", tx_taps);
    emit("rx", rx_taps);
    return {{"channel_seed", cfg.seed}, {"symbol", cfg.symbol}};
}

} // namespace

std::vector<double> parse_range(const std::string &text)
{
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':'))
    {
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(item, &used);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        if (used == 0 || used != item.size())
            throw InvalidArgument("range '" + text + "': '" + item + "' is not a number");
        parts.push_back(v);
    }
    if (parts.size() == 1)
        return parts;
    if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0])
        throw InvalidArgument("range '" + text + "': expected start:step:stop with step > 0 and stop >= start");
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i)
        grid.push_back(parts[0] + static_cast<double>(i) * parts[1]);
    return grid;
}

std::pair<std::size_t, std::size_t> parse_layer_config(const std::string &text)
{
    const auto x = text.find('x');
    try
    {
        if (x != std::string::npos)
        {
            const std::size_t lt = std::stoul(text.substr(0, x));
            const std::size_t lr = std::stoul(text.substr(x + 1));
            if (lt >= 1 && lr >= 1)
                return {lt, lr};
        }
    }
    catch (const std::exception &)
    {
    }
    throw InvalidArgument("layer config '" + text + "': expected <tx layers>x<rx layers>, both >= 1");
}

std::vector<std::string> ExperimentConfig::violations() const
{
    std::vector<std::string> out;
    auto guard = [&](const std::string &field, auto &&check) {
        try
        {
            check();
        }
        catch (const ConfigError &e)
        {
            for (const auto &v : e.violations())
                out.push_back(field + ": " + v);
        }
        catch (const std::exception &e)
        {
            out.push_back(field + ": " + e.what());
        }
    };
    if (std::find(std::begin(kExperimentKinds), std::end(kExperimentKinds), kind) == std::end(kExperimentKinds))
        out.push_back("kind: unknown experiment '" + kind + "'");
    guard("ebn0", [&] { parse_range(ebn0); });
    guard("detector", [&] { parse_detector(detector); });
    guard("interconnect", [&] { parse_interconnect(interconnect); });
    guard("port-selection", [&] { parse_selection(port_selection); });
    for (const auto &o : optimizers)
        guard("optimizer", [&] { optimizer_from_string(o); });
    for (const auto &l : layer_configs)
        guard("layer-configs", [&] { parse_layer_config(l); });
    for (std::size_t m_order : is_curve_kind() ? curve_orders() : std::vector<std::size_t>{})
        if (!is_power_of_two(m_order) || m_order < 2)
            out.push_back("m: modulation order must be a power of two, got " + std::to_string(m_order));
    if (!is_curve_kind() && m_orders.size() > 1)
        out.push_back("m: " + kind + " takes a single modulation order");
    if (trials == 0)
        out.push_back("trials: must be >= 1");
    if (channels == 0)
        out.push_back("channels: must be >= 1");
    if (n_grid.empty())
        out.push_back("n-grid: must not be empty");
    for (std::size_t mc : mc_values)
        if (mc == 0)
            out.push_back("mc-values: cascade count must be >= 1");
    for (const auto &v : train_config().violations())
        out.push_back("train: " + v);
    guard("system", [&] {
        for (const auto &v : system_spec_violations(system_spec(seed)))
            out.push_back("system: " + v);
    });
    if (kind == "sweep-depth-width" || kind == "sweep-coupling")
        for (std::size_t width : n_grid)
            if (width < system_order())
                out.push_back("n-grid: width " + std::to_string(width) + " is smaller than M=" +
                              std::to_string(system_order()));
    return out;
}

SystemSpec ExperimentConfig::system_spec(std::uint64_t channel_seed) const
{
    SystemSpec spec;
    spec.modulation_order = system_order();
    spec.width = n;
    spec.tx_layers = tx_layers;
    spec.rx_layers = rx_layers;
    spec.interconnect.kind = parse_interconnect(interconnect);
    spec.interconnect.cascade_count = cascade;
    spec.interconnect.theta = theta;
    spec.interconnect.selection = parse_selection(port_selection);
    spec.interconnect.carrier_hz = carrier_hz;
    spec.interconnect.layer_spacing_wl = layer_spacing_wl;
    spec.interconnect.element_spacing_wl = element_spacing_wl;
    spec.interconnect.element_area = element_area;
    spec.noise.sigma2 = sigma2;
    spec.channel_seed = channel_seed;
    spec.init_seed = channel_seed;
    spec.random_init = random_init;
    spec.tx_ports = tx_ports;
    spec.rx_ports = rx_ports;
    return spec;
}

TrainConfig ExperimentConfig::train_config() const
{
    TrainConfig tc;
    tc.learning_rate = lr;
    tc.epochs = epochs;
    return tc;
}

SweepOptions ExperimentConfig::sweep_options() const
{
    SweepOptions o;
    o.m_order = system_order();
    o.n_grid = n_grid;
    o.channel_seeds = channel_seeds();
    o.train = train_config();
    o.train.kind = optimizer_from_string(optimizers.front());
    o.noise.sigma2 = sigma2;
    o.workers = workers;
    return o;
}

std::string ExperimentConfig::to_toml() const
{
    std::ostringstream os;
    os.precision(17);
    auto str = [](const std::string &v) { return nlohmann::json(v).dump(); };
    auto key = [&](const char *name) -> std::ostream & { return os << name << " = "; };
    auto array = [&](const char *name, const auto &values, auto &&format) {
        if (values.empty())
            return;
        key(name) << '[';
        for (std::size_t i = 0; i < values.size(); ++i)
            os << (i ? ", " : "") << format(values[i]);
        os << "]\n";
    };
    auto plain = [](const auto &v) { return v; };

    key("out") << str(out.string()) << '\n';
    key("seed") << seed << '\n';
    key("workers") << workers << '\n';
    array("m", m_orders, plain);
    key("ebn0") << str(ebn0) << '\n';
    key("trials") << trials << '\n';
    key("detector") << str(detector) << '\n';
    key("n") << n << '\n';
    key("layers") << '[' << tx_layers << ", " << rx_layers << "]\n";
    key("interconnect") << str(interconnect) << '\n';
    key("cascade") << cascade << '\n';
    key("theta") << theta << '\n';
    key("port-selection") << str(port_selection) << '\n';
    key("carrier-hz") << carrier_hz << '\n';
    key("layer-spacing-wl") << layer_spacing_wl << '\n';
    key("element-spacing-wl") << element_spacing_wl << '\n';
    key("element-area") << element_area << '\n';
    key("sigma2") << sigma2 << '\n';
    array("tx-ports", tx_ports, plain);
    array("rx-ports", rx_ports, plain);
    key("random-init") << (random_init ? "true" : "false") << '\n';
    array("optimizer", optimizers, str);
    key("lr") << lr << '\n';
    key("epochs") << epochs << '\n';
    key("channels") << channels << '\n';
    array("n-grid", n_grid, plain);
    array("layer-configs", layer_configs, str);
    array("mc-values", mc_values, plain);
    key("include-diffraction") << (include_diffraction ? "true" : "false") << '\n';
    if (!phases.empty())
        key("phases") << str(phases) << '\n';
    key("symbol") << symbol << '\n';
    os << "\n[run]\n";
    key("kind") << str(kind) << '\n';
    return os.str();
}

bool ExperimentConfig::is_curve_kind() const
{
    return kind == "theory-curves" || kind == "ser-interference-free";
}

std::vector<std::size_t> ExperimentConfig::curve_orders() const
{
    if (!m_orders.empty())
        return m_orders;
    return {4, 16, 64};
}

std::size_t ExperimentConfig::system_order() const
{
    if (!m_orders.empty())
        return m_orders.front();
    return kind.rfind("sweep-", 0) == 0 ? 16 : 4;
}

std::vector<std::uint64_t> ExperimentConfig::channel_seeds() const
{
    return seed_range(seed, channels);
}

nlohmann::json validate_experiment(const ExperimentConfig &config)
{
    const auto v = config.violations();
    return {{"valid", v.empty()}, {"violations", v}};
}

void run_experiment(const ExperimentConfig &config, const std::string &config_echo)
{
    if (auto v = config.violations(); !v.empty())
        throw ConfigError(std::move(v));
    std::error_code ec;
    fs::create_directories(config.out, ec);
    if (ec || !fs::is_directory(config.out))
        throw ConfigError({"out: cannot create directory " + config.out.string() + (ec ? ": " + ec.message() : "")});

    Artifacts art{config.out, {}};
    art.open("config.toml") << config_echo;
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();

    nlohmann::json extra;
    const std::string &k = config.kind;
    if (k == "theory-curves")
        extra = run_theory(config, art);
    else if (k == "ser-interference-free")
        extra = run_ser_interference_free(config, art);
    else if (k == "train")
        extra = run_train(config, art);
    else if (k == "ser-trained")
        extra = run_ser_trained(config, art);
    else if (k == "sweep-depth-width")
        extra = run_sweep_depth_width(config, art);
    else if (k == "sweep-coupling")
        extra = run_sweep_coupling(config, art);
    else if (k == "dump-matrices")
        extra = run_dump_matrices(config, art);
    else if (k == "propagate-taps")
        extra = run_propagate_taps(config, art);

    nlohmann::json manifest;
    manifest["kind"] = config.kind;
    manifest["version"] = PDNN_VERSION;
    manifest["seed"] = config.seed;
    manifest["workers"] = config.workers;
    manifest["started_utc"] = started;
    manifest["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest["config"] = config_echo;
    manifest["artifacts"] = art.files;
    manifest["details"] = extra;
    open_output(config.out / "manifest.json") << manifest.dump(2) << '\n';
}

} // namespace pdnn::cli
