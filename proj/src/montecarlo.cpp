// SPDX-License-Identifier: Apache-2.0

#include "pdnn/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "pdnn/analysis.hpp"
#include "pdnn/detection.hpp"
#include "pdnn/errors.hpp"

namespace pdnn
{

namespace
{

constexpr std::uint64_t kBlockTrials = 1024;
constexpr std::size_t kBlocksPerWave = 32;

std::size_t resolve_workers(std::size_t workers)
{
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    return workers;
}

// Counts errors for trials [first, last) of one SNR point.
using TrialBlock = std::function<std::uint64_t(std::uint64_t first, std::uint64_t last)>;

std::pair<std::uint64_t, std::uint64_t> run_point(const TrialBlock &block, const MonteCarloOptions &options)
{
    const std::uint64_t n_blocks = (options.trials + kBlockTrials - 1) / kBlockTrials;
    std::uint64_t errors = 0;
    std::uint64_t trials = 0;
    // Waves have a fixed size so early stopping is independent of the worker count.
    for (std::uint64_t wave = 0; wave < n_blocks; wave += kBlocksPerWave)
    {
        const std::uint64_t wave_end = std::min<std::uint64_t>(n_blocks, wave + kBlocksPerWave);
        std::vector<std::uint64_t> counts(wave_end - wave, 0);
        parallel_for(counts.size(), options.workers, [&](std::size_t i) {
            const std::uint64_t first = (wave + i) * kBlockTrials;
            counts[i] = block(first, std::min(options.trials, first + kBlockTrials));
        });
        errors += std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
        trials = std::min(options.trials, wave_end * kBlockTrials);
        if (options.stop_after_errors > 0 && errors >= options.stop_after_errors)
            break;
    }
    return {errors, trials};
}

SerPoint finish_point(SerPoint p, std::uint64_t errors, std::uint64_t trials)
{
    p.errors = errors;
    p.trials = trials;
    p.ser = static_cast<double>(errors) / static_cast<double>(trials);
    p.ci = wilson_interval(errors, trials);
    return p;
}

double mean(const std::vector<double> &v)
{
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string interconnect_name(const InterconnectSpec &spec)
{
    switch (spec.kind)
    {
    case Interconnect::coupler:
        return "coupler";
    case Interconnect::diffraction:
        return "diffraction";
    case Interconnect::identity:
        return "identity";
    }
    return "unknown";
}

} // namespace

WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t trials, double z)
{
    if (trials == 0)
        throw InvalidArgument("wilson_interval: trials must be positive");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    const double low = errors == 0 ? 0.0 : std::max(0.0, center - half);
    const double high = errors == trials ? 1.0 : std::min(1.0, center + half);
    return {low, high};
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)> &body)
{
    workers = std::min(resolve_workers(workers), count);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
        {
            try
            {
                body(i);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(count);
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(worker);
    worker();
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
}

const char *to_string(Detector d) noexcept
{
    return d == Detector::ml ? "ml" : "noncoherent";
}

SerCurve ser_interference_free(std::size_t m_order, const std::vector<double> &gamma_grid,
                               const MonteCarloOptions &options, Detector detector)
{
    if (!is_power_of_two(m_order) || m_order < 2)
        throw InvalidArgument("ser_interference_free: modulation order must be a power of two >= 2");
    if (options.trials == 0)
        throw InvalidArgument("ser_interference_free: trials must be positive");
    SerCurve curve;
    curve.m_order = m_order;
    curve.label = std::string("interference_free_") + to_string(detector);
    const NoiseSpec noise{};
    const auto m = static_cast<Eigen::Index>(m_order);

    for (std::size_t point = 0; point < gamma_grid.size(); ++point)
    {
        const double gamma = gamma_grid[point];
        if (!(gamma >= 0.0))
            throw InvalidArgument("ser_interference_free: gamma must be >= 0");
        const EffectiveChannel c{std::sqrt(noise.complex_power() * gamma) * ComplexMatrix::Identity(m, m)};

        auto block = [&](std::uint64_t first, std::uint64_t last) {
            std::uint64_t errors = 0;
            for (std::uint64_t t = first; t < last; ++t)
            {
                RandomStream rng(StreamKey{options.seed, StreamDomain::noise, {point, t, 0}});
                const auto sym = static_cast<std::size_t>(rng.below(m_order));
                std::size_t decided = 0;
                if (detector == Detector::noncoherent)
                {
                    const RealVector y = transmit(c, noise, sym, rng);
                    decided = detect_noncoherent({y.data(), static_cast<std::size_t>(y.size())}).m_hat;
                }
                else
                {
                    const ComplexVector col = c.c.col(static_cast<Eigen::Index>(sym));
                    decided = detect_ml({col.data(), static_cast<std::size_t>(col.size())}, noise, rng).m_hat;
                }
                errors += decided != sym;
            }
            return errors;
        };
        auto [errors, trials] = run_point(block, options);

        SerPoint p;
        p.gamma = gamma;
        p.ebn0_db = ebn0_from_gamma(gamma, m_order);
        p.sigma2 = noise.sigma2;
        p.ser_theory = ser_exact(gamma, m_order);
        p.inr_db = -std::numeric_limits<double>::infinity();
        curve.points.push_back(finish_point(p, errors, trials));
    }
    return curve;
}

SerCurve ser_trained_system(const SystemState &state, const std::vector<double> &ebn0_grid,
                            const MonteCarloOptions &options, std::string label)
{
    if (options.trials == 0)
        throw InvalidArgument("ser_trained_system: trials must be positive");
    const std::size_t m_order = state.modulation_order;
    const EffectiveChannel c = effective_channel(state);
    const auto m = static_cast<Eigen::Index>(m_order);

    SerCurve curve;
    curve.m_order = m_order;
    curve.label = std::move(label);
    double worst_interference = 0.0;
    for (Eigen::Index j = 0; j < m; ++j)
    {
        const double desired = std::norm(c.c(j, j));
        curve.gamma_per_symbol_unit_noise.push_back(desired);
        worst_interference = std::max(worst_interference, c.c.col(j).squaredNorm() - desired);
    }
    const double mean_desired = mean(curve.gamma_per_symbol_unit_noise);
    if (!(mean_desired > 0.0))
        throw NumericError("montecarlo", "ser_trained_system", "effective channel has a zero diagonal");

    for (std::size_t point = 0; point < ebn0_grid.size(); ++point)
    {
        const double gamma = gamma_from_ebn0(ebn0_grid[point], m_order);
        const NoiseSpec noise{mean_desired / (2.0 * gamma)};

        auto block = [&](std::uint64_t first, std::uint64_t last) {
            std::uint64_t errors = 0;
            for (std::uint64_t t = first; t < last; ++t)
            {
                RandomStream rng(StreamKey{options.seed, StreamDomain::noise, {point, t, 0}});
                const auto sym = static_cast<std::size_t>(rng.below(m_order));
                const RealVector y = transmit(c, noise, sym, rng);
                errors += detect_noncoherent({y.data(), static_cast<std::size_t>(y.size())}).m_hat != sym;
            }
            return errors;
        };
        auto [errors, trials] = run_point(block, options);

        SerPoint p;
        p.ebn0_db = ebn0_grid[point];
        p.gamma = gamma;
        p.sigma2 = noise.sigma2;
        double theory = 0.0;
        for (double d : curve.gamma_per_symbol_unit_noise)
            theory += ser_exact(d / noise.complex_power(), m_order);
        p.ser_theory = theory / static_cast<double>(m_order);
        p.inr_db = 10.0 * std::log10(worst_interference / noise.complex_power());
        curve.points.push_back(finish_point(p, errors, trials));
    }
    return curve;
}

void write_ser_csv(std::ostream &os, const std::vector<SerCurve> &curves)
{
    os.precision(17);
    os << "label,m,ebn0_db,gamma,sigma2,trials,errors,ser,ci_low,ci_high,ser_theory,inr_db\n";
    for (const auto &curve : curves)
        for (const auto &p : curve.points)
            os << curve.label << ',' << curve.m_order << ',' << p.ebn0_db << ',' << p.gamma << ',' << p.sigma2 << ','
               << p.trials << ',' << p.errors << ',' << p.ser << ',' << p.ci.low << ',' << p.ci.high << ','
               << p.ser_theory << ',' << p.inr_db << '\n';
}

nlohmann::json SweepResult::to_json() const
{
    return {{"family", config.family},
            {"interconnect", interconnect_name(config.interconnect)},
            {"tx_layers", config.tx_layers},
            {"rx_layers", config.rx_layers},
            {"cascade_count", config.interconnect.cascade_count},
            {"n", width},
            {"mean_sum_rate", mean_sum_rate},
            {"std_sum_rate", std_sum_rate},
            {"seeds", seeds},
            {"sum_rates", sum_rates}};
}

std::vector<SweepResult> run_sweep(const std::vector<SweepCase> &cases, const SweepOptions &options)
{
    if (auto v = options.train.violations(); !v.empty())
        throw ConfigError(std::move(v));
    const std::size_t n_seeds = options.channel_seeds.size();
    const std::size_t n_widths = options.n_grid.size();
    if (n_seeds == 0 || n_widths == 0)
        throw InvalidArgument("run_sweep: need at least one width and one channel seed");

    std::vector<SweepResult> results;
    for (const auto &c : cases)
        for (std::size_t n : options.n_grid)
        {
            SweepResult r;
            r.config = c;
            r.width = n;
            r.seeds = options.channel_seeds;
            r.sum_rates.assign(n_seeds, 0.0);
            results.push_back(std::move(r));
        }

    parallel_for(results.size() * n_seeds, options.workers, [&](std::size_t item) {
        SweepResult &r = results[item / n_seeds];
        const std::size_t s = item % n_seeds;
        SystemSpec spec;
        spec.modulation_order = options.m_order;
        spec.width = r.width;
        spec.tx_layers = r.config.tx_layers;
        spec.rx_layers = r.config.rx_layers;
        spec.interconnect = r.config.interconnect;
        spec.noise = options.noise;
        spec.channel_seed = options.channel_seeds[s];
        spec.init_seed = options.channel_seeds[s];
        SystemState state = assemble_system(spec);
        TrainConfig tc = options.train;
        tc.seed = options.channel_seeds[s];
        r.sum_rates[s] = train(state, tc).final_sum_rate();
    });

    for (auto &r : results)
    {
        r.mean_sum_rate = mean(r.sum_rates);
        double ss = 0.0;
        for (double x : r.sum_rates)
            ss += (x - r.mean_sum_rate) * (x - r.mean_sum_rate);
        r.std_sum_rate = std::sqrt(ss / static_cast<double>(r.sum_rates.size()));
    }
    return results;
}

std::vector<SweepResult> sweep_depth_width(const std::vector<std::pair<std::size_t, std::size_t>> &layer_configs,
                                           const InterconnectSpec &interconnect, const SweepOptions &options)
{
    std::vector<SweepCase> cases;
    for (auto [lt, lr] : layer_configs)
        cases.push_back({"L" + std::to_string(lt) + "x" + std::to_string(lr), lt, lr, interconnect});
    return run_sweep(cases, options);
}

std::vector<SweepResult> sweep_coupling(const std::vector<std::size_t> &mc_values, const InterconnectSpec &diffraction,
                                        bool include_diffraction, const SweepOptions &options)
{
    std::vector<SweepCase> cases;
    for (std::size_t depth : {1u, 2u})
    {
        const std::string layers = std::to_string(2 * depth) + "layer";
        for (std::size_t mc : mc_values)
        {
            InterconnectSpec spec;
            spec.kind = Interconnect::coupler;
            spec.cascade_count = mc;
            cases.push_back({"coupler_mc" + std::to_string(mc) + "_" + layers, depth, depth, spec});
        }
        if (include_diffraction)
        {
            InterconnectSpec spec = diffraction;
            spec.kind = Interconnect::diffraction;
            cases.push_back({"diffraction_" + layers, depth, depth, spec});
        }
    }
    InterconnectSpec analog;
    analog.kind = Interconnect::identity;
    cases.push_back({"analog_baseline", 1, 1, analog});
    return run_sweep(cases, options);
}

void write_sweep_csv(std::ostream &os, const std::vector<SweepResult> &results)
{
    os.precision(17);
    os << "family,interconnect,tx_layers,rx_layers,cascade_count,n,seeds,mean_sum_rate,std_sum_rate\n";
    for (const auto &r : results)
        os << r.config.family << ',' << interconnect_name(r.config.interconnect) << ',' << r.config.tx_layers << ','
           << r.config.rx_layers << ',' << r.config.interconnect.cascade_count << ',' << r.width << ','
           << r.seeds.size() << ',' << r.mean_sum_rate << ',' << r.std_sum_rate << '\n';
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count)
{
    std::vector<std::uint64_t> seeds(count);
    std::iota(seeds.begin(), seeds.end(), first);
    return seeds;
}

} // namespace pdnn
