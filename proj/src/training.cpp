// SPDX-License-Identifier: Apache-2.0

#include "pdnn/training.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "pdnn/errors.hpp"

namespace pdnn
{

namespace
{

using Clock = std::chrono::steady_clock;

void require_finite(const ComplexMatrix &v, const char *side, std::size_t layer)
{
    if (!v.allFinite())
        throw NumericError("training", "loss_and_gradients",
                           std::string("non-finite signal after ") + side + " layer " + std::to_string(layer + 1));
}

SinrReport sinr_from_matrix(const ComplexMatrix &c, double noise_power)
{
    SinrReport r;
    const Eigen::Index m = c.cols();
    r.sinr.resize(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j)
    {
        const double desired = std::norm(c(j, j));
        const double interference = c.col(j).squaredNorm() - desired;
        const double sinr = desired / (std::max(interference, 0.0) + noise_power);
        r.sinr[static_cast<std::size_t>(j)] = sinr;
        r.loss -= std::log1p(sinr);
        r.sum_rate += std::log2(1.0 + sinr);
    }
    return r;
}

// Phase-space gradient of a layer Phi = diag(phi) with right operand b and
// back-propagated u = A^H G: 2 Re{ j phi_n conj(K_nn) } = -2 Im{ phi_n conj(K_nn) }.
RealVector phase_gradient(const ComplexVector &phi, const ComplexMatrix &u, const ComplexMatrix &b)
{
    const ComplexVector k = u.cwiseProduct(b.conjugate()).rowwise().sum();
    RealVector g(phi.size());
    for (Eigen::Index n = 0; n < phi.size(); ++n)
        g(n) = -2.0 * (phi(n) * std::conj(k(n))).imag();
    return g;
}

PhaseParams unflatten(const RealVector &flat, const std::vector<std::size_t> &widths, Eigen::Index &offset)
{
    PhaseParams p;
    for (std::size_t w : widths)
    {
        p.layers.push_back(flat.segment(offset, static_cast<Eigen::Index>(w)));
        offset += static_cast<Eigen::Index>(w);
    }
    return p;
}

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

SinrReport sinr_from_effective_channel(const EffectiveChannel &c, const NoiseSpec &noise)
{
    if (c.c.rows() != c.c.cols())
        throw InvalidArgument("sinr_from_effective_channel: C must be square");
    if (!(noise.complex_power() > 0.0))
        throw InvalidArgument("sinr_from_effective_channel: noise power must be positive");
    return sinr_from_matrix(c.c, noise.complex_power());
}

SystemGradient loss_and_gradients(const PdnnNetwork &tx, const ComplexMatrix &h, const PdnnNetwork &rx,
                                  const NoiseSpec &noise, std::size_t m_order)
{
    const auto m = static_cast<Eigen::Index>(m_order);
    if (m_order < 1 || m_order > tx.input_width() || static_cast<std::size_t>(h.cols()) != tx.output_width() ||
        static_cast<std::size_t>(h.rows()) != rx.input_width() || rx.output_width() != m_order)
        throw ConfigError({"loss_and_gradients: shape mismatch along F_R H F_T"});
    const double noise_power = noise.complex_power();

    const std::size_t lt = tx.num_layers();
    const std::size_t lr = rx.num_layers();
    std::vector<ComplexVector> tx_phi(lt), rx_phi(lr);
    std::vector<ComplexMatrix> tx_right(lt), rx_right(lr);

    // Forward: V starts as the M one-hot symbols.
    ComplexMatrix v = ComplexMatrix::Identity(static_cast<Eigen::Index>(tx.input_width()), m);
    for (std::size_t l = 0; l < lt; ++l)
    {
        tx_right[l] = tx.fixed(l) * v;
        tx_phi[l] = tx.phase_factors(l);
        v = tx_phi[l].asDiagonal() * tx_right[l];
        require_finite(v, "tx", l);
    }
    v = h * v;
    for (std::size_t l = 0; l < lr; ++l)
    {
        rx_right[l] = v;
        rx_phi[l] = rx.phase_factors(l);
        v = rx.fixed(l) * (rx_phi[l].asDiagonal() * v);
        require_finite(v, "rx", l);
    }
    const ComplexMatrix &c = v;

    SystemGradient out;
    out.report = sinr_from_matrix(c, noise_power);
    if (!std::isfinite(out.report.loss))
        throw NumericError("training", "loss_and_gradients", "non-finite loss");

    // G = dJ/d conj(C), J = sum_m [ln(I_m + N) - ln(I_m + |c_mm|^2 + N)].
    ComplexMatrix u(m, m);
    for (Eigen::Index j = 0; j < m; ++j)
    {
        const double desired = std::norm(c(j, j));
        const double interference = std::max(c.col(j).squaredNorm() - desired, 0.0);
        const double d = interference + noise_power;
        const double s = d + desired;
        const double off = 1.0 / d - 1.0 / s;
        for (Eigen::Index i = 0; i < m; ++i)
            u(i, j) = (i == j) ? -c(i, j) / s : c(i, j) * off;
    }

    // Backward through the RX chain (last layer first), then H, then TX.
    out.rx.layers.resize(lr);
    for (std::size_t l = lr; l-- > 0;)
    {
        u = rx.fixed(l).adjoint() * u;
        out.rx.layers[l] = phase_gradient(rx_phi[l], u, rx_right[l]);
        u = rx_phi[l].conjugate().asDiagonal() * u;
    }
    u = h.adjoint() * u;
    out.tx.layers.resize(lt);
    for (std::size_t l = lt; l-- > 0;)
    {
        out.tx.layers[l] = phase_gradient(tx_phi[l], u, tx_right[l]);
        u = tx.fixed(l).adjoint() * (tx_phi[l].conjugate().asDiagonal() * u);
    }
    return out;
}

SystemGradient loss_and_gradients(const SystemState &state)
{
    return loss_and_gradients(state.tx, state.channel.h, state.rx, state.noise, state.modulation_order);
}

SinrReport evaluate_sum_rate(const SystemState &state)
{
    return sinr_from_effective_channel(effective_channel(state), state.noise);
}

RealVector flatten_phases(const PhaseParams &tx, const PhaseParams &rx)
{
    RealVector flat(static_cast<Eigen::Index>(tx.total_count() + rx.total_count()));
    Eigen::Index offset = 0;
    for (const auto *p : {&tx, &rx})
        for (const auto &layer : p->layers)
        {
            flat.segment(offset, layer.size()) = layer;
            offset += layer.size();
        }
    return flat;
}

void install_phases(SystemState &state, const RealVector &flat)
{
    Eigen::Index offset = 0;
    PhaseParams tx = unflatten(flat, state.tx.phases().widths(), offset);
    PhaseParams rx = unflatten(flat, state.rx.phases().widths(), offset);
    if (offset != flat.size())
        throw InvalidArgument("install_phases: parameter vector has the wrong length");
    state.tx.set_phases(std::move(tx));
    state.rx.set_phases(std::move(rx));
}

const char *to_string(OptimizerKind kind) noexcept
{
    switch (kind)
    {
    case OptimizerKind::adam:
        return "adam";
    case OptimizerKind::pga_armijo:
        return "pga_armijo";
    case OptimizerKind::random:
        return "random";
    }
    return "unknown";
}

OptimizerKind optimizer_from_string(const std::string &name)
{
    if (name == "adam")
        return OptimizerKind::adam;
    if (name == "pga_armijo" || name == "pga")
        return OptimizerKind::pga_armijo;
    if (name == "random")
        return OptimizerKind::random;
    throw InvalidArgument("unknown optimizer '" + name + "' (expected adam, pga_armijo or random)");
}

std::vector<std::string> TrainConfig::violations() const
{
    std::vector<std::string> out;
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
        out.push_back("learning rate must be finite and >= 0");
    if (epochs < 1)
        out.push_back("epochs must be >= 1");
    if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0))
        out.push_back("adam moment decay rates must lie in [0, 1)");
    if (!(adam.epsilon > 0.0))
        out.push_back("adam epsilon must be positive");
    if (!(armijo.initial_step > 0.0))
        out.push_back("armijo initial step must be positive");
    if (!(armijo.shrink > 0.0 && armijo.shrink < 1.0))
        out.push_back("armijo shrink factor must lie in (0, 1)");
    if (!(armijo.slope > 0.0 && armijo.slope < 1.0))
        out.push_back("armijo slope constant must lie in (0, 1)");
    return out;
}

AdamOptimizer::AdamOptimizer(std::size_t size, double learning_rate, AdamParams params)
    : lr_(learning_rate), p_(params), m_(RealVector::Zero(static_cast<Eigen::Index>(size))),
      v_(RealVector::Zero(static_cast<Eigen::Index>(size)))
{
}

void AdamOptimizer::step(RealVector &x, const RealVector &grad)
{
    ++t_;
    m_ = p_.beta1 * m_ + (1.0 - p_.beta1) * grad;
    v_ = p_.beta2 * v_ + (1.0 - p_.beta2) * grad.cwiseAbs2();
    const double bc1 = 1.0 - std::pow(p_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(p_.beta2, static_cast<double>(t_));
    x.array() -= lr_ * (m_.array() / bc1) / ((v_.array() / bc2).sqrt() + p_.epsilon);
}

std::vector<ArmijoStep> armijo_ascent(RealVector &x, const ValueAndGradient &value_and_grad, const ValueOnly &value,
                                      const ArmijoParams &params, std::size_t iterations, std::vector<double> *trace)
{
    std::vector<ArmijoStep> log;
    double current = 0.0;
    for (std::size_t it = 0; it < iterations; ++it)
    {
        auto [f0, g] = value_and_grad(x);
        current = f0;
        if (trace)
            trace->push_back(f0);
        ArmijoStep step;
        step.value_before = f0;
        step.value_after = f0;
        step.grad_norm2 = g.squaredNorm();
        double t = params.initial_step;
        for (std::size_t bt = 0; bt <= params.max_backtracks; ++bt)
        {
            const RealVector candidate = x + t * g;
            const double f1 = value(candidate);
            if (std::isfinite(f1) && f1 >= f0 + params.slope * t * step.grad_norm2)
            {
                x = candidate;
                step.step = t;
                step.backtracks = bt;
                step.accepted = true;
                step.value_after = f1;
                current = f1;
                break;
            }
            t *= params.shrink;
        }
        if (!step.accepted)
            step.backtracks = params.max_backtracks;
        log.push_back(step);
    }
    if (trace)
        trace->push_back(iterations > 0 ? current : value(x));
    return log;
}

nlohmann::json TrainRecord::to_json() const
{
    nlohmann::json j;
    j["optimizer"] = to_string(kind);
    j["sum_rate"] = sum_rate;
    j["loss"] = loss;
    j["epoch_seconds"] = epoch_seconds;
    j["final_phases"] = {{"tx", tx_phases.to_json()}, {"rx", rx_phases.to_json()}};
    if (!armijo_log.empty())
    {
        nlohmann::json steps = nlohmann::json::array();
        for (const auto &s : armijo_log)
            steps.push_back({{"step", s.step},
                             {"backtracks", s.backtracks},
                             {"accepted", s.accepted},
                             {"value_before", s.value_before},
                             {"value_after", s.value_after}});
        j["armijo"] = steps;
    }
    return j;
}

TrainRecord train_adam(SystemState &state, const TrainConfig &config)
{
    if (auto v = config.violations(); !v.empty())
        throw ConfigError(std::move(v));
    TrainRecord rec;
    rec.kind = OptimizerKind::adam;
    RealVector beta = flatten_phases(state.tx.phases(), state.rx.phases());
    AdamOptimizer adam(static_cast<std::size_t>(beta.size()), config.learning_rate, config.adam);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch)
    {
        const auto t0 = Clock::now();
        const SystemGradient g = loss_and_gradients(state);
        rec.sum_rate.push_back(g.report.sum_rate);
        rec.loss.push_back(g.report.loss);
        adam.step(beta, flatten_phases(g.tx, g.rx));
        install_phases(state, beta);
        rec.epoch_seconds.push_back(seconds_since(t0));
    }
    const SinrReport final_report = evaluate_sum_rate(state);
    rec.sum_rate.push_back(final_report.sum_rate);
    rec.loss.push_back(final_report.loss);
    rec.tx_phases = state.tx.phases();
    rec.rx_phases = state.rx.phases();
    return rec;
}

TrainRecord train_pga_armijo(SystemState &state, const TrainConfig &config)
{
    if (auto v = config.violations(); !v.empty())
        throw ConfigError(std::move(v));
    TrainRecord rec;
    rec.kind = OptimizerKind::pga_armijo;
    const double inv_ln2 = 1.0 / std::numbers::ln2;

    // Ascent on R = -J / ln 2.
    auto value_and_grad = [&](const RealVector &x) {
        install_phases(state, x);
        const SystemGradient g = loss_and_gradients(state);
        return std::pair<double, RealVector>{g.report.sum_rate, -inv_ln2 * flatten_phases(g.tx, g.rx)};
    };
    auto value = [&](const RealVector &x) {
        install_phases(state, x);
        return evaluate_sum_rate(state).sum_rate;
    };

    RealVector beta = flatten_phases(state.tx.phases(), state.rx.phases());
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch)
    {
        const auto t0 = Clock::now();
        std::vector<double> trace;
        auto steps = armijo_ascent(beta, value_and_grad, value, config.armijo, 1, &trace);
        rec.sum_rate.push_back(trace.front());
        rec.armijo_log.push_back(steps.front());
        rec.epoch_seconds.push_back(seconds_since(t0));
    }
    install_phases(state, beta);
    const SinrReport final_report = evaluate_sum_rate(state);
    rec.sum_rate.push_back(final_report.sum_rate);
    for (double r : rec.sum_rate)
        rec.loss.push_back(-r * std::numbers::ln2);
    rec.tx_phases = state.tx.phases();
    rec.rx_phases = state.rx.phases();
    return rec;
}

TrainRecord random_phase_baseline(SystemState &state, std::uint64_t seed)
{
    const auto t0 = Clock::now();
    TrainRecord rec;
    rec.kind = OptimizerKind::random;
    state.tx.set_phases(random_phases(state.tx.phases().widths(), seed, Side::tx, StreamDomain::baseline));
    state.rx.set_phases(random_phases(state.rx.phases().widths(), seed, Side::rx, StreamDomain::baseline));
    const SinrReport report = evaluate_sum_rate(state);
    rec.sum_rate.push_back(report.sum_rate);
    rec.loss.push_back(report.loss);
    rec.epoch_seconds.push_back(seconds_since(t0));
    rec.tx_phases = state.tx.phases();
    rec.rx_phases = state.rx.phases();
    return rec;
}

TrainRecord train(SystemState &state, const TrainConfig &config)
{
    switch (config.kind)
    {
    case OptimizerKind::adam:
        return train_adam(state, config);
    case OptimizerKind::pga_armijo:
        return train_pga_armijo(state, config);
    case OptimizerKind::random:
        return random_phase_baseline(state, config.seed);
    }
    throw InvalidArgument("train: unknown optimizer");
}

double max_interference_ratio(const ComplexMatrix &c)
{
    double worst = 0.0;
    for (Eigen::Index j = 0; j < c.cols(); ++j)
    {
        const double desired = std::norm(c(j, j));
        for (Eigen::Index i = 0; i < c.rows(); ++i)
            if (i != j)
                worst = std::max(worst, std::norm(c(i, j)) / desired);
    }
    return worst;
}

} // namespace pdnn
