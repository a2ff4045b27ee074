// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "doctest.h"

#include "pdnn/channel.hpp"
#include "pdnn/errors.hpp"
#include "pdnn/network.hpp"

using namespace pdnn;
using std::numbers::pi;

TEST_CASE("phase widths follow the side-specific ordering")
{
    const auto tx = PdnnConfig::coupler_chain(Side::tx, {4, 8, 6}, 2, pi / 4);
    const auto rx = PdnnConfig::coupler_chain(Side::rx, {6, 8, 4}, 2, pi / 4);
    CHECK(phase_widths(tx) == std::vector<std::size_t>{8, 6});
    CHECK(phase_widths(rx) == std::vector<std::size_t>{6, 8});
}

TEST_CASE("transfer matrix equals the explicit product of layers")
{
    PdnnConfig cfg = PdnnConfig::coupler_chain(Side::tx, {4, 8, 8}, 3, pi / 4);
    PdnnNetwork net(cfg, random_phases(phase_widths(cfg), 5, Side::tx));
    ComplexMatrix expected = ComplexMatrix::Identity(4, 4);
    for (std::size_t l = 0; l < 2; ++l)
        expected = net.phase_factors(l).asDiagonal() * (net.fixed(l) * expected);
    CHECK((net.transfer_matrix() - expected).cwiseAbs().maxCoeff() < 1e-13);

    PdnnConfig rcfg = PdnnConfig::coupler_chain(Side::rx, {8, 8, 4}, 3, pi / 4);
    PdnnNetwork rnet(rcfg, random_phases(phase_widths(rcfg), 5, Side::rx));
    ComplexMatrix rexp = ComplexMatrix::Identity(8, 8);
    for (std::size_t l = 0; l < 2; ++l)
        rexp = rnet.fixed(l) * (rnet.phase_factors(l).asDiagonal() * rexp);
    CHECK((rnet.transfer_matrix() - rexp).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("taps end at the transfer-matrix output")
{
    PdnnConfig cfg = PdnnConfig::coupler_chain(Side::tx, {4, 8, 8, 8}, 2, pi / 4);
    PdnnNetwork net(cfg, random_phases(phase_widths(cfg), 11, Side::tx));
    const auto taps = net.forward_with_taps(one_hot(2, 4));
    REQUIRE(taps.size() == 4);
    CHECK((taps.back() - net.transfer_matrix().col(2)).cwiseAbs().maxCoeff() < 1e-13);
    // Square unitary layers after the first keep the norm.
    CHECK(std::abs(taps[3].norm() - taps[1].norm()) < 1e-12);
    CHECK_THROWS_AS(net.forward_with_taps(one_hot(0, 5)), InvalidArgument);
}

TEST_CASE("zero phases on identity couplings give the selection matrix")
{
    PdnnNetwork net(PdnnConfig::identity_chain(Side::tx, {4, 6}));
    const ComplexMatrix f = net.transfer_matrix();
    CHECK((f - ComplexMatrix::Identity(6, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("phase-only changes keep unitary networks unitary")
{
    PdnnConfig cfg = PdnnConfig::coupler_chain(Side::rx, {8, 8, 8}, 3, pi / 4);
    PdnnNetwork net(cfg, random_phases(phase_widths(cfg), 3, Side::rx));
    CHECK(unitarity_error(net.transfer_matrix()) < 1e-12);
}

TEST_CASE("configuration violations name the offending layer")
{
    PdnnConfig cfg;
    cfg.side = Side::tx;
    cfg.port_counts = {4, 8, 8};
    cfg.coupling = {CouplerSpec{4, 8, 1, 0.0}, CouplerSpec{6, 8, 1, 0.0}};
    const auto v = cfg.violations();
    REQUIRE(v.size() == 1);
    CHECK(v.front().find("layer 2") != std::string::npos);
    CHECK(v.front().find("n_in=6") != std::string::npos);
    CHECK_THROWS_AS(PdnnNetwork{cfg}, ConfigError);

    PdnnConfig empty;
    CHECK_FALSE(empty.violations().empty());
}

TEST_CASE("set_phases rejects bad shapes and non-finite values")
{
    PdnnConfig cfg = PdnnConfig::coupler_chain(Side::tx, {4, 8}, 1, 0.0);
    PdnnNetwork net(cfg);
    CHECK_THROWS_AS(net.set_phases(PhaseParams::zeros({7})), InvalidArgument);
    PhaseParams p = PhaseParams::zeros({8});
    p.layers[0](3) = std::nan("");
    CHECK_THROWS_AS(net.set_phases(p), InvalidArgument);
}

TEST_CASE("phase checkpoints round-trip through JSON")
{
    const PhaseParams p = random_phases({4, 8, 3}, 17, Side::tx);
    const nlohmann::json j = p.to_json();
    CHECK(j.at("unit") == "rad");
    const PhaseParams q = PhaseParams::from_json(nlohmann::json::parse(j.dump()));
    REQUIRE(q.layers.size() == 3);
    for (std::size_t l = 0; l < 3; ++l)
        CHECK((q.layers[l] - p.layers[l]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("explicit and diffraction couplings plug into a network")
{
    ComplexMatrix w = ComplexMatrix::Zero(3, 2);
    w(0, 1) = 1.0;
    w(2, 0) = kJ;
    PdnnConfig cfg;
    cfg.side = Side::tx;
    cfg.port_counts = {2, 3};
    cfg.coupling = {ExplicitCoupling{w}};
    PdnnNetwork net(cfg);
    CHECK((net.transfer_matrix() - w).cwiseAbs().maxCoeff() == 0.0);

    const auto d = PdnnConfig::diffraction_chain(Side::rx, {8, 8, 4}, 28e9, 2.0, 0.5);
    PdnnNetwork dn(d);
    CHECK(dn.transfer_matrix().rows() == 4);
    CHECK(dn.transfer_matrix().cols() == 8);
}
