// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "blockamc/mapping.hpp"
#include "blockamc/matgen.hpp"

using namespace blockamc;
using mapping::MapConfig;

TEST_CASE("normalize scales the largest magnitude to one") {
    Matrix a(2, 2);
    a << 2, 0, 0, -4;
    auto [an, s] = mapping::normalize(a);
    REQUIRE(s == 4.0);
    REQUIRE(an(0, 0) == 0.5);
    REQUIRE(an(1, 1) == -1.0);

    auto [id, s1] = mapping::normalize(Matrix::Identity(3, 3));
    REQUIRE(s1 == 1.0);
    REQUIRE(id == Matrix::Identity(3, 3));

    REQUIRE_THROWS_AS(mapping::normalize(Matrix::Zero(2, 2)), RangeError);

    auto rng = make_rng(4);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    Matrix r(8, 8);
    for (Index i = 0; i < 8; ++i)
        for (Index j = 0; j < 8; ++j) r(i, j) = uni(rng);
    auto [rn, rs] = mapping::normalize(r);
    REQUIRE(std::abs(rn.cwiseAbs().maxCoeff() - 1.0) <=
            std::numeric_limits<double>::epsilon());
}

TEST_CASE("signed split") {
    Matrix a(1, 2);
    a << 1, -2;
    auto [plus, minus] = mapping::split_signed(a);
    REQUIRE(plus(0, 0) == 1.0);
    REQUIRE(plus(0, 1) == 0.0);
    REQUIRE(minus(0, 0) == 0.0);
    REQUIRE(minus(0, 1) == 2.0);

    Matrix nn(2, 2);
    nn << 0.5, 0, 1, 0.25;
    auto [p2, m2] = mapping::split_signed(nn);
    REQUIRE(p2 == nn);
    REQUIRE(m2 == Matrix::Zero(2, 2));

    auto rng = make_rng(9);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Matrix r(7, 5);
    for (Index i = 0; i < 7; ++i)
        for (Index j = 0; j < 5; ++j) r(i, j) = uni(rng);
    auto [rp, rm] = mapping::split_signed(r);
    REQUIRE(rp - rm == r);  // exact reconstruction
    REQUIRE(rp.cwiseMin(rm) == Matrix::Zero(7, 5));
}

TEST_CASE("noise-free programming maps identity to exact G0") {
    MapConfig cfg;
    cfg.sigma_rel = 0.0;
    const auto arr = mapping::program(Matrix::Identity(4, 4), cfg, 1);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j) {
            REQUIRE(arr.g_plus(i, j) == (i == j ? 100e-6 : 0.0));
            REQUIRE(arr.g_minus(i, j) == 0.0);
        }
}

TEST_CASE("programming noise is frozen per seed") {
    MapConfig cfg;
    Matrix a(3, 3);
    a << 0.5, -0.25, 0, 0.125, 1, -0.5, 0, 0.75, -1;
    const auto one = mapping::program(a, cfg, 42);
    const auto two = mapping::program(a, cfg, 42);
    REQUIRE(one.g_plus == two.g_plus);
    REQUIRE(one.g_minus == two.g_minus);
    const auto three = mapping::program(a, cfg, 43);
    REQUIRE(one.g_plus != three.g_plus);
}

TEST_CASE("noise magnitude matches the configured std") {
    // 317^2 = 100489 cells of an all-ones matrix: clipping is inactive
    // (P(eps < -g0) ~ 0 at sigma = 0.05 g0), so the empirical std of
    // g_plus - g0 must sit within 2% of 5 uS.
    MapConfig cfg;
    const Index n = 317;
    const auto arr = mapping::program(Matrix::Ones(n, n), cfg, 2024);
    const Matrix dev = arr.g_plus.array() - cfg.g0;
    const double mean = dev.sum() / static_cast<double>(n * n);
    const double var =
        (dev.array() - mean).square().sum() / static_cast<double>(n * n - 1);
    const double std = std::sqrt(var);
    REQUIRE(std == Catch::Approx(5e-6).margin(0.02 * 5e-6));
}

TEST_CASE("independent seeds decorrelate") {
    MapConfig cfg;
    const Index n = 317;
    const auto a = mapping::program(Matrix::Ones(n, n), cfg, 1);
    const auto b = mapping::program(Matrix::Ones(n, n), cfg, 2);
    const double mean_diff =
        (a.g_plus - b.g_plus).sum() / static_cast<double>(n * n);
    REQUIRE(std::abs(mean_diff) < 1e-7);
}

TEST_CASE("no programmed conductance is negative") {
    MapConfig cfg;
    cfg.sigma_rel = 0.5;  // heavy noise on near-zero targets forces clipping
    Matrix a = Matrix::Constant(20, 20, 0.01);
    const auto arr = mapping::program(a, cfg, 7);
    REQUIRE(arr.g_plus.minCoeff() >= 0.0);
    REQUIRE(arr.g_minus.minCoeff() >= 0.0);
    REQUIRE(arr.g_plus.minCoeff() == 0.0);  // clip engaged somewhere
}

TEST_CASE("round-trip recovers the source matrix") {
    MapConfig cfg;
    cfg.sigma_rel = 0.0;
    auto rng = make_rng(12);
    std::uniform_real_distribution<double> uni(-5.0, 5.0);
    Matrix a(6, 5);
    for (Index i = 0; i < 6; ++i)
        for (Index j = 0; j < 5; ++j) a(i, j) = uni(rng);
    const auto arr = mapping::program_matrix(a, cfg, 3);
    const Matrix back = arr.scale * (arr.g_plus - arr.g_minus) / arr.g0;
    REQUIRE((back - a).cwiseAbs().maxCoeff() < 1e-12 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("dynamic range is enforced at programming time") {
    MapConfig cfg;
    Matrix a(2, 2);
    a << 1.5, 0, 0, 1;
    REQUIRE_THROWS_AS(mapping::program(a, cfg, 1), RangeError);
}

TEST_CASE("mid-rise quantizer") {
    // one-bit grid: two levels at +-0.5
    REQUIRE(mapping::quantize(0.7, 1, 1.0) == 0.5);
    REQUIRE(mapping::quantize(-0.2, 1, 1.0) == -0.5);
    // saturation
    REQUIRE(mapping::quantize(5.0, 3, 1.0) == 1.0 - 0.125);
    REQUIRE(mapping::quantize(-5.0, 3, 1.0) == -(1.0 - 0.125));
    // step-size error bound at 8 bits
    auto rng = make_rng(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Vector v(1000);
    for (Index i = 0; i < v.size(); ++i) v(i) = uni(rng);
    const Vector q = mapping::quantize(v, 8, 1.0);
    REQUIRE((q - v).cwiseAbs().maxCoeff() <= 1.0 / 256.0);
    REQUIRE_THROWS_AS(mapping::quantize(0.5, 0, 1.0), ConfigError);
}
