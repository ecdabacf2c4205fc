#include <doctest.h>

#include <cmath>
#include <random>

#include "radsol/potential.hpp"
#include "support.hpp"

using namespace radsol;
using radsol::testing::coupled_pair;
using radsol::testing::free_spec;
using radsol::testing::quartic_quintic;

TEST_CASE("F of the quartic-quintic spec")
{
    const PotentialSpec spec = quartic_quintic();
    CHECK(std::abs(eval_F(spec, std::vector<double>{1.0})) <= 1e-15);
    CHECK(std::abs(eval_F(spec, std::vector<double>{-1.0})) <= 1e-15);
    CHECK(eval_F(spec, std::vector<double>{2.0}) == doctest::Approx(10.0));
    CHECK(eval_F(spec, std::vector<double>{0.0}) == 0.0);
    // factorization t^2 (|t| - 1)^2 (|t| + 1/2)
    for (double t : {-2.5, -0.3, 0.7, 1.9}) {
        const double a = std::abs(t);
        CHECK(eval_F(spec, std::vector<double>{t}) == doctest::Approx(t * t * (a - 1) * (a - 1) * (a + 0.5)));
    }
}

TEST_CASE("gradient of R at simple points")
{
    const PotentialSpec spec = quartic_quintic();
    CHECK(eval_gradR(spec, std::vector<double>{1.0})[0] == doctest::Approx(-1.0));
    CHECK(eval_gradR(spec, std::vector<double>{-1.0})[0] == doctest::Approx(1.0));
    CHECK(eval_gradR(spec, std::vector<double>{0.0})[0] == 0.0);
    const PotentialSpec pair = coupled_pair();
    const auto g = eval_gradR(pair, std::vector<double>{0.0, 0.0});
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
}

TEST_CASE("spec validation")
{
    CHECK_THROWS_AS(PotentialSpec({0.0}, {}), std::invalid_argument);
    CHECK_THROWS_AS(PotentialSpec({-1.0}, {}), std::invalid_argument);
    CHECK_THROWS_AS(PotentialSpec({1.0}, {{1.0, {0.5}}}), std::invalid_argument);
    CHECK_THROWS_AS(PotentialSpec({1.0}, {{1.0, {4.0, 1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(PotentialSpec({1.0}, {{1.0, {0.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(PotentialSpec({}, {}), std::invalid_argument);
    CHECK_NOTHROW(PotentialSpec({1.0, 2.0}, {{1.0, {1.0, 2.5}}}));
}

TEST_CASE("gradient of R matches central differences")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> magnitude(0.1, 3.0);
    std::bernoulli_distribution negative(0.5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + trial % 3;
        const PotentialSpec spec = radsol::testing::random_spec(rng, k);
        std::vector<double> u(k);
        for (double& x : u) {
            x = magnitude(rng) * (negative(rng) ? -1.0 : 1.0);
        }
        const auto g = eval_gradR(spec, u);
        for (std::size_t i = 0; i < k; ++i) {
            const double h = 1e-3 * std::abs(u[i]);
            auto at = [&](double shift) {
                std::vector<double> x = u;
                x[i] += shift;
                return spec.R(x);
            };
            // fourth-order central stencil
            const double fd = (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
            const double scale = std::max(std::abs(g[i]), 1e-3);
            CHECK(std::abs(fd - g[i]) / scale <= 1e-8);
        }
    }
}

TEST_CASE("H2 growth bound holds at random points")
{
    std::mt19937_64 rng(13);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> radius(-4.0, 2.0);
    auto check_bound = [&](const PotentialSpec& spec) {
        const H2Result h2 = check_H2(spec, 3);
        const std::size_t k = spec.components();
        int violations = 0;
        for (int trial = 0; trial < 10000; ++trial) {
            std::vector<double> u(k);
            double norm = 0.0;
            for (double& x : u) {
                x = normal(rng);
                norm += x * x;
            }
            const double scale = std::pow(10.0, radius(rng)) / std::sqrt(norm);
            for (double& x : u) {
                x *= scale;
            }
            norm = std::sqrt(norm) * scale;
            const auto g = eval_gradR(spec, u);
            double gnorm = 0.0;
            for (double x : g) {
                gnorm += x * x;
            }
            gnorm = std::sqrt(gnorm);
            const double bound = h2.growth.c_p_minus_1 * std::pow(norm, h2.growth.p - 1) +
                                 h2.growth.c_q_minus_1 * std::pow(norm, h2.growth.q - 1);
            if (gnorm > bound * (1.0 + 1e-12)) {
                ++violations;
            }
        }
        CHECK(violations == 0);
    };
    check_bound(quartic_quintic());
    check_bound(coupled_pair());
    for (int s = 0; s < 5; ++s) {
        check_bound(radsol::testing::random_spec(rng, 1 + s % 3));
    }
}

TEST_CASE("H2 constants of the quartic-quintic spec")
{
    const H2Result h2 = check_H2(quartic_quintic(), 3);
    CHECK(h2.report.pass);
    CHECK(h2.growth.p == 4.0);
    CHECK(h2.growth.q == 5.0);
    CHECK(h2.growth.c_p_minus_1 == doctest::Approx(6.0));
    CHECK(h2.growth.c_q_minus_1 == doctest::Approx(5.0));
    CHECK(h2.report.margin == doctest::Approx(1.0));
}

TEST_CASE("H2 rejects the critical exponent and passes R = 0 vacuously")
{
    const PotentialSpec critical({1.0}, {{-1.0, {4.0}}, {1.0, {6.0}}});
    const H2Result h2 = check_H2(critical, 3);
    CHECK_FALSE(h2.report.pass);
    CHECK(h2.growth.q == 6.0);
    CHECK(critical_exponent(3) == 6.0);
    CHECK(check_H2(critical, 4).report.pass == false);

    const H2Result free = check_H2(free_spec(2), 3);
    CHECK(free.report.pass);
    CHECK(free.growth.vacuous);

    const PotentialSpec quadratic({1.0}, {{1.0, {2.0}}});
    CHECK_FALSE(check_H2(quadratic, 3).report.pass);
}

TEST_CASE("H1 sampling")
{
    const ConditionReport good = check_H1(quartic_quintic(), 3.0, 61);
    CHECK(good.pass);
    CHECK(std::abs(good.margin) <= 1e-14);
    CHECK_FALSE(good.notes.empty());

    const PotentialSpec quartic({1.0}, {{-1.0, {4.0}}});
    const ConditionReport bad = check_H1(quartic, 3.0, 61);
    CHECK_FALSE(bad.pass);
    CHECK(bad.margin < 0.0);
    CHECK_FALSE(bad.witness.empty());

    const ConditionReport free = check_H1(free_spec(2), 2.0, 21);
    CHECK(free.pass);
    CHECK(free.margin == 0.0);

    // F(1, 1) = -0.05 for the coupled pair
    const ConditionReport pair = check_H1(coupled_pair(), 3.0, 61);
    CHECK_FALSE(pair.pass);
    CHECK(pair.margin <= -0.05 + 1e-12);

    CHECK(check_H1(coupled_pair(0.0), 3.0, 61).pass);
}

TEST_CASE("H1 guards the sample count")
{
    CHECK_THROWS_AS(check_H1(free_spec(6), 1.0, 1000), std::invalid_argument);
    CHECK_THROWS_AS(check_H1(free_spec(1), 0.0, 10), std::invalid_argument);
}

TEST_CASE("H3 at explicit points")
{
    const PotentialSpec spec = quartic_quintic();
    const H3Result good = check_H3(spec, std::vector<double>{1.0}, std::vector<double>{0.1});
    CHECK(good.values[0] == doctest::Approx(-0.09));
    CHECK(good.report.pass);
    CHECK(good.report.margin == doctest::Approx(-0.09));

    const H3Result edge = check_H3(spec, std::vector<double>{1.0}, std::vector<double>{1.0});
    CHECK(std::abs(edge.values[0]) <= 1e-14);
    CHECK_FALSE(edge.report.pass);

    const PotentialSpec pair = coupled_pair(0.0);
    const double eps = 1e-2;
    const std::vector<double> omega{std::pow(eps, 1.25), std::pow(eps, 1.5)};
    CHECK(check_H3(pair, std::vector<double>{1.0, 1.0}, omega).report.pass);

    CHECK_THROWS_AS(check_H3(spec, std::vector<double>{0.0}, std::vector<double>{0.1}), std::invalid_argument);
    CHECK_THROWS_AS(check_H3(spec, std::vector<double>{1.0}, std::vector<double>{0.0}), std::invalid_argument);
}

TEST_CASE("H3 values follow the written expression")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coord(0.2, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 1 + trial % 3;
        const PotentialSpec spec = radsol::testing::random_spec(rng, k);
        std::vector<double> v(k), omega(k);
        for (std::size_t i = 0; i < k; ++i) {
            v[i] = coord(rng);
            omega[i] = coord(rng);
        }
        const H3Result res = check_H3(spec, v, omega);
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            sum += omega[i] * omega[i] * v[i] * v[i];
        }
        const double f = eval_F(spec, v);
        for (std::size_t h = 0; h < k; ++h) {
            const double expected = 2.0 * f + sum - spec.masses()[h] * omega[h] * v[h] * v[h];
            CHECK(res.values[h] == doctest::Approx(expected).epsilon(1e-13).scale(1.0));
        }
    }
}

TEST_CASE("H3 witness search")
{
    const auto single = find_H3_witness(quartic_quintic());
    REQUIRE(single.has_value());
    CHECK(std::abs(single->v[0]) == doctest::Approx(1.0));
    CHECK(single->omega[0] > 0.0);
    CHECK(single->omega[0] < 1.0);
    CHECK(check_H3(quartic_quintic(), single->v, single->omega).report.pass);

    WitnessSearch quick;
    quick.random_trials = 2000;
    CHECK_FALSE(find_H3_witness(free_spec(1), quick).has_value());
    CHECK_FALSE(find_H3_witness(free_spec(2), quick).has_value());

    const auto pair = find_H3_witness(coupled_pair(0.0));
    REQUIRE(pair.has_value());
    CHECK(std::abs(pair->v[0]) == doctest::Approx(1.0));
    CHECK(std::abs(pair->v[1]) == doctest::Approx(1.0));
    CHECK(pair->omega[0] != pair->omega[1]);
    CHECK(check_H3(coupled_pair(0.0), pair->v, pair->omega).report.pass);
}

TEST_CASE("H3 witness search is deterministic in the seed")
{
    WitnessSearch search;
    search.candidates = {};
    search.seed = 42;
    // F > 0 away from 0, so only the random stage can succeed
    const PotentialSpec spec({1.0}, {{-1.45, {4.0}}, {1.0, {5.0}}});
    const auto a = find_H3_witness(spec, search);
    const auto b = find_H3_witness(spec, search);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->v == b->v);
    CHECK(a->omega == b->omega);
}
