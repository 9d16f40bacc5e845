#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sigdev/errors.hpp"
#include "sigdev/sdkernel.hpp"

using namespace sigdev;

namespace {

Path line(std::vector<double> v) {
    std::vector<double> pts(2 * v.size(), 0.0);
    std::copy(v.begin(), v.end(), pts.begin() + static_cast<std::ptrdiff_t>(v.size()));
    return Path({0.0, 1.0}, pts, v.size());
}

std::vector<std::vector<double>> to_nested(const IncrementSequence& incs) {
    std::vector<std::vector<double>> out;
    for (std::size_t k = 0; k < incs.size(); ++k) out.emplace_back(incs[k].begin(), incs[k].end());
    return out;
}

IncrementSequence random_incs(std::mt19937_64& rng, std::size_t n, std::size_t d, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> flat(n * d);
    for (auto& v : flat) v = u(rng);
    return IncrementSequence(flat, d);
}

}  // namespace

TEST_CASE("explicit scheme") {
    SUBCASE("zero increments") {
        const auto g = solve_explicit(IncrementSequence(std::vector<double>(8, 0.0), 2));
        for (std::size_t i = 0; i < g.knots(); ++i) {
            for (std::size_t j = i; j < g.knots(); ++j) CHECK(g(i, j) == 1.0);
        }
    }
    SUBCASE("two equal steps") {
        const auto g = solve_explicit(IncrementSequence({0.1, 0.1}, 1));
        CHECK(g(0, 1) == 1.0);
        CHECK(g(0, 2) == doctest::Approx(0.99).epsilon(1e-14));
    }
    SUBCASE("three equal steps match the double sum and the ISS value") {
        const double h = 0.1;
        const IncrementSequence incs({h, h, h}, 1);
        CHECK(solve_explicit(incs).full() == doctest::Approx(oracle::explicit_double_sum(to_nested(incs))).epsilon(1e-14));
        CHECK(solve_explicit(incs).full() == doctest::Approx(1 - 3 * h * h).epsilon(1e-14));
    }
    SUBCASE("random sequences match the double sum and the series") {
        std::mt19937_64 rng(4);
        for (int trial = 0; trial < 20; ++trial) {
            const auto incs = random_incs(rng, 6, 2, 0.5);
            const double k = solve_explicit(incs).full();
            CHECK(std::abs(k - oracle::explicit_double_sum(to_nested(incs))) <= 1e-12);
            CHECK(std::abs(k - iss_series(incs)) <= 1e-12);
        }
    }
    SUBCASE("worker count does not change any value") {
        std::mt19937_64 rng(8);
        const auto incs = random_incs(rng, 40, 3, 0.2);
        const auto a = solve_explicit(incs, 1);
        const auto b = solve_explicit(incs, 4);
        for (std::size_t i = 0; i < a.knots(); ++i) {
            for (std::size_t j = i; j < a.knots(); ++j) CHECK(a(i, j) == b(i, j));
        }
    }
    SUBCASE("inserting a zero increment leaves the value unchanged") {
        std::mt19937_64 rng(13);
        const auto incs = random_incs(rng, 5, 2, 0.5);
        for (std::size_t at = 0; at <= incs.size(); ++at) {
            CHECK(std::abs(solve_explicit(incs.with_zero_inserted(at)).full() - solve_explicit(incs).full()) <= 1e-13);
        }
    }
}

TEST_CASE("implicit scheme") {
    CHECK(solve_implicit(IncrementSequence(std::vector<double>(5, 0.0), 1)).full() == 1.0);
    CHECK(solve_implicit(IncrementSequence({0.1}, 1)).full() == doctest::Approx(1.0 / 1.01).epsilon(1e-14));
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const auto incs = random_incs(rng, 6, 2, 0.5);
        CHECK(std::abs(solve_implicit(incs).full() - oracle::implicit_double_sum(to_nested(incs))) <= 1e-12);
    }
    const auto incs = random_incs(rng, 30, 2, 0.2);
    const auto a = solve_implicit(incs, 1);
    const auto b = solve_implicit(incs, 3);
    CHECK(a.full() == b.full());
}

TEST_CASE("explicit and implicit agree at rate mesh") {
    const Path p = line({1.0});
    double prev = 0.0;
    for (int lambda = 0; lambda <= 5; ++lambda) {
        const auto incs = piecewise_constant_increments(p, dyadic_refine(Partition({0.0, 1.0}), lambda + 2));
        const double diff = std::abs(solve_explicit(incs).full() - solve_implicit(incs).full());
        if (lambda == 0) CHECK(diff <= 0.5);
        else CHECK(prev / diff >= 1.7);
        prev = diff;
    }
}

TEST_CASE("straight-line closed form") {
    CHECK(exact_straight_line(0.0, 0.0, 1.0) == 1.0);
    CHECK(exact_straight_line(3.0, 0.5, 0.5) == 1.0);
    CHECK(exact_straight_line(1.0, 0.0, 1.0) == doctest::Approx(0.5767248078).epsilon(1e-10));
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 9.0, 15.0}) {
        CHECK(std::abs(exact_straight_line(x, 0.0, 1.0) - oracle::bessel_kernel(x)) <= 1e-12);
    }
    CHECK(std::abs(semicircle_characteristic_series(1.0, 30) - oracle::bessel_kernel(1.0)) <= 1e-14);
    CHECK(std::abs(bessel_j1_series(2.0) - std::cyl_bessel_j(1.0, 2.0)) <= 1e-15);
}

TEST_CASE("series oracle") {
    const Path constant({0.0, 1.0}, {2.0, 2.0}, 1);
    CHECK(series_oracle(constant, 1e-10).value == 1.0);
    const auto r = series_oracle(line({1.0}), 1e-10);
    CHECK(std::abs(r.value - exact_straight_line(1.0, 0.0, 1.0)) <= 1e-10);
    CHECK(r.tail_bound <= 1e-10);
    CHECK(r.level % 2 == 0);
    const Path g({0.0, 0.3, 1.0}, {0.0, 0.0, 0.2, 0.1, 0.1, 0.3}, 2);
    CHECK(std::abs(series_oracle(concat_reverse(g, g), 1e-10).value - 1.0) <= 1e-10);
    CHECK_THROWS_AS(series_oracle(line({5.0, 5.0}), 1e-12, 8), ResourceError);
}

TEST_CASE("k_sd") {
    const Path constant({0.0, 1.0}, {1.0, -1.0, 1.0, -1.0}, 2);
    for (auto scheme : {Scheme::Explicit, Scheme::Implicit, Scheme::Series}) {
        KernelOptions opts;
        opts.scheme = scheme;
        opts.partition.lambda = 2;
        CHECK(k_sd(constant, constant, opts).value == 1.0);
    }
    const Path g({0.0, 0.5, 1.0}, {0.0, 0.0, 0.2, 0.1, 0.1, 0.3}, 2);
    KernelOptions series;
    series.scheme = Scheme::Series;
    CHECK(std::abs(k_sd(g, g, series).value - 1.0) <= 1e-10);

    const Path v = line({0.3, 0.4});
    const Path w = line({-0.2, 0.5});
    const double reference = series_oracle(concat_reverse(v, w), 1e-12).value;
    CHECK(std::abs(k_sd(v, w, series).value - reference) <= 1e-10);
    KernelOptions fine;
    fine.partition.lambda = 7;
    CHECK(std::abs(k_sd(v, w, fine).value - reference) <= 1e-2);
    fine.scheme = Scheme::Implicit;
    CHECK(std::abs(k_sd(v, w, fine).value - reference) <= 1e-2);

    CHECK(parse_scheme("explicit") == Scheme::Explicit);
    CHECK(parse_scheme("implicit") == Scheme::Implicit);
    CHECK(parse_scheme("series") == Scheme::Series);
    CHECK_THROWS_AS(parse_scheme("nope"), DomainError);
    CHECK_THROWS_AS(k_sd(v, line({1.0}), series), DomainError);
}
