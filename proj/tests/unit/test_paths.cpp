#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "sigdev/errors.hpp"
#include "sigdev/path_io.hpp"
#include "sigdev/paths.hpp"

using namespace sigdev;

namespace {

Path line(std::vector<double> v) {
    std::vector<double> pts(2 * v.size(), 0.0);
    std::copy(v.begin(), v.end(), pts.begin() + static_cast<std::ptrdiff_t>(v.size()));
    return Path({0.0, 1.0}, pts, v.size());
}

Path random_path(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> gap(0.1, 1.0);
    std::vector<double> t(n), x(n * d);
    double now = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = now;
        now += gap(rng);
        for (std::size_t j = 0; j < d; ++j) x[i * d + j] = normal(rng);
    }
    return Path(t, x, d);
}

}  // namespace

TEST_CASE("Path construction validates its invariants") {
    CHECK_THROWS_AS(Path({}, {}, 1), DomainError);
    CHECK_THROWS_AS(Path({0.0, 0.0}, {1.0, 2.0}, 1), DomainError);
    CHECK_THROWS_AS(Path({0.0, 1.0}, {1.0, 2.0, 3.0}, 1), DomainError);
    CHECK_THROWS_AS(Path({0.0, 1.0}, {1.0, NAN}, 1), DomainError);
    CHECK_THROWS_AS(Path({0.0, 1.0}, {{1.0, 2.0}, {3.0}}), DomainError);
    const Path single({2.5}, {1.0, -1.0}, 2);
    CHECK(single.size() == 1);
    CHECK(one_variation(single) == 0.0);
}

TEST_CASE("one_variation") {
    SUBCASE("straight line to (3,4)") { CHECK(one_variation(line({3.0, 4.0}), 0.0, 1.0) == doctest::Approx(5.0)); }
    SUBCASE("empty interval") {
        std::mt19937_64 rng(1);
        const Path p = random_path(rng, 5, 2);
        CHECK(one_variation(p, p.time(2), p.time(2)) == 0.0);
        CHECK(one_variation(p, 0.3, 0.3) == 0.0);
    }
    SUBCASE("out and back") {
        const Path p({0.0, 1.0, 2.0}, {0.0, 0.0, 1.0, 0.0, 0.0, 0.0}, 2);
        CHECK(one_variation(p) == doctest::Approx(2.0));
    }
    SUBCASE("clipped segments") {
        CHECK(one_variation(line({3.0, 4.0}), 0.25, 0.75) == doctest::Approx(2.5));
    }
    SUBCASE("domain errors") {
        const Path p = line({1.0});
        CHECK_THROWS_AS(one_variation(p, -0.5, 0.5), DomainError);
        CHECK_THROWS_AS(one_variation(p, 0.5, 1.5), DomainError);
        CHECK_THROWS_AS(one_variation(p, 0.7, 0.2), DomainError);
    }
}

TEST_CASE("one_variation is additive over adjacent intervals") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Path p = random_path(rng, 6, 3);
        const double a = p.start_time();
        const double c = p.end_time();
        // b at a knot: exact up to summation order
        const double bk = p.time(3);
        CHECK(std::abs(one_variation(p, a, bk) + one_variation(p, bk, c) - one_variation(p, a, c)) <= 1e-12);
        // b anywhere
        const double b = a + u(rng) * (c - a);
        CHECK(std::abs(one_variation(p, a, b) + one_variation(p, b, c) - one_variation(p, a, c)) <= 1e-12);
    }
}

TEST_CASE("concat_reverse") {
    SUBCASE("a path followed by its own reversal returns to the start") {
        const Path v = line({1.0, 2.0});
        const Path y = concat_reverse(v, v);
        REQUIRE(y.size() == 3);
        CHECK(y.point(1)[0] == 1.0);
        CHECK(y.point(1)[1] == 2.0);
        CHECK(y.point(2)[0] == 0.0);
        CHECK(y.point(2)[1] == 0.0);
    }
    SUBCASE("endpoint bookkeeping") {
        const Path g({0.0, 0.5, 1.0}, {0.0, 0.0, 1.0, 0.0, 1.0, 1.0}, 2);
        const Path s({0.0, 2.0}, {5.0, 5.0, 7.0, 4.0}, 2);
        const Path y = concat_reverse(g, s);
        // translated reversal shares γ's endpoint, so the junction is stored once
        CHECK(y.size() == g.size() + s.size() - 1);
        const auto disp = y.displacement();
        CHECK(disp[0] == doctest::Approx(1.0 - 0.0 + 5.0 - 7.0));
        CHECK(disp[1] == doctest::Approx(1.0 - 0.0 + 5.0 - 4.0));
        for (std::size_t i = 1; i < y.size(); ++i) CHECK(y.time(i) > y.time(i - 1));
        CHECK(y.end_time() == doctest::Approx(3.0));
    }
    SUBCASE("single-point sigma") {
        const Path g({0.0, 0.5, 1.0}, {0.0, 1.0, 3.0}, 1);
        const Path s({4.0}, {9.0}, 1);
        CHECK(concat_reverse(g, s) == g);
    }
    SUBCASE("dimension mismatch") { CHECK_THROWS_AS(concat_reverse(line({1.0}), line({1.0, 2.0})), DomainError); }
    SUBCASE("self-concatenation has zero displacement") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 20; ++trial) {
            const Path p = random_path(rng, 7, 2);
            const auto disp = concat_reverse(p, p).displacement();
            CHECK(euclidean_norm(disp) <= 1e-12);
        }
    }
}

TEST_CASE("piecewise_constant_increments") {
    const Path v = line({2.0, -4.0});
    SUBCASE("single interval") {
        const auto incs = piecewise_constant_increments(v, Partition({0.0, 1.0}));
        REQUIRE(incs.size() == 1);
        CHECK(incs[0][0] == 2.0);
        CHECK(incs[0][1] == -4.0);
    }
    SUBCASE("two intervals split the increment") {
        const auto incs = piecewise_constant_increments(v, Partition::uniform(0.0, 1.0, 2));
        REQUIRE(incs.size() == 2);
        CHECK(incs[0][0] == doctest::Approx(1.0));
        CHECK(incs[1][1] == doctest::Approx(-2.0));
    }
    SUBCASE("own knots reproduce point differences") {
        const Path f = gen_fbm(0.75, 16, 2, 5);
        const auto incs = piecewise_constant_increments(f, Partition::of(f));
        REQUIRE(incs.size() == 15);
        for (std::size_t k = 0; k < 15; ++k) {
            for (std::size_t j = 0; j < 2; ++j) CHECK(incs[k][j] == f.point(k + 1)[j] - f.point(k)[j]);
        }
    }
    SUBCASE("partition must cover the span") {
        CHECK_THROWS_AS(piecewise_constant_increments(v, Partition({0.0, 0.5})), DomainError);
    }
    SUBCASE("increments sum to the displacement") {
        std::mt19937_64 rng(9);
        for (int trial = 0; trial < 20; ++trial) {
            const Path p = random_path(rng, 6, 3);
            const auto part = dyadic_refine(Partition::uniform(p.start_time(), p.end_time(), 5), 2);
            const auto tot = piecewise_constant_increments(p, part).total();
            const auto disp = p.displacement();
            for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(tot[j] - disp[j]) <= 1e-12);
        }
    }
}

TEST_CASE("dyadic_refine") {
    CHECK(dyadic_refine(Partition({0.0, 1.0}), 1).knots() == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(dyadic_refine(Partition({0.0, 1.0}), 0).knots() == std::vector<double>{0.0, 1.0});
    const auto r = dyadic_refine(Partition({0.0, 0.5, 1.0}), 2);
    REQUIRE(r.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) CHECK(r[i] == doctest::Approx(0.125 * static_cast<double>(i)));
    CHECK_THROWS_AS(dyadic_refine(Partition({0.0, 1.0}), -1), DomainError);

    const Partition odd({0.0, 0.3, 0.35, 1.7});
    for (int l1 = 0; l1 <= 3; ++l1) {
        for (int l2 = 0; l2 <= 3; ++l2) {
            const auto direct = dyadic_refine(odd, l1 + l2);
            const auto nested = dyadic_refine(dyadic_refine(odd, l1), l2);
            REQUIRE(direct.size() == nested.size());
            for (std::size_t i = 0; i < direct.size(); ++i) CHECK(direct[i] == doctest::Approx(nested[i]).epsilon(1e-14));
        }
    }
}

TEST_CASE("refine_to_variation meets its target") {
    std::mt19937_64 rng(21);
    const Path p = random_path(rng, 5, 2);
    const auto part = refine_to_variation(p, Partition::of(p), 0.05);
    CHECK(max_interval_variation(p, part) <= 0.05);
    CHECK(part.front() == p.start_time());
    CHECK(part.back() == p.end_time());
}

TEST_CASE("gen_fbm") {
    SUBCASE("determinism") { CHECK(gen_fbm(0.75, 32, 3, 42) == gen_fbm(0.75, 32, 3, 42)); }
    SUBCASE("two points give one unit-variance increment") {
        const Path p = gen_fbm(0.3, 2, 1, 1);
        CHECK(p.size() == 2);
        CHECK(p.point(0)[0] == 0.0);
        double sum2 = 0.0;
        const int reps = 4000;
        for (int s = 0; s < reps; ++s) {
            const double x = gen_fbm(0.3, 2, 1, static_cast<std::uint64_t>(s)).point(1)[0];
            sum2 += x * x;
        }
        CHECK(sum2 / reps == doctest::Approx(1.0).epsilon(0.08));
    }
    SUBCASE("H = 1/2 gives independent increments with variance dt") {
        // Monte Carlo over 10^4 seeds: sample covariance of the increments.
        const std::size_t n = 5;
        const double dt = 1.0 / static_cast<double>(n - 1);
        const int reps = 10000;
        std::vector<double> cov((n - 1) * (n - 1), 0.0);
        for (int s = 0; s < reps; ++s) {
            const Path p = gen_fbm(0.5, n, 1, static_cast<std::uint64_t>(s) + 1000);
            for (std::size_t i = 0; i + 1 < n; ++i) {
                for (std::size_t j = 0; j + 1 < n; ++j) {
                    const double di = p.point(i + 1)[0] - p.point(i)[0];
                    const double dj = p.point(j + 1)[0] - p.point(j)[0];
                    cov[i * (n - 1) + j] += di * dj / reps;
                }
            }
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = 0; j + 1 < n; ++j) {
                const double expected = i == j ? dt : 0.0;
                CHECK(std::abs(cov[i * (n - 1) + j] - expected) <= 0.05 * dt);
            }
        }
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(gen_fbm(0.0, 8, 1, 0), DomainError);
        CHECK_THROWS_AS(gen_fbm(1.0, 8, 1, 0), DomainError);
        CHECK_THROWS_AS(gen_fbm(0.5, 1, 1, 0), DomainError);
    }
}

TEST_CASE("CSV and JSON Lines round trips") {
    const Path p = gen_fbm(0.75, 9, 3, 17);
    std::stringstream csv;
    write_path_csv(csv, p);
    CHECK(csv.str().rfind("t,x1,x2,x3\n", 0) == 0);
    CHECK(read_path_csv(csv) == p);

    std::vector<NamedPath> many{{"a", p}, {"b \"quoted\"", gen_fbm(0.5, 4, 3, 2)}};
    std::stringstream jl;
    write_paths_jsonl(jl, many);
    const auto back = read_paths_jsonl(jl);
    REQUIRE(back.size() == 2);
    CHECK(back[0].id == "a");
    CHECK(back[1].id == "b \"quoted\"");
    CHECK(back[0].path == p);
    CHECK(back[1].path == many[1].path);

    std::stringstream bad("t,y1\n0,1\n");
    CHECK_THROWS_AS(read_path_csv(bad), DomainError);
    std::stringstream ragged("t,x1,x2\n0,1,2\n1,3\n");
    CHECK_THROWS_AS(read_path_csv(ragged), DomainError);
    std::stringstream broken("{\"t\": [0, 1], \"x\": [[1]]}\n");
    CHECK_THROWS_AS(read_paths_jsonl(broken), DomainError);
}
