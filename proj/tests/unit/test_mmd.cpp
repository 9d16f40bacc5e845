#include <doctest.h>

#include <cmath>

#include "sigdev/errors.hpp"
#include "sigdev/mmd.hpp"

using namespace sigdev;

namespace {

std::vector<Path> fbm_paths(std::size_t count, std::uint64_t seed0, double scale) {
    std::vector<Path> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(gen_fbm(0.75, 5, 2, seed0 + i).scaled(scale));
    return out;
}

}  // namespace

TEST_CASE("gram") {
    const Path p = gen_fbm(0.6, 6, 2, 1).scaled(0.25);
    const PathSample one({p});
    const auto g = gram(one, one, KernelSpec{});
    REQUIRE(g.rows == 1);
    CHECK(std::abs(g(0, 0) - 1.0) <= 1e-10);

    const PathSample constants({Path({0.0, 1.0}, {1.0, 1.0}, 1), Path({0.0, 2.0}, {-3.0, -3.0}, 1)});
    for (auto kind : {KernelKind::SdExplicit, KernelKind::SdImplicit, KernelKind::SdSeries, KernelKind::SigTruncated}) {
        KernelSpec spec;
        spec.kind = kind;
        const auto c = gram(constants, spec);
        for (double v : c.values) CHECK(v == 1.0);
    }

    const PathSample sample(fbm_paths(3, 10, 0.25));
    const auto sym = gram(sample, KernelSpec{});
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(sym(i, j) == sym(j, i));
    }
    CHECK(min_eigenvalue(sym) >= -1e-6);
    const auto cross = gram(sample, sample, KernelSpec{});
    CHECK(cross.values == sym.values);
    CHECK(sym.kernel_tag.rfind("sd_series", 0) == 0);
}

TEST_CASE("mmd2") {
    const PathSample a(fbm_paths(4, 20, 0.2));
    const PathSample b(fbm_paths(4, 40, 0.3));
    KernelSpec spec;
    CHECK(mmd2(a, a, spec) == 0.0);
    {
        // U-statistic unrolled: off-diagonal within-sample means, full cross mean
        const auto aa = gram(a, spec), bb = gram(b, spec), ab = gram(a, b, spec);
        double within_a = 0.0, within_b = 0.0, cross = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                if (i != j) within_a += aa(i, j) / 12.0;
                if (i != j) within_b += bb(i, j) / 12.0;
                cross += ab(i, j) / 16.0;
            }
        }
        CHECK(std::abs(mmd2(a, b, spec, MmdStatistic::U) - (within_a + within_b - 2 * cross)) <= 1e-12);
    }
    CHECK(mmd2(a, b, spec) >= -1e-6);

    const PathSample g({a[0]}), s({b[0]});
    const double expected = kernel_value(a[0], a[0], spec) + kernel_value(b[0], b[0], spec) -
                            2 * kernel_value(a[0], b[0], spec);
    CHECK(std::abs(mmd2(g, s, spec) - expected) <= 1e-14);
    CHECK_THROWS_AS(mmd2(g, s, spec, MmdStatistic::U), DomainError);

    // symmetric and invariant to reordering the samples
    CHECK(mmd2(a, b, spec) == mmd2(b, a, spec));
    auto shuffled = a.paths();
    std::swap(shuffled[0], shuffled[3]);
    CHECK(mmd2(PathSample(shuffled), b, spec) == mmd2(a, b, spec));

    KernelSpec sig;
    sig.kind = KernelKind::SigTruncated;
    CHECK(mmd2(a, b, sig) >= -1e-10);
}

TEST_CASE("kernel specification and samples") {
    CHECK(parse_kernel_kind("sd_series") == KernelKind::SdSeries);
    CHECK(parse_kernel_kind("sig_truncated") == KernelKind::SigTruncated);
    CHECK_THROWS_AS(parse_kernel_kind("rbf"), DomainError);
    CHECK_THROWS_AS(PathSample({}), DomainError);
    CHECK_THROWS_AS(PathSample({Path({0.0}, {1.0}, 1), Path({0.0}, {1.0, 2.0}, 2)}), DomainError);
    const Path x = gen_fbm(0.7, 4, 1, 3).scaled(0.4);
    const Path y = gen_fbm(0.7, 4, 1, 4).scaled(0.4);
    CHECK(kernel_value(x, y, KernelSpec{}) == kernel_value(y, x, KernelSpec{}));
}
