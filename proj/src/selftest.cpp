#include "sigdev/selftest.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "sigdev/freeprob.hpp"
#include "sigdev/mmd.hpp"
#include "sigdev/paths.hpp"
#include "sigdev/randomdev.hpp"
#include "sigdev/sdkernel.hpp"
#include "sigdev/signature.hpp"

namespace sigdev {

namespace {

Path random_path(std::mt19937_64& rng, std::size_t segments, std::size_t dim, double length) {
    std::normal_distribution<double> normal;
    std::vector<double> times(segments + 1);
    std::vector<double> pts((segments + 1) * dim, 0.0);
    std::vector<double> steps(segments * dim);
    double total = 0.0;
    for (std::size_t k = 0; k < segments; ++k) {
        double len2 = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            steps[k * dim + j] = normal(rng);
            len2 += steps[k * dim + j] * steps[k * dim + j];
        }
        total += std::sqrt(len2);
    }
    for (std::size_t k = 0; k <= segments; ++k) times[k] = static_cast<double>(k) / static_cast<double>(segments);
    for (std::size_t k = 0; k < segments; ++k) {
        for (std::size_t j = 0; j < dim; ++j) {
            pts[(k + 1) * dim + j] = pts[k * dim + j] + steps[k * dim + j] * length / total;
        }
    }
    return Path(std::move(times), std::move(pts), dim);
}

}  // namespace

std::vector<CheckResult> run_selftest() {
    std::vector<CheckResult> results;
    auto check = [&](const std::string& name, const std::function<std::string()>& body) {
        CheckResult r{name, false, {}};
        try {
            r.detail = body();
            r.passed = r.detail.empty();
        } catch (const std::exception& e) {
            r.detail = std::string("threw: ") + e.what();
        }
        results.push_back(std::move(r));
    };
    auto fmt = [](double x) {
        std::ostringstream os;
        os.precision(6);
        os << x;
        return os.str();
    };

    std::mt19937_64 rng(20240601);
    const Path p3 = random_path(rng, 6, 3, 1.5);
    const Path p2 = random_path(rng, 5, 2, 0.8);

    check("paths: 1-variation additive at a knot", [&] {
        const double b = p3.time(3);
        const double lhs = one_variation(p3, 0.0, b) + one_variation(p3, b, 1.0);
        const double err = std::abs(lhs - one_variation(p3));
        return err <= 1e-12 ? std::string() : "error " + fmt(err);
    });
    check("paths: concat_reverse(g, g) has zero displacement", [&] {
        const auto disp = concat_reverse(p3, p3).displacement();
        return euclidean_norm(disp) <= 1e-12 ? std::string() : "displacement " + fmt(euclidean_norm(disp));
    });
    check("paths: dyadic refinement composes", [&] {
        const Partition base = Partition::of(p2);
        const auto direct = dyadic_refine(base, 3);
        const auto nested = dyadic_refine(dyadic_refine(base, 1), 2);
        if (direct.size() != nested.size()) return std::string("sizes differ");
        double err = 0.0;
        for (std::size_t i = 0; i < direct.size(); ++i) err = std::max(err, std::abs(direct[i] - nested[i]));
        return err <= 1e-12 ? std::string() : "knots differ by " + fmt(err);
    });
    check("paths: increments telescope", [&] {
        const auto incs = piecewise_constant_increments(p3, Partition::uniform(0.0, 1.0, 7));
        const auto tot = incs.total();
        const auto disp = p3.displacement();
        double err = 0.0;
        for (std::size_t j = 0; j < tot.size(); ++j) err = std::max(err, std::abs(tot[j] - disp[j]));
        return err <= 1e-12 ? std::string() : "error " + fmt(err);
    });
    check("signature: Chen identity", [&] {
        const double u = 0.37;
        const auto whole = truncated_signature(p3, 0.0, 1.0, 4);
        const auto prod = truncated_signature(p3, 0.0, u, 4) * truncated_signature(p3, u, 1.0, 4);
        double err = 0.0;
        for (int m = 0; m <= 4; ++m) {
            const auto a = whole.level_tensor(m);
            const auto b = prod.level_tensor(m);
            for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
        }
        return err <= 1e-10 ? std::string() : "error " + fmt(err);
    });
    check("freeprob: |NC2(2k)| = Catalan(k), k <= 8", [&] {
        for (int k = 0; k <= 8; ++k) {
            if (nc2_enumerate(2 * k).size() != catalan(k)) return "mismatch at k=" + std::to_string(k);
        }
        return std::string();
    });
    check("freeprob: Dyck/partition bijection round-trips, length <= 12", [&] {
        for (std::size_t len = 0; len <= 12; len += 2) {
            for (const auto& d : DyckWord::all(len)) {
                if (dyck_from_partition(partition_from_dyck(d)) != d) return "failed on " + d.str();
            }
        }
        return std::string();
    });
    check("freeprob: maximal-generation pairs are adjacent", [&] {
        for (std::size_t len = 2; len <= 12; len += 2) {
            for (const auto& d : DyckWord::all(len)) {
                for (const auto& [a, b] : generation_labels(d).maximal_pairs()) {
                    if (b != a + 1) return "failed on " + d.str();
                }
            }
        }
        return std::string();
    });
    check("freeprob: Schwinger-Dyson identities, d <= 3, length <= 8", [&] {
        for (int d = 1; d <= 3; ++d) {
            if (!schwinger_dyson_check(8, d)) return "failed for d=" + std::to_string(d);
        }
        return std::string();
    });
    check("freeprob: memoized moments match enumeration", [&] {
        MomentTable table;
        for (int len = 0; len <= 8; ++len) {
            for (const auto& w : all_words(len, 2)) {
                if (table(w) != semicircular_moment(w)) return "mismatch on " + word_to_string(w);
            }
        }
        return std::string();
    });
    check("sdkernel: explicit scheme equals iterated-sums series", [&] {
        std::uniform_real_distribution<double> unif(-0.5, 0.5);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> flat(2 * 6);
            for (double& x : flat) x = unif(rng);
            const IncrementSequence incs(flat, 2);
            worst = std::max(worst, std::abs(solve_explicit(incs).full() - iss_series(incs)));
        }
        return worst <= 1e-10 ? std::string() : "error " + fmt(worst);
    });
    check("sdkernel: zero-increment insertion leaves both schemes unchanged", [&] {
        const auto incs = increments(p2);
        const auto padded = incs.with_zero_inserted(2).with_zero_inserted(0);
        const bool ok = solve_explicit(incs).full() == solve_explicit(padded).full() &&
                        solve_implicit(incs).full() == solve_implicit(padded).full();
        return ok ? std::string() : "values changed";
    });
    check("sdkernel: straight-line convergence within the a-priori bound", [&] {
        const double exact = exact_straight_line(1.0, 0.0, 1.0);
        for (int lambda = 0; lambda <= 6; ++lambda) {
            const std::size_t n = std::size_t{1} << lambda;
            const IncrementSequence incs(std::vector<double>(n, 1.0 / static_cast<double>(n)), 1);
            const double bound = 16.0 * std::exp(4.0) / static_cast<double>(n);
            if (std::abs(solve_explicit(incs).full() - exact) > bound ||
                std::abs(solve_implicit(incs).full() - exact) > bound) {
                return "bound violated at lambda=" + std::to_string(lambda);
            }
        }
        return std::string();
    });
    check("sdkernel: series oracle matches the Bessel closed form", [&] {
        const Path line({0.0, 1.0}, {0.0, 0.0, 0.6, 0.8}, 2);
        const double err = std::abs(series_oracle(line, 1e-12).value - exact_straight_line(1.0, 0.0, 1.0));
        return err <= 1e-11 ? std::string() : "error " + fmt(err);
    });
    check("sdkernel: tree-like path has kernel 1", [&] {
        KernelOptions opts;
        opts.scheme = Scheme::Series;
        const double err = std::abs(k_sd(p2, p2, opts).value - 1.0);
        return err <= 1e-9 ? std::string() : "error " + fmt(err);
    });
    check("randomdev: unitary developments stay unitary", [&] {
        EnsembleConfig cfg;
        cfg.dim_n = 24;
        cfg.samples_m = 3;
        cfg.path_dim = 3;
        cfg.seed = 11;
        const auto incs = increments(p3.scaled(5.0));
        double worst = 0.0;
        for (int m = 0; m < cfg.samples_m; ++m) {
            worst = std::max(worst, unitarity_defect(unitary_development(incs, sample_matrices(cfg, m), cfg.dim_n)));
        }
        return worst <= 1e-10 ? std::string() : "defect " + fmt(worst);
    });
    check("mmd: identical samples have zero distance", [&] {
        const PathSample s({p2, p2.scaled(0.5), p2.scaled(-0.7)});
        KernelSpec spec;
        spec.kind = KernelKind::SdSeries;
        const double v = mmd2(s, s, spec);
        return std::abs(v) <= 1e-10 ? std::string() : "mmd2 " + fmt(v);
    });
    return results;
}

}  // namespace sigdev
