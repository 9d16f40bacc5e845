#include "sigdev/sdkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "sigdev/errors.hpp"
#include "sigdev/freeprob.hpp"
#include "sigdev/signature.hpp"

namespace sigdev {

SolutionGrid::SolutionGrid(std::size_t n_knots) : n_(n_knots) {
    if (n_knots == 0) throw DomainError("solution grid needs at least one knot");
    values_.assign(n_ * (n_ + 1) / 2, 1.0);
}

namespace {

/// Column-major packed copy of the grid so the inner sums of both schemes
/// walk contiguous memory: column j holds rows 0..j.
class ColumnMirror {
public:
    explicit ColumnMirror(std::size_t n) : values_(n * (n + 1) / 2, 1.0) {}
    double operator()(std::size_t i, std::size_t j) const { return values_[j * (j + 1) / 2 + i]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[j * (j + 1) / 2 + i]; }
    const double* column(std::size_t j) const { return values_.data() + j * (j + 1) / 2; }

private:
    std::vector<double> values_;
};

std::vector<double> increment_gram(const IncrementSequence& incs) {
    const std::size_t n = incs.size();
    std::vector<double> g(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = dot(incs[i], incs[j]);
            g[i * n + j] = v;
            g[j * n + i] = v;
        }
    }
    return g;
}

template <class Fn>
void for_each_cell(std::size_t count, unsigned workers, const Fn& fn) {
    if (workers <= 1 || count < 64) {
        for (std::size_t a = 0; a < count; ++a) fn(a);
        return;
    }
    const std::size_t w = std::min<std::size_t>(workers, count);
    std::vector<std::jthread> pool;
    pool.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t a = t; a < count; a += w) fn(a);
        });
    }
}

}  // namespace

SolutionGrid solve_explicit(const IncrementSequence& incs, unsigned workers) {
    const std::size_t n = incs.size();
    SolutionGrid grid(n + 1);
    if (n == 0) return grid;
    ColumnMirror col(n + 1);
    const auto g = increment_gram(incs);

    for (std::size_t len = 1; len <= n; ++len) {
        for_each_cell(n + 1 - len, workers, [&](std::size_t a) {
            const std::size_t b = a + len;
            const std::size_t last = b - 1;  // newest increment Δ_{b-1}
            const double* g_last = g.data() + last * n;
            const double* k_col = col.column(last);  // K(·, b-1)
            double acc = 0.0;
            for (std::size_t i = a; i + 1 < b; ++i) {
                acc += grid(a, i) * k_col[i + 1] * g_last[i];
            }
            const double v = grid(a, last) - acc;
            grid(a, b) = v;
            col(a, b) = v;
        });
    }
    return grid;
}

SolutionGrid solve_implicit(const IncrementSequence& incs, unsigned workers) {
    const std::size_t n = incs.size();
    SolutionGrid grid(n + 1);
    if (n == 0) return grid;
    ColumnMirror col(n + 1);
    const auto g = increment_gram(incs);

    for (std::size_t len = 1; len <= n; ++len) {
        for_each_cell(n + 1 - len, workers, [&](std::size_t a) {
            const std::size_t b = a + len;
            const std::size_t last = b - 1;
            const double* g_last = g.data() + last * n;
            const double* k_col = col.column(b);  // K(·, b)
            double acc = 0.0;
            for (std::size_t k = a + 1; k < b; ++k) {
                acc += grid(a, k) * k_col[k] * g_last[k - 1];
            }
            const double v = (grid(a, last) - acc) / (1.0 + g_last[last]);
            grid(a, b) = v;
            col(a, b) = v;
        });
    }
    return grid;
}

double bessel_j1_series(double z) {
    // J₁(z) = Σ_k (−1)^k (z/2)^{2k+1} / (k! (k+1)!)
    const double half = 0.5 * z;
    const double q = half * half;
    double term = half;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= -q / (static_cast<double>(k) * static_cast<double>(k + 1));
        sum += term;
        if (std::abs(term) <= 1e-16 * std::abs(sum) && static_cast<double>(k) > half) break;
    }
    return sum;
}

double exact_straight_line(double speed, double s, double t) {
    if (!(s <= t)) throw DomainError("exact_straight_line: s must not exceed t");
    if (!(speed >= 0.0)) throw DomainError("exact_straight_line: speed must be nonnegative");
    const double x = (t - s) * speed;
    if (x == 0.0) return 1.0;
    // Power-series cancellation grows like e^{2x}; beyond x = 8 use the library Bessel.
    if (x > 8.0) return std::cyl_bessel_j(1.0, 2.0 * x) / x;
    return bessel_j1_series(2.0 * x) / x;
}

double semicircle_characteristic_series(double x, int terms) {
    // (−1)^k C_k x^{2k} / (2k)! = (−1)^k x^{2k} / (k! (k+1)!)
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= terms; ++k) {
        term *= -x * x / (static_cast<double>(k) * static_cast<double>(k + 1));
        sum += term;
    }
    return sum;
}

double series_tail_bound(double variation, int level) {
    // C_k x^{2k} / (2k)! = x^{2k} / (k! (k+1)!) for m = 2k.
    const double q = variation * variation;
    double term = 1.0;
    const int first = level / 2 + 1;
    for (int k = 1; k < first; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k + 1));
    }
    double tail = 0.0;
    for (int k = first; k < first + 1000; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k + 1));
        tail += term;
        if (term == 0.0 || (static_cast<double>(k) > variation && term < 1e-20 * tail)) break;
    }
    return tail;
}

SeriesResult series_oracle(const Path& path, double s, double t, double tol, int max_level) {
    if (!(tol > 0.0)) throw DomainError("series_oracle: tolerance must be positive");
    if (max_level < 0) max_level = default_series_level(path.dim());
    const double variation = one_variation(path, s, t);
    int level = -1;
    for (int l = 0; l <= max_level; l += 2) {
        if (series_tail_bound(variation, l) <= tol) {
            level = l;
            break;
        }
    }
    if (level < 0) {
        const int cap = max_level - max_level % 2;
        throw ResourceError("series oracle: tail bound " +
                            fmt_num(series_tail_bound(variation, cap)) + " at level " +
                            std::to_string(cap) + " does not reach tolerance " + fmt_num(tol));
    }

    const auto sig = truncated_signature(path, s, t, level);
    const auto phi = moment_levels(static_cast<int>(path.dim()), level);
    SeriesResult out;
    out.level = level;
    out.tail_bound = series_tail_bound(variation, level);
    out.value = 1.0;
    for (int m = 2; m <= level; m += 2) {
        const auto tensor = sig.level_tensor(m);
        const auto& moments = phi[static_cast<std::size_t>(m)];
        double level_sum = 0.0;
        for (std::size_t idx = 0; idx < tensor.size(); ++idx) {
            if (moments[idx] != 0) level_sum += static_cast<double>(moments[idx]) * tensor[idx];
        }
        out.value += (m / 2) % 2 == 0 ? level_sum : -level_sum;
    }
    return out;
}

int default_series_level(std::size_t dim) {
    int level = 0;
    double coeffs = 1.0;
    const double d2 = static_cast<double>(dim) * static_cast<double>(dim);
    while (level < 24 && coeffs * d2 <= 1048576.0) {
        coeffs *= d2;
        level += 2;
    }
    return level;
}

SeriesResult series_oracle(const Path& path, double tol, int max_level) {
    return series_oracle(path, path.start_time(), path.end_time(), tol, max_level);
}

double iss_series(const IncrementSequence& incs) {
    const int n = static_cast<int>(incs.size());
    if (n > 20) throw ResourceError("iss_series: more than 20 increments");
    if (n < 2) return 1.0;
    const int level = n - n % 2;
    const auto iss = iterated_sums_signature(incs, level);
    const std::size_t d = incs.dim();
    double total = 1.0;
    Word word;
    for (int m = 2; m <= level; m += 2) {
        const auto tensor = iss.level_tensor(m);
        word.assign(static_cast<std::size_t>(m), 1);
        double level_sum = 0.0;
        for (std::size_t idx = 0; idx < tensor.size(); ++idx) {
            std::size_t rem = idx;
            for (int pos = m - 1; pos >= 0; --pos) {
                word[static_cast<std::size_t>(pos)] = static_cast<int>(rem % d) + 1;
                rem /= d;
            }
            if (tensor[idx] == 0.0) continue;
            level_sum += static_cast<double>(semicircular_moment(word)) * tensor[idx];
        }
        total += (m / 2) % 2 == 0 ? level_sum : -level_sum;
    }
    return total;
}

Scheme parse_scheme(std::string_view name) {
    if (name == "explicit") return Scheme::Explicit;
    if (name == "implicit") return Scheme::Implicit;
    if (name == "series") return Scheme::Series;
    throw DomainError("unknown scheme '" + std::string(name) + "'");
}

std::string_view scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Explicit: return "explicit";
        case Scheme::Implicit: return "implicit";
        case Scheme::Series: return "series";
    }
    return "?";
}

Partition PartitionSpec::resolve(const Path& path) const {
    Partition p = dyadic_refine(Partition::of(path), lambda);
    if (max_variation > 0.0 && path.size() > 1) p = refine_to_variation(path, p, max_variation);
    return p;
}

KernelEstimate k_path(const Path& path, const KernelOptions& opts) {
    KernelEstimate out;
    if (opts.scheme == Scheme::Series) {
        const auto r = series_oracle(path, opts.tol, opts.max_series_level);
        out.value = r.value;
        out.tail_bound = r.tail_bound;
        out.level = r.level;
        return out;
    }
    const Partition partition = opts.partition.resolve(path);
    const auto incs = piecewise_constant_increments(path, partition);
    const auto grid = opts.scheme == Scheme::Explicit ? solve_explicit(incs, opts.workers)
                                                      : solve_implicit(incs, opts.workers);
    out.value = grid.full();
    out.intervals = incs.size();
    return out;
}

KernelEstimate k_sd(const Path& gamma, const Path& sigma, const KernelOptions& opts) {
    return k_path(concat_reverse(gamma, sigma), opts);
}

KernelEstimate k_sd(const Path& gamma, const Path& sigma, Scheme scheme, const Partition& partition,
                    double tol) {
    const Path y = concat_reverse(gamma, sigma);
    KernelEstimate out;
    if (scheme == Scheme::Series) {
        const auto r = series_oracle(y, tol);
        out.value = r.value;
        out.tail_bound = r.tail_bound;
        out.level = r.level;
        return out;
    }
    const auto incs = piecewise_constant_increments(y, partition);
    const auto grid = scheme == Scheme::Explicit ? solve_explicit(incs) : solve_implicit(incs);
    out.value = grid.full();
    out.intervals = incs.size();
    return out;
}

}  // namespace sigdev
