#include "sigdev/mmd.hpp"

#include <algorithm>
#include <thread>

#include <Eigen/Eigenvalues>

#include "sigdev/errors.hpp"
#include "sigdev/randomdev.hpp"
#include "sigdev/signature.hpp"

namespace sigdev {

PathSample::PathSample(std::vector<Path> paths) : paths_(std::move(paths)) {
    if (paths_.empty()) throw DomainError("path sample must not be empty");
    for (const auto& p : paths_) {
        if (p.dim() != paths_.front().dim()) throw DomainError("path sample mixes dimensions");
    }
}

KernelKind parse_kernel_kind(std::string_view name) {
    if (name == "sd_explicit" || name == "explicit") return KernelKind::SdExplicit;
    if (name == "sd_implicit" || name == "implicit") return KernelKind::SdImplicit;
    if (name == "sd_series" || name == "series") return KernelKind::SdSeries;
    if (name == "sig_truncated" || name == "sig") return KernelKind::SigTruncated;
    throw DomainError("unknown kernel '" + std::string(name) + "'");
}

std::string_view kernel_kind_name(KernelKind k) {
    switch (k) {
        case KernelKind::SdExplicit: return "sd_explicit";
        case KernelKind::SdImplicit: return "sd_implicit";
        case KernelKind::SdSeries: return "sd_series";
        case KernelKind::SigTruncated: return "sig_truncated";
    }
    return "?";
}

namespace {

bool path_less(const Path& a, const Path& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    if (a.times() != b.times()) return a.times() < b.times();
    return a.flat_points() < b.flat_points();
}

std::string tag_of(const KernelSpec& spec) {
    std::string tag(kernel_kind_name(spec.kind));
    if (spec.kind == KernelKind::SdExplicit || spec.kind == KernelKind::SdImplicit) {
        tag += ";lambda=" + std::to_string(spec.partition.lambda);
        if (spec.partition.max_variation > 0.0) {
            tag += ";max_variation=" + std::to_string(spec.partition.max_variation);
        }
    } else {
        tag += ";tol=" + std::to_string(spec.tol);
    }
    return tag;
}

template <class Fn>
void for_each_task(std::size_t count, unsigned workers, const Fn& fn) {
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t w = std::min<std::size_t>(workers, count);
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += w) fn(i);
        });
    }
}

}  // namespace

double kernel_value(const Path& a, const Path& b, const KernelSpec& spec) {
    if (a.dim() != b.dim()) throw DomainError("kernel: dimension mismatch");
    const bool swap = path_less(b, a);
    const Path& first = swap ? b : a;
    const Path& second = swap ? a : b;
    switch (spec.kind) {
        case KernelKind::SigTruncated:
            return signature_kernel(first, second, spec.tol).value;
        case KernelKind::SdSeries:
        case KernelKind::SdExplicit:
        case KernelKind::SdImplicit: {
            KernelOptions opts;
            opts.scheme = spec.kind == KernelKind::SdSeries     ? Scheme::Series
                          : spec.kind == KernelKind::SdExplicit ? Scheme::Explicit
                                                                : Scheme::Implicit;
            opts.partition = spec.partition;
            opts.tol = spec.tol;
            return k_sd(first, second, opts).value;
        }
    }
    return 0.0;
}

GramMatrix gram(const PathSample& a, const PathSample& b, const KernelSpec& spec) {
    if (a.dim() != b.dim()) throw DomainError("gram: samples have different dimensions");
    GramMatrix g;
    g.rows = a.size();
    g.cols = b.size();
    g.values.assign(g.rows * g.cols, 0.0);
    g.kernel_tag = tag_of(spec);
    for_each_task(g.rows * g.cols, spec.workers, [&](std::size_t idx) {
        g.values[idx] = kernel_value(a[idx / g.cols], b[idx % g.cols], spec);
    });
    return g;
}

GramMatrix gram(const PathSample& a, const KernelSpec& spec) {
    GramMatrix g;
    g.rows = g.cols = a.size();
    g.values.assign(g.rows * g.cols, 0.0);
    g.kernel_tag = tag_of(spec);
    std::vector<std::pair<std::size_t, std::size_t>> upper;
    for (std::size_t i = 0; i < g.rows; ++i) {
        for (std::size_t j = i; j < g.cols; ++j) upper.emplace_back(i, j);
    }
    for_each_task(upper.size(), spec.workers, [&](std::size_t t) {
        const auto [i, j] = upper[t];
        const double v = kernel_value(a[i], a[j], spec);
        g.values[i * g.cols + j] = v;
        g.values[j * g.cols + i] = v;
    });
    return g;
}

double min_eigenvalue(const GramMatrix& g) {
    if (g.rows != g.cols) throw DomainError("min_eigenvalue needs a square matrix");
    const auto n = static_cast<Eigen::Index>(g.rows);
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = 0.5 * (g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) +
                             g(static_cast<std::size_t>(j), static_cast<std::size_t>(i)));
        }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

namespace {

/// Mean of the selected entries, summed in sorted order so any permutation of
/// rows and columns gives the identical result.
double sorted_mean(const GramMatrix& g, bool skip_diagonal) {
    std::vector<double> v;
    v.reserve(g.values.size());
    for (std::size_t i = 0; i < g.rows; ++i) {
        for (std::size_t j = 0; j < g.cols; ++j) {
            if (skip_diagonal && i == j) continue;
            v.push_back(g(i, j));
        }
    }
    if (v.empty()) throw DomainError("U-statistic needs at least two paths per sample");
    std::sort(v.begin(), v.end());
    return pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size());
}

}  // namespace

double mmd2_from_gram(const GramMatrix& aa, const GramMatrix& bb, const GramMatrix& ab,
                      MmdStatistic stat) {
    const bool u = stat == MmdStatistic::U;
    return sorted_mean(aa, u) + sorted_mean(bb, u) - 2.0 * sorted_mean(ab, false);
}

double mmd2(const PathSample& a, const PathSample& b, const KernelSpec& spec, MmdStatistic stat) {
    if (a.dim() != b.dim()) throw DomainError("mmd2: samples have different dimensions");
    return mmd2_from_gram(gram(a, spec), gram(b, spec), gram(a, b, spec), stat);
}

}  // namespace sigdev
