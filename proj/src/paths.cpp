#include "sigdev/paths.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "sigdev/errors.hpp"

namespace sigdev {

namespace {

void check_strictly_increasing(const std::vector<double>& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw DomainError(std::string(what) + ": non-finite value at index " + std::to_string(i));
        }
        if (i > 0 && !(v[i] > v[i - 1])) {
            throw DomainError(std::string(what) + ": not strictly increasing at index " +
                              std::to_string(i));
        }
    }
}

bool close_to(double a, double b, double scale) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, scale);
}

}  // namespace

Path::Path(std::vector<double> times, std::vector<double> flat_points, std::size_t dim)
    : times_(std::move(times)), points_(std::move(flat_points)), dim_(dim) {
    if (times_.empty()) throw DomainError("path needs at least one sample");
    if (dim_ == 0) throw DomainError("path dimension must be at least 1");
    if (points_.size() != times_.size() * dim_) {
        throw DomainError("path has " + std::to_string(times_.size()) + " times but " +
                          std::to_string(points_.size()) + " coordinates for dimension " +
                          std::to_string(dim_));
    }
    check_strictly_increasing(times_, "path times");
    for (double x : points_) {
        if (!std::isfinite(x)) throw DomainError("path has a non-finite coordinate");
    }
}

Path::Path(std::vector<double> times, const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw DomainError("path needs at least one sample");
    const std::size_t d = points.front().size();
    std::vector<double> flat;
    flat.reserve(points.size() * d);
    for (const auto& p : points) {
        if (p.size() != d) throw DomainError("path points have inconsistent dimension");
        flat.insert(flat.end(), p.begin(), p.end());
    }
    *this = Path(std::move(times), std::move(flat), d);
}

void Path::evaluate(double t, std::span<double> out) const {
    if (t <= times_.front() || size() == 1) {
        std::copy_n(points_.begin(), dim_, out.begin());
        return;
    }
    if (t >= times_.back()) {
        std::copy_n(points_.end() - static_cast<std::ptrdiff_t>(dim_), dim_, out.begin());
        return;
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    const auto a = point(lo);
    const auto b = point(hi);
    for (std::size_t k = 0; k < dim_; ++k) out[k] = a[k] + w * (b[k] - a[k]);
}

std::vector<double> Path::evaluate(double t) const {
    std::vector<double> out(dim_);
    evaluate(t, out);
    return out;
}

std::vector<double> Path::displacement() const {
    std::vector<double> out(dim_);
    const auto a = point(0);
    const auto b = point(size() - 1);
    for (std::size_t k = 0; k < dim_; ++k) out[k] = b[k] - a[k];
    return out;
}

Path Path::scaled(double factor) const {
    std::vector<double> pts = points_;
    for (double& x : pts) x *= factor;
    return Path(times_, std::move(pts), dim_);
}

Partition::Partition(std::vector<double> knots) : knots_(std::move(knots)) {
    if (knots_.empty()) throw DomainError("partition needs at least one knot");
    check_strictly_increasing(knots_, "partition knots");
}

Partition Partition::uniform(double start, double end, std::size_t n_intervals) {
    if (n_intervals == 0 || !(end > start)) {
        throw DomainError("uniform partition needs end > start and at least one interval");
    }
    std::vector<double> k(n_intervals + 1);
    for (std::size_t i = 0; i <= n_intervals; ++i) {
        k[i] = start + (end - start) * static_cast<double>(i) / static_cast<double>(n_intervals);
    }
    k.back() = end;
    return Partition(std::move(k));
}

Partition Partition::of(const Path& path) { return Partition(path.times()); }

double Partition::mesh() const {
    double m = 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i) m = std::max(m, knots_[i] - knots_[i - 1]);
    return m;
}

IncrementSequence::IncrementSequence(std::vector<double> flat, std::size_t dim)
    : flat_(std::move(flat)), dim_(dim) {
    if (dim_ == 0) throw DomainError("increment dimension must be at least 1");
    if (flat_.size() % dim_ != 0) throw DomainError("increment buffer is not a multiple of dim");
    for (double x : flat_) {
        if (!std::isfinite(x)) throw DomainError("non-finite increment");
    }
}

std::vector<double> IncrementSequence::total() const {
    std::vector<double> out(dim_, 0.0);
    for (std::size_t k = 0; k < size(); ++k) {
        const auto d = (*this)[k];
        for (std::size_t j = 0; j < dim_; ++j) out[j] += d[j];
    }
    return out;
}

IncrementSequence IncrementSequence::with_zero_inserted(std::size_t at) const {
    if (at > size()) throw DomainError("insertion index past the end");
    std::vector<double> flat = flat_;
    flat.insert(flat.begin() + static_cast<std::ptrdiff_t>(at * dim_), dim_, 0.0);
    return IncrementSequence(std::move(flat), dim_);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double euclidean_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double one_variation(const Path& path, double s, double t) {
    if (!(s <= t)) throw DomainError("one_variation: interval start after end");
    const double span = path.end_time() - path.start_time();
    if (s < path.start_time() - 1e-12 * std::max(1.0, std::abs(span)) ||
        t > path.end_time() + 1e-12 * std::max(1.0, std::abs(span))) {
        throw DomainError("one_variation: interval outside the path's time span");
    }
    if (s == t || path.size() == 1) return 0.0;

    double total = 0.0;
    const std::size_t d = path.dim();
    std::vector<double> a(d), b(d);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const double lo = std::max(s, path.time(i));
        const double hi = std::min(t, path.time(i + 1));
        if (!(hi > lo)) continue;
        const double frac = (hi - lo) / (path.time(i + 1) - path.time(i));
        const auto p = path.point(i);
        const auto q = path.point(i + 1);
        double len2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) len2 += (q[k] - p[k]) * (q[k] - p[k]);
        total += frac * std::sqrt(len2);
    }
    return total;
}

double one_variation(const Path& path) {
    return one_variation(path, path.start_time(), path.end_time());
}

Path concat_reverse(const Path& gamma, const Path& sigma) {
    if (gamma.dim() != sigma.dim()) {
        throw DomainError("concat_reverse: dimension mismatch (" + std::to_string(gamma.dim()) +
                          " vs " + std::to_string(sigma.dim()) + ")");
    }
    const std::size_t d = gamma.dim();
    const std::size_t m = sigma.size();
    std::vector<double> times = gamma.times();
    std::vector<double> pts = gamma.flat_points();
    times.reserve(gamma.size() + m - 1);
    pts.reserve((gamma.size() + m - 1) * d);

    const auto g_end = gamma.point(gamma.size() - 1);
    const auto s_end = sigma.point(m - 1);
    const double t0 = gamma.end_time();
    const double s_last = sigma.end_time();
    for (std::size_t r = 1; r < m; ++r) {
        const std::size_t src = m - 1 - r;
        times.push_back(t0 + (s_last - sigma.time(src)));
        const auto p = sigma.point(src);
        for (std::size_t k = 0; k < d; ++k) pts.push_back(g_end[k] + (p[k] - s_end[k]));
    }
    return Path(std::move(times), std::move(pts), d);
}

namespace {

void check_covers(const Path& path, const Partition& partition) {
    const double span = path.end_time() - path.start_time();
    if (partition.size() == 0 || !close_to(partition.front(), path.start_time(), span) ||
        !close_to(partition.back(), path.end_time(), span)) {
        throw DomainError("partition does not cover the path's time span");
    }
}

}  // namespace

IncrementSequence piecewise_constant_increments(const Path& path, const Partition& partition) {
    check_covers(path, partition);
    const std::size_t d = path.dim();
    const std::size_t n = partition.intervals();
    std::vector<double> flat(n * d);
    std::vector<double> prev = path.evaluate(partition[0]);
    std::vector<double> cur(d);
    for (std::size_t k = 0; k < n; ++k) {
        // Endpoints are pinned to the samples so the increments telescope to the
        // exact displacement.
        if (k + 1 == n) {
            const auto last = path.point(path.size() - 1);
            std::copy(last.begin(), last.end(), cur.begin());
        } else {
            path.evaluate(partition[k + 1], cur);
        }
        for (std::size_t j = 0; j < d; ++j) flat[k * d + j] = cur[j] - prev[j];
        std::swap(prev, cur);
    }
    return IncrementSequence(std::move(flat), d);
}

IncrementSequence increments(const Path& path) {
    const std::size_t d = path.dim();
    std::vector<double> flat((path.size() - 1) * d);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const auto a = path.point(k);
        const auto b = path.point(k + 1);
        for (std::size_t j = 0; j < d; ++j) flat[k * d + j] = b[j] - a[j];
    }
    return IncrementSequence(std::move(flat), d);
}

Partition dyadic_refine(const Partition& partition, int lambda) {
    if (lambda < 0) throw DomainError("dyadic order must be nonnegative");
    if (lambda == 0 || partition.size() < 2) return partition;
    if (lambda > 30) throw ResourceError("dyadic order above 30");
    const std::size_t pieces = std::size_t{1} << lambda;
    std::vector<double> out;
    out.reserve(partition.intervals() * pieces + 1);
    for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
        const double a = partition[i];
        const double b = partition[i + 1];
        for (std::size_t k = 0; k < pieces; ++k) {
            out.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(pieces));
        }
    }
    out.push_back(partition.back());
    return Partition(std::move(out));
}

double max_interval_variation(const Path& path, const Partition& partition) {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
        worst = std::max(worst, one_variation(path, partition[i], partition[i + 1]));
    }
    return worst;
}

Partition refine_to_variation(const Path& path, const Partition& partition, double max_variation) {
    if (!(max_variation > 0.0)) throw DomainError("variation target must be positive");
    check_covers(path, partition);
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
        const double a = partition[i];
        const double b = partition[i + 1];
        std::size_t pieces = 1;
        for (int level = 0;; ++level) {
            if (level > 30) throw ResourceError("variation target needs more than 2^30 splits");
            double worst = 0.0;
            for (std::size_t k = 0; k < pieces; ++k) {
                const double lo = a + (b - a) * static_cast<double>(k) / static_cast<double>(pieces);
                const double hi = k + 1 == pieces
                                      ? b
                                      : a + (b - a) * static_cast<double>(k + 1) /
                                                static_cast<double>(pieces);
                worst = std::max(worst, one_variation(path, lo, hi));
            }
            if (worst <= max_variation) break;
            pieces *= 2;
        }
        for (std::size_t k = 0; k < pieces; ++k) {
            out.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(pieces));
        }
    }
    out.push_back(partition.back());
    return Partition(std::move(out));
}

Path gen_fbm(double hurst, std::size_t n_points, std::size_t dim, std::uint64_t seed) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst parameter must lie in (0, 1)");
    if (n_points < 2) throw DomainError("fBm needs at least two points");
    if (dim == 0) throw DomainError("fBm dimension must be at least 1");

    const std::size_t n = n_points - 1;  // B(0) = 0 is not random
    std::vector<double> times(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        times[i] = static_cast<double>(i) / static_cast<double>(n);
    }
    times.back() = 1.0;

    Eigen::MatrixXd cov(n, n);
    const double two_h = 2.0 * hurst;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double s = times[i + 1];
            const double t = times[j + 1];
            const double r = 0.5 * (std::pow(s, two_h) + std::pow(t, two_h) -
                                    std::pow(std::abs(s - t), two_h));
            cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r;
            cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = r;
        }
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw NumericError("fBm covariance is not numerically positive definite");
    }
    const Eigen::MatrixXd lower = llt.matrixL();

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<double> pts(n_points * dim, 0.0);
    Eigen::VectorXd z(n);
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t i = 0; i < n; ++i) z(static_cast<Eigen::Index>(i)) = normal(rng);
        const Eigen::VectorXd x = lower * z;
        for (std::size_t i = 0; i < n; ++i) pts[(i + 1) * dim + c] = x(static_cast<Eigen::Index>(i));
    }
    return Path(std::move(times), std::move(pts), dim);
}

}  // namespace sigdev
