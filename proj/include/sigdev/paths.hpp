#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sigdev {

/// Continuous piecewise-linear path in R^d, stored as sample times and points.
///
/// Points are kept row-major in one buffer: point i occupies
/// [i * dim, (i + 1) * dim). A single-point path is a constant path.
class Path {
public:
    Path() = default;

    /// Throws DomainError unless times are strictly increasing, every point has
    /// `dim` finite coordinates and there is at least one sample.
    Path(std::vector<double> times, std::vector<double> flat_points, std::size_t dim);
    Path(std::vector<double> times, const std::vector<std::vector<double>>& points);

    std::size_t size() const { return times_.size(); }
    std::size_t dim() const { return dim_; }
    bool empty() const { return times_.empty(); }

    double time(std::size_t i) const { return times_[i]; }
    std::span<const double> point(std::size_t i) const {
        return {points_.data() + i * dim_, dim_};
    }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& flat_points() const { return points_; }

    double start_time() const { return times_.front(); }
    double end_time() const { return times_.back(); }

    /// Linear interpolation at t; t is clamped to the time span.
    std::vector<double> evaluate(double t) const;
    void evaluate(double t, std::span<double> out) const;

    /// Endpoint minus start point.
    std::vector<double> displacement() const;

    /// Same times, points multiplied by `factor`.
    Path scaled(double factor) const;

    friend bool operator==(const Path&, const Path&) = default;

private:
    std::vector<double> times_;
    std::vector<double> points_;
    std::size_t dim_ = 0;
};

/// Strictly increasing knot sequence used to discretize a path.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<double> knots);

    static Partition uniform(double start, double end, std::size_t n_intervals);
    /// The path's own sample times.
    static Partition of(const Path& path);

    std::size_t size() const { return knots_.size(); }
    std::size_t intervals() const { return knots_.empty() ? 0 : knots_.size() - 1; }
    double operator[](std::size_t i) const { return knots_[i]; }
    const std::vector<double>& knots() const { return knots_; }
    double front() const { return knots_.front(); }
    double back() const { return knots_.back(); }
    double mesh() const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<double> knots_;
};

/// Increments Δ_k = γ(t_{k+1}) − γ(t_k) of a path over a partition.
class IncrementSequence {
public:
    IncrementSequence() = default;
    IncrementSequence(std::vector<double> flat, std::size_t dim);

    std::size_t size() const { return dim_ == 0 ? 0 : flat_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    bool empty() const { return size() == 0; }

    std::span<const double> operator[](std::size_t k) const {
        return {flat_.data() + k * dim_, dim_};
    }
    const std::vector<double>& flat() const { return flat_; }

    /// Sum of all increments.
    std::vector<double> total() const;

    /// Copy with a zero increment inserted before position `at` (at == size() appends).
    IncrementSequence with_zero_inserted(std::size_t at) const;

private:
    std::vector<double> flat_;
    std::size_t dim_ = 0;
};

double dot(std::span<const double> a, std::span<const double> b);
double euclidean_norm(std::span<const double> a);

/// Length of the path restricted to [s, t]. Throws DomainError if the
/// interval is reversed or leaves the path's time span.
double one_variation(const Path& path, double s, double t);
double one_variation(const Path& path);

/// γ followed by the time reversal of σ. The reversed σ is translated to start
/// at γ's endpoint and its time stamps continue contiguously after γ's, so the
/// junction point appears once.
Path concat_reverse(const Path& gamma, const Path& sigma);

/// Increments of the path evaluated at the partition knots. The partition must
/// start and end at the path's start and end times.
IncrementSequence piecewise_constant_increments(const Path& path, const Partition& partition);
/// Increments between consecutive samples of the path.
IncrementSequence increments(const Path& path);

/// Splits every knot interval into 2^lambda equal pieces.
Partition dyadic_refine(const Partition& partition, int lambda);

/// Refines each interval dyadically until the path's 1-variation on every
/// sub-interval is at most `max_variation`.
Partition refine_to_variation(const Path& path, const Partition& partition, double max_variation);

/// Largest 1-variation of the path over a single partition interval.
double max_interval_variation(const Path& path, const Partition& partition);

/// Fractional Brownian motion on a uniform grid of [0, 1] with independent
/// coordinates, drawn exactly from the Cholesky factor of its covariance.
/// The returned path starts at the origin.
Path gen_fbm(double hurst, std::size_t n_points, std::size_t dim, std::uint64_t seed);

}  // namespace sigdev
