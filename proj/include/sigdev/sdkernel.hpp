#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sigdev/paths.hpp"

namespace sigdev {

/// Values K(t_i, t_j), i ≤ j, on the knots of a partition, stored as a packed
/// upper triangle (row i holds columns i..n).
class SolutionGrid {
public:
    explicit SolutionGrid(std::size_t n_knots);

    std::size_t knots() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[index(i, j)]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[index(i, j)]; }

    /// K(t_0, t_n).
    double full() const { return (*this)(0, n_ - 1); }

private:
    std::size_t index(std::size_t i, std::size_t j) const {
        return i * (2 * n_ - i + 1) / 2 + (j - i);
    }

    std::size_t n_;
    std::vector<double> values_;
};

/// Left-point scheme for K(s,t) = 1 − ∬_{s<u<r<t} K(s,u) K(u,r) <dγ_u, dγ_r>
/// driven by the piecewise-constant path with the given jumps:
///
///   K(a,b) = K(a,b−1) − Σ_{i=a}^{b−2} K(a,i) K(i+1,b−1) <Δ_i, Δ_{b−1}>,
///
/// where Δ_i is the increment over [t_i, t_{i+1}]. Cells on one anti-diagonal
/// (fixed b − a) are independent; `workers` > 1 splits each anti-diagonal
/// across threads without changing any value.
SolutionGrid solve_explicit(const IncrementSequence& incs, unsigned workers = 1);

/// Right-point scheme:
///
///   K(a,b) (1 + |Δ_{b−1}|²) = K(a,b−1) − Σ_{k=a+1}^{b−1} K(a,k) K(k,b) <Δ_{k−1}, Δ_{b−1}>.
SolutionGrid solve_implicit(const IncrementSequence& incs, unsigned workers = 1);

/// J₁(z) by its power series, stopping once the term ratio falls below 1e-16.
double bessel_j1_series(double z);

/// Exact kernel of a straight line: J₁(2x)/x with x = (t − s)·speed, 1 at x = 0.
double exact_straight_line(double speed, double s, double t);

/// Σ_{k ≤ terms} (−1)^k C_k x^{2k} / (2k)!.
double semicircle_characteristic_series(double x, int terms);

/// Series value with a certified bound on the omitted levels.
struct SeriesResult {
    double value = 0.0;
    double tail_bound = 0.0;
    int level = 0;  ///< highest (even) signature level included
};

/// Σ_{k} (−1)^k Σ_{|I| = 2k} φ(I) S^I_{s,t}(γ), truncated at the smallest even
/// level whose tail bound Σ_{m > L, m even} C_{m/2} |γ|_1^m / m! is ≤ tol.
/// Throws ResourceError if that needs a level above `max_level`; a negative
/// `max_level` means default_series_level(dim).
SeriesResult series_oracle(const Path& path, double s, double t, double tol, int max_level = -1);
SeriesResult series_oracle(const Path& path, double tol, int max_level = -1);

/// Largest even level L ≤ 24 with d^L ≤ 2^20 coefficients.
int default_series_level(std::size_t dim);

/// Tail Σ_{m > level, m even} C_{m/2} x^m / m! of the series oracle.
double series_tail_bound(double variation, int level);

/// Σ_k (−1)^k Σ_{|I| = 2k} φ(I) ISS^I for the iterated-sums signature of the
/// increments, using the enumerating moment. Exact for any sequence because
/// levels above the sequence length vanish.
double iss_series(const IncrementSequence& incs);

enum class Scheme { Explicit, Implicit, Series };

Scheme parse_scheme(std::string_view name);
std::string_view scheme_name(Scheme s);

/// How to discretize a path for the grid schemes: the path's own knots,
/// refined dyadically `lambda` times, then further refined until every
/// interval carries at most `max_variation` of 1-variation (0 disables).
struct PartitionSpec {
    int lambda = 0;
    double max_variation = 0.0;

    Partition resolve(const Path& path) const;
};

struct KernelOptions {
    Scheme scheme = Scheme::Explicit;
    PartitionSpec partition;
    double tol = 1e-10;
    int max_series_level = -1;  ///< negative: default_series_level
    unsigned workers = 1;
};

struct KernelEstimate {
    double value = 0.0;
    double tail_bound = 0.0;   ///< series only
    std::size_t intervals = 0; ///< grid schemes only
    int level = 0;             ///< series only
};

/// K_γ(0, T) of a single path.
KernelEstimate k_path(const Path& path, const KernelOptions& opts);

/// K_SD(γ, σ) = K_y(0, T) with y = γ followed by reversed σ.
KernelEstimate k_sd(const Path& gamma, const Path& sigma, const KernelOptions& opts);

/// Same, on an explicit partition of y's time span (grid schemes only use it).
KernelEstimate k_sd(const Path& gamma, const Path& sigma, Scheme scheme, const Partition& partition,
                    double tol = 1e-10);

}  // namespace sigdev
