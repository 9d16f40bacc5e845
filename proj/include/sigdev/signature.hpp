#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sigdev/paths.hpp"

namespace sigdev {

/// Largest number of coefficients allowed in a single signature level.
inline constexpr std::size_t kMaxLevelCoefficients = 10'000'000;

/// Levels 0..L of a tensor-algebra element over R^d, stored densely.
///
/// Level m holds d^m coefficients indexed by words (i_1, ..., i_m) in
/// lexicographic order, i.e. offset sum_k (i_k - 1) d^(m-1-k).
class TruncatedSignature {
public:
    /// The unit element (1, 0, 0, ...). Throws ResourceError if d^level is
    /// above kMaxLevelCoefficients.
    TruncatedSignature(std::size_t dim, int level);

    /// Truncated tensor exponential (w^{⊗m} / m!)_{m ≤ level} of one increment.
    static TruncatedSignature exp_segment(std::span<const double> w, int level);

    std::size_t dim() const { return dim_; }
    int level() const { return level_; }

    std::span<const double> level_tensor(int m) const { return levels_[static_cast<std::size_t>(m)]; }
    std::span<double> level_tensor(int m) { return levels_[static_cast<std::size_t>(m)]; }

    /// Truncated product; both operands must share dim and level.
    friend TruncatedSignature operator*(const TruncatedSignature& a, const TruncatedSignature& b);

    /// Right-multiplies in place by the tensor exponential of one increment.
    void extend(std::span<const double> w);

private:
    std::size_t dim_;
    int level_;
    std::vector<std::vector<double>> levels_;
};

/// Hilbert–Schmidt (Euclidean) norm of a level tensor.
double hs_norm(std::span<const double> tensor);

/// Signature of the path restricted to [s, t], computed segment by segment
/// with Chen's identity.
TruncatedSignature truncated_signature(const Path& path, double s, double t, int level);
TruncatedSignature truncated_signature(const Path& path, int level);

/// Discrete-time signature: level m is the sum over strictly increasing
/// index tuples i_1 < ... < i_m of Δ_{i_1} ⊗ ... ⊗ Δ_{i_m}.
TruncatedSignature iterated_sums_signature(const IncrementSequence& incs, int level);

/// Coefficient S^I for a word with letters in 1..d; the empty word gives 1.
double coordinate_coefficient(const TruncatedSignature& sig, std::span<const int> word);

/// Kernel value truncated at `level`, plus a bound on the omitted terms.
struct TruncatedKernel {
    double value = 0.0;
    double tail_bound = 0.0;
    int level = 0;
};

/// Sum over m ≤ level of <S_{0,s}(γ)^m, S_{0,t}(σ)^m>_HS. The tail bound is
/// sum_{m > level} (|γ|_1 |σ|_1)^m / (m!)^2 with 1-variations over [0,s], [0,t].
TruncatedKernel signature_kernel_truncated(const Path& gamma, const Path& sigma, double s, double t,
                                           int level);

/// Full-interval kernel with the level chosen so the tail bound is below `tol`.
TruncatedKernel signature_kernel(const Path& gamma, const Path& sigma, double tol = 1e-10,
                                 int max_level = 40);

/// sum_{m > level} x^m / (m!)^2.
double signature_kernel_tail(double x, int level);

/// Smallest level whose kernel tail bound for variation product x is below tol,
/// or -1 if none up to max_level.
int signature_kernel_level(double x, double tol, int max_level);

}  // namespace sigdev
