#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sigdev/paths.hpp"
#include "sigdev/sdkernel.hpp"

namespace sigdev {

using ComplexMatrix = Eigen::MatrixXcd;

enum class Ensemble { GUE, ComplexGinibre };

Ensemble parse_ensemble(std::string_view name);
std::string_view ensemble_name(Ensemble e);

struct EnsembleConfig {
    Ensemble kind = Ensemble::GUE;
    int dim_n = 1;
    int samples_m = 1;
    std::uint64_t seed = 0;
    int path_dim = 1;
    /// Upper bound on N·N·d·M.
    double memory_budget = 1e11;
    /// Threads used for independent samples; results do not depend on it.
    unsigned workers = 1;

    void validate() const;
};

/// The d matrices of sample `sample_index`. Each matrix is drawn from its own
/// generator keyed by (seed, sample_index, matrix_index), so samples can be
/// produced in any order.
///
/// GUE: Hermitian, real N(0,1) diagonal, off-diagonal real and imaginary parts
/// N(0,1/2). Complex Ginibre: every entry complex with N(0,1/2) parts.
/// Either way E|A(m,l)|² = 1.
std::vector<ComplexMatrix> sample_matrices(const EnsembleConfig& cfg, int sample_index);

/// Z = Π_k exp((i/√N) Σ_j A_j Δ_k^j), product taken left to right. Each
/// factor is formed from an eigendecomposition of the Hermitian generator, so
/// Z is unitary to roundoff. Throws DomainError for non-Hermitian input.
ComplexMatrix unitary_development(const IncrementSequence& incs, const std::vector<ComplexMatrix>& mats,
                                  int n);

/// Z = Π_k exp((1/√N) Σ_j A_j Δ_k^j) for arbitrary complex A_j.
ComplexMatrix gl_development(const IncrementSequence& incs, const std::vector<ComplexMatrix>& mats,
                             int n);

/// exp(X) by scaling and squaring: X is scaled by 2^-s so its 1-norm is at
/// most 1/2, exponentiated with a degree-16 Taylor polynomial (Paterson–Stockmeyer
/// evaluation), then squared s times.
ComplexMatrix expm(const ComplexMatrix& x);

/// max_ij |(Z*Z − I)_ij|.
double unitarity_defect(const ComplexMatrix& z);

struct MonteCarloEstimate {
    double estimate = 0.0;       ///< mean real part
    double std_error = 0.0;        ///< standard error of the mean real part
    double imag_mean_abs = 0.0;  ///< |mean imaginary part| (the limit is real)
    double imag_max_abs = 0.0;   ///< max per-sample |imaginary part|
    double max_unitarity_defect = 0.0;  ///< unitary estimator only
};

/// Mean over M GUE samples of (1/N) tr Z with Z the unitary development of
/// the path's increments on `partition`.
MonteCarloEstimate rk_montecarlo(const Path& path, const Partition& partition, const EnsembleConfig& cfg);

/// Mean over M Ginibre samples of (1/N) <Z_γ, Z_σ>_HS = (1/N) tr(Z_γ* Z_σ),
/// both developments driven by the same matrices.
MonteCarloEstimate sigkernel_montecarlo(const Path& gamma, const Path& sigma, const PartitionSpec& spec,
                                        const EnsembleConfig& cfg);

/// Sum in fixed pairwise order, independent of how the values were produced.
double pairwise_sum(const double* values, std::size_t n);

}  // namespace sigdev
