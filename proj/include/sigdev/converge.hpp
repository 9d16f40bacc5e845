#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigdev/paths.hpp"
#include "sigdev/sdkernel.hpp"

namespace sigdev {

struct ConvergeConfig {
    Scheme scheme = Scheme::Implicit;  ///< explicit or implicit
    std::vector<int> lambdas{0, 1, 2, 3, 4, 5};
    std::vector<int> matrix_dims{10, 20, 50, 100, 200};
    int mc_samples = 50;
    std::uint64_t seed = 0;
    double tol = 1e-10;
    unsigned workers = 1;
};

/// One output row: kind is "scheme" (param = λ) or "montecarlo" (param = N).
struct ConvergeRow {
    std::string kind;
    int param = 0;
    double value = 0.0;
    double reference = 0.0;
    double abs_error = 0.0;
    double std_error = 0.0;  ///< Monte Carlo rows only
};

struct ConvergeTable {
    std::vector<ConvergeRow> rows;
    /// "bessel" (d = 1 closed form), "series" or "richardson".
    std::string reference_method;
    double reference = 0.0;
};

/// K_γ(0, T) reference for a single path. In d = 1 only the total increment
/// matters and the closed form applies. Otherwise the series oracle is used
/// when it reaches `tol`; if not, the grid scheme is Richardson-extrapolated
/// from dyadic orders `fallback_lambda` − 1 and `fallback_lambda`.
double converge_reference(const Path& path, Scheme scheme, double tol, int fallback_lambda,
                          std::string* method = nullptr, unsigned workers = 1);

/// Scheme errors across dyadic orders and unitary Monte Carlo estimates
/// across matrix sizes, all against the same reference.
ConvergeTable converge_study(const Path& path, const ConvergeConfig& cfg);

}  // namespace sigdev
