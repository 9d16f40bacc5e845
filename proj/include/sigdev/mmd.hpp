#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sigdev/paths.hpp"
#include "sigdev/sdkernel.hpp"

namespace sigdev {

/// Empirical measure with uniform weights over equally dimensioned paths.
class PathSample {
public:
    explicit PathSample(std::vector<Path> paths);

    std::size_t size() const { return paths_.size(); }
    std::size_t dim() const { return paths_.front().dim(); }
    const Path& operator[](std::size_t i) const { return paths_[i]; }
    const std::vector<Path>& paths() const { return paths_; }

private:
    std::vector<Path> paths_;
};

enum class KernelKind { SdExplicit, SdImplicit, SdSeries, SigTruncated };

KernelKind parse_kernel_kind(std::string_view name);
std::string_view kernel_kind_name(KernelKind k);

struct KernelSpec {
    KernelKind kind = KernelKind::SdSeries;
    PartitionSpec partition;
    double tol = 1e-10;
    unsigned workers = 1;
};

/// Kernel value for one pair. The pair is evaluated in a canonical order
/// (lexicographic on the path data), so kernel(a, b) and kernel(b, a) are
/// bitwise equal.
double kernel_value(const Path& a, const Path& b, const KernelSpec& spec);

struct GramMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  ///< row-major
    std::string kernel_tag;

    double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

/// Entry (i, j) = kernel(a_i, b_j).
GramMatrix gram(const PathSample& a, const PathSample& b, const KernelSpec& spec);
/// Symmetric Gram matrix of one sample: the upper triangle is computed and mirrored.
GramMatrix gram(const PathSample& a, const KernelSpec& spec);

/// Smallest eigenvalue of a symmetric Gram matrix.
double min_eigenvalue(const GramMatrix& g);

enum class MmdStatistic { V, U };

/// MMD² = E k(γ,γ') + E k(σ,σ') − 2 E k(γ,σ) over the empirical measures.
/// The V-statistic keeps same-index terms; the U-statistic drops them from
/// the within-sample averages and needs at least two paths per sample.
double mmd2(const PathSample& a, const PathSample& b, const KernelSpec& spec,
            MmdStatistic stat = MmdStatistic::V);

/// The same from precomputed Gram matrices.
double mmd2_from_gram(const GramMatrix& aa, const GramMatrix& bb, const GramMatrix& ab,
                      MmdStatistic stat = MmdStatistic::V);

}  // namespace sigdev
