#include "sigdev/randomdev.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "sigdev/errors.hpp"

namespace sigdev {

Ensemble parse_ensemble(std::string_view name) {
    if (name == "gue") return Ensemble::GUE;
    if (name == "ginibre" || name == "complex_ginibre") return Ensemble::ComplexGinibre;
    throw DomainError("unknown ensemble '" + std::string(name) + "'");
}

std::string_view ensemble_name(Ensemble e) {
    return e == Ensemble::GUE ? "gue" : "complex_ginibre";
}

void EnsembleConfig::validate() const {
    if (dim_n < 1) throw DomainError("matrix dimension N must be at least 1");
    if (samples_m < 1) throw DomainError("sample count M must be at least 1");
    if (path_dim < 1) throw DomainError("path dimension must be at least 1");
    const double entries = static_cast<double>(dim_n) * dim_n * path_dim * samples_m;
    if (entries > memory_budget) {
        throw ResourceError("N*N*d*M = " + std::to_string(entries) + " exceeds the budget of " +
                            std::to_string(memory_budget));
    }
}

std::vector<ComplexMatrix> sample_matrices(const EnsembleConfig& cfg, int sample_index) {
    cfg.validate();
    if (sample_index < 0 || sample_index >= cfg.samples_m) {
        throw DomainError("sample index " + std::to_string(sample_index) + " outside 0.." +
                          std::to_string(cfg.samples_m - 1));
    }
    const auto n = static_cast<Eigen::Index>(cfg.dim_n);
    const double half_sd = std::sqrt(0.5);
    std::vector<ComplexMatrix> out;
    out.reserve(static_cast<std::size_t>(cfg.path_dim));
    for (int i = 0; i < cfg.path_dim; ++i) {
        std::seed_seq key{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                          static_cast<std::uint32_t>(sample_index), static_cast<std::uint32_t>(i),
                          static_cast<std::uint32_t>(cfg.kind)};
        std::mt19937_64 rng(key);
        std::normal_distribution<double> normal(0.0, 1.0);
        ComplexMatrix a(n, n);
        if (cfg.kind == Ensemble::GUE) {
            for (Eigen::Index r = 0; r < n; ++r) {
                a(r, r) = {normal(rng), 0.0};
                for (Eigen::Index c = r + 1; c < n; ++c) {
                    const double re = half_sd * normal(rng);
                    const double im = half_sd * normal(rng);
                    a(r, c) = {re, im};
                    a(c, r) = {re, -im};
                }
            }
        } else {
            for (Eigen::Index r = 0; r < n; ++r) {
                for (Eigen::Index c = 0; c < n; ++c) {
                    const double re = half_sd * normal(rng);
                    const double im = half_sd * normal(rng);
                    a(r, c) = {re, im};
                }
            }
        }
        out.push_back(std::move(a));
    }
    return out;
}

namespace {

void check_shapes(const IncrementSequence& incs, const std::vector<ComplexMatrix>& mats, int n) {
    if (n < 1) throw DomainError("development dimension must be at least 1");
    if (!incs.empty() && incs.dim() != mats.size()) {
        throw DomainError("increment dimension " + std::to_string(incs.dim()) + " does not match " +
                          std::to_string(mats.size()) + " matrices");
    }
    for (const auto& m : mats) {
        if (m.rows() != n || m.cols() != n) throw DomainError("matrix shape does not match N");
    }
}

bool is_zero(std::span<const double> w) {
    return std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; });
}

ComplexMatrix hermitian_exp(const Eigen::SelfAdjointEigenSolver<ComplexMatrix>& es, double scale) {
    const auto& vals = es.eigenvalues();
    Eigen::VectorXcd phase(vals.size());
    for (Eigen::Index k = 0; k < vals.size(); ++k) phase(k) = std::polar(1.0, scale * vals(k));
    const ComplexMatrix& v = es.eigenvectors();
    return v * phase.asDiagonal() * v.adjoint();
}

ComplexMatrix generator(const IncrementSequence& incs, std::size_t k,
                        const std::vector<ComplexMatrix>& mats) {
    const auto w = incs[k];
    ComplexMatrix h = ComplexMatrix::Zero(mats.front().rows(), mats.front().cols());
    for (std::size_t j = 0; j < mats.size(); ++j) {
        if (w[j] != 0.0) h += w[j] * mats[j];
    }
    return h;
}

}  // namespace

ComplexMatrix unitary_development(const IncrementSequence& incs, const std::vector<ComplexMatrix>& mats,
                                  int n) {
    check_shapes(incs, mats, n);
    for (const auto& a : mats) {
        const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
        if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
            throw DomainError("unitary development needs Hermitian matrices");
        }
    }
    ComplexMatrix z = ComplexMatrix::Identity(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    if (mats.size() == 1) {
        // One generator direction: all factors commute, so the product is a
        // single exponential of the summed increment.
        double total = 0.0;
        for (std::size_t k = 0; k < incs.size(); ++k) total += incs[k][0];
        if (total == 0.0) return z;
        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mats.front());
        return hermitian_exp(es, scale * total);
    }
    for (std::size_t k = 0; k < incs.size(); ++k) {
        if (is_zero(incs[k])) continue;
        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(generator(incs, k, mats));
        z = z * hermitian_exp(es, scale);
    }
    return z;
}

ComplexMatrix expm(const ComplexMatrix& x) {
    const Eigen::Index n = x.rows();
    const double norm = x.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const ComplexMatrix a = x / std::ldexp(1.0, squarings);

    // Degree-16 Taylor polynomial, Paterson–Stockmeyer with blocks of 4:
    // p(A) = B0 + A4 (B1 + A4 (B2 + A4 B3)), Bj = Σ_{r<4} c_{4j+r} A^r, plus c16 A4^4.
    constexpr int kDegree = 16;
    double coef[kDegree + 1];
    coef[0] = 1.0;
    for (int k = 1; k <= kDegree; ++k) coef[k] = coef[k - 1] / k;

    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a3 = a2 * a;
    const ComplexMatrix a4 = a2 * a2;
    auto block = [&](int j) {
        return ComplexMatrix(coef[4 * j] * id + coef[4 * j + 1] * a + coef[4 * j + 2] * a2 +
                             coef[4 * j + 3] * a3);
    };
    ComplexMatrix p = block(3) + coef[16] * a4;
    p = block(2) + a4 * p;
    p = block(1) + a4 * p;
    p = block(0) + a4 * p;
    for (int s = 0; s < squarings; ++s) p = p * p;
    return p;
}

ComplexMatrix gl_development(const IncrementSequence& incs, const std::vector<ComplexMatrix>& mats,
                             int n) {
    check_shapes(incs, mats, n);
    ComplexMatrix z = ComplexMatrix::Identity(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < incs.size(); ++k) {
        if (is_zero(incs[k])) continue;
        z = z * expm(scale * generator(incs, k, mats));
    }
    return z;
}

double unitarity_defect(const ComplexMatrix& z) {
    const ComplexMatrix d = z.adjoint() * z - ComplexMatrix::Identity(z.rows(), z.cols());
    return d.cwiseAbs().maxCoeff();
}

double pairwise_sum(const double* values, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += values[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

namespace {

struct SampleValue {
    double re = 0.0;
    double im = 0.0;
    double defect = 0.0;
};

template <class Fn>
std::vector<SampleValue> run_samples(const EnsembleConfig& cfg, const Fn& fn) {
    std::vector<SampleValue> out(static_cast<std::size_t>(cfg.samples_m));
    const unsigned w = std::max(1U, std::min<unsigned>(cfg.workers, static_cast<unsigned>(cfg.samples_m)));
    if (w == 1) {
        for (int m = 0; m < cfg.samples_m; ++m) out[static_cast<std::size_t>(m)] = fn(m);
        return out;
    }
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            for (int m = static_cast<int>(t); m < cfg.samples_m; m += static_cast<int>(w)) {
                out[static_cast<std::size_t>(m)] = fn(m);
            }
        });
    }
    pool.clear();
    return out;
}

MonteCarloEstimate summarize(const std::vector<SampleValue>& samples) {
    const std::size_t m = samples.size();
    std::vector<double> re(m), im(m);
    MonteCarloEstimate out;
    for (std::size_t i = 0; i < m; ++i) {
        re[i] = samples[i].re;
        im[i] = samples[i].im;
        out.imag_max_abs = std::max(out.imag_max_abs, std::abs(samples[i].im));
        out.max_unitarity_defect = std::max(out.max_unitarity_defect, samples[i].defect);
    }
    const double md = static_cast<double>(m);
    out.estimate = pairwise_sum(re.data(), m) / md;
    out.imag_mean_abs = std::abs(pairwise_sum(im.data(), m) / md);
    if (m > 1) {
        std::vector<double> sq(m);
        for (std::size_t i = 0; i < m; ++i) sq[i] = (re[i] - out.estimate) * (re[i] - out.estimate);
        out.std_error = std::sqrt(pairwise_sum(sq.data(), m) / (md - 1.0) / md);
    }
    return out;
}

}  // namespace

MonteCarloEstimate rk_montecarlo(const Path& path, const Partition& partition, const EnsembleConfig& cfg) {
    cfg.validate();
    if (cfg.kind != Ensemble::GUE) throw DomainError("rk_montecarlo needs the GUE ensemble");
    if (static_cast<std::size_t>(cfg.path_dim) != path.dim()) {
        throw DomainError("ensemble path_dim does not match the path dimension");
    }
    const auto incs = piecewise_constant_increments(path, partition);
    const bool trivial = std::all_of(incs.flat().begin(), incs.flat().end(), [](double x) { return x == 0.0; });
    const auto samples = run_samples(cfg, [&](int m) {
        SampleValue v;
        if (trivial) {
            v.re = 1.0;
            return v;
        }
        const auto z = unitary_development(incs, sample_matrices(cfg, m), cfg.dim_n);
        const std::complex<double> tr = z.trace() / static_cast<double>(cfg.dim_n);
        v.re = tr.real();
        v.im = tr.imag();
        v.defect = unitarity_defect(z);
        return v;
    });
    return summarize(samples);
}

MonteCarloEstimate sigkernel_montecarlo(const Path& gamma, const Path& sigma, const PartitionSpec& spec,
                                        const EnsembleConfig& cfg) {
    cfg.validate();
    if (cfg.kind != Ensemble::ComplexGinibre) {
        throw DomainError("sigkernel_montecarlo needs the complex Ginibre ensemble");
    }
    if (gamma.dim() != sigma.dim()) throw DomainError("sigkernel_montecarlo: dimension mismatch");
    if (static_cast<std::size_t>(cfg.path_dim) != gamma.dim()) {
        throw DomainError("ensemble path_dim does not match the path dimension");
    }
    const auto inc_g = piecewise_constant_increments(gamma, spec.resolve(gamma));
    const auto inc_s = piecewise_constant_increments(sigma, spec.resolve(sigma));
    const bool same = inc_g.flat() == inc_s.flat();
    const double n = static_cast<double>(cfg.dim_n);

    const auto samples = run_samples(cfg, [&](int m) {
        const auto mats = sample_matrices(cfg, m);
        const ComplexMatrix zg = gl_development(inc_g, mats, cfg.dim_n);
        const ComplexMatrix zs = same ? zg : gl_development(inc_s, mats, cfg.dim_n);
        // tr(Zg* Zs) = Σ conj(g_ij) s_ij; the real part is written symmetrically
        // so swapping the two paths reproduces it bit for bit.
        double re = 0.0;
        double im = 0.0;
        for (Eigen::Index c = 0; c < zg.cols(); ++c) {
            for (Eigen::Index r = 0; r < zg.rows(); ++r) {
                const auto g = zg(r, c);
                const auto s = zs(r, c);
                re += g.real() * s.real() + g.imag() * s.imag();
                im += g.real() * s.imag() - g.imag() * s.real();
            }
        }
        return SampleValue{re / n, im / n, 0.0};
    });
    return summarize(samples);
}

}  // namespace sigdev
