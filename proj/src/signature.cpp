#include "sigdev/signature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sigdev/errors.hpp"

namespace sigdev {

namespace {

std::size_t checked_power(std::size_t d, int m) {
    std::size_t n = 1;
    for (int k = 0; k < m; ++k) {
        if (n > kMaxLevelCoefficients / d) {
            throw ResourceError("signature level " + std::to_string(m) + " in dimension " +
                                std::to_string(d) + " exceeds " +
                                std::to_string(kMaxLevelCoefficients) + " coefficients");
        }
        n *= d;
    }
    return n;
}

}  // namespace

TruncatedSignature::TruncatedSignature(std::size_t dim, int level) : dim_(dim), level_(level) {
    if (dim == 0) throw DomainError("signature dimension must be at least 1");
    if (level < 0) throw DomainError("signature level must be nonnegative");
    levels_.resize(static_cast<std::size_t>(level) + 1);
    for (int m = 0; m <= level; ++m) levels_[static_cast<std::size_t>(m)].assign(checked_power(dim, m), 0.0);
    levels_[0][0] = 1.0;
}

TruncatedSignature TruncatedSignature::exp_segment(std::span<const double> w, int level) {
    TruncatedSignature out(w.size(), level);
    for (int m = 1; m <= level; ++m) {
        const auto& prev = out.levels_[static_cast<std::size_t>(m - 1)];
        auto& cur = out.levels_[static_cast<std::size_t>(m)];
        const double inv_m = 1.0 / static_cast<double>(m);
        const std::size_t d = w.size();
        for (std::size_t i = 0; i < prev.size(); ++i) {
            const double p = prev[i] * inv_m;
            for (std::size_t j = 0; j < d; ++j) cur[i * d + j] = p * w[j];
        }
    }
    return out;
}

TruncatedSignature operator*(const TruncatedSignature& a, const TruncatedSignature& b) {
    if (a.dim_ != b.dim_ || a.level_ != b.level_) {
        throw DomainError("signature product needs matching dimension and level");
    }
    TruncatedSignature out(a.dim_, a.level_);
    for (int m = 0; m <= a.level_; ++m) {
        auto& dst = out.levels_[static_cast<std::size_t>(m)];
        std::fill(dst.begin(), dst.end(), 0.0);
        for (int k = 0; k <= m; ++k) {
            const auto& x = a.levels_[static_cast<std::size_t>(k)];
            const auto& y = b.levels_[static_cast<std::size_t>(m - k)];
            const std::size_t ny = y.size();
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double xi = x[i];
                if (xi == 0.0) continue;
                double* row = dst.data() + i * ny;
                for (std::size_t j = 0; j < ny; ++j) row[j] += xi * y[j];
            }
        }
    }
    return out;
}

void TruncatedSignature::extend(std::span<const double> w) {
    if (w.size() != dim_) throw DomainError("increment dimension does not match signature");
    // (S ⊗ exp(w))_m = sum_k S_{m-k} ⊗ w^{⊗k}/k!. Evaluated Horner style from the
    // top level down, so each level only reads lower levels that are not yet updated.
    const std::size_t d = dim_;
    std::vector<double> acc;
    std::vector<double> next;
    for (int m = level_; m >= 1; --m) {
        // acc = S_0 w/m  (scalar level) ... built up as
        // acc_j = (acc_{j-1} + S_j) ⊗ w / (m - j), j = 0..m-1, result S_m + acc.
        acc.assign(1, levels_[0][0]);
        for (int j = 0; j < m; ++j) {
            const double scale = 1.0 / static_cast<double>(m - j);
            next.assign(acc.size() * d, 0.0);
            for (std::size_t i = 0; i < acc.size(); ++i) {
                const double p = acc[i] * scale;
                for (std::size_t k = 0; k < d; ++k) next[i * d + k] = p * w[k];
            }
            acc.swap(next);
            if (j + 1 < m) {
                const auto& sj = levels_[static_cast<std::size_t>(j + 1)];
                for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += sj[i];
            }
        }
        auto& dst = levels_[static_cast<std::size_t>(m)];
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += acc[i];
    }
}

double hs_norm(std::span<const double> tensor) {
    double s = 0.0;
    for (double x : tensor) s += x * x;
    return std::sqrt(s);
}

TruncatedSignature truncated_signature(const Path& path, double s, double t, int level) {
    if (!(s <= t)) throw DomainError("signature interval start after end");
    const double span = path.end_time() - path.start_time();
    const double slack = 1e-12 * std::max(1.0, span);
    if (s < path.start_time() - slack || t > path.end_time() + slack) {
        throw DomainError("signature interval outside the path's time span");
    }
    TruncatedSignature sig(path.dim(), level);
    if (s == t || path.size() == 1) return sig;

    const std::size_t d = path.dim();
    std::vector<double> prev = path.evaluate(s);
    std::vector<double> cur(d);
    std::vector<double> w(d);
    auto step_to = [&](double time, bool exact_sample, std::size_t idx) {
        if (exact_sample) {
            const auto p = path.point(idx);
            std::copy(p.begin(), p.end(), cur.begin());
        } else {
            path.evaluate(time, cur);
        }
        bool zero = true;
        for (std::size_t k = 0; k < d; ++k) {
            w[k] = cur[k] - prev[k];
            zero = zero && w[k] == 0.0;
        }
        if (!zero) sig.extend(w);
        std::swap(prev, cur);
    };
    for (std::size_t i = 0; i < path.size(); ++i) {
        const double ti = path.time(i);
        if (ti > s && ti < t) step_to(ti, true, i);
    }
    const bool t_is_end = t >= path.end_time();
    step_to(t, t_is_end, path.size() - 1);
    return sig;
}

TruncatedSignature truncated_signature(const Path& path, int level) {
    return truncated_signature(path, path.start_time(), path.end_time(), level);
}

TruncatedSignature iterated_sums_signature(const IncrementSequence& incs, int level) {
    const std::size_t d = incs.dim() == 0 ? 1 : incs.dim();
    TruncatedSignature sig(d, level);
    for (std::size_t k = 0; k < incs.size(); ++k) {
        const auto w = incs[k];
        // New index appended last: S_m += S_{m-1} ⊗ Δ_k, top level first.
        for (int m = level; m >= 1; --m) {
            const auto prev = sig.level_tensor(m - 1);
            auto cur = sig.level_tensor(m);
            for (std::size_t i = 0; i < prev.size(); ++i) {
                const double p = prev[i];
                if (p == 0.0) continue;
                for (std::size_t j = 0; j < d; ++j) cur[i * d + j] += p * w[j];
            }
        }
    }
    return sig;
}

double coordinate_coefficient(const TruncatedSignature& sig, std::span<const int> word) {
    if (static_cast<int>(word.size()) > sig.level()) {
        throw DomainError("word of length " + std::to_string(word.size()) +
                          " exceeds signature level " + std::to_string(sig.level()));
    }
    std::size_t offset = 0;
    for (int letter : word) {
        if (letter < 1 || static_cast<std::size_t>(letter) > sig.dim()) {
            throw DomainError("letter " + std::to_string(letter) + " outside 1.." +
                              std::to_string(sig.dim()));
        }
        offset = offset * sig.dim() + static_cast<std::size_t>(letter - 1);
    }
    return sig.level_tensor(static_cast<int>(word.size()))[offset];
}

double signature_kernel_tail(double x, int level) {
    // Terms x^m/(m!)^2 decay superexponentially once m > sqrt(x).
    double term = 1.0;
    for (int m = 1; m <= level; ++m) term *= x / (static_cast<double>(m) * m);
    double tail = 0.0;
    for (int m = level + 1; m < level + 400; ++m) {
        term *= x / (static_cast<double>(m) * m);
        tail += term;
        if (term <= 1e-300 || (m > x && term < 1e-20 * tail)) break;
    }
    return tail;
}

int signature_kernel_level(double x, double tol, int max_level) {
    for (int level = 0; level <= max_level; ++level) {
        if (signature_kernel_tail(x, level) <= tol) return level;
    }
    return -1;
}

TruncatedKernel signature_kernel_truncated(const Path& gamma, const Path& sigma, double s, double t,
                                           int level) {
    if (gamma.dim() != sigma.dim()) {
        throw DomainError("signature kernel: dimension mismatch");
    }
    const auto sg = truncated_signature(gamma, gamma.start_time(), s, level);
    const auto ss = truncated_signature(sigma, sigma.start_time(), t, level);
    TruncatedKernel out;
    out.level = level;
    for (int m = 0; m <= level; ++m) {
        const auto a = sg.level_tensor(m);
        const auto b = ss.level_tensor(m);
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
        out.value += acc;
    }
    const double x = one_variation(gamma, gamma.start_time(), s) *
                     one_variation(sigma, sigma.start_time(), t);
    out.tail_bound = signature_kernel_tail(x, level);
    return out;
}

TruncatedKernel signature_kernel(const Path& gamma, const Path& sigma, double tol, int max_level) {
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    const double x = one_variation(gamma) * one_variation(sigma);
    const int level = signature_kernel_level(x, tol, max_level);
    if (level < 0) {
        throw ResourceError("signature kernel tail bound " +
                            fmt_num(signature_kernel_tail(x, max_level)) +
                            " at level cap " + std::to_string(max_level) + " exceeds tolerance");
    }
    return signature_kernel_truncated(gamma, sigma, gamma.end_time(), sigma.end_time(), level);
}

}  // namespace sigdev
