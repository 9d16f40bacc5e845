#include "sigdev/converge.hpp"

#include <algorithm>
#include <cmath>

#include "sigdev/errors.hpp"
#include "sigdev/randomdev.hpp"

namespace sigdev {

namespace {

double grid_value(const Path& path, Scheme scheme, int lambda, unsigned workers) {
    KernelOptions opts;
    opts.scheme = scheme;
    opts.partition.lambda = lambda;
    opts.workers = workers;
    return k_path(path, opts).value;
}

}  // namespace

double converge_reference(const Path& path, Scheme scheme, double tol, int fallback_lambda,
                          std::string* method, unsigned workers) {
    auto set = [&](const char* m) {
        if (method) *method = m;
    };
    if (path.dim() == 1) {
        set("bessel");
        return exact_straight_line(std::abs(path.displacement()[0]), 0.0, 1.0);
    }
    try {
        const double v = series_oracle(path, tol).value;
        set("series");
        return v;
    } catch (const ResourceError&) {
    }
    if (scheme == Scheme::Series) throw DomainError("converge needs a grid scheme");
    set("richardson");
    const double coarse = grid_value(path, scheme, fallback_lambda - 1, workers);
    const double fine = grid_value(path, scheme, fallback_lambda, workers);
    return 2.0 * fine - coarse;
}

ConvergeTable converge_study(const Path& path, const ConvergeConfig& cfg) {
    if (cfg.scheme == Scheme::Series) throw DomainError("converge compares the grid schemes");
    if (cfg.lambdas.empty() && cfg.matrix_dims.empty()) throw DomainError("converge: nothing to compute");
    for (int l : cfg.lambdas) {
        if (l < 0 || l > 12) throw DomainError("converge: lambda must lie in 0..12");
    }
    const int lambda_max = cfg.lambdas.empty() ? 0 : *std::max_element(cfg.lambdas.begin(), cfg.lambdas.end());

    ConvergeTable table;
    table.reference = converge_reference(path, cfg.scheme, cfg.tol, lambda_max + 2, &table.reference_method,
                                         cfg.workers);

    for (int l : cfg.lambdas) {
        ConvergeRow row;
        row.kind = "scheme";
        row.param = l;
        row.value = grid_value(path, cfg.scheme, l, cfg.workers);
        row.reference = table.reference;
        row.abs_error = std::abs(row.value - table.reference);
        table.rows.push_back(row);
    }
    for (int n : cfg.matrix_dims) {
        EnsembleConfig ens;
        ens.kind = Ensemble::GUE;
        ens.dim_n = n;
        ens.samples_m = cfg.mc_samples;
        ens.seed = cfg.seed;
        ens.path_dim = static_cast<int>(path.dim());
        ens.workers = cfg.workers;
        const auto mc = rk_montecarlo(path, Partition::of(path), ens);
        ConvergeRow row;
        row.kind = "montecarlo";
        row.param = n;
        row.value = mc.estimate;
        row.reference = table.reference;
        row.abs_error = std::abs(mc.estimate - table.reference);
        row.std_error = mc.std_error;
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace sigdev
