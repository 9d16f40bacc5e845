// sigdev command-line tool.
//
// Exit codes: 0 success, 2 bad input (flags, files, domain errors),
// 3 numeric or resource failure. selftest exits 1 when a check fails.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigdev/converge.hpp"
#include "sigdev/errors.hpp"
#include "sigdev/mmd.hpp"
#include "sigdev/path_io.hpp"
#include "sigdev/randomdev.hpp"
#include "sigdev/sdkernel.hpp"
#include "sigdev/selftest.hpp"
#include "sigdev/signature.hpp"

namespace {

using sigdev::format_double;
using json = nlohmann::json;

struct RunConfig {
    std::vector<std::string> inputs;
    std::string scheme = "series";
    int lambda = 4;
    double max_variation = 0.0;
    std::vector<int> matrix_dims;
    int mc_samples = 50;
    std::uint64_t seed = 0;
    double tol = 1e-10;
    std::string out;
    std::string format = "csv";
    unsigned workers = 1;

    // converge
    std::string lambdas = "0,1,2,3,4,5";
    // mmd
    std::string statistic = "v";
    // genfbm
    double hurst = 0.75;
    int n_points = 16;
    int dim = 1;
};

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw sigdev::DomainError("not an integer list: '" + text + "'");
        }
        if (used != item.size()) throw sigdev::DomainError("not an integer list: '" + text + "'");
        out.push_back(v);
    }
    return out;
}

/// Writes to --out if given, otherwise to standard output.
void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw sigdev::DomainError("cannot write '" + cfg.out + "'");
    f << text;
}

sigdev::Path single_path(const std::string& file) {
    auto paths = sigdev::read_paths_file(file);
    if (paths.size() != 1) {
        throw sigdev::DomainError("'" + file + "' holds " + std::to_string(paths.size()) +
                                  " paths; expected exactly one");
    }
    return std::move(paths.front().path);
}

struct Sample {
    std::vector<std::string> ids;
    sigdev::PathSample paths;
};

Sample load_sample(const std::string& file) {
    auto named = sigdev::read_paths_file(file);
    std::vector<std::string> ids;
    std::vector<sigdev::Path> paths;
    for (auto& n : named) {
        ids.push_back(n.id);
        paths.push_back(std::move(n.path));
    }
    return {std::move(ids), sigdev::PathSample(std::move(paths))};
}

sigdev::KernelSpec kernel_spec(const RunConfig& cfg) {
    sigdev::KernelSpec spec;
    spec.kind = sigdev::parse_kernel_kind(cfg.scheme);
    spec.partition.lambda = cfg.lambda;
    spec.partition.max_variation = cfg.max_variation;
    spec.tol = cfg.tol;
    spec.workers = cfg.workers;
    return spec;
}

sigdev::EnsembleConfig ensemble(const RunConfig& cfg, sigdev::Ensemble kind, int n, int d) {
    sigdev::EnsembleConfig e;
    e.kind = kind;
    e.dim_n = n;
    e.samples_m = cfg.mc_samples;
    e.seed = cfg.seed;
    e.path_dim = d;
    e.workers = cfg.workers;
    return e;
}

int cmd_kernel(const RunConfig& cfg) {
    if (cfg.inputs.size() != 2) throw sigdev::DomainError("kernel needs two path files");
    const auto gamma = single_path(cfg.inputs[0]);
    const auto sigma = single_path(cfg.inputs[1]);
    if (gamma.dim() != sigma.dim()) throw sigdev::DomainError("paths have different dimensions");

    json r;
    r["scheme"] = cfg.scheme;
    const int n = cfg.matrix_dims.empty() ? 100 : cfg.matrix_dims.front();
    if (cfg.scheme == "unitary_mc" || cfg.scheme == "ginibre_mc") {
        const int d = static_cast<int>(gamma.dim());
        sigdev::MonteCarloEstimate mc;
        if (cfg.scheme == "unitary_mc") {
            const auto y = sigdev::concat_reverse(gamma, sigma);
            sigdev::PartitionSpec part{cfg.lambda, cfg.max_variation};
            mc = sigdev::rk_montecarlo(y, part.resolve(y), ensemble(cfg, sigdev::Ensemble::GUE, n, d));
        } else {
            sigdev::PartitionSpec part{cfg.lambda, cfg.max_variation};
            mc = sigdev::sigkernel_montecarlo(gamma, sigma, part,
                                              ensemble(cfg, sigdev::Ensemble::ComplexGinibre, n, d));
        }
        r["value"] = mc.estimate;
        r["std_error"] = mc.std_error;
        r["matrix_dim"] = n;
        r["mc_samples"] = cfg.mc_samples;
        r["seed"] = cfg.seed;
    } else {
        const auto spec = kernel_spec(cfg);
        if (spec.kind == sigdev::KernelKind::SigTruncated) {
            const auto k = sigdev::signature_kernel(gamma, sigma, cfg.tol);
            r["value"] = k.value;
            r["tail_bound"] = k.tail_bound;
            r["level"] = k.level;
        } else {
            sigdev::KernelOptions opts;
            opts.scheme = spec.kind == sigdev::KernelKind::SdSeries     ? sigdev::Scheme::Series
                          : spec.kind == sigdev::KernelKind::SdExplicit ? sigdev::Scheme::Explicit
                                                                        : sigdev::Scheme::Implicit;
            opts.partition = spec.partition;
            opts.tol = cfg.tol;
            opts.workers = cfg.workers;
            const auto k = sigdev::k_sd(gamma, sigma, opts);
            r["value"] = k.value;
            if (opts.scheme == sigdev::Scheme::Series) {
                r["tail_bound"] = k.tail_bound;
                r["level"] = k.level;
            } else {
                r["lambda"] = cfg.lambda;
                r["intervals"] = k.intervals;
            }
        }
    }
    if (!std::isfinite(r["value"].get<double>())) throw sigdev::NumericError("kernel value is not finite");

    if (cfg.format == "json") {
        emit(cfg, r.dump() + "\n");
        return 0;
    }
    // scheme,value,tail_bound,level,lambda,intervals,matrix_dim,mc_samples,std_error
    auto field = [&](const char* key) -> std::string {
        if (!r.contains(key)) return "";
        const auto& v = r[key];
        return v.is_number_float() ? format_double(v.get<double>()) : v.dump();
    };
    std::string text = "scheme,value,tail_bound,level,lambda,intervals,matrix_dim,mc_samples,std_error\n";
    text += cfg.scheme + "," + field("value") + "," + field("tail_bound") + "," + field("level") + "," +
            field("lambda") + "," + field("intervals") + "," + field("matrix_dim") + "," +
            field("mc_samples") + "," + field("std_error") + "\n";
    emit(cfg, text);
    return 0;
}

std::string gram_text(const RunConfig& cfg, const std::vector<std::string>& rows,
                      const std::vector<std::string>& cols, const sigdev::GramMatrix& g) {
    if (cfg.format == "json") {
        json j;
        j["kernel"] = g.kernel_tag;
        j["rows"] = rows;
        j["cols"] = cols;
        json values = json::array();
        for (std::size_t i = 0; i < g.rows; ++i) {
            std::vector<double> row(g.values.begin() + static_cast<std::ptrdiff_t>(i * g.cols),
                                    g.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * g.cols));
            values.push_back(row);
        }
        j["values"] = values;
        return j.dump() + "\n";
    }
    std::string text = "id";
    for (const auto& c : cols) text += "," + c;
    text += "\n";
    for (std::size_t i = 0; i < g.rows; ++i) {
        text += rows[i];
        for (std::size_t j = 0; j < g.cols; ++j) text += "," + format_double(g(i, j));
        text += "\n";
    }
    return text;
}

int cmd_gram(const RunConfig& cfg) {
    if (cfg.inputs.empty() || cfg.inputs.size() > 2) throw sigdev::DomainError("gram needs one or two sample files");
    const auto spec = kernel_spec(cfg);
    const auto a = load_sample(cfg.inputs[0]);
    if (cfg.inputs.size() == 1) {
        emit(cfg, gram_text(cfg, a.ids, a.ids, sigdev::gram(a.paths, spec)));
    } else {
        const auto b = load_sample(cfg.inputs[1]);
        emit(cfg, gram_text(cfg, a.ids, b.ids, sigdev::gram(a.paths, b.paths, spec)));
    }
    return 0;
}

int cmd_mmd(const RunConfig& cfg) {
    if (cfg.inputs.size() != 2) throw sigdev::DomainError("mmd needs two sample files");
    const auto spec = kernel_spec(cfg);
    sigdev::MmdStatistic stat;
    if (cfg.statistic == "v") stat = sigdev::MmdStatistic::V;
    else if (cfg.statistic == "u") stat = sigdev::MmdStatistic::U;
    else throw sigdev::DomainError("statistic must be 'v' or 'u'");
    const auto a = load_sample(cfg.inputs[0]);
    const auto b = load_sample(cfg.inputs[1]);
    const double v = sigdev::mmd2(a.paths, b.paths, spec, stat);
    if (!std::isfinite(v)) throw sigdev::NumericError("MMD value is not finite");
    if (cfg.format == "json") {
        json j;
        j["mmd2"] = v;
        j["kernel"] = std::string(sigdev::kernel_kind_name(spec.kind));
        j["statistic"] = cfg.statistic;
        emit(cfg, j.dump() + "\n");
    } else {
        emit(cfg, "mmd2,kernel,statistic\n" + format_double(v) + "," +
                      std::string(sigdev::kernel_kind_name(spec.kind)) + "," + cfg.statistic + "\n");
    }
    return 0;
}

int cmd_converge(const RunConfig& cfg) {
    sigdev::Path path;
    if (cfg.inputs.size() == 1) {
        path = single_path(cfg.inputs[0]);
    } else if (cfg.inputs.empty()) {
        path = sigdev::gen_fbm(cfg.hurst, static_cast<std::size_t>(cfg.n_points), static_cast<std::size_t>(cfg.dim),
                               cfg.seed);
    } else {
        throw sigdev::DomainError("converge takes at most one path file");
    }
    sigdev::ConvergeConfig cc;
    cc.scheme = sigdev::parse_scheme(cfg.scheme == "series" ? "implicit" : cfg.scheme);
    cc.lambdas = parse_int_list(cfg.lambdas);
    cc.matrix_dims = cfg.matrix_dims.empty() ? std::vector<int>{10, 20, 50, 100, 200} : cfg.matrix_dims;
    cc.mc_samples = cfg.mc_samples;
    cc.seed = cfg.seed;
    cc.tol = cfg.tol;
    cc.workers = cfg.workers;
    const auto table = sigdev::converge_study(path, cc);

    if (cfg.format == "json") {
        json j;
        j["scheme"] = std::string(sigdev::scheme_name(cc.scheme));
        j["reference"] = table.reference;
        j["reference_method"] = table.reference_method;
        j["rows"] = json::array();
        for (const auto& r : table.rows) {
            j["rows"].push_back({{"kind", r.kind},
                                 {"param", r.param},
                                 {"value", r.value},
                                 {"reference", r.reference},
                                 {"abs_error", r.abs_error},
                                 {"stderr", r.std_error}});
        }
        emit(cfg, j.dump() + "\n");
        return 0;
    }
    std::string text = "kind,param,value,reference,abs_error,stderr\n";
    for (const auto& r : table.rows) {
        text += r.kind + "," + std::to_string(r.param) + "," + format_double(r.value) + "," +
                format_double(r.reference) + "," + format_double(r.abs_error) + "," +
                (r.kind == "montecarlo" ? format_double(r.std_error) : "") + "\n";
    }
    emit(cfg, text);
    return 0;
}

int cmd_genfbm(const RunConfig& cfg) {
    if (cfg.n_points < 2 || cfg.dim < 1) throw sigdev::DomainError("genfbm needs n >= 2 and d >= 1");
    const auto path = sigdev::gen_fbm(cfg.hurst, static_cast<std::size_t>(cfg.n_points),
                                      static_cast<std::size_t>(cfg.dim), cfg.seed);
    std::ostringstream os;
    if (cfg.format == "json") {
        sigdev::write_paths_jsonl(os, {{"fbm-" + std::to_string(cfg.seed), path}});
    } else {
        sigdev::write_path_csv(os, path);
    }
    emit(cfg, os.str());
    return 0;
}

int cmd_selftest(const RunConfig& cfg) {
    const auto results = sigdev::run_selftest();
    std::string text;
    int failed = 0;
    for (const auto& r : results) {
        text += (r.passed ? "PASS  " : "FAIL  ") + r.name;
        if (!r.detail.empty()) text += "  (" + r.detail + ")";
        text += "\n";
        failed += r.passed ? 0 : 1;
    }
    text += std::to_string(results.size() - static_cast<std::size_t>(failed)) + "/" +
            std::to_string(results.size()) + " checks passed\n";
    emit(cfg, text);
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schwinger-Dyson signature kernels, random developments and path MMD"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "sigdev 0.1.0");
    RunConfig cfg;

    auto common = [&](CLI::App* sub, bool grid, bool mc) {
        sub->add_option("--out", cfg.out, "Write output here instead of standard output")->envname("SIGDEV_OUT");
        sub->add_option("--format", cfg.format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->envname("SIGDEV_FORMAT")
            ->capture_default_str();
        sub->add_option("--tol", cfg.tol, "Tail tolerance for series and truncated kernels")
            ->check(CLI::PositiveNumber)
            ->envname("SIGDEV_TOL")
            ->capture_default_str();
        sub->add_option("--workers", cfg.workers, "Worker threads (results do not depend on it)")
            ->check(CLI::Range(1u, 256u))
            ->envname("SIGDEV_WORKERS")
            ->capture_default_str();
        if (grid) {
            sub->add_option("--lambda", cfg.lambda, "Dyadic refinement order of the path's own knots")
                ->check(CLI::Range(0, 16))
                ->envname("SIGDEV_LAMBDA")
                ->capture_default_str();
            sub->add_option("--max-variation", cfg.max_variation,
                            "Refine further until each interval has at most this 1-variation (0 = off)")
                ->check(CLI::NonNegativeNumber)
                ->envname("SIGDEV_MAX_VARIATION");
        }
        if (mc) {
            sub->add_option("--matrix-dim", cfg.matrix_dims, "Matrix dimension N (converge: comma list)")
                ->delimiter(',')
                ->check(CLI::Range(1, 4096))
                ->envname("SIGDEV_MATRIX_DIM");
            sub->add_option("--mc-samples", cfg.mc_samples, "Monte Carlo sample count M")
                ->check(CLI::Range(1, 1000000))
                ->envname("SIGDEV_MC_SAMPLES")
                ->capture_default_str();
            sub->add_option("--seed", cfg.seed, "Random seed")->envname("SIGDEV_SEED")->capture_default_str();
        }
    };

    auto* kernel = app.add_subcommand(
        "kernel",
        "K_SD(gamma, sigma) or the signature kernel of two path files.\n"
        "CSV columns: scheme,value,tail_bound,level,lambda,intervals,matrix_dim,mc_samples,std_error");
    kernel->add_option("gamma", cfg.inputs, "Two path files (CSV or JSONL with one path)")->required()->expected(2);
    kernel->add_option("--scheme", cfg.scheme,
                       "explicit | implicit | series | sig | unitary_mc | ginibre_mc")
        ->check(CLI::IsMember({"explicit", "implicit", "series", "sd_explicit", "sd_implicit", "sd_series", "sig",
                               "sig_truncated", "unitary_mc", "ginibre_mc"}))
        ->envname("SIGDEV_SCHEME")
        ->capture_default_str();
    common(kernel, true, true);

    auto* gram = app.add_subcommand("gram",
                                    "Gram matrix of one sample, or between two samples.\n"
                                    "CSV: header id,<column ids>, then one row per path");
    gram->add_option("samples", cfg.inputs, "One or two JSONL sample files")->required()->expected(1, 2);
    gram->add_option("--scheme", cfg.scheme, "explicit | implicit | series | sig")
        ->check(CLI::IsMember({"explicit", "implicit", "series", "sd_explicit", "sd_implicit", "sd_series", "sig",
                               "sig_truncated"}))
        ->envname("SIGDEV_SCHEME")
        ->capture_default_str();
    common(gram, true, false);

    auto* mmd = app.add_subcommand("mmd", "MMD^2 between two samples.\nCSV columns: mmd2,kernel,statistic");
    mmd->add_option("samples", cfg.inputs, "Two JSONL sample files")->required()->expected(2);
    mmd->add_option("--scheme", cfg.scheme, "explicit | implicit | series | sig")
        ->check(CLI::IsMember({"explicit", "implicit", "series", "sd_explicit", "sd_implicit", "sd_series", "sig",
                               "sig_truncated"}))
        ->envname("SIGDEV_SCHEME")
        ->capture_default_str();
    mmd->add_option("--statistic", cfg.statistic, "v (biased, default) or u (unbiased)")
        ->check(CLI::IsMember({"v", "u"}))
        ->envname("SIGDEV_STATISTIC");
    common(mmd, true, false);

    auto* converge = app.add_subcommand(
        "converge",
        "Scheme error across dyadic orders and unitary Monte Carlo across N for one path.\n"
        "CSV columns: kind,param,value,reference,abs_error,stderr\n"
        "  kind=scheme: param is lambda; kind=montecarlo: param is N, stderr is filled");
    converge->add_option("path", cfg.inputs, "Path file; without it an fBm path is generated")->expected(0, 1);
    converge->add_option("--scheme", cfg.scheme, "explicit | implicit")
        ->check(CLI::IsMember({"explicit", "implicit"}))
        ->envname("SIGDEV_SCHEME")
        ->default_str("implicit");
    converge->add_option("--lambdas", cfg.lambdas, "Comma list of dyadic orders")
        ->envname("SIGDEV_LAMBDAS")
        ->capture_default_str();
    converge->add_option("--hurst", cfg.hurst, "fBm Hurst index when generating")->capture_default_str();
    converge->add_option("--n-points", cfg.n_points, "fBm knots when generating")->default_str("15");
    converge->add_option("--dim", cfg.dim, "fBm dimension when generating")->capture_default_str();
    common(converge, false, true);

    auto* genfbm = app.add_subcommand("genfbm", "Fractional Brownian motion path on a uniform grid of [0,1]");
    genfbm->add_option("--hurst", cfg.hurst, "Hurst index in (0,1)")->capture_default_str();
    genfbm->add_option("--n-points,-n", cfg.n_points, "Number of knots")->capture_default_str();
    genfbm->add_option("--dim,-d", cfg.dim, "Dimension")->capture_default_str();
    genfbm->add_option("--seed", cfg.seed, "Random seed")->envname("SIGDEV_SEED")->capture_default_str();
    genfbm->add_option("--out", cfg.out, "Output file")->envname("SIGDEV_OUT");
    genfbm->add_option("--format", cfg.format, "csv (one path) or json (JSON Lines)")
        ->check(CLI::IsMember({"csv", "json"}))
        ->envname("SIGDEV_FORMAT")
        ->capture_default_str();

    auto* selftest = app.add_subcommand("selftest", "Run the invariant checks; exit 1 if any fails");
    selftest->add_option("--out", cfg.out, "Output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*converge) {
            if (converge->count("--scheme") == 0 && std::getenv("SIGDEV_SCHEME") == nullptr) cfg.scheme = "implicit";
            if (converge->count("--n-points") == 0) cfg.n_points = 15;
            return cmd_converge(cfg);
        }
        if (*kernel) return cmd_kernel(cfg);
        if (*gram) return cmd_gram(cfg);
        if (*mmd) return cmd_mmd(cfg);
        if (*genfbm) return cmd_genfbm(cfg);
        if (*selftest) return cmd_selftest(cfg);
    } catch (const sigdev::DomainError& e) {
        std::cerr << "sigdev: " << e.what() << "\n";
        return 2;
    } catch (const sigdev::NumericError& e) {
        std::cerr << "sigdev: numeric error: " << e.what() << "\n";
        return 3;
    } catch (const sigdev::ResourceError& e) {
        std::cerr << "sigdev: resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "sigdev: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
