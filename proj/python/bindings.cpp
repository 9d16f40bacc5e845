#include <optional>
#include <tuple>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sigdev/errors.hpp"
#include "sigdev/freeprob.hpp"
#include "sigdev/mmd.hpp"
#include "sigdev/randomdev.hpp"
#include "sigdev/sdkernel.hpp"
#include "sigdev/selftest.hpp"
#include "sigdev/signature.hpp"

namespace py = pybind11;
using namespace sigdev;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Path path_from_arrays(const DoubleArray& t, const DoubleArray& x) {
    if (t.ndim() != 1) throw DomainError("times must be one-dimensional");
    const auto n = static_cast<std::size_t>(t.shape(0));
    std::vector<double> times(t.data(), t.data() + n);
    std::size_t d = 1;
    if (x.ndim() == 2) {
        d = static_cast<std::size_t>(x.shape(1));
    } else if (x.ndim() != 1) {
        throw DomainError("points must have shape (n,) or (n, d)");
    }
    if (static_cast<std::size_t>(x.shape(0)) != n) throw DomainError("times and points differ in length");
    std::vector<double> flat(x.data(), x.data() + n * d);
    return Path(std::move(times), std::move(flat), d);
}

DoubleArray points_array(const Path& p) {
    DoubleArray out({p.size(), p.dim()});
    std::copy(p.flat_points().begin(), p.flat_points().end(), out.mutable_data());
    return out;
}

DoubleArray gram_array(const GramMatrix& g) {
    DoubleArray out({g.rows, g.cols});
    std::copy(g.values.begin(), g.values.end(), out.mutable_data());
    return out;
}

KernelSpec make_spec(const std::string& kernel, int lambda, double tol) {
    KernelSpec spec;
    spec.kind = parse_kernel_kind(kernel);
    spec.partition.lambda = lambda;
    spec.tol = tol;
    return spec;
}

py::dict mc_dict(const MonteCarloEstimate& e) {
    py::dict d;
    d["estimate"] = e.estimate;
    d["std_error"] = e.std_error;
    d["imag_mean_abs"] = e.imag_mean_abs;
    d["imag_max_abs"] = e.imag_max_abs;
    d["max_unitarity_defect"] = e.max_unitarity_defect;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Schwinger-Dyson signature kernels, random path developments and path MMD";

    py::class_<Path>(m, "Path")
        .def(py::init(&path_from_arrays), py::arg("times"), py::arg("points"))
        .def_property_readonly("times", [](const Path& p) { return DoubleArray(py::cast(p.times())); })
        .def_property_readonly("points", &points_array)
        .def_property_readonly("dim", &Path::dim)
        .def("__len__", &Path::size)
        .def("scaled", &Path::scaled, py::arg("factor"))
        .def("__repr__", [](const Path& p) {
            return "<sigdev.Path n=" + std::to_string(p.size()) + " dim=" + std::to_string(p.dim()) + ">";
        });

    m.def("gen_fbm", &gen_fbm, py::arg("hurst"), py::arg("n_points"), py::arg("dim"), py::arg("seed"),
          "Fractional Brownian motion on a uniform grid of [0, 1].");
    m.def("concat_reverse", &concat_reverse, py::arg("gamma"), py::arg("sigma"));
    m.def("one_variation", py::overload_cast<const Path&>(&one_variation), py::arg("path"));

    m.def(
        "k_sd",
        [](const Path& g, const Path& s, const std::string& scheme, int lambda, double tol) {
            KernelOptions opts;
            opts.scheme = parse_scheme(scheme);
            opts.partition.lambda = lambda;
            opts.tol = tol;
            const auto k = k_sd(g, s, opts);
            return k.value;
        },
        py::arg("gamma"), py::arg("sigma"), py::arg("scheme") = "series", py::arg("lam") = 4,
        py::arg("tol") = 1e-10, "K_SD(gamma, sigma) by the explicit, implicit or series scheme.");
    m.def(
        "k_path",
        [](const Path& p, const std::string& scheme, int lambda, double tol) {
            KernelOptions opts;
            opts.scheme = parse_scheme(scheme);
            opts.partition.lambda = lambda;
            opts.tol = tol;
            return k_path(p, opts).value;
        },
        py::arg("path"), py::arg("scheme") = "series", py::arg("lam") = 4, py::arg("tol") = 1e-10);
    m.def(
        "series_oracle",
        [](const Path& p, double tol) {
            const auto r = series_oracle(p, tol);
            return py::make_tuple(r.value, r.tail_bound, r.level);
        },
        py::arg("path"), py::arg("tol") = 1e-10, "(value, tail_bound, level)");
    m.def("exact_straight_line", &exact_straight_line, py::arg("speed"), py::arg("s"), py::arg("t"));
    m.def(
        "signature_kernel",
        [](const Path& g, const Path& s, double tol) {
            const auto k = signature_kernel(g, s, tol);
            return py::make_tuple(k.value, k.tail_bound, k.level);
        },
        py::arg("gamma"), py::arg("sigma"), py::arg("tol") = 1e-10, "(value, tail_bound, level)");
    m.def(
        "truncated_signature",
        [](const Path& p, int level) {
            const auto sig = truncated_signature(p, level);
            py::list out;
            for (int k = 0; k <= level; ++k) {
                const auto t = sig.level_tensor(k);
                out.append(DoubleArray(static_cast<py::ssize_t>(t.size()), t.data()));
            }
            return out;
        },
        py::arg("path"), py::arg("level"), "Levels 0..level, each flattened in lexicographic word order.");

    m.def("catalan", &catalan, py::arg("k"));
    m.def(
        "semicircular_moment", [](const std::vector<int>& w) { return semicircular_moment(w); }, py::arg("word"));
    m.def(
        "nc2_enumerate",
        [](int n) {
            std::vector<std::vector<std::pair<int, int>>> out;
            for (const auto& p : nc2_enumerate(n)) out.push_back(p.pairs);
            return out;
        },
        py::arg("n"));
    m.def(
        "generation_labels",
        [](const std::string& word) { return generation_labels(DyckWord(word)).generation; },
        py::arg("dyck_word"), "Generation of each pair, pairs ordered by opening position.");

    m.def(
        "rk_montecarlo",
        [](const Path& p, int n, int samples, std::uint64_t seed, int lambda) {
            EnsembleConfig cfg;
            cfg.kind = Ensemble::GUE;
            cfg.dim_n = n;
            cfg.samples_m = samples;
            cfg.seed = seed;
            cfg.path_dim = static_cast<int>(p.dim());
            PartitionSpec spec{lambda, 0.0};
            return mc_dict(rk_montecarlo(p, spec.resolve(p), cfg));
        },
        py::arg("path"), py::arg("matrix_dim"), py::arg("samples"), py::arg("seed") = 0, py::arg("lam") = 0);
    m.def(
        "sigkernel_montecarlo",
        [](const Path& g, const Path& s, int n, int samples, std::uint64_t seed, int lambda) {
            EnsembleConfig cfg;
            cfg.kind = Ensemble::ComplexGinibre;
            cfg.dim_n = n;
            cfg.samples_m = samples;
            cfg.seed = seed;
            cfg.path_dim = static_cast<int>(g.dim());
            return mc_dict(sigkernel_montecarlo(g, s, PartitionSpec{lambda, 0.0}, cfg));
        },
        py::arg("gamma"), py::arg("sigma"), py::arg("matrix_dim"), py::arg("samples"), py::arg("seed") = 0,
        py::arg("lam") = 0);

    m.def(
        "gram",
        [](const std::vector<Path>& a, std::optional<std::vector<Path>> b, const std::string& kernel, int lambda,
           double tol) {
            const auto spec = make_spec(kernel, lambda, tol);
            if (!b) return gram_array(gram(PathSample(a), spec));
            return gram_array(gram(PathSample(a), PathSample(*b), spec));
        },
        py::arg("a"), py::arg("b") = py::none(), py::arg("kernel") = "sd_series", py::arg("lam") = 4,
        py::arg("tol") = 1e-10);
    m.def(
        "mmd2",
        [](const std::vector<Path>& a, const std::vector<Path>& b, const std::string& kernel, int lambda, double tol,
           const std::string& statistic) {
            if (statistic != "v" && statistic != "u") throw DomainError("statistic must be 'v' or 'u'");
            return mmd2(PathSample(a), PathSample(b), make_spec(kernel, lambda, tol),
                        statistic == "u" ? MmdStatistic::U : MmdStatistic::V);
        },
        py::arg("a"), py::arg("b"), py::arg("kernel") = "sd_series", py::arg("lam") = 4, py::arg("tol") = 1e-10,
        py::arg("statistic") = "v");

    m.def("selftest", [] {
        std::vector<std::tuple<std::string, bool, std::string>> out;
        for (const auto& r : run_selftest()) out.emplace_back(r.name, r.passed, r.detail);
        return out;
    });
}
