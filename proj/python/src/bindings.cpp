#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "evospec/error.hpp"
#include "evospec/grid.hpp"
#include "evospec/hypothesis.hpp"
#include "evospec/io.hpp"
#include "evospec/scr.hpp"
#include "evospec/simulators.hpp"
#include "evospec/spectral.hpp"
#include "evospec/tuning.hpp"
#include "evospec/whittle.hpp"

namespace py = pybind11;
using namespace evospec;

namespace {

BandwidthRule parse_rule(const std::string& rule) {
    if (rule == "n") return BandwidthRule::below_n;
    if (rule == "n-over-log-n") return BandwidthRule::below_n_over_log_n;
    throw std::invalid_argument("unknown bandwidth rule: " + rule);
}

TimeSeries make_series(std::vector<double> x, std::optional<int> demean) {
    return demean ? TimeSeries(std::move(x), *demean) : TimeSeries(std::move(x));
}

std::pair<int, int> resolve(const TimeSeries& s, std::optional<int> n, std::optional<int> B, const std::string& rule,
                            io::json& meta) {
    if (n.has_value() != B.has_value()) throw std::invalid_argument("give both n and B, or neither");
    if (n) {
        meta["tuning"] = "fixed";
        return {*n, *B};
    }
    MvOptions opts;
    opts.rule = parse_rule(rule);
    const auto sel = mv_select(s, opts);
    meta["tuning"] = "mv";
    return {sel.n, sel.B};
}

ModelSpec spec_from_arg(const std::string& model, double delta) {
    if (!model.empty() && model.front() == '{') return io::spec_from_json(io::json::parse(model));
    return preset_model(model, delta);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Time-varying spectral estimation, confidence regions and tests";
    m.attr("__version__") = EVOSPEC_VERSION;

    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    m.def(
        "estimate",
        [](std::vector<double> x, std::optional<int> n, std::optional<int> B, std::optional<int> demean,
           const std::string& rule, unsigned threads) {
            py::gil_scoped_release release;
            const auto s = make_series(std::move(x), demean);
            io::json meta;
            const auto [nn, BB] = resolve(s, n, B, rule, meta);
            return io::surface_to_json(spectral_surface(s, build_grid(s.size(), nn, BB), {threads, true}), meta).dump();
        },
        py::arg("x"), py::arg("n") = py::none(), py::arg("B") = py::none(), py::arg("demean") = py::none(),
        py::arg("rule") = "n-over-log-n", py::arg("threads") = 1);

    m.def(
        "scr",
        [](std::vector<double> x, std::optional<int> n, std::optional<int> B, double alpha, int n_mc,
           std::uint64_t seed, const std::string& method, std::optional<int> demean, const std::string& rule,
           unsigned threads) {
            py::gil_scoped_release release;
            const auto s = make_series(std::move(x), demean);
            io::json meta;
            const auto [nn, BB] = resolve(s, n, B, rule, meta);
            const auto grid = build_grid(s.size(), nn, BB);
            const auto center = spectral_surface(s, grid, {threads, true});
            const auto kind = parse_scr_method(method);
            double gamma = 0.0;
            if (kind == ScrMethod::gumbel_ratio) {
                gamma = gumbel_critical_value(alpha, BB, static_cast<int>(grid.time_count()), nn).gamma;
            } else {
                gamma = critical_value(bootstrap_distribution(s.size(), grid, n_mc, seed, threads), alpha);
            }
            return io::scr_to_json(build_scr(center, gamma, alpha, kind), meta).dump();
        },
        py::arg("x"), py::arg("n") = py::none(), py::arg("B") = py::none(), py::arg("alpha") = 0.05,
        py::arg("n_mc") = kDefaultMonteCarlo, py::arg("seed") = 1, py::arg("method") = "bootstrap-ratio",
        py::arg("demean") = py::none(), py::arg("rule") = "n-over-log-n", py::arg("threads") = 1);

    m.def(
        "test",
        [](std::vector<double> x, const std::string& null, std::optional<int> n, std::optional<int> B, double alpha,
           int n_mc, std::uint64_t seed, std::optional<int> demean, const std::string& rule, unsigned threads) {
            py::gil_scoped_release release;
            const auto s = make_series(std::move(x), demean);
            io::json meta;
            const auto [nn, BB] = resolve(s, n, B, rule, meta);
            const auto kind = parse_null_kind(null);
            const auto result = run_test(s, null_builder(kind), {nn, BB, n_mc, alpha, seed, threads});
            return io::test_to_json(result, to_string(kind), meta).dump();
        },
        py::arg("x"), py::arg("null"), py::arg("n") = py::none(), py::arg("B") = py::none(),
        py::arg("alpha") = 0.05, py::arg("n_mc") = kDefaultMonteCarlo, py::arg("seed") = 1,
        py::arg("demean") = py::none(), py::arg("rule") = "n-over-log-n", py::arg("threads") = 1);

    m.def(
        "mv_select",
        [](std::vector<double> x, const std::string& rule) {
            py::gil_scoped_release release;
            MvOptions opts;
            opts.rule = parse_rule(rule);
            return io::selection_to_json(mv_select(TimeSeries(std::move(x)), opts)).dump();
        },
        py::arg("x"), py::arg("rule") = "n-over-log-n");

    m.def(
        "simulate",
        [](const std::string& model, std::size_t N, std::uint64_t seed, double delta, std::uint64_t stream) {
            const auto spec = spec_from_arg(model, delta);
            py::gil_scoped_release release;
            const auto s = simulate(spec, N, seed, stream);
            return std::vector<double>(s.values().begin(), s.values().end());
        },
        py::arg("model"), py::arg("N"), py::arg("seed"), py::arg("delta") = 0.0, py::arg("stream") = 0);

    m.def("presets", &preset_names);

    m.def(
        "fit_tvarma",
        [](std::vector<double> x, int p, int q, std::optional<std::vector<double>> u, std::optional<int> window,
           std::uint64_t seed, int restarts, unsigned threads) {
            py::gil_scoped_release release;
            const TimeSeries s(std::move(x));
            const int w = window ? *window : mv_select(s).n;
            std::vector<double> grid;
            if (u) {
                grid = *u;
            } else {
                const double lo = w / (2.0 * static_cast<double>(s.size()));
                for (int k = 0; k < 25; ++k) grid.push_back(lo + (1.0 - 2.0 * lo) * k / 24.0);
            }
            FitOptions opts;
            opts.seed = seed;
            opts.restarts = restarts;
            opts.threads = threads;
            return io::model_to_json(fit_tvarma(s, p, q, std::move(grid), w, opts)).dump();
        },
        py::arg("x"), py::arg("p"), py::arg("q"), py::arg("u") = py::none(), py::arg("window") = py::none(),
        py::arg("seed") = 0, py::arg("restarts") = 5, py::arg("threads") = 1);
}
