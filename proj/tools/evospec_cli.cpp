// evospec command-line front end.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "evospec/error.hpp"
#include "evospec/grid.hpp"
#include "evospec/hypothesis.hpp"
#include "evospec/io.hpp"
#include "evospec/scr.hpp"
#include "evospec/simulators.hpp"
#include "evospec/spectral.hpp"
#include "evospec/tuning.hpp"
#include "evospec/whittle.hpp"

namespace {

using evospec::io::json;
using Clock = std::chrono::steady_clock;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr std::size_t kMinObservations = 50;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string input;
    std::optional<int> n;
    std::optional<int> B;
    std::string demean;
    std::string mv_rule = "n-over-log-n";
    double alpha = 0.05;
    int n_mc = evospec::kDefaultMonteCarlo;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string output;
    std::string format = "json";
};

struct Resolved {
    evospec::TimeSeries series{std::vector<double>{0.0}};
    int n = 0;
    int B = 0;
    std::optional<evospec::TuningSelection> selection;
};

void add_input(CLI::App* cmd, Common& c) {
    cmd->add_option("-i,--input", c.input, "single-column CSV time series")->required();
    cmd->add_option("--demean", c.demean, "remove a local mean first, e.g. local:100");
}

void add_tuning(CLI::App* cmd, Common& c) {
    cmd->add_option("-n,--n", c.n, "window length (MV-selected with --B when both are omitted)");
    cmd->add_option("-B,--B", c.B, "lag-window bandwidth B_n");
    cmd->add_option("--mv-rule", c.mv_rule, "MV bandwidth constraint")
        ->check(CLI::IsMember({"n-over-log-n", "n"}));
}

void add_inference(CLI::App* cmd, Common& c) {
    cmd->add_option("-a,--alpha", c.alpha, "significance level")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--n-mc", c.n_mc, "bootstrap pseudo-samples")->check(CLI::PositiveNumber);
    cmd->add_option("-s,--seed", c.seed, "bootstrap seed");
}

void add_output(CLI::App* cmd, Common& c, bool allow_csv) {
    cmd->add_option("-o,--output", c.output, "output path (stdout when omitted)");
    if (allow_csv)
        cmd->add_option("-f,--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("-t,--threads", c.threads, "worker threads (0 = all cores)");
}

evospec::TimeSeries load_series(const Common& c) {
    auto series = evospec::io::ingest_csv(c.input);
    if (series.size() < kMinObservations)
        throw evospec::io::DataError(c.input + ": need at least " + std::to_string(kMinObservations) +
                                     " observations, found " + std::to_string(series.size()));
    if (!c.demean.empty()) {
        const std::string prefix = "local:";
        if (c.demean.rfind(prefix, 0) != 0) throw UsageError("--demean expects local:<bandwidth>");
        int bw = 0;
        try {
            bw = std::stoi(c.demean.substr(prefix.size()));
        } catch (const std::exception&) {
            throw UsageError("--demean expects local:<bandwidth> with an integer bandwidth");
        }
        series = evospec::remove_local_mean(series, bw);
    }
    return series;
}

Resolved resolve(const Common& c) {
    if (c.n.has_value() != c.B.has_value())
        throw UsageError("give both --n and --B, or neither to run MV selection");
    Resolved r;
    r.series = load_series(c);
    if (c.n) {
        r.n = *c.n;
        r.B = *c.B;
    } else {
        evospec::MvOptions mv;
        mv.rule = c.mv_rule == "n" ? evospec::BandwidthRule::below_n : evospec::BandwidthRule::below_n_over_log_n;
        mv.threads = c.threads;
        r.selection = evospec::mv_select(r.series, mv);
        r.n = r.selection->n;
        r.B = r.selection->B;
    }
    return r;
}

json base_config(const Common& c, const Resolved& r) {
    json cfg = {{"input", c.input},
                {"N", r.series.size()},
                {"n", r.n},
                {"B_n", r.B},
                {"tuning", r.selection ? "mv" : "user"},
                {"threads", c.threads}};
    if (r.selection) {
        cfg["mv_rule"] = c.mv_rule;
        cfg["mv_n_range"] = {r.selection->n_l, r.selection->n_r};
    }
    if (!c.demean.empty()) cfg["demean"] = c.demean;
    return cfg;
}

json make_meta(const std::string& command, json config, std::optional<std::uint64_t> seed, Clock::time_point start) {
    json meta = {{"tool", "evospec"}, {"version", EVOSPEC_VERSION}, {"command", command}, {"config", std::move(config)}};
    meta["seed"] = seed ? json(*seed) : json(nullptr);
    meta["wall_time"] = std::chrono::duration<double>(Clock::now() - start).count();
    return meta;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw evospec::io::DataError("cannot write " + path);
    out << text;
}

void emit_json(const std::string& path, const json& j) { emit(path, j.dump(2) + "\n"); }

std::string csv_with_meta(const json& meta, const std::string& body) {
    return "# " + meta.dump() + "\n" + body;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-frequency inference for locally stationary time series"};
    app.set_version_flag("--version", std::string(EVOSPEC_VERSION));
    app.require_subcommand(1);

    Common c;
    const auto start = Clock::now();

    auto* estimate = app.add_subcommand("estimate", "lag-window estimate of the evolutionary spectrum");
    add_input(estimate, c);
    add_tuning(estimate, c);
    add_output(estimate, c, true);

    std::string method = "bootstrap-ratio";
    auto* scr = app.add_subcommand("scr", "simultaneous confidence region for the evolutionary spectrum");
    add_input(scr, c);
    add_tuning(scr, c);
    add_inference(scr, c);
    add_output(scr, c, true);
    scr->add_option("--method", method, "band construction")
        ->check(CLI::IsMember({"bootstrap-ratio", "bootstrap-exp", "gumbel-ratio"}));

    std::string null_name;
    auto* test = app.add_subcommand("test", "structural hypothesis test");
    test->add_option("null", null_name, "null hypothesis")
        ->required()
        ->check(CLI::IsMember({"white-noise", "stationarity", "separability"}));
    add_input(test, c);
    add_tuning(test, c);
    add_inference(test, c);
    add_output(test, c, false);

    int p = 0;
    int q = 0;
    std::optional<int> aic_p;
    std::optional<int> aic_q;
    std::optional<int> window;
    int u_count = 25;
    evospec::FitOptions fit_opts;
    auto* fit = app.add_subcommand("fit-tvarma", "local Whittle fit of a time-varying ARMA model");
    add_input(fit, c);
    fit->add_option("--p", p, "AR order")->check(CLI::Range(0, 5));
    fit->add_option("--q", q, "MA order")->check(CLI::Range(0, 5));
    fit->add_option("--aic-max-p", aic_p, "select the AR order by AIC up to this bound")->check(CLI::Range(0, 5));
    fit->add_option("--aic-max-q", aic_q, "select the MA order by AIC up to this bound")->check(CLI::Range(0, 5));
    fit->add_option("--window", window, "local window length (MV-selected n when omitted)");
    fit->add_option("--u-count", u_count, "number of fit times")->check(CLI::Range(1, 100000));
    fit->add_option("--restarts", fit_opts.restarts, "optimiser starts per time")->check(CLI::PositiveNumber);
    fit->add_option("-s,--seed", c.seed, "seed for optimiser restarts");
    add_output(fit, c, false);

    std::string model_path;
    auto* validate = app.add_subcommand("validate", "test a fitted time-varying ARMA model against the data");
    add_input(validate, c);
    validate->add_option("-m,--model", model_path, "model JSON written by fit-tvarma")->required();
    add_tuning(validate, c);
    add_inference(validate, c);
    add_output(validate, c, false);

    std::string spec_arg;
    double delta = 0.0;
    std::size_t N = 0;
    std::uint64_t stream = 0;
    auto* simulate = app.add_subcommand("simulate", "simulate a locally stationary model");
    simulate->add_option("-m,--model", spec_arg, "preset name or model spec JSON file")->required();
    simulate->add_option("--delta", delta, "delta for the drift presets");
    simulate->add_option("-N,--N", N, "series length")->required()->check(CLI::PositiveNumber);
    simulate->add_option("-s,--seed", c.seed, "simulation seed");
    simulate->add_option("--stream", stream, "replicate substream");
    simulate->add_option("-o,--output", c.output, "output path (stdout when omitted)");

    auto* experiment = app.add_subcommand("experiment", "Monte-Carlo experiments");
    experiment->require_subcommand(1);
    int reps = 200;
    std::uint64_t exp_seed = 0;
    int exp_n = 0;
    int exp_B = 0;
    std::vector<double> deltas{0.0, 0.2, 0.4};
    std::string family = "arch1-drift";
    std::string test_kind;

    auto add_experiment_common = [&](CLI::App* cmd) {
        cmd->add_option("-N,--N", N, "series length")->required()->check(CLI::PositiveNumber);
        cmd->add_option("-a,--alpha", c.alpha, "significance level")->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--reps", reps, "replicates")->check(CLI::PositiveNumber);
        cmd->add_option("--n-mc", c.n_mc, "bootstrap pseudo-samples")->check(CLI::PositiveNumber);
        cmd->add_option("-s,--seed", exp_seed, "experiment seed")->required();
        cmd->add_option("-o,--output", c.output, "output path (stdout when omitted)");
        cmd->add_option("-t,--threads", c.threads, "worker threads (0 = all cores)");
    };
    auto* coverage = experiment->add_subcommand("coverage", "SCR non-coverage rate");
    coverage->add_option("-m,--model", spec_arg, "preset name or model spec JSON file")->required();
    coverage->add_option("--delta", delta, "delta for the drift presets");
    coverage->add_option("-n,--n", exp_n, "window length")->required();
    coverage->add_option("-B,--B", exp_B, "lag-window bandwidth")->required();
    coverage->add_option("--method", method, "band construction")
        ->check(CLI::IsMember({"bootstrap-ratio", "bootstrap-exp", "gumbel-ratio"}));
    add_experiment_common(coverage);

    auto* power = experiment->add_subcommand("power", "rejection rates along a family of alternatives");
    power->add_option("--family", family, "model family")->check(CLI::IsMember({"arch1-drift", "ma1-white"}));
    power->add_option("--test", test_kind, "test (default follows the family)")
        ->check(CLI::IsMember({"white-noise", "stationarity", "separability"}));
    power->add_option("--deltas", deltas, "alternative strengths")->delimiter(',');
    add_experiment_common(power);

    auto* validation = experiment->add_subcommand("validation", "Whittle fit accuracy and model-validation size");
    spec_arg = "";
    validation->add_option("-m,--model", spec_arg, "preset name or model spec JSON file (default ar1-linear-drift)");
    add_experiment_common(validation);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    auto load_spec = [&](const std::string& arg) {
        const auto names = evospec::preset_names();
        if (std::find(names.begin(), names.end(), arg) != names.end()) return evospec::preset_model(arg, delta);
        return evospec::io::spec_from_json(evospec::io::read_json_file(arg));
    };

    try {
        if (*estimate) {
            const auto r = resolve(c);
            const auto grid = evospec::build_grid(r.series.size(), r.n, r.B);
            const auto surface = evospec::spectral_surface(r.series, grid, {c.threads});
            json cfg = base_config(c, r);
            const auto meta = make_meta("estimate", cfg, std::nullopt, start);
            if (c.format == "csv") {
                std::ostringstream os;
                evospec::io::write_surface_csv(os, surface);
                emit(c.output, csv_with_meta(meta, os.str()));
            } else {
                auto j = evospec::io::surface_to_json(surface, meta);
                if (r.selection) j["tuning"] = evospec::io::selection_to_json(*r.selection);
                emit_json(c.output, j);
            }
        } else if (*scr) {
            const auto r = resolve(c);
            const auto m = evospec::parse_scr_method(method);
            const auto grid = evospec::build_grid(r.series.size(), r.n, r.B);
            double gamma = 0.0;
            if (m == evospec::ScrMethod::gumbel_ratio) {
                gamma = evospec::gumbel_critical_value(c.alpha, r.B, static_cast<int>(grid.time_count()), r.n).gamma;
            } else {
                const auto dist = evospec::bootstrap_distribution(r.series.size(), grid, c.n_mc, c.seed, c.threads);
                gamma = evospec::critical_value(dist, c.alpha);
            }
            const auto surface = evospec::spectral_surface(r.series, grid, {c.threads});
            const auto band = evospec::build_scr(surface, gamma, c.alpha, m);
            json cfg = base_config(c, r);
            cfg["alpha"] = c.alpha;
            cfg["N_MC"] = c.n_mc;
            cfg["method"] = method;
            const auto meta = make_meta("scr", cfg, c.seed, start);
            if (c.format == "csv") {
                std::ostringstream os;
                evospec::io::write_scr_csv(os, band);
                emit(c.output, csv_with_meta(meta, os.str()));
            } else {
                emit_json(c.output, evospec::io::scr_to_json(band, meta));
            }
        } else if (*test) {
            const auto r = resolve(c);
            evospec::TestConfig cfg{r.n, r.B, c.n_mc, c.alpha, c.seed, c.threads};
            const auto kind = evospec::parse_null_kind(null_name);
            const auto result = evospec::run_test(r.series, evospec::null_builder(kind), cfg);
            json config = base_config(c, r);
            config["null"] = null_name;
            config["alpha"] = c.alpha;
            config["N_MC"] = c.n_mc;
            emit_json(c.output, evospec::io::test_to_json(result, null_name, make_meta("test", config, c.seed, start)));
        } else if (*fit) {
            if (aic_p.has_value() != aic_q.has_value())
                throw UsageError("give both --aic-max-p and --aic-max-q");
            if (aic_p && (fit->count("--p") || fit->count("--q")))
                throw UsageError("--p/--q and AIC order selection are mutually exclusive");
            const auto series = load_series(c);
            json config = {{"input", c.input}, {"N", series.size()}, {"threads", c.threads},
                           {"restarts", fit_opts.restarts}};
            if (!c.demean.empty()) config["demean"] = c.demean;
            int w = 0;
            if (window) {
                w = *window;
                config["window_source"] = "user";
            } else {
                evospec::MvOptions mv;
                mv.threads = c.threads;
                w = evospec::mv_select(series, mv).n;
                config["window_source"] = "mv";
            }
            const double Nd = static_cast<double>(series.size());
            const double lo = w / (2.0 * Nd);
            const double hi = 1.0 - w / (2.0 * Nd);
            if (!(hi > lo)) throw evospec::io::DataError("fit window is too long for the series");
            std::vector<double> u_grid(static_cast<std::size_t>(u_count));
            for (int k = 0; k < u_count; ++k)
                u_grid[static_cast<std::size_t>(k)] = u_count == 1 ? 0.5 : lo + (hi - lo) * k / (u_count - 1);
            fit_opts.seed = c.seed;
            fit_opts.threads = c.threads;
            json aic_table;
            if (aic_p) {
                const auto sel = evospec::select_order_aic(series, *aic_p, *aic_q, u_grid, w, fit_opts);
                p = sel.p;
                q = sel.q;
                aic_table = json::array();
                for (const auto& cand : sel.table) aic_table.push_back({{"p", cand.p}, {"q", cand.q}, {"aic", cand.aic}});
                config["order_selection"] = "aic";
            }
            const auto model = evospec::fit_tvarma(series, p, q, u_grid, w, fit_opts);
            config["p"] = p;
            config["q"] = q;
            config["window"] = w;
            auto j = evospec::io::model_to_json(model, make_meta("fit-tvarma", config, c.seed, start));
            if (!aic_table.is_null()) j["aic"] = aic_table;
            emit_json(c.output, j);
        } else if (*validate) {
            const auto r = resolve(c);
            const auto model = evospec::io::model_from_json(evospec::io::read_json_file(model_path));
            const auto grid = evospec::build_grid(r.series.size(), r.n, r.B);
            const auto surface = evospec::model_surface(model, grid);
            evospec::TestConfig cfg{r.n, r.B, c.n_mc, c.alpha, c.seed, c.threads};
            const auto result = evospec::validate_model_spectrum(r.series, surface, cfg);
            json config = base_config(c, r);
            config["model"] = model_path;
            config["alpha"] = c.alpha;
            config["N_MC"] = c.n_mc;
            emit_json(c.output, evospec::io::test_to_json(result, "model", make_meta("validate", config, c.seed, start)));
        } else if (*simulate) {
            const auto spec = load_spec(spec_arg);
            const auto series = evospec::simulate(spec, N, c.seed, stream);
            json config = {{"model", evospec::io::spec_to_json(spec)}, {"N", N}, {"stream", stream}};
            std::ostringstream os;
            evospec::io::write_series_csv(os, series);
            emit(c.output, csv_with_meta(make_meta("simulate", config, c.seed, start), os.str()));
        } else if (*experiment) {
            evospec::ExperimentOptions opts;
            opts.threads = c.threads;
            json config = {{"N", N}, {"alpha", c.alpha}, {"reps", reps}, {"N_MC", c.n_mc}, {"threads", c.threads}};
            if (*coverage) {
                opts.method = evospec::parse_scr_method(method);
                const auto spec = load_spec(spec_arg);
                const auto report = evospec::coverage_experiment(spec, N, exp_n, exp_B, c.alpha, reps, c.n_mc,
                                                                 exp_seed, opts);
                config["n"] = exp_n;
                config["B_n"] = exp_B;
                config["method"] = method;
                config["model"] = evospec::io::spec_to_json(spec);
                emit_json(c.output, evospec::io::report_to_json(
                                        report, make_meta("experiment coverage", config, exp_seed, start)));
            } else if (*power) {
                const auto fam = evospec::parse_power_family(family);
                const auto kind = test_kind.empty() ? evospec::default_test(fam) : evospec::parse_null_kind(test_kind);
                const auto report = evospec::power_experiment(fam, kind, N, c.alpha, deltas, reps, c.n_mc,
                                                              exp_seed, opts);
                config["family"] = family;
                config["test"] = std::string(evospec::to_string(kind));
                config["deltas"] = deltas;
                emit_json(c.output,
                          evospec::io::report_to_json(report, make_meta("experiment power", config, exp_seed, start)));
            } else {
                const auto spec = load_spec(spec_arg.empty() ? "ar1-linear-drift" : spec_arg);
                const auto report = evospec::validation_experiment(spec, N, c.alpha, reps, c.n_mc, exp_seed, opts);
                config["model"] = evospec::io::spec_to_json(spec);
                emit_json(c.output, evospec::io::report_to_json(
                                        report, make_meta("experiment validation", config, exp_seed, start)));
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const evospec::io::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const evospec::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
