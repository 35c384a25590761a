#include "evospec/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace evospec::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view text, double& out) {
    std::string buffer;
    if (text.starts_with("\u2212")) {
        buffer = "-" + std::string(text.substr(3));
        text = buffer;
    }
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, out);
    return res.ec == std::errc() && res.ptr == end;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

json with_meta(const json& meta, json body) {
    json out = json::object();
    out["meta"] = meta;
    for (auto& [k, v] : body.items()) out[k] = std::move(v);
    return out;
}

}  // namespace

TimeSeries read_series_csv(std::istream& in, std::string_view source) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    bool seen_content = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        double v = 0.0;
        if (parse_double(text, v)) {
            if (!std::isfinite(v))
                throw DataError(std::string(source) + ":" + std::to_string(lineno) + ": non-finite value", lineno);
            values.push_back(v);
        } else if (!seen_content) {
            // header line
        } else {
            throw DataError(std::string(source) + ":" + std::to_string(lineno) + ": cannot parse '" +
                                std::string(text) + "' as a number",
                            lineno);
        }
        seen_content = true;
    }
    if (values.empty()) throw DataError(std::string(source) + ": no observations");
    return TimeSeries(std::move(values));
}

TimeSeries ingest_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return read_series_csv(in, path.string());
}

void write_series_csv(std::ostream& out, const TimeSeries& series) {
    out << "value\n";
    for (double v : series.values()) out << format_double(v) << '\n';
}

json grid_to_json(const TimeFreqGrid& grid) {
    return {{"u", grid.u}, {"theta", grid.theta}, {"n", grid.n}, {"B_n", grid.B}, {"N", grid.N}};
}

TimeFreqGrid grid_from_json(const json& j) {
    TimeFreqGrid g;
    g.u = j.at("u").get<std::vector<double>>();
    g.theta = j.at("theta").get<std::vector<double>>();
    g.n = j.at("n").get<int>();
    g.B = j.at("B_n").get<int>();
    g.N = j.at("N").get<std::size_t>();
    return g;
}

json surface_to_json(const SpectralSurface& surface, const json& meta) {
    return with_meta(meta, {{"grid", grid_to_json(surface.grid)}, {"payload", {{"values", surface.values}}}});
}

SpectralSurface surface_from_json(const json& j) {
    auto grid = grid_from_json(j.at("grid"));
    auto values = j.at("payload").at("values").get<std::vector<double>>();
    return SpectralSurface(std::move(grid), std::move(values));
}

json scr_to_json(const SCR& scr, const json& meta) {
    json payload = {{"center", scr.center.values},
                    {"lower", scr.lower},
                    {"upper", scr.upper},
                    {"gamma", scr.gamma},
                    {"alpha", scr.alpha},
                    {"method", std::string(to_string(scr.method))}};
    return with_meta(meta, {{"grid", grid_to_json(scr.grid)}, {"payload", std::move(payload)}});
}

json test_to_json(const TestResult& result, std::string_view null_name, const json& meta) {
    json payload = {{"null", std::string(null_name)},
                    {"statistic", result.statistic},
                    {"p_value", result.p_value},
                    {"gamma_alpha", result.gamma_alpha},
                    {"critical_statistic", result.gamma_alpha * result.gamma_alpha},
                    {"reject", result.reject},
                    {"alpha", result.config.alpha},
                    {"N_MC", result.config.n_mc},
                    {"estimate", result.estimate.values},
                    {"null_surface", result.null_surface.values}};
    return with_meta(meta, {{"grid", grid_to_json(result.estimate.grid)}, {"payload", std::move(payload)}});
}

json selection_to_json(const TuningSelection& selection) {
    json cells = json::array();
    for (const auto& c : selection.scores) cells.push_back({{"n", c.n}, {"B_n", c.B}, {"score", c.score}});
    return {{"n", selection.n}, {"B_n", selection.B}, {"n_range", {selection.n_l, selection.n_r}}, {"scores", cells}};
}

json model_to_json(const TvArmaModel& model, const json& meta) {
    json payload = {{"p", model.p},           {"q", model.q},
                    {"u", model.u_grid},      {"ar", model.ar},
                    {"ma", model.ma},         {"sigma2", model.sigma2},
                    {"window", model.window}, {"objective", model.objective},
                    {"converged", model.converged}};
    return with_meta(meta, {{"model", std::move(payload)}});
}

TvArmaModel model_from_json(const json& j) {
    const json& m = j.contains("model") ? j.at("model") : j;
    TvArmaModel model;
    model.p = m.at("p").get<int>();
    model.q = m.at("q").get<int>();
    model.u_grid = m.at("u").get<std::vector<double>>();
    model.ar = m.at("ar").get<std::vector<double>>();
    model.ma = m.at("ma").get<std::vector<double>>();
    model.sigma2 = m.at("sigma2").get<std::vector<double>>();
    model.window = m.value("window", 0);
    model.objective = m.value("objective", std::vector<double>{});
    model.converged = m.value("converged", true);
    const std::size_t k = model.u_grid.size();
    if (model.p < 0 || model.q < 0 || model.ar.size() != k * static_cast<std::size_t>(model.p) ||
        model.ma.size() != k * static_cast<std::size_t>(model.q) || model.sigma2.size() != k || k == 0)
        throw DataError("model file: coefficient arrays do not match p, q and the u grid");
    return model;
}

json coef_to_json(const CoefFn& fn) {
    json j = {{"form", std::string(to_string(fn.form))}};
    switch (fn.form) {
        case CoefFn::Form::constant:
            j["value"] = fn.offset;
            break;
        case CoefFn::Form::polynomial:
            j["coefficients"] = fn.poly;
            break;
        case CoefFn::Form::cosine:
        case CoefFn::Form::sine:
            j["amplitude"] = fn.amplitude;
            j["frequency"] = fn.frequency;
            j["phase"] = fn.phase;
            j["offset"] = fn.offset;
            break;
    }
    return j;
}

CoefFn coef_from_json(const json& j) {
    if (j.is_number()) return CoefFn::constant(j.get<double>());
    const auto form = parse_coef_form(j.at("form").get<std::string>());
    switch (form) {
        case CoefFn::Form::constant:
            return CoefFn::constant(j.at("value").get<double>());
        case CoefFn::Form::polynomial:
            return CoefFn::polynomial(j.at("coefficients").get<std::vector<double>>());
        case CoefFn::Form::cosine:
        case CoefFn::Form::sine: {
            auto fn = CoefFn::cosine(j.at("amplitude").get<double>(), j.value("frequency", 1.0),
                                     j.value("phase", 0.0), j.value("offset", 0.0));
            fn.form = form;
            return fn;
        }
    }
    return {};
}

json spec_to_json(const ModelSpec& spec) {
    json coefs = json::object();
    for (const auto& [name, fn] : spec.coefs) coefs[name] = coef_to_json(fn);
    json j = {{"kind", std::string(to_string(spec.kind))}, {"coefficients", coefs}, {"burn_in", spec.burn_in}};
    if (spec.kind == ModelKind::tv_ar_general) {
        json ar = json::array();
        for (const auto& fn : spec.ar) ar.push_back(coef_to_json(fn));
        j["ar"] = ar;
    }
    if (spec.kind == ModelKind::tv_markov_switch)
        j["transition"] = {{spec.transition[0][0], spec.transition[0][1]},
                           {spec.transition[1][0], spec.transition[1][1]}};
    return j;
}

ModelSpec spec_from_json(const json& j) {
    if (j.contains("preset")) return preset_model(j.at("preset").get<std::string>(), j.value("delta", 0.0));
    ModelSpec spec;
    spec.kind = parse_model_kind(j.at("kind").get<std::string>());
    for (const auto& [name, fn] : j.at("coefficients").items()) spec.coefs[name] = coef_from_json(fn);
    if (j.contains("ar"))
        for (const auto& fn : j.at("ar")) spec.ar.push_back(coef_from_json(fn));
    if (j.contains("transition")) {
        const auto rows = j.at("transition").get<std::vector<std::vector<double>>>();
        if (rows.size() != 2 || rows[0].size() != 2 || rows[1].size() != 2)
            throw DataError("model spec: transition must be a 2x2 matrix");
        spec.transition = {{{rows[0][0], rows[0][1]}, {rows[1][0], rows[1][1]}}};
    }
    spec.burn_in = j.value("burn_in", 200);
    validate_spec(spec);
    return spec;
}

json report_to_json(const ExperimentReport& report, const json& meta) {
    json payload = {{"experiment", report.kind},
                    {"model", spec_to_json(report.model)},
                    {"N", report.N},
                    {"n", report.n},
                    {"B_n", report.B},
                    {"alpha", report.alpha},
                    {"reps", report.reps},
                    {"N_MC", report.n_mc},
                    {"seed", report.seed},
                    {"method", std::string(to_string(report.method))},
                    {"coverage_or_rejection", report.coverage_or_rejection},
                    {"per_rep_outcomes", report.per_rep_outcomes},
                    {"wall_time", report.wall_time}};
    return with_meta(meta, {{"payload", std::move(payload)}});
}

json report_to_json(const PowerReport& report, const json& meta) {
    json points = json::array();
    for (const auto& pt : report.points)
        points.push_back({{"delta", pt.delta},
                          {"rejection_rate", pt.rejection_rate},
                          {"per_rep_outcomes", pt.per_rep_outcomes},
                          {"n", pt.n},
                          {"B_n", pt.B}});
    json payload = {{"experiment", "power"},
                    {"family", std::string(to_string(report.family))},
                    {"test", std::string(to_string(report.test))},
                    {"N", report.N},
                    {"alpha", report.alpha},
                    {"reps", report.reps},
                    {"N_MC", report.n_mc},
                    {"seed", report.seed},
                    {"points", points},
                    {"wall_time", report.wall_time}};
    return with_meta(meta, {{"payload", std::move(payload)}});
}

json report_to_json(const ValidationReport& report, const json& meta) {
    json payload = {{"experiment", "validation"},
                    {"model", spec_to_json(report.model)},
                    {"N", report.N},
                    {"alpha", report.alpha},
                    {"reps", report.reps},
                    {"N_MC", report.n_mc},
                    {"seed", report.seed},
                    {"rmse", report.rmse},
                    {"coverage_or_rejection", report.rejection_rate},
                    {"per_rep_outcomes", report.per_rep_outcomes},
                    {"per_rep_rmse", report.per_rep_rmse},
                    {"n", report.n},
                    {"B_n", report.B},
                    {"wall_time", report.wall_time}};
    return with_meta(meta, {{"payload", std::move(payload)}});
}

void write_surface_csv(std::ostream& out, const SpectralSurface& surface) {
    out << "u,theta,value\n";
    for (std::size_t iu = 0; iu < surface.rows(); ++iu)
        for (std::size_t it = 0; it < surface.cols(); ++it)
            out << format_double(surface.grid.u[iu]) << ',' << format_double(surface.grid.theta[it]) << ','
                << format_double(surface(iu, it)) << '\n';
}

void write_scr_csv(std::ostream& out, const SCR& scr) {
    out << "u,theta,value,lower,upper\n";
    const std::size_t cols = scr.grid.freq_count();
    for (std::size_t iu = 0; iu < scr.grid.time_count(); ++iu)
        for (std::size_t it = 0; it < cols; ++it) {
            const std::size_t g = iu * cols + it;
            out << format_double(scr.grid.u[iu]) << ',' << format_double(scr.grid.theta[it]) << ','
                << format_double(scr.center.values[g]) << ',' << format_double(scr.lower[g]) << ','
                << format_double(scr.upper[g]) << '\n';
        }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(path.string() + ": invalid JSON: " + e.what());
    }
}

}  // namespace evospec::io
