#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"

#include "evospec/hypothesis.hpp"
#include "evospec/scr.hpp"
#include "evospec/series.hpp"
#include "evospec/simulators.hpp"
#include "evospec/spectral.hpp"
#include "evospec/tuning.hpp"
#include "evospec/whittle.hpp"

namespace evospec::io {

using json = nlohmann::json;

/// Raised for malformed input files; `line` is 1-based, 0 when not applicable.
class DataError : public std::runtime_error {
public:
    DataError(const std::string& message, std::size_t line = 0)
        : std::runtime_error(message), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// One numeric column; the first non-blank line may be a header. Blank lines
/// and lines starting with # are skipped;
/// any other non-numeric line is an error citing its line number.
TimeSeries read_series_csv(std::istream& in, std::string_view source = "<stream>");
TimeSeries ingest_csv(const std::filesystem::path& path);
void write_series_csv(std::ostream& out, const TimeSeries& series);

json grid_to_json(const TimeFreqGrid& grid);
TimeFreqGrid grid_from_json(const json& j);

/// {meta, grid, payload:{values}}
json surface_to_json(const SpectralSurface& surface, const json& meta = json::object());
SpectralSurface surface_from_json(const json& j);

json scr_to_json(const SCR& scr, const json& meta = json::object());
json test_to_json(const TestResult& result, std::string_view null_name, const json& meta = json::object());
json selection_to_json(const TuningSelection& selection);

json model_to_json(const TvArmaModel& model, const json& meta = json::object());
TvArmaModel model_from_json(const json& j);

json coef_to_json(const CoefFn& fn);
CoefFn coef_from_json(const json& j);
json spec_to_json(const ModelSpec& spec);
/// Accepts a full spec object or {"preset": name, "delta": d}.
ModelSpec spec_from_json(const json& j);

json report_to_json(const ExperimentReport& report, const json& meta = json::object());
json report_to_json(const PowerReport& report, const json& meta = json::object());
json report_to_json(const ValidationReport& report, const json& meta = json::object());

/// Long format: u,theta,value
void write_surface_csv(std::ostream& out, const SpectralSurface& surface);
/// Long format: u,theta,value,lower,upper
void write_scr_csv(std::ostream& out, const SCR& scr);

json read_json_file(const std::filesystem::path& path);

}  // namespace evospec::io
