#pragma once

#include "fuma/generator.hpp"
#include "fuma/pipeline.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fuma::io {

/// 17 significant digits, enough to round-trip every double.
std::string format_double(double v);
double parse_double(std::string_view text);

/// Long-form series CSV with header `id,frequency,index,value`. Rows of one id
/// may appear in any order; values are ordered by index, which must be
/// unique per id. Series keep the order of their first row.
std::vector<TimeSeries> read_series_csv(std::istream &in, std::optional<int> horizon = {});
std::vector<TimeSeries> read_series_csv(const std::filesystem::path &path, std::optional<int> horizon = {});
void write_series_csv(std::ostream &out, std::span<const TimeSeries> series);

/// `id,level,step,lower,point,upper`, steps counted from 1.
void write_forecast_csv(std::ostream &out, std::span<const pipeline::SeriesForecast> forecasts);
pipeline::ForecastTable read_forecast_csv(std::istream &in, std::string name);
pipeline::ForecastTable read_forecast_csv(const std::filesystem::path &path, std::string name);

/// `id,frequency,level,method,fitted,softmax,threshold,selected,weight`, one
/// row per pool method; weight is the renormalised weight (0 when not selected).
void write_provenance_csv(std::ostream &out, std::span<const pipeline::SeriesForecast> forecasts);
/// Restores ids, frequencies and provenance (not the forecasts).
std::vector<pipeline::SeriesForecast> read_provenance_csv(std::istream &in);
std::vector<pipeline::SeriesForecast> read_provenance_csv(const std::filesystem::path &path);

/// Versioned JSON with every real number stored as a 17-digit decimal string.
std::string ensemble_to_json(const pipeline::TrainedEnsemble &ensemble);
pipeline::TrainedEnsemble ensemble_from_json(std::string_view text);
void save_ensemble(const std::filesystem::path &path, const pipeline::TrainedEnsemble &ensemble);
pipeline::TrainedEnsemble load_ensemble(const std::filesystem::path &path);

/// `frequency,mode,level,tr,mean_msis,count,excluded`.
void write_threshold_path_csv(std::ostream &out, const combiner::ThresholdResult &thresholds);

/// `method,level,feature,x,effect` on an evenly spaced grid spanning each
/// smooth's boundary knots.
void write_effects_csv(std::ostream &out, const pipeline::TrainedEnsemble &ensemble, int points,
                       std::span<const std::string> features = {});

std::string report_to_json(const pipeline::EvaluationReport &report);
/// Writes metrics.csv, selection.csv and mcb.csv into `dir`.
void write_report_tables(const std::filesystem::path &dir, const pipeline::EvaluationReport &report);

std::string training_summary_json(const pipeline::TrainResult &result);
std::string generator_config_json(const generator::ReferenceSetOptions &options,
                                  const generator::LengthSampler &lengths);

} // namespace fuma::io
