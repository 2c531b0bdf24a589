#pragma once

#include "fuma/combiner.hpp"
#include "fuma/features.hpp"
#include "fuma/gam.hpp"
#include "fuma/mcb.hpp"
#include "fuma/methods.hpp"
#include "fuma/series.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fuma::pipeline {

inline constexpr int kFormatVersion = 1;

struct TrainConfig {
	std::vector<double> levels{0.8, 0.95};
	std::vector<double> grid = combiner::threshold_grid();
	gam::Options gam;
	int jobs = 1;
	/// A frequency aborts training when more than this share of its series fail.
	double max_failure_share = 0.2;
	/// Echoed into the model file only.
	std::uint64_t seed = 0;
	std::array<std::size_t, 3> counts{};
};

struct MethodModel {
	std::string method;
	double level = 0.95;
	gam::GamModel model;
	gam::Diagnostics diagnostics;
};

struct TrainedEnsemble {
	int format_version = kFormatVersion;
	std::uint64_t registry_hash = 0;
	std::vector<std::string> methods;
	std::vector<double> levels;
	std::vector<MethodModel> models;
	combiner::ThresholdResult thresholds;
	TrainConfig config;

	/// Throws DataError when no model exists for the pair.
	const gam::GamModel &model(const std::string &method, double level) const;
	/// Threshold of the cell; when the level was not searched, the threshold
	/// at the level nearest to it is used.
	double threshold(Frequency frequency, combiner::Mode mode, double level) const;
};

/// Per-frequency bookkeeping of a training run.
struct FrequencySummary {
	Frequency frequency;
	std::size_t series = 0;
	std::size_t failed = 0;
	std::size_t fallbacks = 0; // method runs replaced by naive
	std::size_t excluded = 0;  // series with an undefined MSIS
};

/// In-sample comparison on the reference set.
struct InSampleRow {
	Frequency frequency;
	double level;
	std::string name;
	double mean_msis;
	std::size_t count;
};

struct TrainResult {
	TrainedEnsemble ensemble;
	std::vector<FrequencySummary> summary;
	std::vector<InSampleRow> in_sample;
	std::vector<std::string> failures; // "id: reason"
};

/// Splits every series, runs the pool, scores, extracts features, fits one GAM
/// per (method, level) and searches the thresholds. Throws SystemicFailure
/// when a frequency loses more than config.max_failure_share of its series.
TrainResult train(std::span<const TimeSeries> reference, const TrainConfig &config = {});

struct LevelProvenance {
	double level;
	std::vector<std::string> methods;  // pool of the series
	std::vector<double> fitted;        // predicted log-MSIS per pool method
	std::vector<double> softmax;       // adjusted softmax weights over the pool
	double threshold;
	std::vector<std::string> selected;
	std::vector<double> weights;       // renormalised over `selected`
};

struct SeriesForecast {
	std::string id;
	Frequency frequency;
	std::vector<IntervalForecast> forecasts; // one per level, ensemble order
	std::vector<LevelProvenance> provenance;
	std::vector<std::string> fallbacks;      // methods replaced by naive
};

struct ForecastOptions {
	combiner::Mode mode = combiner::Mode::Weighted;
	int jobs = 1;
	/// Overrides every stored threshold when set.
	std::optional<double> threshold;
};

/// Testing phase: forecasts the next `horizon()` values of each series using
/// only the methods selected at some level.
std::vector<SeriesForecast> forecast(const TrainedEnsemble &ensemble, std::span<const TimeSeries> series,
                                     const ForecastOptions &options = {});

/// Forecasts of every pool method and of the simple average of the full pool,
/// keyed by name ("simple-average" for the latter).
struct BenchmarkSet {
	std::map<std::string, std::vector<SeriesForecast>> entries;
};
BenchmarkSet benchmark_forecasts(std::span<const TimeSeries> series, std::span<const double> levels, int jobs = 1);

/// Named collection of forecasts, per series id and level.
struct ForecastTable {
	std::string name;
	std::map<std::string, std::vector<IntervalForecast>> by_id;
};
ForecastTable to_table(std::string name, std::span<const SeriesForecast> forecasts);

struct ReportRow {
	std::string model;
	std::string frequency; // yearly | quarterly | monthly | total
	double level;
	double mean_msis;
	double mean_mase;
	double acd;
	std::size_t count;
	std::size_t excluded;
};

struct SelectionRow {
	std::string frequency;
	double level;
	std::string method;
	std::size_t selected;
	std::size_t series;
	double rate;
};

struct McbRow {
	double level;
	std::string model;
	double mean_rank;
	double half_width;
	bool not_different;
	std::size_t series;
};

struct EvaluationReport {
	std::vector<ReportRow> rows;
	std::vector<SelectionRow> selection;
	std::vector<McbRow> mcb;
	std::vector<std::string> notes;
};

/// Scores every table against the held-out actuals. `histories` are the
/// training parts (the same ids as `actuals`). A table may omit whole
/// frequencies; MCB then leaves it out. Throws IdMismatch when a table lacks
/// some series of a frequency it covers or contains unknown ids.
EvaluationReport evaluate(std::span<const ForecastTable> tables, std::span<const TimeSeries> histories,
                          const std::map<std::string, std::vector<double>> &actuals,
                          std::span<const SeriesForecast> provenance = {});

} // namespace fuma::pipeline
