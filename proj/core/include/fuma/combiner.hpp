#pragma once

#include "fuma/series.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fuma::combiner {

/// mean: equal weights over the selected subset; weighted: renormalised
/// softmax weights over the subset; all-weighted: threshold forced to 0.
enum class Mode { Mean, Weighted, AllWeighted };

std::string_view to_string(Mode mode) noexcept;
Mode mode_from_string(std::string_view name);

/// Softargmin of the fitted log-MSIS values after z-scoring with their mean and
/// sample standard deviation. Uniform when the standard deviation is zero.
/// Requires at least two finite values.
std::vector<double> adjusted_softmax(std::span<const double> fitted);

/// Ratios R_k = P_k / max P are compared with this slack, so that a ratio
/// equal to the threshold up to rounding is selected.
inline constexpr double kRatioTolerance = 1e-12;

/// Indices k with P_k / max P >= tr, in increasing order. Never empty.
std::vector<std::size_t> select_by_threshold(std::span<const double> weights, double tr);

/// Combines the members' intervals with the given (unnormalised) weights;
/// weights are ignored in Mean mode. The point path is the midpoint of the
/// combined bounds. Throws LevelMismatch when members differ in level or
/// horizon.
IntervalForecast combine_intervals(std::span<const IntervalForecast> members, std::span<const double> weights,
                                   Mode mode);

/// Midpoint (L + U) / 2 of a combined interval.
std::vector<double> combine_point(const IntervalForecast &interval);

/// Combination of one series: selects by threshold, renormalises and combines.
struct Combination {
	IntervalForecast forecast;
	std::vector<std::size_t> selected;
	std::vector<double> weights; // renormalised over `selected`
};
Combination combine(std::span<const IntervalForecast> forecasts, std::span<const double> softmax_weights,
                    double tr, Mode mode);

/// Threshold grid {0, 1/steps, ..., 1}; the default has 21 points.
std::vector<double> threshold_grid(int steps = 20);

/// One reference series at one level: the pool's forecasts and fitted
/// log-MSIS values in the same method order, with its actuals and history.
struct ReferenceCase {
	Frequency frequency = Frequency::Yearly;
	std::span<const double> train;
	std::span<const double> test;
	std::vector<IntervalForecast> forecasts;
	std::vector<double> fitted;
};

struct PathPoint {
	Frequency frequency;
	Mode mode;
	double level;
	double tr;
	double mean_msis;
	std::size_t count;
	std::size_t excluded;
};

struct Threshold {
	Frequency frequency;
	Mode mode;
	double level;
	double tr;
	double mean_msis;
};

struct ThresholdResult {
	std::vector<Threshold> optimal;
	std::vector<PathPoint> path;

	/// Optimal threshold of the cell; 0 for all-weighted. Throws DataError if missing.
	double threshold(Frequency frequency, Mode mode, double level) const;
};

/// For each frequency present and each of the Mean and Weighted modes, the
/// mean MSIS of the combined forecasts at every grid point; the optimum is the
/// first grid point attaining the minimum. Series whose MSIS is undefined are
/// excluded and counted. Cases must share one level.
ThresholdResult search_threshold(std::span<const ReferenceCase> cases, std::span<const double> grid, int jobs = 1);

} // namespace fuma::combiner
