#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fuma {

enum class Frequency { Yearly, Quarterly, Monthly };

inline constexpr Frequency kAllFrequencies[] = {Frequency::Yearly, Frequency::Quarterly,
                                                Frequency::Monthly};

int seasonal_period(Frequency f) noexcept;
/// M4 forecast horizon: 6 / 8 / 18.
int default_horizon(Frequency f) noexcept;
std::string_view to_string(Frequency f) noexcept;
Frequency frequency_from_string(std::string_view name);
Frequency frequency_from_period(int m);

/// Observations of one series with its seasonal period and forecast horizon.
/// Immutable once constructed; the constructor enforces all invariants.
class TimeSeries {
public:
	TimeSeries(std::string id, std::vector<double> values, int period, int horizon);

	const std::string &id() const noexcept { return id_; }
	std::span<const double> values() const noexcept { return values_; }
	std::size_t size() const noexcept { return values_.size(); }
	double operator[](std::size_t i) const { return values_[i]; }
	int period() const noexcept { return period_; }
	int horizon() const noexcept { return horizon_; }
	Frequency frequency() const { return frequency_from_period(period_); }

	/// Same metadata, new values (used for transformed copies).
	TimeSeries with_values(std::vector<double> values) const;

private:
	std::string id_;
	std::vector<double> values_;
	int period_;
	int horizon_;
};

struct SplitSeries {
	TimeSeries train;
	std::vector<double> test;
};

/// Holds the last h values out. Requires n >= h + m + 2.
SplitSeries split(const TimeSeries &series);

/// Central prediction interval at nominal coverage `level` plus the point path.
struct IntervalForecast {
	double level = 0.95;
	std::vector<double> lower;
	std::vector<double> point;
	std::vector<double> upper;

	std::size_t horizon() const noexcept { return point.size(); }
	/// Checks L <= U elementwise, finite values and matching lengths.
	bool valid() const noexcept;
};

/// Per-method interval forecasts of one series, one entry per requested level.
class ForecastBundle {
public:
	explicit ForecastBundle(std::string series_id) : series_id_(std::move(series_id)) {}

	/// Throws LevelMismatch if the level set or horizon differs from methods already added.
	void add(const std::string &method, std::vector<IntervalForecast> forecasts);

	const std::string &series_id() const noexcept { return series_id_; }
	const std::map<std::string, std::vector<IntervalForecast>> &methods() const noexcept {
		return methods_;
	}
	bool contains(const std::string &method) const { return methods_.count(method) > 0; }
	const IntervalForecast &at(const std::string &method, double level) const;

private:
	std::string series_id_;
	std::map<std::string, std::vector<IntervalForecast>> methods_;
};

} // namespace fuma
