#include "fuma/series.hpp"
#include "fuma/error.hpp"

#include <algorithm>
#include <cmath>

namespace fuma {

int seasonal_period(Frequency f) noexcept {
	switch (f) {
	case Frequency::Yearly:
		return 1;
	case Frequency::Quarterly:
		return 4;
	case Frequency::Monthly:
		return 12;
	}
	return 1;
}

int default_horizon(Frequency f) noexcept {
	switch (f) {
	case Frequency::Yearly:
		return 6;
	case Frequency::Quarterly:
		return 8;
	case Frequency::Monthly:
		return 18;
	}
	return 6;
}

std::string_view to_string(Frequency f) noexcept {
	switch (f) {
	case Frequency::Yearly:
		return "yearly";
	case Frequency::Quarterly:
		return "quarterly";
	case Frequency::Monthly:
		return "monthly";
	}
	return "yearly";
}

Frequency frequency_from_string(std::string_view name) {
	if (name == "yearly")
		return Frequency::Yearly;
	if (name == "quarterly")
		return Frequency::Quarterly;
	if (name == "monthly")
		return Frequency::Monthly;
	throw DataError("unknown frequency '" + std::string(name) + "'");
}

Frequency frequency_from_period(int m) {
	switch (m) {
	case 1:
		return Frequency::Yearly;
	case 4:
		return Frequency::Quarterly;
	case 12:
		return Frequency::Monthly;
	default:
		throw DataError("unsupported seasonal period " + std::to_string(m));
	}
}

TimeSeries::TimeSeries(std::string id, std::vector<double> values, int period, int horizon)
	: id_(std::move(id)), values_(std::move(values)), period_(period), horizon_(horizon) {
	frequency_from_period(period_);
	if (horizon_ <= 0)
		throw DataError(id_ + ": horizon must be positive");
	for (double v : values_) {
		if (!std::isfinite(v))
			throw DataError(id_ + ": non-finite observation");
	}
	if (values_.size() < static_cast<std::size_t>(period_ + 2))
		throw SeriesTooShort(id_ + ": length " + std::to_string(values_.size()) +
		                     " is below m + 2 = " + std::to_string(period_ + 2));
}

TimeSeries TimeSeries::with_values(std::vector<double> values) const {
	return TimeSeries(id_, std::move(values), period_, horizon_);
}

SplitSeries split(const TimeSeries &series) {
	const auto n = series.size();
	const auto h = static_cast<std::size_t>(series.horizon());
	const auto m = static_cast<std::size_t>(series.period());
	if (n < h + m + 2)
		throw SeriesTooShort(series.id() + ": length " + std::to_string(n) +
		                     " cannot hold out h = " + std::to_string(h));
	auto v = series.values();
	std::vector<double> train(v.begin(), v.end() - static_cast<std::ptrdiff_t>(h));
	std::vector<double> test(v.end() - static_cast<std::ptrdiff_t>(h), v.end());
	return {series.with_values(std::move(train)), std::move(test)};
}

bool IntervalForecast::valid() const noexcept {
	if (lower.size() != point.size() || upper.size() != point.size())
		return false;
	for (std::size_t i = 0; i < point.size(); ++i) {
		if (!std::isfinite(lower[i]) || !std::isfinite(point[i]) || !std::isfinite(upper[i]))
			return false;
		if (lower[i] > upper[i])
			return false;
	}
	return level > 0.0 && level < 1.0;
}

void ForecastBundle::add(const std::string &method, std::vector<IntervalForecast> forecasts) {
	std::sort(forecasts.begin(), forecasts.end(),
	          [](const IntervalForecast &a, const IntervalForecast &b) { return a.level < b.level; });
	if (!methods_.empty()) {
		const auto &ref = methods_.begin()->second;
		bool same = ref.size() == forecasts.size();
		for (std::size_t i = 0; same && i < ref.size(); ++i)
			same = ref[i].level == forecasts[i].level && ref[i].horizon() == forecasts[i].horizon();
		if (!same)
			throw LevelMismatch(series_id_ + ": method " + method +
			                    " does not share the bundle's levels/horizon");
	}
	methods_[method] = std::move(forecasts);
}

const IntervalForecast &ForecastBundle::at(const std::string &method, double level) const {
	auto it = methods_.find(method);
	if (it == methods_.end())
		throw Error(series_id_ + ": no forecasts for method " + method);
	for (const auto &f : it->second) {
		if (std::abs(f.level - level) < 1e-12)
			return f;
	}
	throw LevelMismatch(series_id_ + ": method " + method + " has no level " +
	                    std::to_string(level));
}

} // namespace fuma
