#pragma once

#include "fuma/series.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fuma::metrics {

/// Mean absolute seasonal difference of the training data, (1/(n-m)) sum |y_t - y_{t-m}|.
/// Throws ZeroDenominator when it is zero and SeriesTooShort when n < m + 2.
double scale_denominator(std::span<const double> train, int period);

/// Mean scaled interval score at significance alpha = 1 - level.
double msis(std::span<const double> test, std::span<const double> lower, std::span<const double> upper,
            std::span<const double> train, int period, double alpha);

/// Mean absolute scaled error with the MSIS denominator.
double mase(std::span<const double> test, std::span<const double> point, std::span<const double> train,
            int period);

/// Observations with lower <= y <= upper.
std::size_t covered(std::span<const double> test, std::span<const double> lower, std::span<const double> upper);

struct Coverage {
	std::size_t covered = 0;
	std::size_t total = 0;

	double rate() const noexcept { return total == 0 ? 0.0 : static_cast<double>(covered) / total; }
	Coverage &operator+=(const Coverage &o) noexcept {
		covered += o.covered;
		total += o.total;
		return *this;
	}
};

/// |empirical coverage - nominal level|.
double acd(const Coverage &coverage, double level);

/// Floor applied before taking logs so that a zero-width, fully covering
/// interval still has a finite log score.
inline constexpr double kMsisFloor = 1e-8;
double log_msis(double msis) noexcept;

struct Score {
	double msis = 0.0;
	double log_msis = 0.0;
	double mase = 0.0;
	std::size_t covered = 0;
	std::size_t horizon = 0;
	/// Set when the denominator is zero; the entry is excluded from averages.
	bool missing = false;
};

/// Scores one interval forecast; ZeroDenominator becomes a missing score.
Score score(const IntervalForecast &forecast, std::span<const double> test, std::span<const double> train,
            int period);

/// Scores indexed by (series, method, level), stored densely.
class ScoreMatrix {
public:
	ScoreMatrix() = default;
	ScoreMatrix(std::vector<std::string> series, std::vector<std::string> methods, std::vector<double> levels);

	const std::vector<std::string> &series() const noexcept { return series_; }
	const std::vector<std::string> &methods() const noexcept { return methods_; }
	const std::vector<double> &levels() const noexcept { return levels_; }

	Score &operator()(std::size_t series, std::size_t method, std::size_t level);
	const Score &operator()(std::size_t series, std::size_t method, std::size_t level) const;
	std::size_t method_index(const std::string &method) const;
	std::size_t level_index(double level) const;

	/// True when every method of the series has a non-missing score at the level.
	bool complete(std::size_t series, std::size_t level) const;

private:
	std::vector<std::string> series_;
	std::vector<std::string> methods_;
	std::vector<double> levels_;
	std::vector<Score> scores_;
};

/// Arithmetic mean over non-missing entries, with the number excluded.
struct Average {
	double value = 0.0;
	std::size_t count = 0;
	std::size_t excluded = 0;
};
Average average(std::span<const Score> scores, double Score::*field);

} // namespace fuma::metrics
