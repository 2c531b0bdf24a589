#include "fuma/metrics.hpp"
#include "fuma/error.hpp"

#include <algorithm>
#include <cmath>

namespace fuma::metrics {

namespace {

void check_lengths(std::size_t h, std::size_t a, std::size_t b) {
	if (h == 0 || a != h || b != h)
		throw DataError("forecast and test lengths differ");
}

} // namespace

double scale_denominator(std::span<const double> train, int period) {
	const auto m = static_cast<std::size_t>(std::max(1, period));
	if (train.size() < m + 2)
		throw SeriesTooShort("training data shorter than m + 2");
	double sum = 0.0;
	for (std::size_t t = m; t < train.size(); ++t)
		sum += std::abs(train[t] - train[t - m]);
	if (!(sum > 0.0))
		throw ZeroDenominator("in-sample seasonal differences are all zero");
	return sum / static_cast<double>(train.size() - m);
}

double msis(std::span<const double> test, std::span<const double> lower, std::span<const double> upper,
            std::span<const double> train, int period, double alpha) {
	check_lengths(test.size(), lower.size(), upper.size());
	if (!(alpha > 0.0 && alpha < 1.0))
		throw DataError("alpha must lie in (0, 1)");
	const double scale = scale_denominator(train, period);
	const double k = 2.0 / alpha;
	double sum = 0.0;
	for (std::size_t t = 0; t < test.size(); ++t) {
		sum += upper[t] - lower[t];
		if (test[t] < lower[t])
			sum += k * (lower[t] - test[t]);
		if (test[t] > upper[t])
			sum += k * (test[t] - upper[t]);
	}
	return sum / static_cast<double>(test.size()) / scale;
}

double mase(std::span<const double> test, std::span<const double> point, std::span<const double> train,
            int period) {
	check_lengths(test.size(), point.size(), point.size());
	const double scale = scale_denominator(train, period);
	double sum = 0.0;
	for (std::size_t t = 0; t < test.size(); ++t)
		sum += std::abs(test[t] - point[t]);
	return sum / static_cast<double>(test.size()) / scale;
}

std::size_t covered(std::span<const double> test, std::span<const double> lower, std::span<const double> upper) {
	check_lengths(test.size(), lower.size(), upper.size());
	std::size_t n = 0;
	for (std::size_t t = 0; t < test.size(); ++t)
		n += lower[t] <= test[t] && test[t] <= upper[t] ? 1 : 0;
	return n;
}

double acd(const Coverage &coverage, double level) { return std::abs(coverage.rate() - level); }

double log_msis(double msis) noexcept { return std::log(std::max(msis, kMsisFloor)); }

Score score(const IntervalForecast &forecast, std::span<const double> test, std::span<const double> train,
            int period) {
	Score s;
	s.horizon = test.size();
	s.covered = covered(test, forecast.lower, forecast.upper);
	try {
		s.msis = msis(test, forecast.lower, forecast.upper, train, period, 1.0 - forecast.level);
		s.mase = mase(test, forecast.point, train, period);
		s.log_msis = log_msis(s.msis);
	} catch (const ZeroDenominator &) {
		s.missing = true;
		s.msis = s.mase = s.log_msis = 0.0;
	}
	return s;
}

ScoreMatrix::ScoreMatrix(std::vector<std::string> series, std::vector<std::string> methods,
                         std::vector<double> levels)
	: series_(std::move(series)), methods_(std::move(methods)), levels_(std::move(levels)),
	  scores_(series_.size() * methods_.size() * levels_.size()) {}

Score &ScoreMatrix::operator()(std::size_t series, std::size_t method, std::size_t level) {
	return scores_.at((series * methods_.size() + method) * levels_.size() + level);
}

const Score &ScoreMatrix::operator()(std::size_t series, std::size_t method, std::size_t level) const {
	return scores_.at((series * methods_.size() + method) * levels_.size() + level);
}

std::size_t ScoreMatrix::method_index(const std::string &method) const {
	const auto it = std::find(methods_.begin(), methods_.end(), method);
	if (it == methods_.end())
		throw DataError("method " + method + " not in score matrix");
	return static_cast<std::size_t>(it - methods_.begin());
}

std::size_t ScoreMatrix::level_index(double level) const {
	for (std::size_t i = 0; i < levels_.size(); ++i)
		if (std::abs(levels_[i] - level) < 1e-9)
			return i;
	throw LevelMismatch("level " + std::to_string(level) + " not in score matrix");
}

bool ScoreMatrix::complete(std::size_t series, std::size_t level) const {
	for (std::size_t j = 0; j < methods_.size(); ++j)
		if ((*this)(series, j, level).missing)
			return false;
	return true;
}

Average average(std::span<const Score> scores, double Score::*field) {
	Average a;
	double sum = 0.0;
	for (const auto &s : scores) {
		if (s.missing) {
			++a.excluded;
			continue;
		}
		sum += s.*field;
		++a.count;
	}
	a.value = a.count == 0 ? 0.0 : sum / static_cast<double>(a.count);
	return a;
}

} // namespace fuma::metrics
