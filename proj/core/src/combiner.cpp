#include "fuma/combiner.hpp"
#include "fuma/error.hpp"
#include "fuma/metrics.hpp"
#include "fuma/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace fuma::combiner {

std::string_view to_string(Mode mode) noexcept {
	switch (mode) {
	case Mode::Mean:
		return "mean";
	case Mode::Weighted:
		return "weighted";
	case Mode::AllWeighted:
		return "all-weighted";
	}
	return "mean";
}

Mode mode_from_string(std::string_view name) {
	if (name == "mean")
		return Mode::Mean;
	if (name == "weighted")
		return Mode::Weighted;
	if (name == "all-weighted")
		return Mode::AllWeighted;
	throw DataError("unknown combination mode '" + std::string(name) + "'");
}

std::vector<double> adjusted_softmax(std::span<const double> fitted) {
	const std::size_t m = fitted.size();
	if (m < 2)
		throw DataError("adjusted softmax needs at least two methods");
	double mu = 0.0;
	for (double x : fitted) {
		if (!std::isfinite(x))
			throw DataError("fitted log-MSIS values must be finite");
		mu += x;
	}
	mu /= static_cast<double>(m);
	double ss = 0.0;
	for (double x : fitted)
		ss += (x - mu) * (x - mu);
	const double sigma = std::sqrt(ss / static_cast<double>(m - 1));
	std::vector<double> p(m, 1.0 / static_cast<double>(m));
	if (!(sigma > 0.0))
		return p;
	double zmax = -std::numeric_limits<double>::infinity();
	std::vector<double> z(m);
	for (std::size_t k = 0; k < m; ++k) {
		z[k] = (mu - fitted[k]) / sigma;
		zmax = std::max(zmax, z[k]);
	}
	double total = 0.0;
	for (std::size_t k = 0; k < m; ++k) {
		p[k] = std::exp(z[k] - zmax);
		total += p[k];
	}
	for (double &v : p)
		v /= total;
	return p;
}

std::vector<std::size_t> select_by_threshold(std::span<const double> weights, double tr) {
	if (weights.empty())
		throw DataError("no weights to select from");
	if (!(tr >= 0.0 && tr <= 1.0))
		throw DataError("threshold ratio must lie in [0, 1]");
	const double pmax = *std::max_element(weights.begin(), weights.end());
	std::vector<std::size_t> out;
	for (std::size_t k = 0; k < weights.size(); ++k)
		if (weights[k] / pmax >= tr - kRatioTolerance)
			out.push_back(k);
	return out;
}

std::vector<double> combine_point(const IntervalForecast &interval) {
	std::vector<double> f(interval.lower.size());
	for (std::size_t t = 0; t < f.size(); ++t)
		f[t] = 0.5 * (interval.lower[t] + interval.upper[t]);
	return f;
}

IntervalForecast combine_intervals(std::span<const IntervalForecast> members, std::span<const double> weights,
                                   Mode mode) {
	if (members.empty())
		throw DataError("cannot combine an empty subset");
	const auto &first = members.front();
	const std::size_t h = first.horizon();
	for (const auto &f : members)
		if (std::abs(f.level - first.level) > 1e-12 || f.lower.size() != h || f.upper.size() != h)
			throw LevelMismatch("combined forecasts differ in level or horizon");
	bool equal = mode == Mode::Mean;
	if (!equal) {
		if (weights.size() != members.size())
			throw DataError("one weight per member is required");
		equal = std::all_of(weights.begin(), weights.end(), [&](double w) { return w == weights.front(); });
	}
	IntervalForecast out;
	out.level = first.level;
	out.lower.assign(h, 0.0);
	out.upper.assign(h, 0.0);
	if (equal) {
		for (const auto &f : members)
			for (std::size_t t = 0; t < h; ++t) {
				out.lower[t] += f.lower[t];
				out.upper[t] += f.upper[t];
			}
		const double k = static_cast<double>(members.size());
		for (std::size_t t = 0; t < h; ++t) {
			out.lower[t] /= k;
			out.upper[t] /= k;
		}
	} else {
		double total = 0.0;
		for (double w : weights)
			total += w;
		if (!(total > 0.0))
			throw DataError("combination weights must have a positive sum");
		for (std::size_t i = 0; i < members.size(); ++i) {
			const double w = weights[i] / total;
			for (std::size_t t = 0; t < h; ++t) {
				out.lower[t] += w * members[i].lower[t];
				out.upper[t] += w * members[i].upper[t];
			}
		}
	}
	// Guard against rounding pushing L above U when the members are nearly equal.
	for (std::size_t t = 0; t < h; ++t)
		if (out.lower[t] > out.upper[t])
			out.lower[t] = out.upper[t] = 0.5 * (out.lower[t] + out.upper[t]);
	out.point = combine_point(out);
	return out;
}

Combination combine(std::span<const IntervalForecast> forecasts, std::span<const double> softmax_weights, double tr,
                    Mode mode) {
	if (forecasts.size() != softmax_weights.size())
		throw DataError("one weight per forecast is required");
	Combination c;
	c.selected = select_by_threshold(softmax_weights, mode == Mode::AllWeighted ? 0.0 : tr);
	std::vector<IntervalForecast> members;
	std::vector<double> w;
	double total = 0.0;
	for (auto k : c.selected) {
		members.push_back(forecasts[k]);
		w.push_back(softmax_weights[k]);
		total += softmax_weights[k];
	}
	const Mode how = mode == Mode::Mean ? Mode::Mean : Mode::Weighted;
	c.forecast = combine_intervals(members, w, how);
	for (double &v : w)
		v = how == Mode::Mean ? 1.0 / static_cast<double>(w.size()) : v / total;
	c.weights = std::move(w);
	return c;
}

std::vector<double> threshold_grid(int steps) {
	if (steps < 1)
		throw DataError("threshold grid needs at least one step");
	std::vector<double> grid;
	for (int i = 0; i <= steps; ++i)
		grid.push_back(static_cast<double>(i) / steps);
	return grid;
}

double ThresholdResult::threshold(Frequency frequency, Mode mode, double level) const {
	if (mode == Mode::AllWeighted)
		return 0.0;
	for (const auto &t : optimal)
		if (t.frequency == frequency && t.mode == mode && std::abs(t.level - level) < 1e-9)
			return t.tr;
	throw DataError("no threshold for " + std::string(fuma::to_string(frequency)) + "/" +
	                std::string(to_string(mode)) + " at level " + std::to_string(level));
}

ThresholdResult search_threshold(std::span<const ReferenceCase> cases, std::span<const double> grid, int jobs) {
	if (grid.empty())
		throw DataError("threshold grid is empty");
	for (double tr : grid)
		if (!(tr >= 0.0 && tr <= 1.0))
			throw DataError("threshold grid values must lie in [0, 1]");
	if (cases.empty())
		return {};
	const double level = cases.front().forecasts.at(0).level;
	constexpr Mode kModes[] = {Mode::Mean, Mode::Weighted};
	const std::size_t g = grid.size();

	// Per case: MSIS for every (mode, grid point), or nothing when undefined.
	std::vector<std::optional<std::vector<double>>> scores(cases.size());
	parallel_for(cases.size(), jobs, [&](std::size_t i) {
		const auto &c = cases[i];
		if (c.forecasts.size() != c.fitted.size())
			throw DataError("reference case has mismatched forecasts and fitted values");
		for (const auto &f : c.forecasts)
			if (std::abs(f.level - level) > 1e-12)
				throw LevelMismatch("reference cases mix confidence levels");
		const auto weights = adjusted_softmax(c.fitted);
		const int m = seasonal_period(c.frequency);
		std::vector<double> row(2 * g);
		try {
			for (std::size_t mi = 0; mi < 2; ++mi)
				for (std::size_t k = 0; k < g; ++k) {
					const auto comb = combine(c.forecasts, weights, grid[k], kModes[mi]);
					row[mi * g + k] = metrics::msis(c.test, comb.forecast.lower, comb.forecast.upper, c.train, m,
					                                1.0 - level);
				}
		} catch (const ZeroDenominator &) {
			return;
		}
		scores[i] = std::move(row);
	});

	ThresholdResult result;
	for (auto f : kAllFrequencies) {
		std::size_t total = 0, excluded = 0;
		for (std::size_t i = 0; i < cases.size(); ++i)
			if (cases[i].frequency == f) {
				++total;
				excluded += scores[i] ? 0 : 1;
			}
		if (total == 0)
			continue;
		for (std::size_t mi = 0; mi < 2; ++mi) {
			Threshold best{f, kModes[mi], level, grid[0], std::numeric_limits<double>::infinity()};
			for (std::size_t k = 0; k < g; ++k) {
				double sum = 0.0;
				for (std::size_t i = 0; i < cases.size(); ++i)
					if (cases[i].frequency == f && scores[i])
						sum += (*scores[i])[mi * g + k];
				const std::size_t count = total - excluded;
				const double mean = count == 0 ? 0.0 : sum / static_cast<double>(count);
				result.path.push_back({f, kModes[mi], level, grid[k], mean, count, excluded});
				if (mean < best.mean_msis) {
					best.mean_msis = mean;
					best.tr = grid[k];
				}
			}
			result.optimal.push_back(best);
		}
	}
	return result;
}

} // namespace fuma::combiner
