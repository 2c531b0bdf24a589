#include "fuma/stl.hpp"
#include "fuma/error.hpp"
#include "fuma/stats.hpp"

#include <algorithm>
#include <cmath>

namespace fuma {

namespace {

int next_odd(double x) {
	auto v = static_cast<int>(std::ceil(x));
	return v % 2 == 0 ? v + 1 : v;
}

// Loess estimate at (possibly fractional) position xs using points [left, right].
double loess_at(std::span<const double> y, double xs, std::size_t left, std::size_t right, double h,
                int degree) {
	const double h9 = 0.999 * h, h1 = 0.001 * h;
	double wsum = 0.0;
	std::vector<double> w(right - left + 1, 0.0);
	for (std::size_t j = left; j <= right; ++j) {
		const double r = std::abs(static_cast<double>(j) - xs);
		double wj = 0.0;
		if (r <= h9) {
			if (r <= h1) {
				wj = 1.0;
			} else {
				const double u = r / h;
				const double t = 1.0 - u * u * u;
				wj = t * t * t;
			}
		}
		w[j - left] = wj;
		wsum += wj;
	}
	if (wsum <= 0.0)
		return y[static_cast<std::size_t>(std::clamp(std::round(xs), 0.0, static_cast<double>(y.size() - 1)))];
	for (double &wj : w)
		wj /= wsum;
	if (degree > 0 && h > 0.0) {
		double a = 0.0;
		for (std::size_t j = left; j <= right; ++j)
			a += w[j - left] * static_cast<double>(j);
		double c = 0.0;
		for (std::size_t j = left; j <= right; ++j) {
			const double d = static_cast<double>(j) - a;
			c += w[j - left] * d * d;
		}
		const double range = static_cast<double>(y.size()) - 1.0;
		if (std::sqrt(c) > 0.001 * range) {
			const double b = (xs - a) / c;
			for (std::size_t j = left; j <= right; ++j)
				w[j - left] *= b * (static_cast<double>(j) - a) + 1.0;
		}
	}
	double out = 0.0;
	for (std::size_t j = left; j <= right; ++j)
		out += w[j - left] * y[j];
	return out;
}

std::vector<double> moving_average(std::span<const double> x, std::size_t len) {
	if (x.size() < len)
		return {};
	std::vector<double> out(x.size() - len + 1);
	double s = 0.0;
	for (std::size_t i = 0; i < len; ++i)
		s += x[i];
	out[0] = s / static_cast<double>(len);
	for (std::size_t i = len; i < x.size(); ++i) {
		s += x[i] - x[i - len];
		out[i - len + 1] = s / static_cast<double>(len);
	}
	return out;
}

} // namespace

std::vector<double> loess_smooth(std::span<const double> y, int window, int degree) {
	const std::size_t n = y.size();
	std::vector<double> out(n);
	if (n == 0)
		return out;
	if (n == 1) {
		out[0] = y[0];
		return out;
	}
	const auto q = static_cast<std::size_t>(std::max(window, 2));
	for (std::size_t i = 0; i < n; ++i) {
		std::size_t left, right;
		if (q >= n) {
			left = 0;
			right = n - 1;
		} else {
			const std::size_t half = (q - 1) / 2;
			left = i > half ? i - half : 0;
			left = std::min(left, n - q);
			right = left + q - 1;
		}
		double h = std::max(static_cast<double>(i - left), static_cast<double>(right - i));
		if (q > n)
			h += static_cast<double>((q - n) / 2);
		out[i] = loess_at(y, static_cast<double>(i), left, right, h, degree);
	}
	return out;
}

StlDecomposition stl_decompose(std::span<const double> values, int period) {
	const std::size_t n = values.size();
	StlDecomposition out;
	out.seasonal.assign(n, 0.0);
	if (period <= 1) {
		const int window = std::min(static_cast<int>(n) | 1, next_odd(std::max(5.0, std::ceil(0.2 * static_cast<double>(n)))));
		out.trend = loess_smooth(values, std::max(window, 3), 1);
		out.remainder.resize(n);
		for (std::size_t t = 0; t < n; ++t)
			out.remainder[t] = values[t] - out.trend[t];
		return out;
	}
	const auto m = static_cast<std::size_t>(period);
	if (n < 2 * m + 1)
		throw SeriesTooShort("stl: need at least 2m + 1 = " + std::to_string(2 * m + 1) +
		                     " observations, got " + std::to_string(n));

	const double s_window = 10.0 * static_cast<double>(n) + 1.0;
	const int t_window = next_odd(1.5 * static_cast<double>(m) / (1.0 - 1.5 / s_window));
	const int l_window = next_odd(static_cast<double>(m));

	std::vector<double> trend(n, 0.0), seasonal(n, 0.0), detrended(n);
	std::vector<double> cycle(n + 2 * m);
	constexpr int inner_passes = 2;
	for (int pass = 0; pass < inner_passes; ++pass) {
		for (std::size_t t = 0; t < n; ++t)
			detrended[t] = values[t] - trend[t];
		// Periodic seasonal window: every cycle-subseries is smoothed to its mean.
		std::vector<double> sub_mean(m, 0.0), sub_count(m, 0.0);
		for (std::size_t t = 0; t < n; ++t) {
			sub_mean[t % m] += detrended[t];
			sub_count[t % m] += 1.0;
		}
		for (std::size_t k = 0; k < m; ++k)
			sub_mean[k] /= sub_count[k];
		for (std::size_t j = 0; j < n + 2 * m; ++j)
			cycle[j] = sub_mean[j % m];

		auto low = moving_average(cycle, m);
		low = moving_average(low, m);
		low = moving_average(low, 3);
		low = loess_smooth(low, l_window, 1);
		for (std::size_t t = 0; t < n; ++t)
			seasonal[t] = cycle[t + m] - low[t];

		std::vector<double> adjusted(n);
		for (std::size_t t = 0; t < n; ++t)
			adjusted[t] = values[t] - seasonal[t];
		trend = loess_smooth(adjusted, t_window, 1);
	}

	// Exact per-position averaging of the seasonal component, as in the periodic case of R's stl.
	std::vector<double> pos_mean(m, 0.0), pos_count(m, 0.0);
	for (std::size_t t = 0; t < n; ++t) {
		pos_mean[t % m] += seasonal[t];
		pos_count[t % m] += 1.0;
	}
	double overall = 0.0;
	for (std::size_t k = 0; k < m; ++k) {
		pos_mean[k] /= pos_count[k];
		overall += pos_mean[k];
	}
	overall /= static_cast<double>(m);
	for (std::size_t t = 0; t < n; ++t)
		seasonal[t] = pos_mean[t % m] - overall;

	out.seasonal = std::move(seasonal);
	out.trend = std::move(trend);
	out.remainder.resize(n);
	for (std::size_t t = 0; t < n; ++t)
		out.remainder[t] = values[t] - out.trend[t] - out.seasonal[t];
	return out;
}

namespace {
double strength(const StlDecomposition &d, std::span<const double> component) {
	const auto &remainder = d.remainder;
	std::vector<double> sum(remainder.size());
	double level = 0.0;
	for (std::size_t t = 0; t < sum.size(); ++t) {
		sum[t] = component[t] + remainder[t];
		level = std::max(level, std::abs(d.trend[t]) + std::abs(d.seasonal[t]));
	}
	const double total = stats::variance(sum);
	// Rounding noise on an exactly constant or exactly smooth input.
	if (!(total > 1e-24 * std::max(1.0, level * level)))
		return 0.0;
	return std::clamp(1.0 - stats::variance(remainder) / total, 0.0, 1.0);
}
} // namespace

double seasonal_strength(const StlDecomposition &d) { return strength(d, d.seasonal); }

double trend_strength(const StlDecomposition &d) { return strength(d, d.trend); }

StlDecomposition stl_decompose(const TimeSeries &series) {
	return stl_decompose(series.values(), series.period());
}

} // namespace fuma
