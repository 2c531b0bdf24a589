#include "fuma/methods.hpp"
#include "fuma/arima.hpp"
#include "fuma/error.hpp"
#include "fuma/optim.hpp"
#include "fuma/stats.hpp"
#include "fuma/stl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fuma::methods {

namespace {

struct Entry {
	MethodId id;
	std::string_view name;
	std::string_view description;
};

constexpr std::array<Entry, 8> kRegistry{{
	{MethodId::AutoArima, "auto-arima", "ARIMA model selected automatically by AICc"},
	{MethodId::Ets, "ets", "Additive exponential smoothing state space model selected by AICc"},
	{MethodId::EtsBoxCox, "ets-boxcox",
	 "Additive exponential smoothing on a Box-Cox transformed series (stands in for tbats)"},
	{MethodId::StlmAr, "stlm-ar", "STL decomposition with an AR model on the seasonally adjusted series"},
	{MethodId::RwDrift, "rw-drift", "Random walk with drift"},
	{MethodId::Thetaf, "thetaf", "Theta method"},
	{MethodId::Naive, "naive", "Last observation carried forward"},
	{MethodId::Snaive, "snaive", "Most recent observation of the same season"},
}};

const Entry &entry(MethodId id) {
	for (const auto &e : kRegistry)
		if (e.id == id)
			return e;
	return kRegistry[0];
}

std::vector<double> level_check(std::span<const double> levels) {
	std::vector<double> out(levels.begin(), levels.end());
	for (double l : out)
		if (!(l > 0.0 && l < 1.0))
			throw DataError("confidence level must lie in (0, 1)");
	return out;
}

MethodResult naive(const TimeSeries &train, int h, std::span<const double> levels) {
	const auto y = train.values();
	const std::size_t n = y.size();
	double ss = 0.0;
	for (std::size_t t = 1; t < n; ++t)
		ss += (y[t] - y[t - 1]) * (y[t] - y[t - 1]);
	const double sigma2 = ss / static_cast<double>(n - 1);
	std::vector<double> point(static_cast<std::size_t>(h), y[n - 1]), var(point.size());
	for (std::size_t j = 0; j < var.size(); ++j)
		var[j] = sigma2 * static_cast<double>(j + 1);
	return {gaussian_intervals(point, var, levels), {"naive", {}, sigma2, std::nan("")}};
}

MethodResult snaive(const TimeSeries &train, int h, std::span<const double> levels) {
	if (train.period() == 1) {
		auto r = naive(train, h, levels);
		r.fitted.method = "snaive";
		return r;
	}
	const auto y = train.values();
	const std::size_t n = y.size();
	const auto m = static_cast<std::size_t>(train.period());
	double ss = 0.0;
	for (std::size_t t = m; t < n; ++t)
		ss += (y[t] - y[t - m]) * (y[t] - y[t - m]);
	const double sigma2 = ss / static_cast<double>(n - m);
	std::vector<double> point(static_cast<std::size_t>(h)), var(point.size());
	for (std::size_t j = 0; j < point.size(); ++j) {
		point[j] = y[n - m + (j % m)];
		var[j] = sigma2 * static_cast<double>(j / m + 1);
	}
	return {gaussian_intervals(point, var, levels), {"snaive", {}, sigma2, std::nan("")}};
}

MethodResult rw_drift(const TimeSeries &train, int h, std::span<const double> levels) {
	const auto y = train.values();
	const std::size_t n = y.size();
	const double drift = (y[n - 1] - y[0]) / static_cast<double>(n - 1);
	double ss = 0.0;
	for (std::size_t t = 1; t < n; ++t) {
		const double e = y[t] - y[t - 1] - drift;
		ss += e * e;
	}
	const double sigma2 = ss / static_cast<double>(std::max<std::size_t>(1, n - 2));
	std::vector<double> point(static_cast<std::size_t>(h)), var(point.size());
	for (std::size_t j = 0; j < point.size(); ++j) {
		const double step = static_cast<double>(j + 1);
		point[j] = y[n - 1] + drift * step;
		var[j] = sigma2 * step * (1.0 + step / static_cast<double>(n - 1));
	}
	return {gaussian_intervals(point, var, levels), {"rw-drift", {{"drift", drift}}, sigma2, std::nan("")}};
}

MethodResult ets_method(const TimeSeries &train, int h, std::span<const double> levels) {
	const auto model = ets::fit_auto(train.values(), train.period());
	const auto pv = ets::forecast(model, h);
	return {gaussian_intervals(pv.mean, pv.variance, levels), model.describe()};
}

MethodResult ets_boxcox(const TimeSeries &train, int h, std::span<const double> levels) {
	const auto y = train.values();
	const double lambda = guerrero_lambda(y, train.period());
	std::vector<double> z(y.size());
	for (std::size_t t = 0; t < y.size(); ++t)
		z[t] = box_cox(y[t], lambda);
	const auto model = ets::fit_auto(z, train.period());
	const auto pv = ets::forecast(model, h);
	std::vector<IntervalForecast> out;
	for (double level : levels) {
		const double q = stats::normal_quantile(0.5 + level / 2.0);
		IntervalForecast f;
		f.level = level;
		for (std::size_t j = 0; j < pv.mean.size(); ++j) {
			const double s = std::sqrt(std::max(pv.variance[j], 0.0));
			// Quantiles map through the monotone inverse exactly; the point is the median.
			f.lower.push_back(inv_box_cox(pv.mean[j] - q * s, lambda));
			f.point.push_back(inv_box_cox(pv.mean[j], lambda));
			f.upper.push_back(inv_box_cox(pv.mean[j] + q * s, lambda));
		}
		for (std::size_t j = 0; j < f.point.size(); ++j) {
			if (!std::isfinite(f.lower[j]) || !std::isfinite(f.upper[j]) || !std::isfinite(f.point[j]))
				throw MethodFailed("ets-boxcox", "non-finite back-transformed forecast");
		}
		out.push_back(std::move(f));
	}
	auto fitted = model.describe();
	fitted.method = "ets-boxcox/" + fitted.method;
	fitted.parameters.emplace_back("lambda", lambda);
	return {std::move(out), fitted};
}

MethodResult auto_arima(const TimeSeries &train, int h, std::span<const double> levels) {
	const auto model = arima::fit_auto(train.values(), train.period());
	const auto pv = arima::forecast(model, h);
	for (std::size_t j = 0; j < pv.mean.size(); ++j)
		if (!std::isfinite(pv.mean[j]) || !std::isfinite(pv.variance[j]))
			throw MethodFailed("auto-arima", "non-finite forecast");
	return {gaussian_intervals(pv.mean, pv.variance, levels), model.describe()};
}

// AR(p) with intercept by least squares on a common sample, p <= max_order by AICc.
struct ArOls {
	double intercept = 0.0;
	std::vector<double> phi;
	double sigma2 = 0.0;
	double aicc = std::numeric_limits<double>::infinity();
};

ArOls ar_aicc(std::span<const double> x, int max_order) {
	const std::size_t n = x.size();
	max_order = std::max(0, std::min(max_order, static_cast<int>(n / 3)));
	const auto start = static_cast<std::size_t>(max_order);
	const std::size_t rows = n - start;
	std::vector<double> yv(x.begin() + static_cast<std::ptrdiff_t>(start), x.end());
	double scale = stats::sd(x);
	if (!(scale > 0.0))
		scale = std::max(1e-8, 1e-3 * std::abs(stats::mean(x)));
	const double floor = static_cast<double>(rows) * (1e-10 * scale) * (1e-10 * scale);
	ArOls best;
	for (int p = 0; p <= max_order; ++p) {
		const auto cols = static_cast<std::size_t>(p) + 1;
		std::vector<double> design(rows * cols);
		for (std::size_t r = 0; r < rows; ++r) {
			design[r * cols] = 1.0;
			for (std::size_t k = 1; k < cols; ++k)
				design[r * cols + k] = x[start + r - k];
		}
		const auto fit = stats::ols(design, cols, yv);
		const double kd = static_cast<double>(p) + 2.0;
		const double nd = static_cast<double>(rows);
		if (nd - kd - 1.0 <= 0.0)
			continue;
		const double aicc = nd * std::log(std::max(fit.rss, floor) / nd) + 2.0 * kd +
		                    2.0 * kd * (kd + 1.0) / (nd - kd - 1.0);
		if (aicc < best.aicc) {
			best.aicc = aicc;
			best.intercept = fit.coef[0];
			best.phi.assign(fit.coef.begin() + 1, fit.coef.end());
			best.sigma2 = fit.rss / std::max(1.0, nd - static_cast<double>(cols));
		}
	}
	if (!std::isfinite(best.aicc))
		throw MethodFailed("stlm-ar", "no AR order could be fitted");
	return best;
}

MethodResult stlm_ar(const TimeSeries &train, int h, std::span<const double> levels) {
	const auto y = train.values();
	const std::size_t n = y.size();
	const auto m = static_cast<std::size_t>(train.period());
	std::vector<double> adjusted(y.begin(), y.end());
	std::vector<double> season_tail;
	if (m > 1) {
		StlDecomposition dec;
		try {
			dec = stl_decompose(y, static_cast<int>(m));
		} catch (const SeriesTooShort &e) {
			throw MethodFailed("stlm-ar", std::string("SeriesTooShort: ") + e.what());
		}
		for (std::size_t t = 0; t < n; ++t)
			adjusted[t] = y[t] - dec.seasonal[t];
		season_tail.assign(dec.seasonal.end() - static_cast<std::ptrdiff_t>(m), dec.seasonal.end());
	}
	const auto ar = ar_aicc(adjusted, 5);
	const auto H = static_cast<std::size_t>(h);
	std::vector<double> ext(adjusted);
	std::vector<double> point(H), var(H), psi(H, 0.0);
	for (std::size_t j = 0; j < H; ++j) {
		double v = ar.intercept;
		for (std::size_t k = 0; k < ar.phi.size(); ++k)
			v += ar.phi[k] * ext[ext.size() - 1 - k];
		ext.push_back(v);
		point[j] = v + (m > 1 ? season_tail[j % m] : 0.0);
	}
	psi[0] = 1.0;
	double cum = 0.0;
	for (std::size_t j = 0; j < H; ++j) {
		if (j > 0) {
			double v = 0.0;
			for (std::size_t k = 1; k <= ar.phi.size() && k <= j; ++k)
				v += ar.phi[k - 1] * psi[j - k];
			psi[j] = v;
		}
		cum += psi[j] * psi[j];
		var[j] = ar.sigma2 * cum;
	}
	FittedMethod fitted{"stlm-ar(" + std::to_string(ar.phi.size()) + ")", {{"intercept", ar.intercept}},
	                    ar.sigma2, ar.aicc};
	for (std::size_t k = 0; k < ar.phi.size(); ++k)
		fitted.parameters.emplace_back("ar" + std::to_string(k + 1), ar.phi[k]);
	return {gaussian_intervals(point, var, levels), fitted};
}

MethodResult thetaf(const TimeSeries &train, int h, std::span<const double> levels) {
	const ThetaFit fit = fit_theta(train);
	const auto n = static_cast<double>(train.size());
	const auto m = static_cast<std::size_t>(train.period());
	std::vector<double> point(static_cast<std::size_t>(h)), var(point.size());
	for (std::size_t j = 0; j < point.size(); ++j) {
		const double step = static_cast<double>(j + 1);
		const double line = fit.intercept + fit.slope * (n + step);
		double p = 0.5 * line + 0.5 * fit.ses_level;
		if (fit.seasonal)
			p += fit.season[(train.size() + j) % m];
		point[j] = p;
		var[j] = fit.sigma2 * (1.0 + fit.alpha * fit.alpha * (step - 1.0));
	}
	FittedMethod fitted{"thetaf", {{"alpha", fit.alpha}, {"slope", fit.slope}}, fit.sigma2, std::nan("")};
	return {gaussian_intervals(point, var, levels), fitted};
}

// Additive classical decomposition indices by position t % m, summing to zero.
std::vector<double> classical_additive_indices(std::span<const double> y, std::size_t m) {
	const std::size_t n = y.size();
	std::vector<double> idx(m, 0.0), cnt(m, 0.0);
	const std::size_t half = m / 2;
	for (std::size_t t = half; t + half < n; ++t) {
		double s = 0.0;
		if (m % 2 == 0) {
			s = 0.5 * y[t - half] + 0.5 * y[t + half];
			for (std::size_t k = t - half + 1; k < t + half; ++k)
				s += y[k];
		} else {
			for (std::size_t k = t - half; k <= t + half; ++k)
				s += y[k];
		}
		idx[t % m] += y[t] - s / static_cast<double>(m);
		cnt[t % m] += 1.0;
	}
	double avg = 0.0;
	for (std::size_t k = 0; k < m; ++k) {
		idx[k] = cnt[k] > 0.0 ? idx[k] / cnt[k] : 0.0;
		avg += idx[k];
	}
	avg /= static_cast<double>(m);
	for (double &v : idx)
		v -= avg;
	return idx;
}

struct Ses {
	double alpha = 0.5, level0 = 0.0, sse = 0.0, final_level = 0.0;
};

// SES on x for a given alpha; the initial level is the closed-form least-squares value.
Ses ses_given_alpha(std::span<const double> x, double alpha) {
	const std::size_t n = x.size();
	double c = 0.0, g = 1.0;
	double num = 0.0, den = 0.0;
	for (std::size_t t = 0; t < n; ++t) {
		// one-step forecast = c + g * level0
		num += g * (x[t] - c);
		den += g * g;
		c = (1.0 - alpha) * c + alpha * x[t];
		g *= (1.0 - alpha);
	}
	Ses s;
	s.alpha = alpha;
	s.level0 = den > 0.0 ? num / den : x[0];
	double level = s.level0;
	for (std::size_t t = 0; t < n; ++t) {
		const double e = x[t] - level;
		s.sse += e * e;
		level += alpha * e;
	}
	s.final_level = level;
	return s;
}

} // namespace

std::string_view to_string(MethodId id) noexcept { return entry(id).name; }

std::string_view describe(MethodId id) noexcept { return entry(id).description; }

MethodId method_from_string(std::string_view name) {
	for (const auto &e : kRegistry)
		if (e.name == name)
			return e.id;
	throw DataError("unknown method '" + std::string(name) + "'");
}

std::vector<MethodId> pool_for(int period) {
	std::vector<MethodId> out(kAllMethods.begin(), kAllMethods.end());
	if (period == 1)
		out.pop_back();
	return out;
}

std::vector<IntervalForecast> gaussian_intervals(std::span<const double> point,
                                                 std::span<const double> variance,
                                                 std::span<const double> levels) {
	std::vector<IntervalForecast> out;
	for (double level : level_check(levels)) {
		const double z = stats::normal_quantile(0.5 + level / 2.0);
		IntervalForecast f;
		f.level = level;
		f.point.assign(point.begin(), point.end());
		f.lower.resize(point.size());
		f.upper.resize(point.size());
		for (std::size_t j = 0; j < point.size(); ++j) {
			const double half = z * std::sqrt(std::max(variance[j], 0.0));
			f.lower[j] = point[j] - half;
			f.upper[j] = point[j] + half;
		}
		out.push_back(std::move(f));
	}
	return out;
}

MethodResult run(MethodId id, const TimeSeries &train, int horizon, std::span<const double> levels) {
	if (horizon <= 0)
		throw DataError("horizon must be positive");
	level_check(levels);
	MethodResult r;
	switch (id) {
	case MethodId::Naive:
		r = naive(train, horizon, levels);
		break;
	case MethodId::Snaive:
		r = snaive(train, horizon, levels);
		break;
	case MethodId::RwDrift:
		r = rw_drift(train, horizon, levels);
		break;
	case MethodId::Ets:
		r = ets_method(train, horizon, levels);
		break;
	case MethodId::EtsBoxCox:
		r = ets_boxcox(train, horizon, levels);
		break;
	case MethodId::AutoArima:
		r = auto_arima(train, horizon, levels);
		break;
	case MethodId::StlmAr:
		r = stlm_ar(train, horizon, levels);
		break;
	case MethodId::Thetaf:
		r = thetaf(train, horizon, levels);
		break;
	}
	for (const auto &f : r.forecasts)
		if (!f.valid())
			throw MethodFailed(std::string(to_string(id)), "invalid interval forecast");
	return r;
}

std::vector<IntervalForecast> forecast(MethodId id, const TimeSeries &train, int horizon,
                                       std::span<const double> levels) {
	return run(id, train, horizon, levels).forecasts;
}

SafeForecast forecast_or_naive(MethodId id, const TimeSeries &train, int horizon,
                               std::span<const double> levels) {
	try {
		return {forecast(id, train, horizon, levels), false, {}};
	} catch (const MethodFailed &e) {
		return {forecast(MethodId::Naive, train, horizon, levels), true, e.what()};
	}
}

FittedMethod fit_ets(const TimeSeries &train, const ets::Taxonomy &taxonomy) {
	return ets::fit_auto(train.values(), train.period(), taxonomy).describe();
}

FittedMethod fit_auto_arima(const TimeSeries &train) {
	return arima::fit_auto(train.values(), train.period()).describe();
}

double box_cox(double y, double lambda) {
	if (lambda == 0.0)
		return std::log(y);
	return (std::pow(y, lambda) - 1.0) / lambda;
}

double inv_box_cox(double z, double lambda) {
	if (lambda == 0.0)
		return std::exp(z);
	const double base = lambda * z + 1.0;
	return base > 0.0 ? std::pow(base, 1.0 / lambda) : 0.0;
}

double guerrero_lambda(std::span<const double> y, int period) {
	if (std::any_of(y.begin(), y.end(), [](double v) { return !(v > 0.0); }))
		return 1.0;
	const std::size_t len = static_cast<std::size_t>(std::max(period, 2));
	const std::size_t blocks = y.size() / len;
	if (blocks < 2)
		return 1.0;
	// Use the most recent complete blocks.
	const std::size_t offset = y.size() - blocks * len;
	std::vector<double> mu(blocks), sd(blocks);
	for (std::size_t b = 0; b < blocks; ++b) {
		auto block = y.subspan(offset + b * len, len);
		mu[b] = stats::mean(block);
		sd[b] = stats::sd(block);
	}
	double best_lambda = 1.0, best_cv = std::numeric_limits<double>::infinity();
	for (int i = 0; i <= 10; ++i) {
		const double lambda = 0.1 * i;
		std::vector<double> ratio(blocks);
		for (std::size_t b = 0; b < blocks; ++b)
			ratio[b] = sd[b] / std::pow(mu[b], 1.0 - lambda);
		const double mr = stats::mean(ratio);
		const double cv = mr > 0.0 ? stats::sd(ratio) / mr : std::numeric_limits<double>::infinity();
		if (cv < best_cv) {
			best_cv = cv;
			best_lambda = lambda;
		}
	}
	return best_lambda;
}

bool theta_seasonality_test(std::span<const double> y, int period) {
	const auto m = static_cast<std::size_t>(period);
	if (m <= 1 || y.size() <= 2 * m)
		return false;
	const auto r = stats::acf(y, static_cast<int>(m));
	double s = 0.0;
	for (std::size_t k = 0; k + 1 < m; ++k)
		s += r[k] * r[k];
	const double stat = std::sqrt((1.0 + 2.0 * s) / static_cast<double>(y.size()));
	return std::abs(r[m - 1]) / stat > 1.6448536269514722;
}

ThetaFit fit_theta(const TimeSeries &train) {
	const auto y = train.values();
	const std::size_t n = y.size();
	const auto m = static_cast<std::size_t>(train.period());
	ThetaFit fit;
	std::vector<double> x(y.begin(), y.end());
	fit.seasonal = theta_seasonality_test(y, train.period());
	if (fit.seasonal) {
		fit.season = classical_additive_indices(y, m);
		for (std::size_t t = 0; t < n; ++t)
			x[t] -= fit.season[t % m];
	}
	// theta(0): least-squares line on t = 1..n.
	std::vector<double> design(2 * n);
	for (std::size_t t = 0; t < n; ++t) {
		design[2 * t] = 1.0;
		design[2 * t + 1] = static_cast<double>(t + 1);
	}
	const auto line = stats::ols(design, 2, x);
	fit.intercept = line.coef[0];
	fit.slope = line.coef[1];
	// theta(2) = 2x - line
	std::vector<double> z(n);
	for (std::size_t t = 0; t < n; ++t)
		z[t] = 2.0 * x[t] - (fit.intercept + fit.slope * static_cast<double>(t + 1));
	auto best = optim::golden_section(
		[&](double a) { return ses_given_alpha(z, a).sse; }, ets::kLowerBound, ets::kUpperBound, 1e-8);
	if (best.x.empty() || !std::isfinite(best.value))
		throw MethodFailed("thetaf", "SES optimisation did not converge");
	const Ses ses = ses_given_alpha(z, best.x[0]);
	fit.alpha = ses.alpha;
	fit.ses_level = ses.final_level;
	// Combined one-step residual is half the SES residual on the theta(2) line.
	fit.sigma2 = 0.25 * ses.sse / static_cast<double>(std::max<std::size_t>(1, n - 3));
	return fit;
}

} // namespace fuma::methods
