#include "fuma/features.hpp"
#include "fuma/arima.hpp"
#include "fuma/error.hpp"
#include "fuma/ets.hpp"
#include "fuma/optim.hpp"
#include "fuma/stats.hpp"
#include "fuma/stl.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

namespace fuma::features {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::array<FeatureInfo, kFeatureCount> kRegistry{{
	{"x-acf1", Kind::Acf, "first autocorrelation of the series", -1.0, 1.0},
	{"x-acf10", Kind::AcfSum, "sum of squares of the first ten autocorrelations", 0.0, 10.0},
	{"diff1-acf1", Kind::Acf, "first autocorrelation of the differenced series", -1.0, 1.0},
	{"diff1-acf10", Kind::AcfSum, "sum of squares of the first ten autocorrelations of the differenced series", 0.0, 10.0},
	{"diff2-acf1", Kind::Acf, "first autocorrelation of the twice-differenced series", -1.0, 1.0},
	{"diff2-acf10", Kind::AcfSum, "sum of squares of the first ten autocorrelations of the twice-differenced series", 0.0, 10.0},
	{"seas-acf1", Kind::Acf, "autocorrelation at the seasonal lag (0 when m = 1)", -1.0, 1.0},
	{"arch-lm", Kind::Strength, "R^2 of x_t^2 regressed on 12 of its lags", 0.0, 1.0},
	{"crossing-points", Kind::Statistic, "number of median crossings", 0.0, kInf},
	{"entropy", Kind::Entropy, "normalised spectral entropy of the AR spectrum", 0.0, 1.0},
	{"flat-spots", Kind::Statistic, "longest run within one of ten equal-width bins", 1.0, kInf},
	{"arch-acf", Kind::AcfSum, "sum of squares of 12 autocorrelations of squared AR-prewhitened residuals", 0.0, 12.0},
	{"garch-acf", Kind::AcfSum, "as arch-acf after GARCH(1,1) standardisation", 0.0, 12.0},
	{"arch-r2", Kind::Strength, "arch-lm R^2 of the AR-prewhitened residuals", 0.0, 1.0},
	{"garch-r2", Kind::Strength, "arch-lm R^2 of the GARCH(1,1) standardised residuals", 0.0, 1.0},
	{"alpha", Kind::Parameter, "level smoothing parameter of Holt's linear method", 0.0, 1.0},
	{"beta", Kind::Parameter, "trend smoothing parameter of Holt's linear method", 0.0, 1.0},
	{"hurst", Kind::Parameter, "0.5 plus the log-periodogram long-memory estimate, d in [0, 0.5]", 0.5, 1.0},
	{"lumpiness", Kind::Variance, "variance of block variances, block max(2m, 10)", 0.0, kInf},
	{"stability", Kind::Variance, "variance of block means, block max(2m, 10)", 0.0, kInf},
	{"non-linearity", Kind::Statistic, "10 / n times the lag-1 Teraesvirta statistic", 0.0, kInf},
	{"x-pacf5", Kind::AcfSum, "sum of squares of the first five partial autocorrelations", 0.0, 5.0},
	{"diff1x-pacf5", Kind::AcfSum, "as x-pacf5 on the differenced series", 0.0, 5.0},
	{"diff2x-pacf5", Kind::AcfSum, "as x-pacf5 on the twice-differenced series", 0.0, 5.0},
	{"seas-pacf", Kind::Acf, "partial autocorrelation at the seasonal lag (0 when m = 1)", -1.0, 1.0},
	{"nperiods", Kind::Dummy, "1 when the series is seasonal (m > 1)", 0.0, 1.0},
	{"seasonal-period-q", Kind::Dummy, "1 when m = 4", 0.0, 1.0},
	{"seasonal-period-m", Kind::Dummy, "1 when m = 12", 0.0, 1.0},
	{"trend-strength", Kind::Strength, "STL trend strength", 0.0, 1.0},
	{"spike", Kind::Variance, "variance of leave-one-out variances of the STL remainder", 0.0, kInf},
	{"linearity", Kind::Statistic, "linear coefficient of an orthogonal quadratic fit to the STL trend", -kInf, kInf},
	{"curvature", Kind::Statistic, "quadratic coefficient of an orthogonal quadratic fit to the STL trend", -kInf, kInf},
	{"e-acf1", Kind::Acf, "first autocorrelation of the STL remainder", -1.0, 1.0},
	{"e-acf10", Kind::AcfSum, "sum of squares of the first ten autocorrelations of the STL remainder", 0.0, 10.0},
	{"seasonal-strength", Kind::Strength, "STL seasonal strength (0 when m = 1)", 0.0, 1.0},
	{"peak", Kind::Position, "cycle position of the seasonal maximum divided by m", 0.0, 1.0},
	{"trough", Kind::Position, "cycle position of the seasonal minimum divided by m", 0.0, 1.0},
	{"hw-alpha", Kind::Parameter, "level smoothing parameter of additive Holt-Winters (0 when not fitted)", 0.0, 1.0},
	{"hw-beta", Kind::Parameter, "trend smoothing parameter of additive Holt-Winters (0 when not fitted)", 0.0, 1.0},
	{"hw-gamma", Kind::Parameter, "seasonal smoothing parameter of additive Holt-Winters (0 when not fitted)", 0.0, 1.0},
	{"unitroot-kpss", Kind::Statistic, "KPSS level-stationarity statistic", 0.0, kInf},
	{"unitroot-pp", Kind::Statistic, "Phillips-Perron Z-alpha statistic", -kInf, kInf},
	{"series-length", Kind::Length, "number of observations in the training period", 3.0, kInf},
}};

double first_or_zero(const std::vector<double> &v, std::size_t i) { return i < v.size() ? v[i] : 0.0; }

double sum_squares(const std::vector<double> &v, std::size_t count) {
	double s = 0.0;
	for (std::size_t i = 0; i < std::min(count, v.size()); ++i)
		s += v[i] * v[i];
	return s;
}

std::vector<double> safe_acf(std::span<const double> x, int lags) {
	if (x.size() < 2)
		return std::vector<double>(static_cast<std::size_t>(lags), 0.0);
	return stats::acf(x, lags);
}

std::vector<double> safe_pacf(std::span<const double> x, int lags) {
	if (x.size() < 3)
		return std::vector<double>(static_cast<std::size_t>(lags), 0.0);
	const int usable = std::min(lags, static_cast<int>(x.size()) - 1);
	auto p = stats::pacf(x, usable);
	p.resize(static_cast<std::size_t>(lags), 0.0);
	return p;
}

// AR residuals x_t - sum phi_k x_{t-k} on the demeaned series, t >= p.
std::vector<double> prewhiten(std::span<const double> x) {
	const std::size_t n = x.size();
	const int order_max = std::min(static_cast<int>(n) - 1, static_cast<int>(std::floor(10.0 * std::log10(n))));
	const auto fit = stats::yule_walker_aic(x, order_max);
	const double mu = stats::mean(x);
	const std::size_t p = fit.phi.size();
	std::vector<double> e;
	for (std::size_t t = p; t < n; ++t) {
		double v = x[t] - mu;
		for (std::size_t k = 0; k < p; ++k)
			v -= fit.phi[k] * (x[t - k - 1] - mu);
		e.push_back(v);
	}
	return e;
}

std::vector<double> squares(std::span<const double> x) {
	std::vector<double> out(x.size());
	for (std::size_t i = 0; i < x.size(); ++i)
		out[i] = x[i] * x[i];
	return out;
}

struct StlFeatures {
	double trend = 0.0, seasonal = 0.0, spike = 0.0, linearity = 0.0, curvature = 0.0;
	double e_acf1 = 0.0, e_acf10 = 0.0, peak = 0.0, trough = 0.0;
};

StlFeatures stl_features(std::span<const double> x, int period) {
	StlDecomposition d;
	int m = period;
	try {
		d = stl_decompose(x, period);
	} catch (const SeriesTooShort &) {
		m = 1;
		d = stl_decompose(x, 1);
	}
	StlFeatures f;
	f.trend = trend_strength(d);
	f.seasonal = m > 1 ? seasonal_strength(d) : 0.0;

	const std::size_t n = x.size();
	const auto &r = d.remainder;
	if (n > 2) {
		const double var_r = stats::variance(r);
		const double mu_r = stats::mean(r);
		std::vector<double> loo(n);
		for (std::size_t t = 0; t < n; ++t)
			loo[t] = (var_r * static_cast<double>(n - 1) - (r[t] - mu_r) * (r[t] - mu_r)) / static_cast<double>(n - 2);
		f.spike = stats::variance(loo);
	}

	// Orthonormal polynomial basis of degree 2 on t = 1..n.
	std::vector<double> p1(n), p2(n);
	const double tbar = (static_cast<double>(n) + 1.0) / 2.0;
	double n1 = 0.0;
	for (std::size_t t = 0; t < n; ++t) {
		p1[t] = static_cast<double>(t + 1) - tbar;
		n1 += p1[t] * p1[t];
	}
	n1 = std::sqrt(n1);
	for (auto &v : p1)
		v /= n1;
	double mean_sq = 0.0;
	for (std::size_t t = 0; t < n; ++t) {
		p2[t] = p1[t] * p1[t];
		mean_sq += p2[t];
	}
	mean_sq /= static_cast<double>(n);
	double proj = 0.0;
	for (std::size_t t = 0; t < n; ++t) {
		p2[t] -= mean_sq;
		proj += p2[t] * p1[t];
	}
	double n2 = 0.0;
	for (std::size_t t = 0; t < n; ++t) {
		p2[t] -= proj * p1[t];
		n2 += p2[t] * p2[t];
	}
	n2 = std::sqrt(n2);
	for (std::size_t t = 0; t < n; ++t) {
		f.linearity += d.trend[t] * p1[t];
		if (n2 > 0.0)
			f.curvature += d.trend[t] * p2[t] / n2;
	}

	const auto racf = safe_acf(r, 10);
	f.e_acf1 = racf[0];
	f.e_acf10 = sum_squares(racf, 10);

	if (m > 1) {
		const auto mm = static_cast<std::size_t>(m);
		std::size_t imax = 0, imin = 0;
		for (std::size_t k = 1; k < mm; ++k) {
			if (d.seasonal[k] > d.seasonal[imax])
				imax = k;
			if (d.seasonal[k] < d.seasonal[imin])
				imin = k;
		}
		if (f.seasonal > 0.0) {
			f.peak = static_cast<double>(imax) / m;
			f.trough = static_cast<double>(imin) / m;
		}
	}
	return f;
}

void ets_parameters(std::span<const double> x, int period, double &alpha, double &beta, double &hw_alpha,
                    double &hw_beta, double &hw_gamma) {
	try {
		const auto holt = ets::fit_form(x, 1, {ets::Trend::Additive, false});
		alpha = holt.alpha;
		beta = holt.beta;
	} catch (const Error &) {
	}
	if (period > 1 && x.size() >= 2 * static_cast<std::size_t>(period) + 2) {
		try {
			const auto hw = ets::fit_form(x, period, {ets::Trend::Additive, true});
			hw_alpha = hw.alpha;
			hw_beta = hw.beta;
			hw_gamma = hw.gamma;
		} catch (const Error &) {
		}
	}
}

std::uint64_t fnv1a(std::string_view text) {
	std::uint64_t h = 14695981039346656037ULL;
	for (unsigned char c : text) {
		h ^= c;
		h *= 1099511628211ULL;
	}
	return h;
}

} // namespace

std::string_view to_string(Kind kind) noexcept {
	switch (kind) {
	case Kind::Acf:
		return "acf";
	case Kind::AcfSum:
		return "acf-sum";
	case Kind::Strength:
		return "strength";
	case Kind::Entropy:
		return "entropy";
	case Kind::Parameter:
		return "parameter";
	case Kind::Variance:
		return "variance";
	case Kind::Position:
		return "position";
	case Kind::Statistic:
		return "statistic";
	case Kind::Dummy:
		return "dummy";
	case Kind::Length:
		return "length";
	}
	return "unknown";
}

std::span<const FeatureInfo> registry() { return kRegistry; }

std::size_t index_of(std::string_view name) {
	for (std::size_t i = 0; i < kRegistry.size(); ++i)
		if (kRegistry[i].name == name)
			return i;
	throw UnknownFeature("unknown feature '" + std::string(name) + "'");
}

std::string registry_table() {
	std::ostringstream out;
	out << "# fuma feature registry v" << kRegistryVersion << "\n";
	out << "# input z-scored; stl periodic, 2 inner / 0 outer passes; block max(2m,10)\n";
	out << "index\tname\tkind\tlower\tupper\tdefinition\n";
	for (std::size_t i = 0; i < kRegistry.size(); ++i) {
		const auto &f = kRegistry[i];
		out << i << '\t' << f.name << '\t' << to_string(f.kind) << '\t' << f.lower << '\t' << f.upper << '\t'
		    << f.definition << '\n';
	}
	return out.str();
}

std::uint64_t registry_hash() {
	static const std::uint64_t hash = fnv1a(registry_table());
	return hash;
}

double FeatureVector::at(std::string_view name) const { return values.at(index_of(name)); }

std::size_t block_width(int period) noexcept { return static_cast<std::size_t>(std::max(2 * period, 10)); }

double lumpiness(std::span<const double> x, std::size_t width) {
	const std::size_t blocks = x.size() / width;
	if (blocks < 2)
		return 0.0;
	std::vector<double> v(blocks);
	for (std::size_t b = 0; b < blocks; ++b)
		v[b] = stats::variance(x.subspan(b * width, width));
	return stats::variance(v);
}

double stability(std::span<const double> x, std::size_t width) {
	const std::size_t blocks = x.size() / width;
	if (blocks < 2)
		return 0.0;
	std::vector<double> v(blocks);
	for (std::size_t b = 0; b < blocks; ++b)
		v[b] = stats::mean(x.subspan(b * width, width));
	return stats::variance(v);
}

double spectral_entropy(std::span<const double> x) {
	const std::size_t n = x.size();
	if (n < 3 || !(stats::variance(x) > 0.0))
		return 0.0;
	const int order_max = std::min(static_cast<int>(n) - 1, static_cast<int>(std::floor(10.0 * std::log10(n))));
	const auto fit = stats::yule_walker_aic(x, order_max);
	constexpr int kGrid = 500;
	std::vector<double> density(kGrid);
	double total = 0.0;
	for (int j = 0; j < kGrid; ++j) {
		const double w = std::numbers::pi * (j + 1) / kGrid;
		std::complex<double> a(1.0, 0.0);
		for (std::size_t k = 0; k < fit.phi.size(); ++k)
			a -= fit.phi[k] * std::polar(1.0, -w * static_cast<double>(k + 1));
		density[static_cast<std::size_t>(j)] = 1.0 / std::norm(a);
		total += density[static_cast<std::size_t>(j)];
	}
	double h = 0.0;
	for (double f : density) {
		const double p = f / total;
		if (p > 0.0)
			h -= p * std::log(p);
	}
	return std::clamp(h / std::log(static_cast<double>(kGrid)), 0.0, 1.0);
}

double flat_spots(std::span<const double> x) {
	if (x.empty())
		return 0.0;
	const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
	const double range = *hi - *lo;
	auto bin = [&](double v) {
		if (!(range > 0.0))
			return 0;
		return std::min(9, static_cast<int>(std::floor((v - *lo) / range * 10.0)));
	};
	int best = 1, run = 1, prev = bin(x[0]);
	for (std::size_t t = 1; t < x.size(); ++t) {
		const int b = bin(x[t]);
		run = b == prev ? run + 1 : 1;
		prev = b;
		best = std::max(best, run);
	}
	return best;
}

double crossing_points(std::span<const double> x) {
	if (x.size() < 2)
		return 0.0;
	const double mid = stats::median(x);
	int count = 0;
	for (std::size_t t = 1; t < x.size(); ++t)
		count += (x[t - 1] <= mid) != (x[t] <= mid) ? 1 : 0;
	return count;
}

double arch_r2(std::span<const double> x, int lags) {
	const std::size_t n = x.size();
	lags = std::min(lags, static_cast<int>((n - 1) / 3));
	if (lags < 1)
		return 0.0;
	const double mu = stats::mean(x);
	std::vector<double> sq(n);
	for (std::size_t t = 0; t < n; ++t)
		sq[t] = (x[t] - mu) * (x[t] - mu);
	const auto L = static_cast<std::size_t>(lags);
	const std::size_t rows = n - L, cols = L + 1;
	std::vector<double> design(rows * cols), y(rows);
	for (std::size_t r = 0; r < rows; ++r) {
		y[r] = sq[r + L];
		design[r * cols] = 1.0;
		for (std::size_t k = 1; k <= L; ++k)
			design[r * cols + k] = sq[r + L - k];
	}
	if (!(stats::variance(y) > 0.0))
		return 0.0;
	return std::clamp(stats::ols(design, cols, y).r_squared, 0.0, 1.0);
}

std::vector<double> garch_standardised_residuals(std::span<const double> e) {
	const std::size_t n = e.size();
	const double v = std::max(stats::mean(squares(e)), 1e-12);
	auto unpack = [&](std::span<const double> u, double &omega, double &a, double &b) {
		omega = std::exp(u[0]);
		const double ea = std::exp(u[1]), eb = std::exp(u[2]);
		a = ea / (1.0 + ea + eb);
		b = eb / (1.0 + ea + eb);
	};
	auto filter = [&](double omega, double a, double b, std::vector<double> *h) {
		double ht = v, nll = 0.0;
		for (std::size_t t = 0; t < n; ++t) {
			if (t > 0)
				ht = omega + a * e[t - 1] * e[t - 1] + b * ht;
			if (!(ht > 0.0))
				return kInf;
			nll += std::log(ht) + e[t] * e[t] / ht;
			if (h)
				(*h)[t] = ht;
		}
		return nll;
	};
	auto objective = [&](std::span<const double> u) {
		double omega = 0.0, a = 0.0, b = 0.0;
		unpack(u, omega, a, b);
		return filter(omega, a, b, nullptr);
	};
	const std::vector<double> start{std::log(0.1 * v), 0.0, std::log(8.0)};
	const std::vector<double> step{0.5, 0.5, 0.5};
	optim::NelderMeadOptions opts;
	opts.max_evaluations = 600;
	opts.rel_tol = 1e-8;
	const auto best = optim::nelder_mead(objective, start, step, opts);
	double omega = 0.0, a = 0.0, b = 0.0;
	unpack(best.x, omega, a, b);
	std::vector<double> h(n, v);
	if (!std::isfinite(filter(omega, a, b, &h)))
		std::fill(h.begin(), h.end(), v);
	std::vector<double> out(n);
	for (std::size_t t = 0; t < n; ++t)
		out[t] = e[t] / std::sqrt(h[t]);
	return out;
}

double terasvirta_statistic(std::span<const double> x) {
	const std::size_t n = x.size();
	if (n < 8)
		return 0.0;
	const double mu = stats::mean(x), sd = stats::sd(x);
	if (!(sd > 0.0))
		return 0.0;
	std::vector<double> z(n);
	for (std::size_t t = 0; t < n; ++t)
		z[t] = (x[t] - mu) / sd;
	const std::size_t rows = n - 1;
	std::vector<double> d0(rows * 2), d1(rows * 4), y(rows);
	for (std::size_t r = 0; r < rows; ++r) {
		const double lag = z[r];
		y[r] = z[r + 1];
		d0[r * 2] = 1.0;
		d0[r * 2 + 1] = lag;
		d1[r * 4] = 1.0;
		d1[r * 4 + 1] = lag;
		d1[r * 4 + 2] = lag * lag;
		d1[r * 4 + 3] = lag * lag * lag;
	}
	const auto f0 = stats::ols(d0, 2, y);
	const auto f1 = stats::ols(d1, 4, f0.residuals);
	if (!(f0.rss > 0.0) || !(f1.rss > 0.0))
		return 0.0;
	return std::max(0.0, static_cast<double>(rows) * std::log(f0.rss / f1.rss));
}

double hurst(std::span<const double> x) {
	const std::size_t n = x.size();
	const auto g = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
	if (g < 3 || !(stats::variance(x) > 0.0))
		return 0.5;
	const double mu = stats::mean(x);
	std::vector<double> design, y;
	for (std::size_t j = 1; j <= g; ++j) {
		const double w = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
		std::complex<double> s(0.0, 0.0);
		for (std::size_t t = 0; t < n; ++t)
			s += (x[t] - mu) * std::polar(1.0, -w * static_cast<double>(t));
		const double periodogram = std::norm(s) / (2.0 * std::numbers::pi * static_cast<double>(n));
		if (!(periodogram > 0.0))
			continue;
		const double sn = std::sin(w / 2.0);
		design.push_back(1.0);
		design.push_back(std::log(4.0 * sn * sn));
		y.push_back(std::log(periodogram));
	}
	if (y.size() < 3)
		return 0.5;
	const double d = -stats::ols(design, 2, y).coef[1];
	return std::clamp(d, 0.0, 0.5) + 0.5;
}

double phillips_perron(std::span<const double> x) {
	if (x.size() < 5)
		return 0.0;
	const std::size_t n = x.size() - 1;
	const double nd = static_cast<double>(n);
	std::vector<double> design(n * 2), y(n);
	for (std::size_t t = 0; t < n; ++t) {
		y[t] = x[t + 1];
		design[t * 2] = 1.0;
		design[t * 2 + 1] = x[t];
	}
	const auto fit = stats::ols(design, 2, y);
	const auto &res = fit.residuals;
	const double s = fit.rss / nd;
	const double ybar = stats::mean(y);
	double ssy = 0.0;
	for (double v : y)
		ssy += (v - ybar) * (v - ybar);
	const double myybar = ssy / (nd * nd);
	if (!(myybar > 0.0))
		return 0.0;
	const auto lmax = static_cast<std::size_t>(std::trunc(4.0 * std::pow(nd / 100.0, 0.25)));
	double sig = s;
	for (std::size_t l = 1; l <= lmax && l < n; ++l) {
		double c = 0.0;
		for (std::size_t t = l; t < n; ++t)
			c += res[t] * res[t - l];
		sig += (2.0 / nd) * (1.0 - static_cast<double>(l) / static_cast<double>(lmax + 1)) * c;
	}
	const double lambda = 0.5 * (sig - s);
	return nd * (fit.coef[1] - 1.0) - lambda / myybar;
}

FeatureVector extract(const TimeSeries &train) {
	FeatureVector out;
	out.values.assign(kFeatureCount, 0.0);
	out.registry_hash = registry_hash();
	const int m = train.period();
	auto set = [&](std::string_view name, double v) { out.values[index_of(name)] = std::isfinite(v) ? v : 0.0; };

	set("nperiods", m > 1 ? 1.0 : 0.0);
	set("seasonal-period-q", m == 4 ? 1.0 : 0.0);
	set("seasonal-period-m", m == 12 ? 1.0 : 0.0);
	set("series-length", static_cast<double>(train.size()));

	const auto y = train.values();
	const double mu = stats::mean(y), sd = stats::sd(y);
	if (!(sd > 0.0) || !(sd > 1e-12 * std::max(1.0, std::abs(mu)))) {
		out.degenerate = true;
		return out;
	}
	std::vector<double> x(y.size());
	// Rounded to a 2^-32 grid so that inputs differing only by the rounding of
	// the standardisation give bit-identical features.
	for (std::size_t t = 0; t < x.size(); ++t)
		x[t] = std::nearbyint((y[t] - mu) / sd * 0x1p32) * 0x1p-32;

	const auto d1 = stats::diff(x, 1);
	const auto d2 = stats::diff(d1, 1);
	const auto xacf = safe_acf(x, std::max(10, m));
	const auto d1acf = safe_acf(d1, 10);
	const auto d2acf = safe_acf(d2, 10);
	set("x-acf1", xacf[0]);
	set("x-acf10", sum_squares(xacf, 10));
	set("diff1-acf1", d1acf[0]);
	set("diff1-acf10", sum_squares(d1acf, 10));
	set("diff2-acf1", d2acf[0]);
	set("diff2-acf10", sum_squares(d2acf, 10));
	set("seas-acf1", m > 1 ? first_or_zero(xacf, static_cast<std::size_t>(m - 1)) : 0.0);

	const auto xpacf = safe_pacf(x, std::max(5, m));
	set("x-pacf5", sum_squares(xpacf, 5));
	set("diff1x-pacf5", sum_squares(safe_pacf(d1, 5), 5));
	set("diff2x-pacf5", sum_squares(safe_pacf(d2, 5), 5));
	set("seas-pacf", m > 1 ? first_or_zero(xpacf, static_cast<std::size_t>(m - 1)) : 0.0);

	set("arch-lm", arch_r2(x, 12));
	set("crossing-points", crossing_points(x));
	set("entropy", spectral_entropy(x));
	set("flat-spots", flat_spots(x));

	const auto white = prewhiten(x);
	if (white.size() >= 8 && stats::variance(white) > 0.0) {
		set("arch-acf", sum_squares(safe_acf(squares(white), 12), 12));
		set("arch-r2", arch_r2(white, 12));
		const auto g = garch_standardised_residuals(white);
		set("garch-acf", sum_squares(safe_acf(squares(g), 12), 12));
		set("garch-r2", arch_r2(g, 12));
	}

	double alpha = 0.0, beta = 0.0, hw_alpha = 0.0, hw_beta = 0.0, hw_gamma = 0.0;
	ets_parameters(x, m, alpha, beta, hw_alpha, hw_beta, hw_gamma);
	set("alpha", alpha);
	set("beta", beta);
	set("hw-alpha", hw_alpha);
	set("hw-beta", hw_beta);
	set("hw-gamma", hw_gamma);

	set("hurst", hurst(x));
	const auto width = block_width(m);
	set("lumpiness", lumpiness(x, width));
	set("stability", stability(x, width));
	set("non-linearity", 10.0 * terasvirta_statistic(x) / static_cast<double>(x.size()));

	const auto s = stl_features(x, m);
	set("trend-strength", s.trend);
	set("seasonal-strength", s.seasonal);
	set("spike", s.spike);
	set("linearity", s.linearity);
	set("curvature", s.curvature);
	set("e-acf1", s.e_acf1);
	set("e-acf10", s.e_acf10);
	set("peak", s.peak);
	set("trough", s.trough);

	set("unitroot-kpss", arima::kpss_statistic(x));
	set("unitroot-pp", phillips_perron(x));
	return out;
}

} // namespace fuma::features
