#include "fuma/stats.hpp"
#include "fuma/error.hpp"

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fuma::stats {

double mean(std::span<const double> x) {
	if (x.empty())
		return 0.0;
	return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
	if (x.size() < 2)
		return 0.0;
	const double mu = mean(x);
	double ss = 0.0;
	for (double v : x)
		ss += (v - mu) * (v - mu);
	return ss / static_cast<double>(x.size() - 1);
}

double sd(std::span<const double> x) { return std::sqrt(variance(x)); }

double quantile(std::span<const double> x, double p) {
	if (x.empty())
		throw Error("quantile of empty sample");
	std::vector<double> s(x.begin(), x.end());
	std::sort(s.begin(), s.end());
	const double h = (static_cast<double>(s.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
	const auto lo = static_cast<std::size_t>(std::floor(h));
	const auto hi = std::min(lo + 1, s.size() - 1);
	return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

double median(std::span<const double> x) { return quantile(x, 0.5); }

std::vector<double> diff(std::span<const double> x, int lag) {
	const auto l = static_cast<std::size_t>(lag);
	if (x.size() <= l)
		return {};
	std::vector<double> out(x.size() - l);
	for (std::size_t t = l; t < x.size(); ++t)
		out[t - l] = x[t] - x[t - l];
	return out;
}

std::vector<double> acf(std::span<const double> x, int max_lag) {
	std::vector<double> r(static_cast<std::size_t>(std::max(max_lag, 0)), 0.0);
	const std::size_t n = x.size();
	if (n < 2)
		return r;
	const double mu = mean(x);
	double c0 = 0.0;
	for (double v : x)
		c0 += (v - mu) * (v - mu);
	if (!(c0 > 0.0))
		return r;
	for (std::size_t k = 1; k <= r.size() && k < n; ++k) {
		double ck = 0.0;
		for (std::size_t t = k; t < n; ++t)
			ck += (x[t] - mu) * (x[t - k] - mu);
		r[k - 1] = ck / c0;
	}
	return r;
}

std::vector<double> pacf(std::span<const double> x, int max_lag) {
	const auto r = acf(x, max_lag);
	const auto p = r.size();
	std::vector<double> out(p, 0.0);
	std::vector<double> phi(p + 1, 0.0), prev(p + 1, 0.0);
	double v = 1.0;
	for (std::size_t k = 1; k <= p; ++k) {
		double num = r[k - 1];
		for (std::size_t j = 1; j < k; ++j)
			num -= prev[j] * r[k - j - 1];
		if (!(v > 1e-300))
			break;
		const double kk = num / v;
		phi[k] = kk;
		for (std::size_t j = 1; j < k; ++j)
			phi[j] = prev[j] - kk * prev[k - j];
		v *= (1.0 - kk * kk);
		out[k - 1] = std::clamp(kk, -1.0, 1.0);
		prev = phi;
	}
	return out;
}

double normal_quantile(double p) {
	static const boost::math::normal_distribution<double> standard;
	return boost::math::quantile(standard, p);
}

OlsFit ols(std::span<const double> design, std::size_t cols, std::span<const double> y) {
	const std::size_t rows = y.size();
	if (cols == 0 || design.size() != rows * cols)
		throw Error("ols: design/response size mismatch");
	Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> X(
		design.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
	Eigen::Map<const Eigen::VectorXd> Y(y.data(), static_cast<Eigen::Index>(rows));
	Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
	const Eigen::VectorXd b = qr.solve(Y);
	const Eigen::VectorXd e = Y - X * b;
	OlsFit fit;
	fit.coef.assign(b.data(), b.data() + b.size());
	fit.residuals.assign(e.data(), e.data() + e.size());
	fit.rss = e.squaredNorm();
	const double my = Y.mean();
	const double tss = (Y.array() - my).square().sum();
	fit.r_squared = tss > 0.0 ? std::clamp(1.0 - fit.rss / tss, 0.0, 1.0) : 0.0;
	return fit;
}

namespace {

// Levinson recursion; returns coefficient sets and innovation variances of all orders.
void levinson(std::span<const double> gamma, int max_order, std::vector<std::vector<double>> &coefs,
              std::vector<double> &vars) {
	coefs.assign(static_cast<std::size_t>(max_order) + 1, {});
	vars.assign(static_cast<std::size_t>(max_order) + 1, gamma[0]);
	std::vector<double> prev;
	double v = gamma[0];
	for (int k = 1; k <= max_order; ++k) {
		double num = gamma[static_cast<std::size_t>(k)];
		for (int j = 1; j < k; ++j)
			num -= prev[static_cast<std::size_t>(j - 1)] * gamma[static_cast<std::size_t>(k - j)];
		const double kk = v > 0.0 ? num / v : 0.0;
		std::vector<double> cur(static_cast<std::size_t>(k));
		for (int j = 1; j < k; ++j)
			cur[static_cast<std::size_t>(j - 1)] =
				prev[static_cast<std::size_t>(j - 1)] - kk * prev[static_cast<std::size_t>(k - j - 1)];
		cur[static_cast<std::size_t>(k - 1)] = kk;
		v *= (1.0 - kk * kk);
		coefs[static_cast<std::size_t>(k)] = cur;
		vars[static_cast<std::size_t>(k)] = std::max(v, 0.0);
		prev = std::move(cur);
	}
}

std::vector<double> autocovariance(std::span<const double> x, int max_lag) {
	const std::size_t n = x.size();
	const double mu = mean(x);
	std::vector<double> g(static_cast<std::size_t>(max_lag) + 1, 0.0);
	for (std::size_t k = 0; k < g.size() && k < n; ++k) {
		double s = 0.0;
		for (std::size_t t = k; t < n; ++t)
			s += (x[t] - mu) * (x[t - k] - mu);
		g[k] = s / static_cast<double>(n);
	}
	return g;
}

} // namespace

ArFit yule_walker(std::span<const double> x, int order) {
	const auto g = autocovariance(x, order);
	std::vector<std::vector<double>> coefs;
	std::vector<double> vars;
	levinson(g, order, coefs, vars);
	ArFit fit;
	fit.phi = coefs[static_cast<std::size_t>(order)];
	fit.sigma2 = vars[static_cast<std::size_t>(order)];
	const double n = static_cast<double>(x.size());
	fit.aic = n * std::log(std::max(fit.sigma2, 1e-300)) + 2.0 * order;
	return fit;
}

ArFit yule_walker_aic(std::span<const double> x, int max_order) {
	max_order = std::max(0, std::min(max_order, static_cast<int>(x.size()) - 1));
	const auto g = autocovariance(x, max_order);
	std::vector<std::vector<double>> coefs;
	std::vector<double> vars;
	levinson(g, max_order, coefs, vars);
	const double n = static_cast<double>(x.size());
	ArFit best;
	best.aic = std::numeric_limits<double>::infinity();
	for (int p = 0; p <= max_order; ++p) {
		const double s2 = vars[static_cast<std::size_t>(p)];
		const double aic = n * std::log(std::max(s2, 1e-300)) + 2.0 * p;
		if (aic < best.aic) {
			best.aic = aic;
			best.phi = coefs[static_cast<std::size_t>(p)];
			best.sigma2 = s2;
		}
	}
	return best;
}

bool is_stationary(std::span<const double> phi) {
	std::vector<double> a(phi.begin(), phi.end());
	while (!a.empty() && a.back() == 0.0)
		a.pop_back();
	for (std::size_t p = a.size(); p > 0; --p) {
		const double k = a[p - 1];
		if (!(std::abs(k) < 1.0))
			return false;
		const double denom = 1.0 - k * k;
		std::vector<double> next(p - 1);
		for (std::size_t i = 0; i + 1 < p; ++i)
			next[i] = (a[i] + k * a[p - 2 - i]) / denom;
		a = std::move(next);
	}
	return true;
}

} // namespace fuma::stats
