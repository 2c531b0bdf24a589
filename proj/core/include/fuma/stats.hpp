#pragma once

#include <span>
#include <vector>

namespace fuma::stats {

double mean(std::span<const double> x);
/// Sample variance (divisor n - 1); 0 for fewer than two values.
double variance(std::span<const double> x);
double sd(std::span<const double> x);
double median(std::span<const double> x);
/// Linear-interpolation quantile (R type 7), p in [0, 1].
double quantile(std::span<const double> x, double p);

/// x_t - x_{t-lag}.
std::vector<double> diff(std::span<const double> x, int lag = 1);

/// Sample autocorrelations r_1..r_maxlag (biased estimator). All zero when the
/// series has zero variance; lags beyond n - 1 are reported as zero.
std::vector<double> acf(std::span<const double> x, int max_lag);
/// Partial autocorrelations 1..max_lag via Durbin-Levinson on the sample acf.
std::vector<double> pacf(std::span<const double> x, int max_lag);

/// Upper quantile of the standard normal, e.g. z(0.975) = 1.959964.
double normal_quantile(double p);

/// Residual sum of squares and coefficients of an ordinary least-squares fit.
struct OlsFit {
	std::vector<double> coef;
	std::vector<double> residuals;
	double rss = 0.0;
	double r_squared = 0.0;
};
/// `design` is row-major with `cols` columns. Rank-deficient designs are solved
/// by column-pivoted QR (minimum-norm is not guaranteed).
OlsFit ols(std::span<const double> design, std::size_t cols, std::span<const double> y);

/// Yule-Walker AR(p) fit on the demeaned series.
struct ArFit {
	std::vector<double> phi;
	double sigma2 = 0.0;
	double aic = 0.0;
};
ArFit yule_walker(std::span<const double> x, int order);
/// Order selected by AIC over 0..max_order, as R's ar() does.
ArFit yule_walker_aic(std::span<const double> x, int max_order);

/// True when all roots of 1 - phi_1 z - ... - phi_p z^p lie outside the unit circle.
bool is_stationary(std::span<const double> phi);

} // namespace fuma::stats
