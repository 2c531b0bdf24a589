#pragma once

#include "fuma/ets.hpp"
#include "fuma/fitted.hpp"

#include <span>
#include <vector>

namespace fuma::arima {

struct Order {
	int p = 0, d = 0, q = 0;
	int P = 0, D = 0, Q = 0;
	int period = 1;
};

struct Model {
	Order order;
	bool has_constant = false;
	/// Mean of the differenced series (a drift when d + D == 1).
	double constant = 0.0;
	std::vector<double> ar, ma, sar, sma;
	double sigma2 = 0.0;
	double loglik = 0.0;
	double aicc = 0.0;
	/// Training data kept for forecasting.
	std::vector<double> y;
	std::vector<double> w;
	std::vector<double> residuals;

	FittedMethod describe() const;
	/// First psi weight of the stationary ARMA part (phi_1 + theta_1 for non-seasonal terms).
	double psi1() const;
};

/// KPSS level-stationarity statistic with Bartlett long-run variance and
/// trunc(4 (n / 100)^0.25) lags.
double kpss_statistic(std::span<const double> x);
inline constexpr double kKpssCritical5 = 0.463;

/// Number of first differences (0..2) until KPSS no longer rejects at 5%.
int ndiffs(std::span<const double> x);
/// 1 when the STL seasonal strength is at least 0.64, else 0.
int nsdiffs(std::span<const double> x, int period);

/// Fits a fixed order: conditional sum of squares, refined by the exact Gaussian
/// likelihood (Kalman filter). A constant is estimated when d + D <= 1 and
/// include_constant is set.
Model fit(std::span<const double> y, const Order &order, bool include_constant = true);

/// Differencing by unit-root/seasonal-strength heuristics, then a stepwise
/// AICc search within p, q <= 3 and P, Q <= 1 using CSS fits on a common
/// conditioning window. Candidates with AR or MA roots inside modulus 1.01 are
/// discarded. The three best are refined by maximum likelihood and compared
/// on the exact AICc.
Model fit_auto(std::span<const double> y, int period);

/// Point forecasts and psi-weight forecast variances.
ets::PointVariance forecast(const Model &model, int horizon);

} // namespace fuma::arima
