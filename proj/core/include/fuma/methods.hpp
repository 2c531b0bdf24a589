#pragma once

#include "fuma/ets.hpp"
#include "fuma/fitted.hpp"
#include "fuma/series.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fuma::methods {

enum class MethodId { AutoArima, Ets, EtsBoxCox, StlmAr, RwDrift, Thetaf, Naive, Snaive };

inline constexpr std::array<MethodId, 8> kAllMethods{
	MethodId::AutoArima, MethodId::Ets,    MethodId::EtsBoxCox, MethodId::StlmAr,
	MethodId::RwDrift,   MethodId::Thetaf, MethodId::Naive,     MethodId::Snaive};

std::string_view to_string(MethodId id) noexcept;
MethodId method_from_string(std::string_view name);
/// One-line human description, exported for report labelling.
std::string_view describe(MethodId id) noexcept;

/// Effective pool for a seasonal period: snaive coincides with naive for m = 1
/// and is left out, giving 7 methods.
std::vector<MethodId> pool_for(int period);

struct MethodResult {
	/// One forecast per requested level, in request order.
	std::vector<IntervalForecast> forecasts;
	FittedMethod fitted;
};

/// Runs one method. Throws MethodFailed when it cannot produce a forecast.
MethodResult run(MethodId id, const TimeSeries &train, int horizon, std::span<const double> levels);

std::vector<IntervalForecast> forecast(MethodId id, const TimeSeries &train, int horizon,
                                       std::span<const double> levels);

/// Like forecast(), but substitutes the naive method when `id` fails.
struct SafeForecast {
	std::vector<IntervalForecast> forecasts;
	bool fell_back = false;
	std::string reason;
};
SafeForecast forecast_or_naive(MethodId id, const TimeSeries &train, int horizon,
                               std::span<const double> levels);

/// point +/- z_{(1+level)/2} * sqrt(variance).
std::vector<IntervalForecast> gaussian_intervals(std::span<const double> point,
                                                 std::span<const double> variance,
                                                 std::span<const double> levels);

FittedMethod fit_ets(const TimeSeries &train, const ets::Taxonomy &taxonomy = {});
FittedMethod fit_auto_arima(const TimeSeries &train);

/// Box-Cox parameter minimising the Guerrero coefficient of variation over
/// {0, 0.1, ..., 1}; 1 when any value is non-positive.
double guerrero_lambda(std::span<const double> y, int period);
double box_cox(double y, double lambda);
double inv_box_cox(double z, double lambda);

/// Components of the theta forecast, exposed for testing.
struct ThetaFit {
	double intercept = 0.0, slope = 0.0; // theta(0) line a + b t, t = 1..n
	double alpha = 0.0;
	double ses_level = 0.0; // SES level of the theta(2) line after the last observation
	double sigma2 = 0.0;
	bool seasonal = false;
	std::vector<double> season; // additive indices by position t % m
};
ThetaFit fit_theta(const TimeSeries &train);
/// The classical seasonality test used by theta: |r_m| > 1.645 sqrt((1 + 2 sum_{k<m} r_k^2) / n).
bool theta_seasonality_test(std::span<const double> y, int period);

} // namespace fuma::methods
