#pragma once

#include "fuma/fitted.hpp"

#include <span>
#include <string>
#include <vector>

namespace fuma::ets {

enum class Trend { None, Additive, Damped };

/// Additive-error exponential smoothing model form.
struct Form {
	Trend trend = Trend::None;
	bool seasonal = false;

	/// "ANN", "AAN", "AAdN", "ANA", "AAA", "AAdA".
	std::string name() const;
};

/// Candidate set for automatic selection.
struct Taxonomy {
	std::vector<Trend> trends{Trend::None, Trend::Additive, Trend::Damped};
	bool allow_seasonal = true;
};

struct Model {
	Form form;
	int period = 1;
	std::size_t n = 0;
	double alpha = 0.0, beta = 0.0, gamma = 0.0, phi = 1.0;
	/// States after the last observation.
	double level = 0.0, slope = 0.0;
	/// season[(j - 1) % m] is the seasonal state used j steps after the last observation.
	std::vector<double> season;
	double sse = 0.0;
	double sigma2 = 0.0;
	double aicc = 0.0;
	int n_params = 0;

	FittedMethod describe() const;
};

struct PointVariance {
	std::vector<double> mean;
	std::vector<double> variance;
};

inline constexpr double kLowerBound = 0.0001;
inline constexpr double kUpperBound = 0.9999;
inline constexpr double kPhiLower = 0.80;
inline constexpr double kPhiUpper = 0.98;

/// Fits one model form by minimising n log(SSE / n) over smoothing parameters
/// and initial level/slope, from fixed starting values. Throws MethodFailed
/// when the series is too short for the form.
Model fit_form(std::span<const double> y, int period, Form form);

/// Best model by AICc over the taxonomy. Seasonal forms are only tried when
/// period > 1 and n >= 2 period + 2. Ties keep the simpler (earlier) form.
Model fit_auto(std::span<const double> y, int period, const Taxonomy &taxonomy = {});

/// Point forecasts and class-1 analytic forecast variances
/// sigma^2 (1 + sum_{j<h} c_j^2), c_j = alpha + beta (phi + ... + phi^j) + gamma [j mod m == 0].
PointVariance forecast(const Model &model, int horizon);

} // namespace fuma::ets
