#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fuma {

/// Summary of one fitted forecasting model, used for logging and reports.
struct FittedMethod {
	std::string method;
	std::vector<std::pair<std::string, double>> parameters;
	double sigma2 = 0.0;
	/// AICc where the method is likelihood based, NaN otherwise.
	double aicc = 0.0;
};

} // namespace fuma
