#pragma once

#include "fuma/series.hpp"

#include <span>
#include <vector>

namespace fuma {

/// Additive seasonal-trend decomposition: values == trend + seasonal + remainder.
struct StlDecomposition {
	std::vector<double> trend;
	std::vector<double> seasonal;
	std::vector<double> remainder;
};

/// Loess-based STL with a periodic seasonal window (cycle-subseries means),
/// two inner passes and no robustness iterations. Trend window follows the
/// classic default nextodd(ceil(1.5 m / (1 - 1.5 / (10 n + 1)))), low-pass
/// window nextodd(m).
///
/// For m == 1 the seasonal component is identically zero and the trend is a
/// local-linear loess with window nextodd(max(5, ceil(0.2 n))).
///
/// Throws SeriesTooShort when m > 1 and n < 2m + 1.
StlDecomposition stl_decompose(std::span<const double> values, int period);
StlDecomposition stl_decompose(const TimeSeries &series);

/// max(0, 1 - var(remainder) / var(seasonal + remainder)); 0 when undefined.
double seasonal_strength(const StlDecomposition &d);
/// max(0, 1 - var(remainder) / var(trend + remainder)); 0 when undefined.
double trend_strength(const StlDecomposition &d);

/// Local-linear (degree 1) or local-constant (degree 0) loess with tricube
/// weights over the `window` nearest equally spaced points, evaluated at
/// positions 0..n-1.
std::vector<double> loess_smooth(std::span<const double> y, int window, int degree);

} // namespace fuma
