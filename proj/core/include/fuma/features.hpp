#pragma once

#include "fuma/series.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fuma::features {

/// Feature families; the invariance tests and range checks key off these.
enum class Kind {
	Acf,       // a single autocorrelation, in [-1, 1]
	AcfSum,    // sum of squared autocorrelations
	Strength,  // variance-ratio strengths and R^2 values, in [0, 1]
	Entropy,   // normalised spectral entropy, in [0, 1]
	Parameter, // smoothing parameters of a fitted model, in [0, 1]
	Variance,  // variances of block statistics
	Position,  // seasonal peak/trough position, in [0, 1)
	Statistic, // test statistics and counts
	Dummy,     // 0/1 frequency indicators, entered linearly in the GAM
	Length,
};

std::string_view to_string(Kind kind) noexcept;

struct FeatureInfo {
	std::string_view name;
	Kind kind;
	std::string_view definition;
	double lower;
	double upper;
};

inline constexpr int kRegistryVersion = 1;
inline constexpr std::size_t kFeatureCount = 43;

/// The frozen feature registry, in design-matrix order.
std::span<const FeatureInfo> registry();
/// Index of a feature name; throws UnknownFeature.
std::size_t index_of(std::string_view name);
/// Versioned tab-separated table: index, name, kind, lower, upper, definition.
std::string registry_table();
/// 64-bit FNV-1a hash of registry_table().
std::uint64_t registry_hash();

struct FeatureVector {
	std::vector<double> values;
	/// Set when the series has zero variance; every feature except the
	/// dummies and the length is then reported as 0.
	bool degenerate = false;
	std::uint64_t registry_hash = 0;

	double operator[](std::size_t i) const { return values[i]; }
	double at(std::string_view name) const;
};

/// Computes the 43 features on the z-scored training period, so that every
/// feature other than the dummies and the length is invariant to shifting and
/// positive rescaling of the input. Never throws for a valid TimeSeries.
FeatureVector extract(const TimeSeries &train);

// Building blocks, exposed for testing.

/// Spectral entropy of an AR spectrum estimate (order by AIC), normalised to [0, 1].
double spectral_entropy(std::span<const double> x);
/// Longest run of observations falling in the same of 10 equal-width bins.
double flat_spots(std::span<const double> x);
/// Number of times the series crosses its median.
double crossing_points(std::span<const double> x);
/// R^2 of the regression of x_t^2 on its first `lags` lags (with intercept).
double arch_r2(std::span<const double> x, int lags = 12);
/// Standardised residuals of a Gaussian GARCH(1,1) fitted by maximum likelihood.
std::vector<double> garch_standardised_residuals(std::span<const double> e);
/// Teraesvirta-style neglected-nonlinearity statistic n log(SSR0 / SSR1), lag 1.
double terasvirta_statistic(std::span<const double> x);
/// Long-memory exponent d + 0.5 with d from the log-periodogram regression, d clamped to [0, 0.5].
double hurst(std::span<const double> x);
/// Phillips-Perron Z-alpha statistic, constant model, short lag truncation.
double phillips_perron(std::span<const double> x);
/// Variance of variances (lumpiness) and variance of means (stability) over
/// non-overlapping blocks of the given width; 0 with fewer than two blocks.
double lumpiness(std::span<const double> x, std::size_t width);
double stability(std::span<const double> x, std::size_t width);
/// Block width used for lumpiness and stability: max(2m, 10).
std::size_t block_width(int period) noexcept;

} // namespace fuma::features
