#pragma once

#include "fuma/features.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fuma::gam {

/// Natural cubic regression spline parameterised by its values at the knots.
/// Beyond the boundary knots it continues linearly.
class CubicSpline {
public:
	CubicSpline() = default;
	/// Knots must be strictly increasing, at least 3 of them.
	CubicSpline(std::vector<double> knots, std::vector<double> values);

	double operator()(double x) const;
	const std::vector<double> &knots() const noexcept { return knots_; }
	const std::vector<double> &values() const noexcept { return values_; }
	/// Second derivatives at the knots (zero at both ends).
	const std::vector<double> &curvature() const noexcept { return second_; }

	/// Row of the basis: f(x) = basis_row(knots, x) . values.
	static std::vector<double> basis_row(std::span<const double> knots, double x);
	/// Integrated squared second derivative penalty S, k x k row-major.
	static std::vector<double> penalty(std::span<const double> knots);

private:
	std::vector<double> knots_;
	std::vector<double> values_;
	std::vector<double> second_;
};

struct LinearTerm {
	std::string name;
	std::size_t column = 0;
	double coef = 0.0;
};

struct SmoothTerm {
	std::string name;
	std::size_t column = 0;
	CubicSpline spline;
	double lambda = 0.0; // on the normalised penalty
	double edf = 0.0;
};

struct Diagnostics {
	double gcv = 0.0;
	double residual_variance = 0.0;
	double edf_total = 0.0;
	std::size_t rows = 0;
	int cycles = 0;
	bool ridge = false;          // ridge fallback was needed
	bool small_sample = false;   // fewer rows than the recommended minimum
	std::vector<std::string> demoted; // smooth candidates entered linearly
	std::vector<std::string> dropped; // constant or aliased columns
};

/// Additive model y = b0 + sum linear + sum s(x), Gaussian with identity link.
class GamModel {
public:
	std::string label;
	std::uint64_t registry_hash = 0;
	std::size_t columns = 0;
	double intercept = 0.0;
	std::vector<LinearTerm> linear;
	std::vector<SmoothTerm> smooths;

	/// Prediction for one row of `columns` values.
	double predict(std::span<const double> row) const;
	/// Checks the registry hash first; throws RegistryMismatch.
	double predict(const features::FeatureVector &fv) const;

	/// Intercept followed by the value of each linear term and each smooth, in
	/// model order; they sum to predict(row).
	std::vector<double> term_values(std::span<const double> row) const;

	/// Centered smooth of `name` on the grid; throws UnknownFeature if the
	/// feature is not a smooth term.
	std::vector<double> partial_effect(const std::string &name, std::span<const double> grid) const;
	const SmoothTerm *smooth(const std::string &name) const;
};

struct Options {
	int basis_size = 10;
	double log10_lambda_lo = -6.0;
	double log10_lambda_hi = 8.0;
	int max_cycles = 20;
	double tolerance = 1e-6;
	std::size_t recommended_rows = 200;
	/// When set, every smooth uses this lambda and no search is performed.
	std::optional<double> fixed_lambda;
	double ridge = 1e-8;
};

/// Row-major design with a column description.
struct Data {
	std::vector<std::string> names;
	std::vector<bool> smooth; // false: linear term
	std::size_t rows = 0;
	std::vector<double> x; // rows * names.size()
	std::vector<double> y;
};

struct Fit {
	GamModel model;
	Diagnostics diagnostics;
	std::vector<double> fitted;
};

/// Penalised least squares with GCV smoothing selection. Rows with a
/// non-finite response are dropped. Throws InsufficientData when fewer rows
/// remain than unpenalised coefficients.
Fit fit(const Data &data, const Options &options = {}, std::string label = {});

/// Builds the design from feature vectors: dummies enter linearly, every
/// other feature is a smooth candidate.
Data feature_data(std::span<const features::FeatureVector> rows, std::span<const double> y);
Fit fit_features(std::span<const features::FeatureVector> rows, std::span<const double> y,
                 const Options &options = {}, std::string label = {});

/// GCV = n RSS / (n - tr A)^2 for given per-smooth lambdas, evaluated by a
/// direct solve. Used to check the optimiser.
double gcv_direct(const Data &data, std::span<const double> lambdas, const Options &options = {});

} // namespace fuma::gam
