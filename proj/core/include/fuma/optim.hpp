#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fuma::optim {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
	int max_evaluations = 2000;
	/// Stop when the spread of simplex values falls below abs_tol + rel_tol * |f_best|.
	double rel_tol = 1e-8;
	double abs_tol = 1e-12;
};

struct Minimum {
	std::vector<double> x;
	double value = 0.0;
	int evaluations = 0;
};

/// Deterministic Nelder-Mead; `step` gives the initial simplex edge per coordinate.
/// Non-finite objective values are treated as +infinity.
Minimum nelder_mead(const Objective &f, std::vector<double> start, std::span<const double> step,
                    const NelderMeadOptions &options = {});

/// Golden-section search for a minimum of a unimodal f on [a, b].
Minimum golden_section(const std::function<double(double)> &f, double a, double b,
                       double tol = 1e-6, int max_iter = 200);

} // namespace fuma::optim
