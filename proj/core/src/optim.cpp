#include "fuma/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fuma::optim {

namespace {
double guarded(const Objective &f, std::span<const double> x) {
	const double v = f(x);
	return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}
} // namespace

Minimum nelder_mead(const Objective &f, std::vector<double> start, std::span<const double> step,
                    const NelderMeadOptions &options) {
	const std::size_t n = start.size();
	Minimum result;
	if (n == 0) {
		result.value = guarded(f, start);
		result.evaluations = 1;
		return result;
	}
	constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

	std::vector<std::vector<double>> simplex(n + 1, start);
	std::vector<double> values(n + 1);
	for (std::size_t i = 0; i < n; ++i)
		simplex[i + 1][i] += step[i];
	int evals = 0;
	for (std::size_t i = 0; i <= n; ++i) {
		values[i] = guarded(f, simplex[i]);
		++evals;
	}

	std::vector<std::size_t> order(n + 1);
	std::vector<double> centroid(n), trial(n), trial2(n);
	while (evals < options.max_evaluations) {
		std::iota(order.begin(), order.end(), 0);
		std::stable_sort(order.begin(), order.end(),
		                 [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
		const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
		const double spread = values[worst] - values[best];
		if (std::isfinite(values[worst]) &&
		    spread <= options.abs_tol + options.rel_tol * std::abs(values[best]))
			break;

		std::fill(centroid.begin(), centroid.end(), 0.0);
		for (std::size_t k = 0; k < n; ++k)
			for (std::size_t i = 0; i < n; ++i)
				centroid[i] += simplex[order[k]][i];
		for (double &c : centroid)
			c /= static_cast<double>(n);

		for (std::size_t i = 0; i < n; ++i)
			trial[i] = centroid[i] + alpha * (centroid[i] - simplex[worst][i]);
		const double fr = guarded(f, trial);
		++evals;
		if (fr < values[best]) {
			for (std::size_t i = 0; i < n; ++i)
				trial2[i] = centroid[i] + gamma * (trial[i] - centroid[i]);
			const double fe = guarded(f, trial2);
			++evals;
			if (fe < fr) {
				simplex[worst] = trial2;
				values[worst] = fe;
			} else {
				simplex[worst] = trial;
				values[worst] = fr;
			}
			continue;
		}
		if (fr < values[second]) {
			simplex[worst] = trial;
			values[worst] = fr;
			continue;
		}
		const bool outside = fr < values[worst];
		for (std::size_t i = 0; i < n; ++i) {
			const double towards = outside ? trial[i] : simplex[worst][i];
			trial2[i] = centroid[i] + rho * (towards - centroid[i]);
		}
		const double fc = guarded(f, trial2);
		++evals;
		if (fc < std::min(fr, values[worst])) {
			simplex[worst] = trial2;
			values[worst] = fc;
			continue;
		}
		for (std::size_t k = 1; k <= n; ++k) {
			auto &v = simplex[order[k]];
			for (std::size_t i = 0; i < n; ++i)
				v[i] = simplex[best][i] + sigma * (v[i] - simplex[best][i]);
			values[order[k]] = guarded(f, v);
			++evals;
		}
	}
	const auto it = std::min_element(values.begin(), values.end());
	result.x = simplex[static_cast<std::size_t>(it - values.begin())];
	result.value = *it;
	result.evaluations = evals;
	return result;
}

Minimum golden_section(const std::function<double(double)> &f, double a, double b, double tol,
                       int max_iter) {
	const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
	Minimum best;
	best.value = std::numeric_limits<double>::infinity();
	auto eval = [&](double x) {
		double v = f(x);
		if (!std::isfinite(v))
			v = std::numeric_limits<double>::infinity();
		++best.evaluations;
		if (v < best.value) {
			best.value = v;
			best.x = {x};
		}
		return v;
	};
	eval(a);
	eval(b);
	double c = b - inv_phi * (b - a);
	double d = a + inv_phi * (b - a);
	double fc = eval(c), fd = eval(d);
	for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
		if (fc <= fd) {
			b = d;
			d = c;
			fd = fc;
			c = b - inv_phi * (b - a);
			fc = eval(c);
		} else {
			a = c;
			c = d;
			fc = fd;
			d = a + inv_phi * (b - a);
			fd = eval(d);
		}
	}
	return best;
}

} // namespace fuma::optim
