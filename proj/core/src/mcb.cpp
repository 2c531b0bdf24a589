#include "fuma/mcb.hpp"
#include "fuma/error.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace fuma::mcb {

namespace {

// qtukey(0.95, k, Inf) for k = 2..12.
constexpr std::array<double, 11> kCritical{2.772, 3.314, 3.633, 3.858, 4.030, 4.170,
                                           4.286, 4.387, 4.474, 4.552, 4.622};

} // namespace

double studentized_range_cdf(double q, int k) {
	if (k < 2)
		throw DataError("studentized range needs k >= 2");
	if (q <= 0.0)
		return 0.0;
	const boost::math::normal_distribution<double> norm;
	auto integrand = [&](double z) {
		const double inner = boost::math::cdf(norm, z) - boost::math::cdf(norm, z - q);
		return boost::math::pdf(norm, z) * std::pow(std::max(inner, 0.0), k - 1);
	};
	const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -9.0, 9.0 + q, 12,
	                                                                                    1e-12);
	return std::clamp(k * value, 0.0, 1.0);
}

double studentized_range_quantile(double p, int k) {
	if (!(p > 0.0 && p < 1.0))
		throw DataError("probability must lie in (0, 1)");
	auto f = [&](double q) { return studentized_range_cdf(q, k) - p; };
	boost::math::tools::eps_tolerance<double> tol(40);
	std::uintmax_t iters = 200;
	const auto [lo, hi] = boost::math::tools::toms748_solve(f, 1e-6, 20.0, tol, iters);
	return 0.5 * (lo + hi);
}

double critical_range(int k) {
	if (k < 2)
		throw InsufficientData("MCB needs at least two models");
	if (k <= 12)
		return kCritical[static_cast<std::size_t>(k - 2)];
	return studentized_range_quantile(0.95, k);
}

std::vector<double> rank_row(std::span<const double> row) {
	std::vector<std::size_t> order(row.size());
	std::iota(order.begin(), order.end(), 0);
	std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
	std::vector<double> ranks(row.size());
	for (std::size_t i = 0; i < order.size();) {
		std::size_t j = i;
		while (j + 1 < order.size() && row[order[j + 1]] == row[order[i]])
			++j;
		const double r = 0.5 * static_cast<double>(i + j) + 1.0;
		for (std::size_t t = i; t <= j; ++t)
			ranks[order[t]] = r;
		i = j + 1;
	}
	return ranks;
}

Result test(std::vector<std::string> models, std::span<const std::vector<double>> scores) {
	const std::size_t k = models.size();
	if (k < 2)
		throw InsufficientData("MCB needs at least two models");
	Result r;
	r.models = std::move(models);
	r.mean_rank.assign(k, 0.0);
	for (const auto &row : scores) {
		if (row.size() != k)
			throw DataError("MCB score row has the wrong number of models");
		if (!std::all_of(row.begin(), row.end(), [](double v) { return std::isfinite(v); })) {
			++r.dropped;
			continue;
		}
		const auto ranks = rank_row(row);
		for (std::size_t j = 0; j < k; ++j)
			r.mean_rank[j] += ranks[j];
		++r.series;
	}
	if (r.series < 10)
		throw InsufficientData("MCB needs at least 10 complete series, got " + std::to_string(r.series));
	for (double &v : r.mean_rank)
		v /= static_cast<double>(r.series);
	const double q = critical_range(static_cast<int>(k)) / std::sqrt(2.0);
	const double kd = static_cast<double>(k);
	r.half_width = 0.5 * q * std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(r.series)));
	r.best = static_cast<std::size_t>(std::min_element(r.mean_rank.begin(), r.mean_rank.end()) - r.mean_rank.begin());
	r.not_different.resize(k);
	for (std::size_t j = 0; j < k; ++j)
		r.not_different[j] = r.mean_rank[j] - r.half_width <= r.mean_rank[r.best] + r.half_width;
	return r;
}

} // namespace fuma::mcb
