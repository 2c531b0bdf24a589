#include "doctest.h"

#include "fuma/stats.hpp"
#include "synthetic.hpp"

#include <cmath>

using namespace fuma;

TEST_CASE("moments and quantiles") {
	const std::vector<double> x{1, 2, 3, 4, 10};
	CHECK(stats::mean(x) == doctest::Approx(4.0));
	CHECK(stats::variance(x) == doctest::Approx(12.5));
	CHECK(stats::median(x) == 3.0);
	CHECK(stats::quantile(x, 0.25) == doctest::Approx(2.0));
	CHECK(stats::quantile(std::vector<double>{1, 2}, 0.5) == doctest::Approx(1.5));
	CHECK(stats::diff(x, 2) == std::vector<double>{2, 2, 7});
}

TEST_CASE("acf matches a direct evaluation") {
	const std::vector<double> x{2, 4, 1, 5, 3, 6, 2};
	const double m = stats::mean(x);
	double c0 = 0.0, c1 = 0.0, c2 = 0.0;
	for (std::size_t t = 0; t < x.size(); ++t) {
		c0 += (x[t] - m) * (x[t] - m);
		if (t >= 1)
			c1 += (x[t] - m) * (x[t - 1] - m);
		if (t >= 2)
			c2 += (x[t] - m) * (x[t - 2] - m);
	}
	const auto r = stats::acf(x, 2);
	CHECK(r[0] == doctest::Approx(c1 / c0));
	CHECK(r[1] == doctest::Approx(c2 / c0));
	CHECK(stats::acf(std::vector<double>(10, 3.0), 3) == std::vector<double>(3, 0.0));
}

TEST_CASE("pacf of an AR(1) cuts off after lag 1") {
	const auto x = testing::ar1(5, 2000, 0.6);
	const auto p = stats::pacf(x, 4);
	CHECK(p[0] == doctest::Approx(0.6).epsilon(0.1));
	for (int k = 1; k < 4; ++k)
		CHECK(std::abs(p[k]) < 0.08);
}

TEST_CASE("normal quantile") {
	CHECK(stats::normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-9));
	CHECK(stats::normal_quantile(0.9) == doctest::Approx(1.281551566).epsilon(1e-9));
}

TEST_CASE("ols recovers an exact linear relation") {
	std::vector<double> design, y;
	for (int i = 0; i < 20; ++i) {
		const double a = i, b = std::sin(i);
		design.insert(design.end(), {1.0, a, b});
		y.push_back(3.0 + 0.5 * a - 2.0 * b);
	}
	const auto fit = stats::ols(design, 3, y);
	CHECK(fit.coef[0] == doctest::Approx(3.0));
	CHECK(fit.coef[1] == doctest::Approx(0.5));
	CHECK(fit.coef[2] == doctest::Approx(-2.0));
	CHECK(fit.rss < 1e-18);
	CHECK(fit.r_squared == doctest::Approx(1.0));
}

TEST_CASE("stationarity check") {
	CHECK(stats::is_stationary(std::vector<double>{0.5}));
	CHECK_FALSE(stats::is_stationary(std::vector<double>{1.0}));
	CHECK(stats::is_stationary(std::vector<double>{0.5, 0.3}));
	CHECK_FALSE(stats::is_stationary(std::vector<double>{0.5, 0.6}));
	CHECK(stats::is_stationary(std::vector<double>{}));
	CHECK_FALSE(stats::is_stationary(std::vector<double>{0.0, 0.0, 1.2}));
}

TEST_CASE("yule-walker on an AR(1)") {
	const auto x = testing::ar1(11, 3000, 0.7);
	const auto fit = stats::yule_walker(x, 1);
	CHECK(fit.phi[0] == doctest::Approx(0.7).epsilon(0.05));
	CHECK(fit.sigma2 == doctest::Approx(1.0).epsilon(0.1));
	CHECK(stats::yule_walker_aic(x, 5).phi.size() >= 1);
}
