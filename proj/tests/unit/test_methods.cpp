#include "doctest.h"

#include "fuma/arima.hpp"
#include "fuma/error.hpp"
#include "fuma/ets.hpp"
#include "fuma/methods.hpp"
#include "fuma/stats.hpp"
#include "synthetic.hpp"

#include <cmath>
#include <numeric>

using namespace fuma;
using methods::MethodId;

namespace {

const std::vector<double> kLevels{0.80, 0.95};

std::vector<double> point_of(MethodId id, const TimeSeries &s, int h) {
	return methods::forecast(id, s, h, kLevels)[0].point;
}

// Independent MASE: mean absolute error over the in-sample seasonal-naive MAE.
double mase_oracle(std::span<const double> train, std::span<const double> test, std::span<const double> f, int m) {
	double den = 0.0;
	for (std::size_t t = static_cast<std::size_t>(m); t < train.size(); ++t)
		den += std::abs(train[t] - train[t - m]);
	den /= static_cast<double>(train.size() - m);
	double num = 0.0;
	for (std::size_t j = 0; j < test.size(); ++j)
		num += std::abs(test[j] - f[j]);
	return num / static_cast<double>(test.size()) / den;
}

std::vector<double> shifted(std::span<const double> x, double c) {
	std::vector<double> out(x.begin(), x.end());
	for (auto &v : out)
		v += c;
	return out;
}

} // namespace

TEST_CASE("registry") {
	CHECK(methods::pool_for(1).size() == 7);
	CHECK(methods::pool_for(12).size() == 8);
	for (auto id : methods::kAllMethods) {
		CHECK(methods::method_from_string(methods::to_string(id)) == id);
		CHECK_FALSE(methods::describe(id).empty());
	}
	CHECK_THROWS_AS(methods::method_from_string("tbats"), DataError);
}

TEST_CASE("naive, snaive and rw-drift worked examples") {
	TimeSeries y5("a", {1, 2, 3, 4, 5}, 1, 2);
	CHECK(point_of(MethodId::Naive, y5, 2) == std::vector<double>{5, 5});
	auto drift = point_of(MethodId::RwDrift, y5, 2);
	CHECK(drift[0] == doctest::Approx(6.0));
	CHECK(drift[1] == doctest::Approx(7.0));
	TimeSeries q("q", {1, 2, 3, 4, 5, 6, 7, 8}, 4, 4);
	CHECK(point_of(MethodId::Snaive, q, 4) == std::vector<double>{5, 6, 7, 8});
}

TEST_CASE("random-walk family variances") {
	TimeSeries s("a", testing::random_walk(3, 40), 4, 8);
	const double z = stats::normal_quantile(0.975);
	const auto y = s.values();
	double ss = 0.0;
	for (std::size_t t = 1; t < y.size(); ++t)
		ss += (y[t] - y[t - 1]) * (y[t] - y[t - 1]);
	const double sigma2 = ss / static_cast<double>(y.size() - 1);
	const auto f = methods::forecast(MethodId::Naive, s, 8, std::vector<double>{0.95})[0];
	for (int j = 0; j < 8; ++j)
		CHECK(f.upper[j] - f.point[j] == doctest::Approx(z * std::sqrt(sigma2 * (j + 1))));
	const auto sn = methods::forecast(MethodId::Snaive, s, 8, std::vector<double>{0.95})[0];
	CHECK(sn.upper[3] - sn.point[3] == doctest::Approx(sn.upper[0] - sn.point[0]));
	CHECK(sn.upper[4] - sn.point[4] == doctest::Approx(std::sqrt(2.0) * (sn.upper[0] - sn.point[0])));
	for (auto id : {MethodId::Naive, MethodId::Snaive, MethodId::RwDrift}) {
		const auto g = methods::forecast(id, s, 8, std::vector<double>{0.95})[0];
		for (int j = 1; j < 8; ++j)
			CHECK(g.upper[j] - g.lower[j] >= g.upper[j - 1] - g.lower[j - 1] - 1e-12);
	}
}

TEST_CASE("yearly snaive is bitwise naive") {
	TimeSeries s("y", testing::random_walk(8, 30), 1, 6);
	const auto a = methods::forecast(MethodId::Naive, s, 6, kLevels);
	const auto b = methods::forecast(MethodId::Snaive, s, 6, kLevels);
	for (std::size_t k = 0; k < a.size(); ++k) {
		CHECK(a[k].lower == b[k].lower);
		CHECK(a[k].point == b[k].point);
		CHECK(a[k].upper == b[k].upper);
	}
}

TEST_CASE("interval nesting, symmetry and validity across the pool") {
	const std::vector<double> levels{0.80, 0.85, 0.90, 0.95, 0.99};
	std::vector<TimeSeries> cases;
	auto seas = testing::sine(72, 12, 5.0, 50.0);
	const auto noise = testing::white_noise(4, 72);
	for (std::size_t t = 0; t < seas.size(); ++t)
		seas[t] += noise[t] + 0.2 * static_cast<double>(t);
	cases.emplace_back("m", seas, 12, 18);
	cases.emplace_back("q", shifted(testing::ar1(5, 40, 0.5), 20.0), 4, 8);
	cases.emplace_back("y", testing::random_walk(6, 25), 1, 6);
	for (const auto &s : cases) {
		for (auto id : methods::pool_for(s.period())) {
			CAPTURE(methods::to_string(id));
			CAPTURE(s.id());
			const auto fs = methods::forecast(id, s, s.horizon(), levels);
			REQUIRE(fs.size() == levels.size());
			for (std::size_t k = 0; k < fs.size(); ++k) {
				CHECK(fs[k].valid());
				for (int j = 0; j < s.horizon(); ++j) {
					CHECK(fs[k].lower[j] <= fs[k].point[j]);
					CHECK(fs[k].point[j] <= fs[k].upper[j]);
					if (k > 0) {
						CHECK(fs[k].lower[j] <= fs[k - 1].lower[j] + 1e-12);
						CHECK(fs[k].upper[j] >= fs[k - 1].upper[j] - 1e-12);
					}
					if (id != MethodId::EtsBoxCox) {
						const double up = fs[k].upper[j] - fs[k].point[j];
						const double down = fs[k].point[j] - fs[k].lower[j];
						CHECK(std::abs(up - down) <= 1e-9 * std::max(1.0, std::abs(fs[k].point[j])));
					}
				}
			}
		}
	}
}

TEST_CASE("translation equivariance") {
	auto base = testing::sine(60, 4, 3.0, 20.0);
	const auto noise = testing::white_noise(12, 60, 0.0, 0.7);
	for (std::size_t t = 0; t < base.size(); ++t)
		base[t] += noise[t];
	const double c = 37.5;
	for (int m : {1, 4}) {
		TimeSeries a("a", base, m, 8), b("b", shifted(base, c), m, 8);
		for (auto id : {MethodId::Naive, MethodId::Snaive, MethodId::RwDrift, MethodId::Thetaf, MethodId::StlmAr}) {
			CAPTURE(methods::to_string(id));
			CAPTURE(m);
			const auto fa = methods::forecast(id, a, 8, kLevels);
			const auto fb = methods::forecast(id, b, 8, kLevels);
			for (std::size_t k = 0; k < fa.size(); ++k)
				for (int j = 0; j < 8; ++j) {
					CHECK(fb[k].point[j] - c == doctest::Approx(fa[k].point[j]).epsilon(1e-8));
					CHECK(fb[k].lower[j] - c == doctest::Approx(fa[k].lower[j]).epsilon(1e-8));
					CHECK(fb[k].upper[j] - c == doctest::Approx(fa[k].upper[j]).epsilon(1e-8));
				}
		}
	}
}

TEST_CASE("ets on degenerate and structured inputs") {
	TimeSeries flat("c", std::vector<double>(30, 7.0), 1, 6);
	const auto model = ets::fit_auto(flat.values(), 1);
	CHECK(model.form.trend == ets::Trend::None);
	CHECK_FALSE(model.form.seasonal);
	CHECK(model.sigma2 < 1e-12);
	for (double p : point_of(MethodId::Ets, flat, 6))
		CHECK(p == doctest::Approx(7.0));

	const auto ramp = testing::ramp(30, 5.0, 2.0);
	const auto trended = ets::fit_form(ramp, 1, {ets::Trend::Additive, false});
	const auto level_only = ets::fit_form(ramp, 1, {ets::Trend::None, false});
	CHECK(trended.aicc < level_only.aicc);
	CHECK(ets::fit_auto(ramp, 1).form.trend != ets::Trend::None);

	auto seas = testing::sine(96, 12, 10.0, 100.0);
	const auto noise = testing::white_noise(21, 96);
	for (std::size_t t = 0; t < seas.size(); ++t)
		seas[t] += noise[t];
	const auto sm = ets::fit_auto(seas, 12);
	CHECK(sm.form.seasonal);
	for (double v : {sm.alpha, sm.gamma}) {
		CHECK(v >= ets::kLowerBound);
		CHECK(v <= ets::kUpperBound);
	}
}

TEST_CASE("auto-arima on white noise selects at most one term") {
	// Length 40 is a typical yearly training period.
	int small = 0;
	for (int rep = 0; rep < 100; ++rep) {
		const auto x = testing::white_noise(1000 + rep, 40, 10.0);
		const auto m = arima::fit_auto(x, 1);
		const int terms = m.order.p + m.order.q + m.order.P + m.order.Q;
		small += terms <= 1 ? 1 : 0;
	}
	MESSAGE("white-noise trials with <= 1 ARMA term: " << small);
	CHECK(small >= 90);
}

TEST_CASE("auto-arima recovers an AR(1)") {
	const auto x = testing::ar1(77, 300, 0.8, 50.0);
	const auto m = arima::fit_auto(x, 1);
	CHECK(m.order.d == 0);
	CHECK(m.psi1() == doctest::Approx(0.8).epsilon(0.15 / 0.8));
	const auto f = arima::fit(x, {1, 0, 0, 0, 0, 0, 1}, true);
	CHECK(std::abs(f.ar[0] - 0.8) < 0.15);
}

TEST_CASE("auto-arima differences a random walk") {
	int diffs = 0;
	for (int rep = 0; rep < 10; ++rep)
		diffs += arima::ndiffs(testing::random_walk(300 + rep, 200)) >= 1 ? 1 : 0;
	CHECK(diffs >= 9);
	const auto m = arima::fit_auto(testing::random_walk(42, 200), 1);
	CHECK(m.order.d == 1);
}

TEST_CASE("auto-arima forecasts continue a seasonal pattern") {
	auto y = testing::sine(120, 12, 10.0, 100.0);
	const auto noise = testing::white_noise(5, 120, 0.0, 0.3);
	for (std::size_t t = 0; t < y.size(); ++t)
		y[t] += noise[t];
	std::vector<double> train(y.begin(), y.begin() + 102), test(y.begin() + 102, y.end());
	TimeSeries s("m", train, 12, 18);
	const auto p = point_of(MethodId::AutoArima, s, 18);
	CHECK(mase_oracle(train, test, p, 12) < 1.5);
	for (int j = 0; j < 18; ++j)
		CHECK(std::abs(p[j] - test[j]) < 2.0);
}

TEST_CASE("theta on a noiseless ramp matches the analytic oracle") {
	// theta(0) line is the ramp itself, theta(2) equals the ramp, and SES with
	// alpha near 1 tracks the last value; the average is y_n + b h / 2.
	const double a = 3.0, b = 2.0;
	const auto y = testing::ramp(40, a, b);
	TimeSeries s("r", y, 1, 6);
	const auto fit = methods::fit_theta(s);
	CHECK(fit.slope == doctest::Approx(b));
	CHECK(fit.intercept == doctest::Approx(a - b));
	const auto p = point_of(MethodId::Thetaf, s, 6);
	for (int j = 0; j < 6; ++j) {
		const double line = a + b * (40 + j);
		const double ses = 0.5 * fit.ses_level;
		CHECK(p[j] == doctest::Approx(0.5 * line + ses));
		CHECK(std::abs(p[j] - (y.back() + b * (j + 1) / 2.0)) < 1e-3);
	}
}

TEST_CASE("theta on a constant series") {
	TimeSeries s("c", std::vector<double>(24, 4.0), 4, 8);
	const auto f = methods::forecast(MethodId::Thetaf, s, 8, kLevels)[1];
	for (int j = 0; j < 8; ++j) {
		CHECK(f.point[j] == doctest::Approx(4.0));
		CHECK(f.upper[j] - f.lower[j] < 1e-6);
	}
	CHECK_FALSE(methods::fit_theta(TimeSeries("y", testing::random_walk(2, 30), 1, 6)).seasonal);
	CHECK(methods::fit_theta(TimeSeries("m", testing::sine(60, 12), 12, 18)).seasonal);
}

TEST_CASE("stlm-ar continues a seasonal signal") {
	auto y = testing::sine(132, 12, 5.0, 50.0);
	for (std::size_t t = 0; t < y.size(); ++t)
		y[t] += 0.05 * static_cast<double>(t);
	std::vector<double> train(y.begin(), y.begin() + 114), test(y.begin() + 114, y.end());
	const auto p = point_of(MethodId::StlmAr, TimeSeries("m", train, 12, 18), 18);
	CHECK(mase_oracle(train, test, p, 12) < 0.1);

	const auto pure = testing::sine(132, 12, 5.0, 50.0);
	std::vector<double> ptrain(pure.begin(), pure.begin() + 114);
	const auto pp = point_of(MethodId::StlmAr, TimeSeries("s", ptrain, 12, 18), 18);
	for (int j = 0; j < 18; ++j)
		CHECK(std::abs(pp[j] - pure[114 + j]) < 0.1);
}

TEST_CASE("stlm-ar on white noise forecasts about the mean") {
	const auto x = testing::white_noise(31, 80, 10.0);
	const auto p = point_of(MethodId::StlmAr, TimeSeries("q", x, 4, 8), 8);
	for (double v : p)
		CHECK(std::abs(v - stats::mean(x)) < 0.5);
}

TEST_CASE("stlm-ar needs 2m + 1 observations") {
	TimeSeries s("q", {1, 3, 2, 4, 2, 4, 3, 5}, 4, 4);
	CHECK_THROWS_AS(methods::forecast(MethodId::StlmAr, s, 4, kLevels), MethodFailed);
	const auto safe = methods::forecast_or_naive(MethodId::StlmAr, s, 4, kLevels);
	CHECK(safe.fell_back);
	CHECK(safe.forecasts[0].point == std::vector<double>(4, 5.0));
}

TEST_CASE("box-cox helpers") {
	CHECK(methods::inv_box_cox(methods::box_cox(3.0, 0.3), 0.3) == doctest::Approx(3.0));
	CHECK(methods::inv_box_cox(methods::box_cox(3.0, 0.0), 0.0) == doctest::Approx(3.0));
	CHECK(methods::guerrero_lambda(std::vector<double>{1, -1, 2, 3, 4, 5}, 1) == 1.0);
	// Standard deviation proportional to the level favours the log transform.
	std::vector<double> y;
	const auto noise = testing::white_noise(9, 120, 0.0, 0.05);
	for (int t = 0; t < 120; ++t)
		y.push_back(std::exp(0.03 * t + noise[t]));
	CHECK(methods::guerrero_lambda(y, 12) <= 0.3);
}

TEST_CASE("forecasts are deterministic") {
	TimeSeries s("m", shifted(testing::ar1(3, 60, 0.4), 30.0), 12, 18);
	for (auto id : methods::kAllMethods) {
		const auto a = methods::forecast(id, s, 18, kLevels);
		const auto b = methods::forecast(id, s, 18, kLevels);
		CHECK(a[1].upper == b[1].upper);
	}
}
