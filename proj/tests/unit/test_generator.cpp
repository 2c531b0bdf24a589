#include "doctest.h"

#include "fuma/error.hpp"
#include "fuma/features.hpp"
#include "fuma/generator.hpp"
#include "fuma/stats.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

using namespace fuma;
using namespace fuma::generator;

TEST_CASE("spec sampling is deterministic and valid") {
	Rng a(11), b(11);
	const auto s1 = sample_mar_spec(Frequency::Monthly, a);
	const auto s2 = sample_mar_spec(Frequency::Monthly, b);
	REQUIRE(s1.components.size() == s2.components.size());
	for (std::size_t j = 0; j < s1.components.size(); ++j) {
		CHECK(s1.components[j].phi == s2.components[j].phi);
		CHECK(s1.components[j].seasonal_phi == s2.components[j].seasonal_phi);
		CHECK(s1.components[j].sigma == s2.components[j].sigma);
	}
	CHECK(s1.weights == s2.weights);
}

TEST_CASE("yearly specs have no seasonal coefficient") {
	Rng rng(3);
	for (int i = 0; i < 200; ++i) {
		const auto s = sample_mar_spec(Frequency::Yearly, rng);
		CHECK(s.period == 1);
		for (const auto &c : s.components)
			CHECK(c.seasonal_phi == 0.0);
	}
}

TEST_CASE("1000 monthly specs all pass the stationarity check") {
	Rng rng(5);
	int valid = 0, seasonal = 0, components = 0;
	for (int i = 0; i < 1000; ++i) {
		const auto s = sample_mar_spec(Frequency::Monthly, rng);
		valid += is_valid(s) ? 1 : 0;
		for (const auto &c : s.components) {
			CHECK(stats::is_stationary(c.phi));
			CHECK(c.sigma >= 0.1);
			CHECK(c.phi.size() <= 3);
			seasonal += c.seasonal_phi != 0.0 ? 1 : 0;
			++components;
		}
		double total = 0.0;
		for (double w : s.weights)
			total += w;
		CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
		CHECK(s.components.size() >= 1);
		CHECK(s.components.size() <= 3);
	}
	CHECK(valid == 1000);
	const double share = static_cast<double>(seasonal) / components;
	CHECK(share == doctest::Approx(0.7).epsilon(0.08));
}

TEST_CASE("stationarity rejection falls back to shrinking") {
	GeneratorConfig cfg;
	cfg.ar_sd = 5.0;
	cfg.max_rejections = 1;
	Rng rng(9);
	for (int i = 0; i < 200; ++i)
		CHECK(is_valid(sample_mar_spec(Frequency::Quarterly, rng, cfg)));
}

TEST_CASE("white-noise component yields uncorrelated output") {
	MarSpec spec;
	spec.components.push_back({{}, 0.0, 1.0});
	spec.weights = {1.0};
	Rng rng(21);
	const auto s = simulate_mar(spec, 400, 6, rng, "wn");
	CHECK(s.size() == 400);
	CHECK(std::abs(stats::acf(s.values(), 1)[0]) < 2.0 / std::sqrt(400.0));
}

TEST_CASE("AR(1) component with phi = 0.9 is persistent") {
	MarSpec spec;
	spec.components.push_back({{0.9}, 0.0, 1.0});
	spec.weights = {1.0};
	Rng rng(22);
	const auto s = simulate_mar(spec, 200, 6, rng, "ar");
	CHECK(stats::acf(s.values(), 1)[0] > 0.6);
}

TEST_CASE("simulated series have the requested length and are positive") {
	Rng rng(23);
	for (std::size_t len : {20u, 57u, 300u}) {
		const auto spec = sample_mar_spec(Frequency::Quarterly, rng);
		const auto s = simulate_mar(spec, len, 8, rng, "q");
		CHECK(s.size() == len);
		const auto [lo, hi] = std::minmax_element(s.values().begin(), s.values().end());
		CHECK(*lo > 0.0);
		CHECK(*lo == doctest::Approx(0.01 * (*hi - *lo)));
	}
	const auto spec = sample_mar_spec(Frequency::Monthly, rng);
	CHECK_THROWS_AS(simulate_mar(spec, 12 + 2 + 18 - 1, 18, rng, "m"), DataError);
	CHECK(burn_in(spec) == 60);
}

TEST_CASE("reference set counts and horizons") {
	ReferenceSetOptions opt;
	opt.counts = {20000, 20000, 40000};
	opt.seed = 2024;
	const auto set = generate_reference_set(opt, LengthSampler::parametric());
	CHECK(set.size() == 80000);
	std::array<std::size_t, 3> seen{};
	for (const auto &s : set) {
		switch (s.period()) {
		case 1:
			++seen[0];
			CHECK(s.horizon() == 6);
			break;
		case 4:
			++seen[1];
			CHECK(s.horizon() == 8);
			break;
		default:
			++seen[2];
			CHECK(s.horizon() == 18);
		}
	}
	CHECK(seen == std::array<std::size_t, 3>{20000, 20000, 40000});
}

TEST_CASE("reference set is reproducible and independent of jobs") {
	ReferenceSetOptions opt;
	opt.counts = {5, 5, 5};
	opt.seed = 99;
	const auto a = generate_reference_set(opt, LengthSampler::parametric());
	opt.jobs = 4;
	const auto b = generate_reference_set(opt, LengthSampler::parametric());
	REQUIRE(a.size() == 15);
	for (std::size_t i = 0; i < a.size(); ++i) {
		CHECK(a[i].id() == b[i].id());
		CHECK(std::equal(a[i].values().begin(), a[i].values().end(), b[i].values().begin(), b[i].values().end()));
	}
	CHECK(a[0].id() == "yearly-0-s99");
	const auto one = generate_one(Frequency::Monthly, 3, 99, LengthSampler::parametric());
	CHECK(one.id() == a[13].id());
	CHECK(std::equal(one.values().begin(), one.values().end(), a[13].values().begin(), a[13].values().end()));
	opt.first_index = 5;
	const auto c = generate_reference_set(opt, LengthSampler::parametric());
	CHECK(c[0].id() == "yearly-5-s99");
}

TEST_CASE("500 series per frequency all meet the minimum length") {
	ReferenceSetOptions opt;
	opt.counts = {500, 500, 500};
	opt.seed = 7;
	const auto sampler = LengthSampler::parametric();
	const auto set = generate_reference_set(opt, sampler);
	for (const auto &s : set) {
		CHECK(s.size() >= static_cast<std::size_t>(s.period() + 2 + s.horizon()));
		CHECK(s.size() >= sampler.min_length(s.frequency()));
		CHECK(s.size() <= 1000);
	}
	CHECK(sampler.min_length(Frequency::Yearly) == 19);
	CHECK(sampler.min_length(Frequency::Quarterly) == 24);
	CHECK(sampler.min_length(Frequency::Monthly) == 60);
}

TEST_CASE("monthly reference series cover the feature space") {
	ReferenceSetOptions opt;
	opt.counts = {0, 0, 500};
	opt.seed = 17;
	const auto set = generate_reference_set(opt, LengthSampler::parametric());
	double acf_lo = 1.0, acf_hi = -1.0, ss_lo = 1.0, ss_hi = 0.0;
	for (const auto &s : set) {
		const auto f = features::extract(s);
		acf_lo = std::min(acf_lo, f.at("x-acf1"));
		acf_hi = std::max(acf_hi, f.at("x-acf1"));
		ss_lo = std::min(ss_lo, f.at("seasonal-strength"));
		ss_hi = std::max(ss_hi, f.at("seasonal-strength"));
	}
	MESSAGE("x-acf1 range [" << acf_lo << ", " << acf_hi << "], seasonal-strength range [" << ss_lo << ", " << ss_hi
	                         << "]");
	CHECK(acf_lo <= 0.05);
	CHECK(acf_hi >= 0.8);
	CHECK(ss_lo <= 0.05);
	CHECK(ss_hi >= 0.8);
}

TEST_CASE("empirical length sampler") {
	const auto path = std::filesystem::temp_directory_path() / "fuma_lengths_test.csv";
	{
		std::ofstream out(path);
		out << "frequency,length\nyearly,25\nyearly,10\nyearly,30\nmonthly,100\n";
	}
	const auto sampler = LengthSampler::from_file(path);
	CHECK(sampler.is_empirical(Frequency::Yearly));
	CHECK_FALSE(sampler.is_empirical(Frequency::Quarterly));
	Rng rng(1);
	for (int i = 0; i < 100; ++i) {
		const auto n = sampler.draw(Frequency::Yearly, rng);
		CHECK((n == 25 || n == 30));
		CHECK(sampler.draw(Frequency::Monthly, rng) == 100);
		CHECK(sampler.draw(Frequency::Quarterly, rng) >= 24);
	}
	std::filesystem::remove(path);
	CHECK_THROWS_AS(LengthSampler::from_file("/nonexistent/lengths.csv"), DataError);
}
