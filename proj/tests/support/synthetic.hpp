#pragma once

#include "fuma/rng.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace fuma::testing {

inline std::vector<double> white_noise(std::uint64_t seed, std::size_t n, double mean = 0.0, double sd = 1.0) {
	Rng rng(seed);
	std::vector<double> x(n);
	for (auto &v : x)
		v = rng.normal(mean, sd);
	return x;
}

inline std::vector<double> ar1(std::uint64_t seed, std::size_t n, double phi, double mean = 0.0) {
	Rng rng(seed);
	std::vector<double> x(n);
	double prev = 0.0;
	for (std::size_t t = 0; t < n + 100; ++t) {
		prev = phi * prev + rng.normal();
		if (t >= 100)
			x[t - 100] = prev + mean;
	}
	return x;
}

inline std::vector<double> random_walk(std::uint64_t seed, std::size_t n, double start = 100.0) {
	Rng rng(seed);
	std::vector<double> x(n);
	double v = start;
	for (auto &e : x) {
		v += rng.normal();
		e = v;
	}
	return x;
}

inline std::vector<double> ramp(std::size_t n, double a = 1.0, double b = 1.0) {
	std::vector<double> x(n);
	for (std::size_t t = 0; t < n; ++t)
		x[t] = a + b * static_cast<double>(t);
	return x;
}

inline std::vector<double> sine(std::size_t n, int period, double amplitude = 1.0, double level = 10.0) {
	std::vector<double> x(n);
	for (std::size_t t = 0; t < n; ++t)
		x[t] = level + amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period);
	return x;
}

} // namespace fuma::testing
