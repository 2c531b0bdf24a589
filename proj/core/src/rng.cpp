#include "fuma/rng.hpp"

#include <cmath>
#include <numbers>

namespace fuma {

std::uint64_t splitmix64(std::uint64_t &state) noexcept {
	std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
	z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
	z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
	return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
	std::uint64_t state = seed;
	engine_.seed(splitmix64(state));
}

Rng Rng::stream(std::uint64_t master_seed, std::uint64_t index) {
	std::uint64_t state = master_seed ^ 0x6A09E667F3BCC909ULL;
	const std::uint64_t a = splitmix64(state);
	state = index + 0xBB67AE8584CAA73BULL;
	const std::uint64_t b = splitmix64(state);
	return Rng(a ^ ((b << 17) | (b >> 47)));
}

std::uint64_t Rng::next_u64() noexcept { return engine_(); }

double Rng::uniform() noexcept {
	return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
	const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
	if (range == 0)
		return static_cast<std::int64_t>(next_u64());
	const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
	std::uint64_t r;
	do {
		r = next_u64();
	} while (r >= limit);
	return lo + static_cast<std::int64_t>(r % range);
}

double Rng::normal() noexcept {
	if (has_spare_) {
		has_spare_ = false;
		return spare_;
	}
	// Marsaglia polar method
	double u, v, s;
	do {
		u = 2.0 * uniform() - 1.0;
		v = 2.0 * uniform() - 1.0;
		s = u * u + v * v;
	} while (s >= 1.0 || s == 0.0);
	const double f = std::sqrt(-2.0 * std::log(s) / s);
	spare_ = v * f;
	has_spare_ = true;
	return u * f;
}

double Rng::exponential() noexcept {
	double u;
	do {
		u = uniform();
	} while (u == 0.0);
	return -std::log(u);
}

} // namespace fuma
