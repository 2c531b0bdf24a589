#pragma once

#include <cstdint>
#include <random>

namespace fuma {

/// std::mt19937_64 (whose output sequence is fixed by the standard) with
/// hand-written distribution transforms, because the <random> distributions
/// are implementation-defined and would differ across standard libraries.
class Rng {
public:
	explicit Rng(std::uint64_t seed);

	/// Independent stream for work item `index` under a master seed.
	static Rng stream(std::uint64_t master_seed, std::uint64_t index);

	std::uint64_t next_u64() noexcept;
	/// Uniform on [0, 1) with 53 random bits.
	double uniform() noexcept;
	double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
	/// Uniform integer on [lo, hi], unbiased.
	std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;
	double normal() noexcept;
	double normal(double mean, double sd) noexcept { return mean + sd * normal(); }
	double exponential() noexcept;

private:
	std::mt19937_64 engine_;
	bool has_spare_ = false;
	double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t &state) noexcept;

} // namespace fuma
