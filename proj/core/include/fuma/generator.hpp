#pragma once

#include "fuma/rng.hpp"
#include "fuma/series.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace fuma::generator {

/// Parameter distributions of the mixture-autoregressive generator.
struct GeneratorConfig {
	int max_components = 3;       // K ~ U{1..max_components}
	int max_ar_order = 3;         // p ~ U{0..max_ar_order}
	double ar_sd = 0.5;           // phi ~ N(0, ar_sd^2) before rejection
	double seasonal_lo = -0.5;    // Phi ~ U(seasonal_lo, seasonal_hi) ...
	double seasonal_hi = 0.9;
	double seasonal_prob = 0.7;   // ... with this probability when m > 1
	double sigma_offset = 0.1;    // sigma = |N(0, 1)| + sigma_offset
	int max_rejections = 1000;
	double shrink = 0.9;          // deterministic shrink factor after max_rejections
};

struct MarComponent {
	std::vector<double> phi;     // non-seasonal AR coefficients
	double seasonal_phi = 0.0;   // AR coefficient at lag m
	double sigma = 1.0;
};

struct MarSpec {
	int period = 1;
	std::vector<MarComponent> components;
	std::vector<double> weights;

	/// Largest lag of any component's expanded AR polynomial.
	int max_lag() const;
};

/// Weights sum to one, every component is stationary, sigma > 0.
bool is_valid(const MarSpec &spec);

MarSpec sample_mar_spec(Frequency frequency, Rng &rng, const GeneratorConfig &config = {});

/// Burn-in discarded before the kept sample: max(10 p_max, 5 m).
std::size_t burn_in(const MarSpec &spec, const GeneratorConfig &config = {});

/// Simulates `length` values (after burn-in), then shifts the output so that
/// its minimum lies 1% of the range above zero. Throws NonFiniteSimulation.
TimeSeries simulate_mar(const MarSpec &spec, std::size_t length, int horizon, Rng &rng, std::string id,
                        const GeneratorConfig &config = {});

/// Draws series lengths per frequency, truncated to
/// [max(m + 2 + h, minimum training length + h), max_length].
class LengthSampler {
public:
	/// Log-normal lengths with M4-like medians per frequency.
	static LengthSampler parametric(std::size_t max_length = 1000);
	/// Empirical lengths, sampled uniformly with replacement. Lengths outside
	/// the admissible range are dropped; a frequency left without lengths
	/// falls back to the parametric sampler.
	static LengthSampler empirical(std::map<Frequency, std::vector<std::size_t>> lengths,
	                               std::size_t max_length = 1000);
	/// Reads `frequency,length` rows (header optional).
	static LengthSampler from_file(const std::filesystem::path &path, std::size_t max_length = 1000);

	std::size_t draw(Frequency frequency, Rng &rng) const;
	std::size_t min_length(Frequency frequency) const;
	std::size_t max_length() const noexcept { return max_length_; }
	bool is_empirical(Frequency frequency) const;

	struct LogNormal {
		double meanlog;
		double sdlog;
	};
	static LogNormal default_distribution(Frequency frequency);

private:
	std::map<Frequency, std::vector<std::size_t>> lengths_;
	std::size_t max_length_ = 1000;
};

/// Minimum training length per frequency in the M4 data (13, 16, 42).
std::size_t minimum_training_length(Frequency frequency) noexcept;

struct ReferenceSetOptions {
	std::array<std::size_t, 3> counts{}; // yearly, quarterly, monthly
	std::uint64_t seed = 1;
	/// Offset of the first series index within each frequency, so that a
	/// hold-out set can be drawn from the same configuration without overlap.
	std::uint64_t first_index = 0;
	int jobs = 1;
	GeneratorConfig config;
};

/// Series ids are "<frequency>-<index>-s<seed>"; series i of frequency f uses
/// the stream Rng::stream(seed, f * 2^40 + first_index + i), so the output is
/// independent of the number of jobs.
std::vector<TimeSeries> generate_reference_set(const ReferenceSetOptions &options, const LengthSampler &lengths);

/// Regenerates one series from its coordinates.
TimeSeries generate_one(Frequency frequency, std::uint64_t index, std::uint64_t seed, const LengthSampler &lengths,
                        const GeneratorConfig &config = {});

} // namespace fuma::generator
