#include "fuma/generator.hpp"
#include "fuma/error.hpp"
#include "fuma/parallel.hpp"
#include "fuma/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace fuma::generator {

namespace {

// x_t = sum a_k x_{t-k}: (1 - sum phi_i B^i)(1 - Phi B^m) expanded.
std::vector<double> expanded_ar(const MarComponent &c, int period) {
	const auto p = c.phi.size();
	const auto m = static_cast<std::size_t>(period);
	const bool seasonal = period > 1 && c.seasonal_phi != 0.0;
	std::vector<double> a(seasonal ? p + m : p, 0.0);
	for (std::size_t i = 0; i < p; ++i)
		a[i] += c.phi[i];
	if (seasonal) {
		a[m - 1] += c.seasonal_phi;
		for (std::size_t i = 0; i < p; ++i)
			a[m + i] -= c.phi[i] * c.seasonal_phi;
	}
	return a;
}

std::size_t frequency_slot(Frequency f) {
	switch (f) {
	case Frequency::Yearly:
		return 0;
	case Frequency::Quarterly:
		return 1;
	case Frequency::Monthly:
		return 2;
	}
	return 0;
}

} // namespace

int MarSpec::max_lag() const {
	std::size_t lag = 0;
	for (const auto &c : components)
		lag = std::max(lag, expanded_ar(c, period).size());
	return static_cast<int>(lag);
}

bool is_valid(const MarSpec &spec) {
	if (spec.components.empty() || spec.components.size() != spec.weights.size())
		return false;
	double total = 0.0;
	for (double w : spec.weights) {
		if (!(w >= 0.0))
			return false;
		total += w;
	}
	if (std::abs(total - 1.0) > 1e-12)
		return false;
	for (const auto &c : spec.components) {
		if (!(c.sigma > 0.0) || !stats::is_stationary(c.phi) || !(std::abs(c.seasonal_phi) < 1.0))
			return false;
		if (spec.period == 1 && c.seasonal_phi != 0.0)
			return false;
	}
	return true;
}

MarSpec sample_mar_spec(Frequency frequency, Rng &rng, const GeneratorConfig &config) {
	MarSpec spec;
	spec.period = seasonal_period(frequency);
	const auto k = static_cast<std::size_t>(rng.uniform_int(1, config.max_components));
	double total = 0.0;
	for (std::size_t j = 0; j < k; ++j) {
		MarComponent c;
		const auto p = static_cast<std::size_t>(rng.uniform_int(0, config.max_ar_order));
		c.phi.resize(p);
		bool ok = false;
		for (int attempt = 0; attempt < config.max_rejections && !ok; ++attempt) {
			for (auto &v : c.phi)
				v = rng.normal(0.0, config.ar_sd);
			ok = stats::is_stationary(c.phi);
		}
		while (!ok) {
			for (auto &v : c.phi)
				v *= config.shrink;
			ok = stats::is_stationary(c.phi);
		}
		if (spec.period > 1 && rng.uniform() < config.seasonal_prob)
			c.seasonal_phi = rng.uniform(config.seasonal_lo, config.seasonal_hi);
		c.sigma = std::abs(rng.normal()) + config.sigma_offset;
		spec.components.push_back(std::move(c));
		// Flat Dirichlet via normalised exponentials.
		spec.weights.push_back(rng.exponential());
		total += spec.weights.back();
	}
	for (auto &w : spec.weights)
		w /= total;
	return spec;
}

std::size_t burn_in(const MarSpec &spec, const GeneratorConfig &config) {
	return static_cast<std::size_t>(std::max(10 * config.max_ar_order, 5 * spec.period));
}

TimeSeries simulate_mar(const MarSpec &spec, std::size_t length, int horizon, Rng &rng, std::string id,
                        const GeneratorConfig &config) {
	if (length < static_cast<std::size_t>(spec.period + 2 + horizon))
		throw DataError("requested length " + std::to_string(length) + " is below m + 2 + h");
	std::vector<std::vector<double>> polys;
	for (const auto &c : spec.components)
		polys.push_back(expanded_ar(c, spec.period));
	std::vector<double> cumulative(spec.weights.size());
	double acc = 0.0;
	for (std::size_t j = 0; j < spec.weights.size(); ++j) {
		acc += spec.weights[j];
		cumulative[j] = acc;
	}

	const std::size_t burn = burn_in(spec, config);
	const std::size_t total = burn + length;
	std::vector<double> x(total, 0.0);
	for (std::size_t t = 0; t < total; ++t) {
		const double u = rng.uniform() * acc;
		std::size_t j = 0;
		while (j + 1 < cumulative.size() && u >= cumulative[j])
			++j;
		const auto &a = polys[j];
		double v = spec.components[j].sigma * rng.normal();
		for (std::size_t k = 0; k < a.size() && k < t; ++k)
			v += a[k] * x[t - k - 1];
		x[t] = v;
	}
	std::vector<double> out(x.begin() + static_cast<std::ptrdiff_t>(burn), x.end());
	for (double v : out)
		if (!std::isfinite(v))
			throw NonFiniteSimulation(id + ": non-finite value after burn-in");
	const auto [lo, hi] = std::minmax_element(out.begin(), out.end());
	const double range = *hi - *lo;
	const double shift = -*lo + (range > 0.0 ? 0.01 * range : 1.0);
	for (double &v : out)
		v += shift;
	return TimeSeries(std::move(id), std::move(out), spec.period, horizon);
}

std::size_t minimum_training_length(Frequency frequency) noexcept {
	switch (frequency) {
	case Frequency::Yearly:
		return 13;
	case Frequency::Quarterly:
		return 16;
	case Frequency::Monthly:
		return 42;
	}
	return 13;
}

LengthSampler::LogNormal LengthSampler::default_distribution(Frequency frequency) {
	// Medians of the complete M4 series lengths are roughly 35, 96 and 220.
	switch (frequency) {
	case Frequency::Yearly:
		return {std::log(35.0), 0.5};
	case Frequency::Quarterly:
		return {std::log(96.0), 0.45};
	case Frequency::Monthly:
		return {std::log(220.0), 0.55};
	}
	return {std::log(35.0), 0.5};
}

LengthSampler LengthSampler::parametric(std::size_t max_length) {
	LengthSampler s;
	s.max_length_ = max_length;
	return s;
}

LengthSampler LengthSampler::empirical(std::map<Frequency, std::vector<std::size_t>> lengths,
                                       std::size_t max_length) {
	LengthSampler s;
	s.max_length_ = max_length;
	for (auto &[f, v] : lengths) {
		const std::size_t lo = s.min_length(f);
		std::erase_if(v, [&](std::size_t n) { return n < lo || n > max_length; });
		if (!v.empty())
			s.lengths_[f] = std::move(v);
	}
	return s;
}

LengthSampler LengthSampler::from_file(const std::filesystem::path &path, std::size_t max_length) {
	std::ifstream in(path);
	if (!in)
		throw DataError("cannot open length file " + path.string());
	std::map<Frequency, std::vector<std::size_t>> lengths;
	std::string line;
	std::size_t lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		if (!line.empty() && line.back() == '\r')
			line.pop_back();
		if (line.empty() || line[0] == '#')
			continue;
		const auto comma = line.find(',');
		if (comma == std::string::npos)
			throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected frequency,length");
		const std::string freq = line.substr(0, comma), len = line.substr(comma + 1);
		if (lineno == 1 && freq == "frequency")
			continue;
		std::size_t value = 0;
		try {
			value = static_cast<std::size_t>(std::stoul(len));
		} catch (const std::exception &) {
			throw DataError(path.string() + ":" + std::to_string(lineno) + ": bad length '" + len + "'");
		}
		lengths[frequency_from_string(freq)].push_back(value);
	}
	return empirical(std::move(lengths), max_length);
}

std::size_t LengthSampler::min_length(Frequency frequency) const {
	const auto m = static_cast<std::size_t>(seasonal_period(frequency));
	const auto h = static_cast<std::size_t>(default_horizon(frequency));
	return std::max(m + 2 + h, minimum_training_length(frequency) + h);
}

bool LengthSampler::is_empirical(Frequency frequency) const { return lengths_.contains(frequency); }

std::size_t LengthSampler::draw(Frequency frequency, Rng &rng) const {
	if (auto it = lengths_.find(frequency); it != lengths_.end()) {
		const auto &v = it->second;
		return v[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(v.size()) - 1))];
	}
	const auto dist = default_distribution(frequency);
	const std::size_t lo = min_length(frequency);
	for (int attempt = 0; attempt < 1000; ++attempt) {
		const auto n = static_cast<std::size_t>(std::llround(std::exp(rng.normal(dist.meanlog, dist.sdlog))));
		if (n >= lo && n <= max_length_)
			return n;
	}
	return std::clamp(static_cast<std::size_t>(std::llround(std::exp(dist.meanlog))), lo, max_length_);
}

TimeSeries generate_one(Frequency frequency, std::uint64_t index, std::uint64_t seed, const LengthSampler &lengths,
                        const GeneratorConfig &config) {
	const std::uint64_t stream = (static_cast<std::uint64_t>(frequency_slot(frequency)) << 40) + index;
	Rng rng = Rng::stream(seed, stream);
	const MarSpec spec = sample_mar_spec(frequency, rng, config);
	const std::size_t n = lengths.draw(frequency, rng);
	std::string id = std::string(to_string(frequency)) + "-" + std::to_string(index) + "-s" + std::to_string(seed);
	try {
		return simulate_mar(spec, n, default_horizon(frequency), rng, std::move(id), config);
	} catch (const NonFiniteSimulation &e) {
		throw NonFiniteSimulation(std::string(e.what()) + " (series index " + std::to_string(index) + ")");
	}
}

std::vector<TimeSeries> generate_reference_set(const ReferenceSetOptions &options, const LengthSampler &lengths) {
	struct Job {
		Frequency frequency;
		std::uint64_t index;
	};
	std::vector<Job> jobs;
	for (auto f : kAllFrequencies) {
		const std::size_t count = options.counts[frequency_slot(f)];
		for (std::size_t i = 0; i < count; ++i)
			jobs.push_back({f, options.first_index + i});
	}
	std::vector<std::optional<TimeSeries>> slots(jobs.size());
	parallel_for(jobs.size(), options.jobs, [&](std::size_t i) {
		slots[i].emplace(generate_one(jobs[i].frequency, jobs[i].index, options.seed, lengths, options.config));
	});
	std::vector<TimeSeries> out;
	out.reserve(slots.size());
	for (auto &s : slots)
		out.push_back(std::move(*s));
	return out;
}

} // namespace fuma::generator
