#include "fuma/combiner.hpp"
#include "fuma/features.hpp"
#include "fuma/gam.hpp"
#include "fuma/generator.hpp"
#include "fuma/methods.hpp"
#include "fuma/metrics.hpp"
#include "fuma/rng.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace fuma;

namespace {

TimeSeries sample_series(Frequency f, std::uint64_t seed = 9) {
	generator::ReferenceSetOptions o;
	o.seed = seed;
	const auto i = static_cast<std::size_t>(f == Frequency::Yearly ? 0 : f == Frequency::Quarterly ? 1 : 2);
	o.counts[i] = 1;
	return generator::generate_reference_set(o, generator::LengthSampler::parametric(240)).front();
}

Frequency frequency_arg(const benchmark::State &state) { return kAllFrequencies[state.range(0)]; }

} // namespace

static void BM_Generate(benchmark::State &state) {
	generator::ReferenceSetOptions o;
	o.counts = {10, 10, 10};
	const auto lengths = generator::LengthSampler::parametric();
	for (auto _ : state)
		benchmark::DoNotOptimize(generator::generate_reference_set(o, lengths));
	state.SetItemsProcessed(state.iterations() * 30);
}
BENCHMARK(BM_Generate)->Unit(benchmark::kMillisecond);

static void BM_Features(benchmark::State &state) {
	const auto s = sample_series(frequency_arg(state));
	for (auto _ : state)
		benchmark::DoNotOptimize(features::extract(s));
}
BENCHMARK(BM_Features)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_Method(benchmark::State &state) {
	const auto s = sample_series(Frequency::Monthly);
	const auto id = methods::kAllMethods[static_cast<std::size_t>(state.range(0))];
	const std::vector<double> levels{0.8, 0.95};
	state.SetLabel(std::string(methods::to_string(id)));
	for (auto _ : state)
		benchmark::DoNotOptimize(methods::forecast_or_naive(id, s, s.horizon(), levels));
}
BENCHMARK(BM_Method)->DenseRange(0, 7)->Unit(benchmark::kMillisecond);

static void BM_GamFit(benchmark::State &state) {
	Rng rng(3);
	gam::Data d;
	const std::size_t p = 10;
	for (std::size_t j = 0; j < p; ++j) {
		d.names.push_back("x" + std::to_string(j));
		d.smooth.push_back(true);
	}
	d.rows = static_cast<std::size_t>(state.range(0));
	for (std::size_t i = 0; i < d.rows; ++i) {
		double y = 0.0;
		for (std::size_t j = 0; j < p; ++j) {
			const double x = rng.uniform();
			d.x.push_back(x);
			y += std::sin(3.0 * x + static_cast<double>(j));
		}
		d.y.push_back(y + 0.1 * rng.normal());
	}
	for (auto _ : state)
		benchmark::DoNotOptimize(gam::fit(d));
}
BENCHMARK(BM_GamFit)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_Combine(benchmark::State &state) {
	Rng rng(5);
	std::vector<IntervalForecast> members(8);
	std::vector<double> fitted;
	for (auto &m : members) {
		m.level = 0.95;
		for (int t = 0; t < 18; ++t) {
			const double c = rng.normal(100.0, 5.0);
			m.lower.push_back(c - 10.0);
			m.point.push_back(c);
			m.upper.push_back(c + 10.0);
		}
		fitted.push_back(rng.normal());
	}
	for (auto _ : state) {
		const auto w = combiner::adjusted_softmax(fitted);
		benchmark::DoNotOptimize(combiner::combine(members, w, 0.3, combiner::Mode::Weighted));
	}
}
BENCHMARK(BM_Combine);

static void BM_Msis(benchmark::State &state) {
	Rng rng(6);
	std::vector<double> train(200), y(18), lo(18), up(18);
	for (auto &v : train)
		v = rng.normal(100.0, 10.0);
	for (std::size_t t = 0; t < 18; ++t) {
		y[t] = rng.normal(100.0, 10.0);
		lo[t] = y[t] - 15.0 + rng.normal();
		up[t] = y[t] + 15.0 + rng.normal();
	}
	for (auto _ : state)
		benchmark::DoNotOptimize(metrics::msis(y, lo, up, train, 12, 0.05));
}
BENCHMARK(BM_Msis);
BENCHMARK_MAIN();
