#include "fuma/pipeline.hpp"
#include "fuma/error.hpp"
#include "fuma/metrics.hpp"
#include "fuma/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace fuma::pipeline {

namespace {

bool same_level(double a, double b) noexcept { return std::abs(a - b) < 1e-9; }

void check_levels(std::span<const double> levels) {
	if (levels.empty())
		throw DataError("at least one confidence level is required");
	for (double l : levels)
		if (!(l > 0.0 && l < 1.0))
			throw DataError("confidence levels must lie in (0, 1)");
}

// One reference series after the pool has run on its training part.
struct Prepared {
	bool ok = false;
	std::string error;
	std::optional<SplitSeries> split;
	features::FeatureVector features;
	std::vector<methods::MethodId> pool;
	std::vector<std::vector<IntervalForecast>> forecasts; // [pool method][level]
	std::vector<std::vector<metrics::Score>> scores;      // [pool method][level]
	std::size_t fallbacks = 0;
};

Prepared prepare(const TimeSeries &series, std::span<const double> levels) {
	Prepared p;
	try {
		p.split.emplace(split(series));
		const auto &train = p.split->train;
		p.features = features::extract(train);
		p.pool = methods::pool_for(train.period());
		for (auto id : p.pool) {
			auto f = methods::forecast_or_naive(id, train, series.horizon(), levels);
			p.fallbacks += f.fell_back ? 1 : 0;
			std::vector<metrics::Score> s;
			for (const auto &fc : f.forecasts)
				s.push_back(metrics::score(fc, p.split->test, train.values(), train.period()));
			p.forecasts.push_back(std::move(f.forecasts));
			p.scores.push_back(std::move(s));
		}
		p.ok = true;
	} catch (const Error &e) {
		p.error = e.what();
	}
	return p;
}

std::size_t slot(Frequency f) {
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

const gam::GamModel &TrainedEnsemble::model(const std::string &method, double level) const {
	for (const auto &m : models)
		if (m.method == method && same_level(m.level, level))
			return m.model;
	throw DataError("ensemble has no model for " + method + " at level " + std::to_string(level));
}

double TrainedEnsemble::threshold(Frequency frequency, combiner::Mode mode, double level) const {
	if (mode == combiner::Mode::AllWeighted)
		return 0.0;
	const combiner::Threshold *best = nullptr;
	for (const auto &t : thresholds.optimal)
		if (t.frequency == frequency && t.mode == mode &&
		    (!best || std::abs(t.level - level) < std::abs(best->level - level)))
			best = &t;
	if (!best)
		throw DataError("ensemble has no threshold for " + std::string(to_string(frequency)) + " series");
	return best->tr;
}

TrainResult train(std::span<const TimeSeries> reference, const TrainConfig &config) {
	check_levels(config.levels);
	if (reference.empty())
		throw DataError("reference set is empty");
	const auto &levels = config.levels;
	const std::size_t L = levels.size();

	std::vector<Prepared> prepared(reference.size());
	parallel_for(reference.size(), config.jobs,
	             [&](std::size_t i) { prepared[i] = prepare(reference[i], levels); });

	TrainResult result;
	std::array<FrequencySummary, 3> summary{FrequencySummary{Frequency::Yearly},
	                                        FrequencySummary{Frequency::Quarterly},
	                                        FrequencySummary{Frequency::Monthly}};
	for (std::size_t i = 0; i < reference.size(); ++i) {
		auto &s = summary[slot(reference[i].frequency())];
		++s.series;
		if (!prepared[i].ok) {
			++s.failed;
			result.failures.push_back(reference[i].id() + ": " + prepared[i].error);
			continue;
		}
		s.fallbacks += prepared[i].fallbacks;
		const auto level_index = L - 1;
		bool missing = false;
		for (const auto &sc : prepared[i].scores)
			missing = missing || sc[level_index].missing;
		s.excluded += missing ? 1 : 0;
	}
	for (const auto &s : summary) {
		if (s.series == 0)
			continue;
		if (static_cast<double>(s.failed) > config.max_failure_share * static_cast<double>(s.series))
			throw SystemicFailure(std::to_string(s.failed) + " of " + std::to_string(s.series) + " " +
			                      std::string(to_string(s.frequency)) + " series failed; first: " +
			                      (result.failures.empty() ? std::string("?") : result.failures.front()));
		result.summary.push_back(s);
	}

	// One GAM per (method, level), pooled across frequencies.
	struct Job {
		methods::MethodId method;
		std::size_t level;
	};
	std::vector<Job> jobs;
	for (auto id : methods::kAllMethods)
		for (std::size_t l = 0; l < L; ++l)
			jobs.push_back({id, l});
	std::vector<std::optional<MethodModel>> fitted_models(jobs.size());
	parallel_for(jobs.size(), config.jobs, [&](std::size_t j) {
		const auto [id, l] = jobs[j];
		std::vector<features::FeatureVector> rows;
		std::vector<double> y;
		for (const auto &p : prepared) {
			if (!p.ok)
				continue;
			const auto it = std::find(p.pool.begin(), p.pool.end(), id);
			if (it == p.pool.end())
				continue;
			const auto &s = p.scores[static_cast<std::size_t>(it - p.pool.begin())][l];
			if (s.missing)
				continue;
			rows.push_back(p.features);
			y.push_back(s.log_msis);
		}
		if (rows.empty())
			return;
		const std::string name(methods::to_string(id));
		const std::string label = name + "@" + std::to_string(levels[l]);
		gam::Fit fit;
		try {
			fit = gam::fit_features(rows, y, config.gam, label);
		} catch (const InsufficientData &e) {
			throw InsufficientData(label + " (" + std::to_string(rows.size()) + " rows): " + e.what());
		}
		fitted_models[j] = MethodModel{name, levels[l], std::move(fit.model), std::move(fit.diagnostics)};
	});

	TrainedEnsemble &ens = result.ensemble;
	ens.registry_hash = features::registry_hash();
	ens.levels = levels;
	ens.config = config;
	for (auto id : methods::kAllMethods)
		ens.methods.emplace_back(methods::to_string(id));
	for (auto &m : fitted_models)
		if (m)
			ens.models.push_back(std::move(*m));

	// Threshold search per level on the in-sample fitted log-MSIS.
	for (std::size_t l = 0; l < L; ++l) {
		std::vector<combiner::ReferenceCase> cases;
		for (const auto &p : prepared) {
			if (!p.ok)
				continue;
			combiner::ReferenceCase c;
			c.frequency = p.split->train.frequency();
			c.train = p.split->train.values();
			c.test = p.split->test;
			for (std::size_t k = 0; k < p.pool.size(); ++k) {
				c.forecasts.push_back(p.forecasts[k][l]);
				c.fitted.push_back(ens.model(std::string(methods::to_string(p.pool[k])), levels[l]).predict(p.features));
			}
			cases.push_back(std::move(c));
		}
		auto r = combiner::search_threshold(cases, config.grid, config.jobs);
		for (auto &t : r.optimal)
			ens.thresholds.optimal.push_back(t);
		for (auto &p : r.path)
			ens.thresholds.path.push_back(p);

		// In-sample summary: the fuma variants, simple averaging and every method.
		for (auto f : kAllFrequencies) {
			for (const auto &t : r.optimal)
				if (t.frequency == f)
					result.in_sample.push_back({f, levels[l], "fuma(" + std::string(combiner::to_string(t.mode)) + ")",
					                            t.mean_msis, 0});
			for (const auto &pp : r.path)
				if (pp.frequency == f && pp.tr == 0.0) {
					const std::string name =
						pp.mode == combiner::Mode::Mean ? "simple-average" : "fuma(all-weighted)";
					result.in_sample.push_back({f, levels[l], name, pp.mean_msis, pp.count});
				}
			for (auto id : methods::kAllMethods) {
				double sum = 0.0;
				std::size_t n = 0;
				for (const auto &p : prepared) {
					if (!p.ok || p.split->train.frequency() != f)
						continue;
					const auto it = std::find(p.pool.begin(), p.pool.end(), id);
					if (it == p.pool.end())
						continue;
					const auto &s = p.scores[static_cast<std::size_t>(it - p.pool.begin())][l];
					if (!s.missing) {
						sum += s.msis;
						++n;
					}
				}
				if (n > 0)
					result.in_sample.push_back({f, levels[l], std::string(methods::to_string(id)), sum / n, n});
			}
		}
	}
	for (auto &row : result.in_sample)
		if (row.count == 0)
			for (const auto &other : result.in_sample)
				if (other.frequency == row.frequency && other.level == row.level && other.name == "simple-average")
					row.count = other.count;
	return result;
}

std::vector<SeriesForecast> forecast(const TrainedEnsemble &ensemble, std::span<const TimeSeries> series,
                                     const ForecastOptions &options) {
	if (ensemble.registry_hash != features::registry_hash())
		throw RegistryMismatch("model file was trained with a different feature registry");
	if (options.threshold && !(*options.threshold >= 0.0 && *options.threshold <= 1.0))
		throw DataError("threshold override must lie in [0, 1]");
	const auto &levels = ensemble.levels;
	std::vector<std::optional<SeriesForecast>> out(series.size());
	parallel_for(series.size(), options.jobs, [&](std::size_t i) {
		const auto &s = series[i];
		SeriesForecast sf;
		sf.id = s.id();
		sf.frequency = s.frequency();
		const auto fv = features::extract(s);
		const auto pool = methods::pool_for(s.period());
		std::set<std::size_t> needed;
		for (double level : levels) {
			LevelProvenance lp;
			lp.level = level;
			for (auto id : pool) {
				lp.methods.emplace_back(methods::to_string(id));
				lp.fitted.push_back(ensemble.model(lp.methods.back(), level).predict(fv));
			}
			lp.softmax = combiner::adjusted_softmax(lp.fitted);
			lp.threshold = options.mode == combiner::Mode::AllWeighted
			                   ? 0.0
			                   : options.threshold.value_or(ensemble.threshold(sf.frequency, options.mode, level));
			for (auto k : combiner::select_by_threshold(lp.softmax, lp.threshold)) {
				needed.insert(k);
				lp.selected.push_back(lp.methods[k]);
				lp.weights.push_back(lp.softmax[k]);
			}
			sf.provenance.push_back(std::move(lp));
		}
		// Only the selected methods are fitted.
		std::map<std::size_t, std::vector<IntervalForecast>> runs;
		for (auto k : needed) {
			auto f = methods::forecast_or_naive(pool[k], s, s.horizon(), levels);
			if (f.fell_back)
				sf.fallbacks.emplace_back(methods::to_string(pool[k]));
			runs.emplace(k, std::move(f.forecasts));
		}
		for (std::size_t l = 0; l < levels.size(); ++l) {
			auto &lp = sf.provenance[l];
			std::vector<IntervalForecast> members;
			for (const auto &name : lp.selected) {
				const auto k = static_cast<std::size_t>(std::find(lp.methods.begin(), lp.methods.end(), name) -
				                                        lp.methods.begin());
				members.push_back(runs.at(k)[l]);
			}
			const auto how = options.mode == combiner::Mode::Mean ? combiner::Mode::Mean : combiner::Mode::Weighted;
			sf.forecasts.push_back(combiner::combine_intervals(members, lp.weights, how));
			double total = 0.0;
			for (double w : lp.weights)
				total += w;
			for (double &w : lp.weights)
				w = how == combiner::Mode::Mean ? 1.0 / static_cast<double>(lp.weights.size()) : w / total;
		}
		out[i] = std::move(sf);
	});
	std::vector<SeriesForecast> result;
	result.reserve(out.size());
	for (auto &o : out)
		result.push_back(std::move(*o));
	return result;
}

BenchmarkSet benchmark_forecasts(std::span<const TimeSeries> series, std::span<const double> levels, int jobs) {
	check_levels(levels);
	std::vector<std::map<std::string, SeriesForecast>> slots(series.size());
	parallel_for(series.size(), jobs, [&](std::size_t i) {
		const auto &s = series[i];
		std::vector<IntervalForecast> sum;
		std::size_t count = 0;
		for (auto id : methods::pool_for(s.period())) {
			const std::string name(methods::to_string(id));
			auto f = methods::forecast_or_naive(id, s, s.horizon(), levels);
			SeriesForecast sf{s.id(), s.frequency(), f.forecasts, {}, {}};
			if (f.fell_back)
				sf.fallbacks.push_back(name);
			slots[i].emplace(name, std::move(sf));
			++count;
		}
		std::vector<IntervalForecast> avg;
		for (std::size_t l = 0; l < levels.size(); ++l) {
			std::vector<IntervalForecast> members;
			for (const auto &[name, sf] : slots[i])
				members.push_back(sf.forecasts[l]);
			avg.push_back(combiner::combine_intervals(members, {}, combiner::Mode::Mean));
		}
		slots[i].emplace("simple-average", SeriesForecast{s.id(), s.frequency(), std::move(avg), {}, {}});
	});
	BenchmarkSet out;
	for (auto &m : slots)
		for (auto &[name, sf] : m)
			out.entries[name].push_back(std::move(sf));
	return out;
}

ForecastTable to_table(std::string name, std::span<const SeriesForecast> forecasts) {
	ForecastTable t;
	t.name = std::move(name);
	for (const auto &f : forecasts)
		t.by_id[f.id] = f.forecasts;
	return t;
}

EvaluationReport evaluate(std::span<const ForecastTable> tables, std::span<const TimeSeries> histories,
                          const std::map<std::string, std::vector<double>> &actuals,
                          std::span<const SeriesForecast> provenance) {
	EvaluationReport report;
	std::map<std::string, const TimeSeries *> history;
	for (const auto &h : histories)
		history.emplace(h.id(), &h);
	{
		std::vector<std::string> unmatched;
		for (const auto &[id, _] : actuals)
			if (!history.count(id))
				unmatched.push_back(id);
		for (const auto &[id, _] : history)
			if (!actuals.count(id))
				unmatched.push_back(id);
		for (const auto &t : tables) {
			for (const auto &[id, _] : t.by_id)
				if (!history.count(id))
					unmatched.push_back(t.name + ":" + id);
			// A table may leave out whole frequencies, e.g. seasonal methods on yearly data.
			std::set<Frequency> covered;
			for (const auto &[id, _] : t.by_id)
				if (const auto h = history.find(id); h != history.end())
					covered.insert(h->second->frequency());
			for (const auto &[id, h] : history)
				if (covered.count(h->frequency()) && !t.by_id.count(id))
					unmatched.push_back(t.name + ":" + id + " (missing)");
		}
		if (!unmatched.empty()) {
			std::string msg = "ids do not align:";
			for (std::size_t i = 0; i < std::min<std::size_t>(unmatched.size(), 10); ++i)
				msg += " " + unmatched[i];
			if (unmatched.size() > 10)
				msg += " ... (" + std::to_string(unmatched.size()) + " in total)";
			throw IdMismatch(msg);
		}
	}

	std::vector<double> levels;
	for (const auto &t : tables)
		for (const auto &[id, fcs] : t.by_id)
			for (const auto &f : fcs)
				if (std::none_of(levels.begin(), levels.end(), [&](double l) { return same_level(l, f.level); }))
					levels.push_back(f.level);
	std::sort(levels.begin(), levels.end());

	// scores[table][level][series index in id order]
	std::vector<std::string> ids;
	for (const auto &[id, _] : history)
		ids.push_back(id);
	const std::string kTotal = "total";
	for (std::size_t l = 0; l < levels.size(); ++l) {
		std::vector<std::vector<double>> mcb_scores(ids.size(), std::vector<double>(tables.size()));
		for (std::size_t ti = 0; ti < tables.size(); ++ti) {
			const auto &table = tables[ti];
			struct Acc {
				double msis = 0.0, mase = 0.0;
				std::size_t count = 0, excluded = 0;
				metrics::Coverage coverage;
			};
			std::map<std::string, Acc> acc;
			bool any = false;
			for (std::size_t si = 0; si < ids.size(); ++si) {
				const auto &h = *history.at(ids[si]);
				const auto &test = actuals.at(ids[si]);
				const auto found = table.by_id.find(ids[si]);
				if (found == table.by_id.end()) {
					mcb_scores[si][ti] = std::numeric_limits<double>::quiet_NaN();
					continue;
				}
				const auto &fcs = found->second;
				const auto it = std::find_if(fcs.begin(), fcs.end(),
				                             [&](const IntervalForecast &f) { return same_level(f.level, levels[l]); });
				if (it == fcs.end()) {
					mcb_scores[si][ti] = std::numeric_limits<double>::quiet_NaN();
					continue;
				}
				any = true;
				if (it->horizon() != test.size())
					throw DataError(table.name + ": forecast horizon of " + ids[si] + " differs from the actuals");
				const auto s = metrics::score(*it, test, h.values(), h.period());
				mcb_scores[si][ti] = s.missing ? std::numeric_limits<double>::quiet_NaN() : s.msis;
				for (const std::string &key : {std::string(to_string(h.frequency())), kTotal}) {
					auto &a = acc[key];
					a.coverage += {s.covered, s.horizon};
					if (s.missing) {
						++a.excluded;
						continue;
					}
					a.msis += s.msis;
					a.mase += s.mase;
					++a.count;
				}
			}
			if (!any)
				continue;
			for (auto f : kAllFrequencies) {
				const std::string key(to_string(f));
				if (!acc.count(key))
					continue;
				const auto &a = acc[key];
				report.rows.push_back({table.name, key, levels[l], a.count ? a.msis / a.count : 0.0,
				                       a.count ? a.mase / a.count : 0.0, metrics::acd(a.coverage, levels[l]), a.count,
				                       a.excluded});
			}
			const auto &a = acc[kTotal];
			report.rows.push_back({table.name, kTotal, levels[l], a.count ? a.msis / a.count : 0.0,
			                       a.count ? a.mase / a.count : 0.0, metrics::acd(a.coverage, levels[l]), a.count,
			                       a.excluded});
		}
		// MCB compares the tables that cover every series.
		std::vector<std::size_t> full;
		for (std::size_t ti = 0; ti < tables.size(); ++ti)
			if (tables[ti].by_id.size() == ids.size())
				full.push_back(ti);
			else if (l == 0)
				report.notes.push_back("MCB leaves out " + tables[ti].name + ", which covers only some frequencies");
		if (full.size() >= 2) {
			std::vector<std::string> names;
			for (auto ti : full)
				names.push_back(tables[ti].name);
			std::vector<std::vector<double>> columns(ids.size());
			for (std::size_t si = 0; si < ids.size(); ++si)
				for (auto ti : full)
					columns[si].push_back(mcb_scores[si][ti]);
			try {
				const auto r = mcb::test(names, columns);
				for (std::size_t j = 0; j < names.size(); ++j)
					report.mcb.push_back(
						{levels[l], names[j], r.mean_rank[j], r.half_width, r.not_different[j], r.series});
			} catch (const InsufficientData &e) {
				report.notes.push_back("MCB at level " + std::to_string(levels[l]) + " skipped: " + e.what());
			}
		}
	}

	// Selection rates from the provenance records.
	if (!provenance.empty()) {
		std::map<std::tuple<std::string, double, std::string>, std::size_t> counts;
		std::map<std::pair<std::string, double>, std::size_t> totals;
		std::set<std::string> method_names;
		for (const auto &sf : provenance) {
			if (!history.count(sf.id))
				throw IdMismatch("provenance refers to unknown series " + sf.id);
			const std::string freq(to_string(sf.frequency));
			for (const auto &lp : sf.provenance) {
				for (const std::string &key : {freq, kTotal}) {
					++totals[{key, lp.level}];
					for (const auto &m : lp.selected)
						++counts[{key, lp.level, m}];
				}
				for (const auto &m : lp.methods)
					method_names.insert(m);
			}
		}
		for (const auto &[key, total] : totals)
			for (auto id : methods::kAllMethods) {
				const std::string m(methods::to_string(id));
				if (!method_names.count(m))
					continue;
				const auto it = counts.find({key.first, key.second, m});
				const std::size_t n = it == counts.end() ? 0 : it->second;
				report.selection.push_back(
					{key.first, key.second, m, n, total, static_cast<double>(n) / static_cast<double>(total)});
			}
		std::stable_sort(report.selection.begin(), report.selection.end(), [](const auto &a, const auto &b) {
			auto rank = [](const std::string &f) {
				return f == "yearly" ? 0 : f == "quarterly" ? 1 : f == "monthly" ? 2 : 3;
			};
			return std::make_pair(a.level, rank(a.frequency)) < std::make_pair(b.level, rank(b.frequency));
		});
	}
	return report;
}

} // namespace fuma::pipeline
