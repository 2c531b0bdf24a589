// fuma: command-line front end of the feature-based forecast combination library.

#include "fuma/error.hpp"
#include "fuma/features.hpp"
#include "fuma/generator.hpp"
#include "fuma/io.hpp"
#include "fuma/pipeline.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace fuma;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kSystemic = 3 };

struct Global {
	std::uint64_t seed = 1;
	std::string levels = "80,95";
	std::string mode = "weighted";
	int jobs = 1;
	bool quiet = false;
};

std::vector<double> parse_levels(const std::string &text) {
	std::vector<double> out;
	std::stringstream ss(text);
	std::string item;
	while (std::getline(ss, item, ',')) {
		double v = io::parse_double(item);
		if (v > 1.0)
			v /= 100.0;
		if (!(v > 0.0 && v < 1.0))
			throw CLI::ValidationError("--levels", "levels must lie in (0, 100)");
		out.push_back(v);
	}
	if (out.empty())
		throw CLI::ValidationError("--levels", "no level given");
	std::sort(out.begin(), out.end());
	return out;
}

// Writes through `write` into `path`, or to stdout when the path is "-".
template <class F> void emit(const std::string &path, F &&write) {
	if (path == "-") {
		write(std::cout);
		std::cout.flush();
		return;
	}
	if (const auto dir = fs::path(path).parent_path(); !dir.empty())
		fs::create_directories(dir);
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw DataError("cannot write " + path);
	write(out);
	if (!out)
		throw DataError("error writing " + path);
}

void emit_text(const std::string &path, const std::string &text) {
	emit(path, [&](std::ostream &o) { o << text; });
}

std::vector<TimeSeries> load_series(const std::string &path, int horizon) {
	return io::read_series_csv(fs::path(path), horizon > 0 ? std::optional<int>(horizon) : std::nullopt);
}

// Splits each series into its history and the held-out last h values.
void hold_out(const std::vector<TimeSeries> &series, std::vector<TimeSeries> &history,
              std::map<std::string, std::vector<double>> &actuals) {
	for (const auto &s : series) {
		auto parts = split(s);
		actuals[s.id()] = std::move(parts.test);
		history.push_back(std::move(parts.train));
	}
}

class Log {
public:
	explicit Log(const Global &g) : quiet_(g.quiet) {}
	template <class... T> void operator()(const T &...parts) const {
		if (!quiet_) {
			(std::cerr << ... << parts);
			std::cerr << '\n';
		}
	}

private:
	bool quiet_;
};

} // namespace

int main(int argc, char **argv) {
	CLI::App app{"Feature-based forecast combination using predicted interval scores"};
	app.require_subcommand(1);
	app.set_version_flag("--version", "fuma 0.1.0");
	Global g;
	app.add_option("--seed", g.seed, "Random seed of the generator")->capture_default_str();
	app.add_option("--levels", g.levels, "Comma-separated interval levels, e.g. 80,95")->capture_default_str();
	app.add_option("--mode", g.mode, "Combination mode")
		->check(CLI::IsMember({"mean", "weighted", "all-weighted"}))
		->capture_default_str();
	app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::Range(1, 1024))->capture_default_str();
	app.add_flag("-q,--quiet", g.quiet, "No progress messages");

	// generate
	auto *gen = app.add_subcommand("generate", "Simulate a reference set of series");
	std::vector<std::size_t> counts{500, 500, 500};
	std::uint64_t first_index = 0;
	std::string gen_out, gen_config, length_file;
	std::size_t max_length = 1000;
	gen->add_option("--counts", counts, "Series per frequency: yearly quarterly monthly")
		->expected(3)
		->delimiter(',')
		->capture_default_str();
	gen->add_option("--first-index", first_index, "Index of the first series of each frequency")
		->capture_default_str();
	gen->add_option("--lengths", length_file, "File of empirical lengths (frequency,length rows)")
		->check(CLI::ExistingFile);
	gen->add_option("--max-length", max_length, "Longest series generated")->capture_default_str();
	gen->add_option("-o,--out", gen_out, "Series CSV")->required();
	gen->add_option("--config-out", gen_config, "Generator configuration JSON (default: <out>.json)");

	// train
	auto *trn = app.add_subcommand("train", "Fit the score models and thresholds on a reference set");
	std::string trn_in, trn_model, trn_summary, trn_path;
	int trn_horizon = 0;
	trn->add_option("-i,--input", trn_in, "Reference series CSV")->required()->check(CLI::ExistingFile);
	trn->add_option("-m,--model", trn_model, "Model file to write")->required();
	trn->add_option("--summary", trn_summary, "Training summary JSON");
	trn->add_option("--threshold-path", trn_path, "Threshold path CSV");
	trn->add_option("--horizon", trn_horizon, "Override the horizon implied by the frequency");

	// forecast
	auto *fc = app.add_subcommand("forecast", "Combine forecasts for new series");
	std::string fc_in, fc_model, fc_out, fc_prov, fc_bench;
	int fc_horizon = 0;
	bool fc_holdout = false;
	std::optional<double> fc_threshold;
	fc->add_option("-i,--input", fc_in, "Series CSV")->required()->check(CLI::ExistingFile);
	fc->add_option("-m,--model", fc_model, "Model file")->required()->check(CLI::ExistingFile);
	fc->add_option("-o,--out", fc_out, "Forecast CSV")->required();
	fc->add_option("--provenance", fc_prov, "Per-series selection and weights CSV");
	fc->add_option("--benchmarks", fc_bench, "Directory for the forecasts of every pool method and their mean");
	fc->add_option("--threshold", fc_threshold, "Use this threshold for every frequency")->check(CLI::Range(0.0, 1.0));
	fc->add_option("--horizon", fc_horizon, "Override the horizon implied by the frequency");
	fc->add_flag("--holdout", fc_holdout, "Forecast the last h values of each series from the rest");

	// evaluate
	auto *ev = app.add_subcommand("evaluate", "Score forecast files against the held-out values");
	std::string ev_in, ev_prov, ev_bench, ev_report, ev_tables;
	std::vector<std::string> ev_forecasts;
	int ev_horizon = 0;
	ev->add_option("-i,--input", ev_in, "Full series CSV; the last h values are the actuals")
		->required()
		->check(CLI::ExistingFile);
	ev->add_option("-f,--forecasts", ev_forecasts, "name=path of a forecast CSV (repeatable)");
	ev->add_option("--benchmarks", ev_bench, "Directory of benchmark forecast CSVs")->check(CLI::ExistingDirectory);
	ev->add_option("--provenance", ev_prov, "Provenance CSV for the selection rates")->check(CLI::ExistingFile);
	ev->add_option("-r,--report", ev_report, "Report JSON")->default_val("-");
	ev->add_option("--tables", ev_tables, "Directory for metrics.csv, selection.csv and mcb.csv");
	ev->add_option("--horizon", ev_horizon, "Override the horizon implied by the frequency");

	// effects
	auto *ef = app.add_subcommand("effects", "Export partial effects of the score models");
	std::string ef_model, ef_out;
	int ef_points = 50;
	std::vector<std::string> ef_features;
	ef->add_option("-m,--model", ef_model, "Model file")->required()->check(CLI::ExistingFile);
	ef->add_option("-o,--out", ef_out, "Effects CSV")->default_val("-");
	ef->add_option("--points", ef_points, "Grid points per feature")->check(CLI::Range(1, 100000))->capture_default_str();
	ef->add_option("--features", ef_features, "Restrict to these features")->delimiter(',');

	// threshold-path
	auto *tp = app.add_subcommand("threshold-path", "Export mean MSIS along the threshold grid");
	std::string tp_model, tp_out;
	tp->add_option("-m,--model", tp_model, "Model file")->required()->check(CLI::ExistingFile);
	tp->add_option("-o,--out", tp_out, "Threshold path CSV")->default_val("-");

	// registry
	auto *rg = app.add_subcommand("registry", "Print the feature registry");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		const int code = app.exit(e);
		return code == 0 ? kOk : kUsage;
	}

	const Log log(g);
	try {
		const auto levels = parse_levels(g.levels);
		const auto mode = combiner::mode_from_string(g.mode);

		if (*gen) {
			generator::ReferenceSetOptions o;
			o.counts = {counts[0], counts[1], counts[2]};
			o.seed = g.seed;
			o.first_index = first_index;
			o.jobs = g.jobs;
			const auto lengths = length_file.empty() ? generator::LengthSampler::parametric(max_length)
			                                         : generator::LengthSampler::from_file(length_file, max_length);
			const auto series = generator::generate_reference_set(o, lengths);
			emit(gen_out, [&](std::ostream &out) { io::write_series_csv(out, series); });
			emit_text(gen_config.empty() ? gen_out + ".json" : gen_config, io::generator_config_json(o, lengths));
			log("generated ", series.size(), " series");
		} else if (*trn) {
			const auto series = load_series(trn_in, trn_horizon);
			pipeline::TrainConfig c;
			c.levels = levels;
			c.jobs = g.jobs;
			c.seed = g.seed;
			for (const auto &s : series)
				++c.counts[static_cast<std::size_t>(
					std::find(std::begin(kAllFrequencies), std::end(kAllFrequencies), s.frequency()) -
					std::begin(kAllFrequencies))];
			log("training on ", series.size(), " series");
			const auto r = pipeline::train(series, c);
			for (const auto &f : r.failures)
				log("skipped ", f);
			io::save_ensemble(trn_model, r.ensemble);
			if (!trn_summary.empty())
				emit_text(trn_summary, io::training_summary_json(r));
			if (!trn_path.empty())
				emit(trn_path, [&](std::ostream &out) { io::write_threshold_path_csv(out, r.ensemble.thresholds); });
			for (const auto &t : r.ensemble.thresholds.optimal)
				log(to_string(t.frequency), ' ', combiner::to_string(t.mode), " level ", t.level, ": Tr = ", t.tr,
				    ", mean MSIS ", t.mean_msis);
		} else if (*fc) {
			const auto ensemble = io::load_ensemble(fc_model);
			auto series = load_series(fc_in, fc_horizon);
			if (fc_holdout) {
				std::vector<TimeSeries> history;
				std::map<std::string, std::vector<double>> unused;
				hold_out(series, history, unused);
				series = std::move(history);
			}
			pipeline::ForecastOptions o;
			o.mode = mode;
			o.jobs = g.jobs;
			o.threshold = fc_threshold;
			const auto out = pipeline::forecast(ensemble, series, o);
			emit(fc_out, [&](std::ostream &os) { io::write_forecast_csv(os, out); });
			if (!fc_prov.empty())
				emit(fc_prov, [&](std::ostream &os) { io::write_provenance_csv(os, out); });
			std::size_t fallbacks = 0;
			for (const auto &sf : out)
				fallbacks += sf.fallbacks.size();
			log("forecast ", out.size(), " series (", fallbacks, " method runs fell back to naive)");
			if (!fc_bench.empty()) {
				const auto bench = pipeline::benchmark_forecasts(series, ensemble.levels, g.jobs);
				fs::create_directories(fc_bench);
				for (const auto &[name, list] : bench.entries)
					emit((fs::path(fc_bench) / (name + ".csv")).string(),
					     [&](std::ostream &os) { io::write_forecast_csv(os, list); });
				log("wrote ", bench.entries.size(), " benchmark files to ", fc_bench);
			}
		} else if (*ev) {
			const auto series = load_series(ev_in, ev_horizon);
			std::vector<TimeSeries> history;
			std::map<std::string, std::vector<double>> actuals;
			hold_out(series, history, actuals);
			std::vector<pipeline::ForecastTable> tables;
			for (const auto &spec : ev_forecasts) {
				const auto eq = spec.find('=');
				const std::string name = eq == std::string::npos ? fs::path(spec).stem().string() : spec.substr(0, eq);
				const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
				tables.push_back(io::read_forecast_csv(fs::path(path), name));
			}
			if (!ev_bench.empty()) {
				std::vector<fs::path> files;
				for (const auto &entry : fs::directory_iterator(ev_bench))
					if (entry.path().extension() == ".csv")
						files.push_back(entry.path());
				std::sort(files.begin(), files.end());
				for (const auto &p : files)
					tables.push_back(io::read_forecast_csv(p, p.stem().string()));
			}
			if (tables.empty())
				throw CLI::ValidationError("evaluate", "no forecasts given (--forecasts or --benchmarks)");
			std::vector<pipeline::SeriesForecast> provenance;
			if (!ev_prov.empty())
				provenance = io::read_provenance_csv(fs::path(ev_prov));
			const auto report = pipeline::evaluate(tables, history, actuals, provenance);
			emit_text(ev_report, io::report_to_json(report));
			if (!ev_tables.empty())
				io::write_report_tables(ev_tables, report);
			for (const auto &n : report.notes)
				log(n);
		} else if (*ef) {
			const auto ensemble = io::load_ensemble(ef_model);
			emit(ef_out, [&](std::ostream &out) { io::write_effects_csv(out, ensemble, ef_points, ef_features); });
		} else if (*tp) {
			const auto ensemble = io::load_ensemble(tp_model);
			emit(tp_out, [&](std::ostream &out) { io::write_threshold_path_csv(out, ensemble.thresholds); });
		} else if (*rg) {
			std::cout << features::registry_table();
		}
	} catch (const CLI::ValidationError &e) {
		std::cerr << "fuma: " << e.what() << '\n';
		return kUsage;
	} catch (const SystemicFailure &e) {
		std::cerr << "fuma: training aborted: " << e.what() << '\n';
		return kSystemic;
	} catch (const Error &e) {
		std::cerr << "fuma: " << e.what() << '\n';
		return kData;
	} catch (const std::exception &e) {
		std::cerr << "fuma: " << e.what() << '\n';
		return kData;
	}
	return kOk;
}
