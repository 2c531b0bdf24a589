#include "fuma/io.hpp"
#include "fuma/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace fuma::io {

using nlohmann::json;

namespace {

std::vector<std::string> split_csv(const std::string &line) {
	std::vector<std::string> out;
	std::string field;
	for (char c : line) {
		if (c == ',') {
			out.push_back(field);
			field.clear();
		} else {
			field += c;
		}
	}
	out.push_back(field);
	return out;
}

// Reads lines, stripping CR and skipping blank ones; checks the header.
class CsvReader {
public:
	CsvReader(std::istream &in, std::vector<std::string> header) : in_(in), header_(std::move(header)) {
		std::string line;
		if (!next_line(line))
			throw DataError("empty CSV input, expected header " + joined());
		if (split_csv(line) != header_)
			throw DataError("unexpected CSV header '" + line + "', expected " + joined());
	}

	bool next(std::vector<std::string> &fields) {
		std::string line;
		if (!next_line(line))
			return false;
		fields = split_csv(line);
		if (fields.size() != header_.size())
			throw DataError(where() + ": expected " + std::to_string(header_.size()) + " fields");
		return true;
	}

	std::string where() const { return "line " + std::to_string(lineno_); }

private:
	bool next_line(std::string &line) {
		while (std::getline(in_, line)) {
			++lineno_;
			if (!line.empty() && line.back() == '\r')
				line.pop_back();
			if (!line.empty())
				return true;
		}
		return false;
	}
	std::string joined() const {
		std::string s;
		for (const auto &h : header_)
			s += (s.empty() ? "" : ",") + h;
		return s;
	}

	std::istream &in_;
	std::vector<std::string> header_;
	std::size_t lineno_ = 0;
};

std::ifstream open_in(const std::filesystem::path &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw DataError("cannot open " + path.string());
	return in;
}

long long parse_int(const std::string &text, const std::string &where) {
	char *end = nullptr;
	errno = 0;
	const long long v = std::strtoll(text.c_str(), &end, 10);
	if (text.empty() || *end != '\0' || errno != 0)
		throw DataError(where + ": bad integer '" + text + "'");
	return v;
}

json num(double v) { return format_double(v); }

double real(const json &j) {
	if (j.is_string())
		return parse_double(j.get<std::string>());
	if (j.is_number())
		return j.get<double>();
	throw DataError("model file: expected a number");
}

json reals(std::span<const double> v) {
	json a = json::array();
	for (double x : v)
		a.push_back(num(x));
	return a;
}

std::vector<double> reals_from(const json &j) {
	std::vector<double> v;
	for (const auto &x : j)
		v.push_back(real(x));
	return v;
}

std::string hex64(std::uint64_t v) {
	char buf[32];
	std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
	return buf;
}

std::uint64_t from_hex64(const std::string &s) {
	char *end = nullptr;
	const auto v = std::strtoull(s.c_str(), &end, 16);
	if (s.empty() || *end != '\0')
		throw DataError("model file: bad registry hash '" + s + "'");
	return v;
}

json model_json(const gam::GamModel &m) {
	json j;
	j["label"] = m.label;
	j["columns"] = m.columns;
	j["intercept"] = num(m.intercept);
	j["linear"] = json::array();
	for (const auto &l : m.linear)
		j["linear"].push_back({{"name", l.name}, {"column", l.column}, {"coef", num(l.coef)}});
	j["smooths"] = json::array();
	for (const auto &s : m.smooths)
		j["smooths"].push_back({{"name", s.name},
		                        {"column", s.column},
		                        {"knots", reals(s.spline.knots())},
		                        {"values", reals(s.spline.values())},
		                        {"lambda", num(s.lambda)},
		                        {"edf", num(s.edf)}});
	return j;
}

gam::GamModel model_from(const json &j, std::uint64_t hash) {
	gam::GamModel m;
	m.label = j.at("label").get<std::string>();
	m.columns = j.at("columns").get<std::size_t>();
	m.registry_hash = hash;
	m.intercept = real(j.at("intercept"));
	for (const auto &l : j.at("linear"))
		m.linear.push_back({l.at("name").get<std::string>(), l.at("column").get<std::size_t>(), real(l.at("coef"))});
	for (const auto &s : j.at("smooths")) {
		gam::SmoothTerm t;
		t.name = s.at("name").get<std::string>();
		t.column = s.at("column").get<std::size_t>();
		t.spline = gam::CubicSpline(reals_from(s.at("knots")), reals_from(s.at("values")));
		t.lambda = real(s.at("lambda"));
		t.edf = real(s.at("edf"));
		if (t.column >= m.columns)
			throw DataError("model file: smooth column out of range");
		m.smooths.push_back(std::move(t));
	}
	for (const auto &l : m.linear)
		if (l.column >= m.columns)
			throw DataError("model file: linear column out of range");
	return m;
}

json diagnostics_json(const gam::Diagnostics &d) {
	return {{"gcv", num(d.gcv)},
	        {"residual_variance", num(d.residual_variance)},
	        {"edf_total", num(d.edf_total)},
	        {"rows", d.rows},
	        {"cycles", d.cycles},
	        {"ridge", d.ridge},
	        {"small_sample", d.small_sample},
	        {"demoted", d.demoted},
	        {"dropped", d.dropped}};
}

gam::Diagnostics diagnostics_from(const json &j) {
	gam::Diagnostics d;
	d.gcv = real(j.at("gcv"));
	d.residual_variance = real(j.at("residual_variance"));
	d.edf_total = real(j.at("edf_total"));
	d.rows = j.at("rows").get<std::size_t>();
	d.cycles = j.at("cycles").get<int>();
	d.ridge = j.at("ridge").get<bool>();
	d.small_sample = j.at("small_sample").get<bool>();
	d.demoted = j.at("demoted").get<std::vector<std::string>>();
	d.dropped = j.at("dropped").get<std::vector<std::string>>();
	return d;
}

std::string dump(const json &j) { return j.dump(1, '\t') + "\n"; }

void write_file(const std::filesystem::path &path, const std::string &text) {
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw DataError("cannot write " + path.string());
	out << text;
	if (!out)
		throw DataError("error writing " + path.string());
}

} // namespace

std::string format_double(double v) {
	if (std::isnan(v))
		return "nan";
	if (std::isinf(v))
		return v > 0 ? "inf" : "-inf";
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", v);
	return buf;
}

double parse_double(std::string_view text) {
	const std::string s(text);
	char *end = nullptr;
	const double v = std::strtod(s.c_str(), &end);
	if (s.empty() || *end != '\0')
		throw DataError("bad number '" + s + "'");
	return v;
}

std::vector<TimeSeries> read_series_csv(std::istream &in, std::optional<int> horizon) {
	CsvReader reader(in, {"id", "frequency", "index", "value"});
	struct Pending {
		Frequency frequency;
		std::vector<std::pair<long long, double>> points;
	};
	std::vector<std::string> order;
	std::map<std::string, Pending> pending;
	std::vector<std::string> f;
	while (reader.next(f)) {
		if (f[0].empty())
			throw DataError(reader.where() + ": empty id");
		Frequency freq;
		try {
			freq = frequency_from_string(f[1]);
		} catch (const Error &) {
			throw DataError(reader.where() + ": unknown frequency '" + f[1] + "'");
		}
		const auto index = parse_int(f[2], reader.where());
		double value;
		try {
			value = parse_double(f[3]);
		} catch (const DataError &) {
			throw DataError(reader.where() + ": bad value '" + f[3] + "'");
		}
		if (!std::isfinite(value))
			throw DataError(reader.where() + ": non-finite value");
		auto [it, inserted] = pending.try_emplace(f[0], Pending{freq, {}});
		if (inserted)
			order.push_back(f[0]);
		else if (it->second.frequency != freq)
			throw DataError(reader.where() + ": series " + f[0] + " changes frequency");
		it->second.points.emplace_back(index, value);
	}
	std::vector<TimeSeries> out;
	for (const auto &id : order) {
		auto &p = pending[id];
		std::stable_sort(p.points.begin(), p.points.end(),
		                 [](const auto &a, const auto &b) { return a.first < b.first; });
		std::vector<double> values;
		for (std::size_t i = 0; i < p.points.size(); ++i) {
			if (i > 0 && p.points[i].first == p.points[i - 1].first)
				throw DataError("series " + id + " repeats index " + std::to_string(p.points[i].first));
			values.push_back(p.points[i].second);
		}
		try {
			out.emplace_back(id, std::move(values), seasonal_period(p.frequency),
			                 horizon.value_or(default_horizon(p.frequency)));
		} catch (const DataError &) {
			throw;
		} catch (const Error &e) {
			throw DataError(e.what());
		}
	}
	return out;
}

std::vector<TimeSeries> read_series_csv(const std::filesystem::path &path, std::optional<int> horizon) {
	auto in = open_in(path);
	return read_series_csv(in, horizon);
}

void write_series_csv(std::ostream &out, std::span<const TimeSeries> series) {
	out << "id,frequency,index,value\n";
	for (const auto &s : series) {
		const std::string freq(to_string(s.frequency()));
		for (std::size_t t = 0; t < s.size(); ++t)
			out << s.id() << ',' << freq << ',' << t + 1 << ',' << format_double(s[t]) << '\n';
	}
}

void write_forecast_csv(std::ostream &out, std::span<const pipeline::SeriesForecast> forecasts) {
	out << "id,level,step,lower,point,upper\n";
	for (const auto &sf : forecasts)
		for (const auto &f : sf.forecasts)
			for (std::size_t t = 0; t < f.horizon(); ++t)
				out << sf.id << ',' << format_double(f.level) << ',' << t + 1 << ',' << format_double(f.lower[t])
				    << ',' << format_double(f.point[t]) << ',' << format_double(f.upper[t]) << '\n';
}

pipeline::ForecastTable read_forecast_csv(std::istream &in, std::string name) {
	CsvReader reader(in, {"id", "level", "step", "lower", "point", "upper"});
	pipeline::ForecastTable table;
	table.name = std::move(name);
	std::map<std::string, std::map<double, std::map<long long, std::array<double, 3>>>> rows;
	std::vector<std::string> f;
	while (reader.next(f)) {
		double level, lo, pt, hi;
		try {
			level = parse_double(f[1]);
			lo = parse_double(f[3]);
			pt = parse_double(f[4]);
			hi = parse_double(f[5]);
		} catch (const DataError &e) {
			throw DataError(reader.where() + ": " + e.what());
		}
		const auto step = parse_int(f[2], reader.where());
		if (!(level > 0.0 && level < 1.0))
			throw DataError(reader.where() + ": level must lie in (0, 1)");
		if (!rows[f[0]][level].emplace(step, std::array<double, 3>{lo, pt, hi}).second)
			throw DataError(reader.where() + ": duplicate step for " + f[0]);
	}
	for (auto &[id, levels] : rows) {
		auto &list = table.by_id[id];
		for (auto &[level, steps] : levels) {
			IntervalForecast fc;
			fc.level = level;
			long long expect = 1;
			for (auto &[step, v] : steps) {
				if (step != expect++)
					throw DataError("forecast steps of " + id + " are not 1..h");
				fc.lower.push_back(v[0]);
				fc.point.push_back(v[1]);
				fc.upper.push_back(v[2]);
			}
			list.push_back(std::move(fc));
		}
	}
	return table;
}

pipeline::ForecastTable read_forecast_csv(const std::filesystem::path &path, std::string name) {
	auto in = open_in(path);
	return read_forecast_csv(in, std::move(name));
}

void write_provenance_csv(std::ostream &out, std::span<const pipeline::SeriesForecast> forecasts) {
	out << "id,frequency,level,method,fitted,softmax,threshold,selected,weight\n";
	for (const auto &sf : forecasts)
		for (const auto &lp : sf.provenance)
			for (std::size_t k = 0; k < lp.methods.size(); ++k) {
				const auto it = std::find(lp.selected.begin(), lp.selected.end(), lp.methods[k]);
				const bool sel = it != lp.selected.end();
				const double w = sel ? lp.weights[static_cast<std::size_t>(it - lp.selected.begin())] : 0.0;
				out << sf.id << ',' << to_string(sf.frequency) << ',' << format_double(lp.level) << ','
				    << lp.methods[k] << ',' << format_double(lp.fitted[k]) << ',' << format_double(lp.softmax[k])
				    << ',' << format_double(lp.threshold) << ',' << (sel ? 1 : 0) << ',' << format_double(w) << '\n';
			}
}

std::vector<pipeline::SeriesForecast> read_provenance_csv(std::istream &in) {
	CsvReader reader(in, {"id", "frequency", "level", "method", "fitted", "softmax", "threshold", "selected", "weight"});
	std::vector<pipeline::SeriesForecast> out;
	std::map<std::string, std::size_t> index;
	std::vector<std::string> f;
	while (reader.next(f)) {
		auto [it, inserted] = index.try_emplace(f[0], out.size());
		if (inserted) {
			out.push_back({});
			out.back().id = f[0];
			out.back().frequency = frequency_from_string(f[1]);
		}
		auto &sf = out[it->second];
		const double level = parse_double(f[2]);
		if (sf.provenance.empty() || sf.provenance.back().level != level) {
			sf.provenance.push_back({});
			sf.provenance.back().level = level;
			sf.provenance.back().threshold = parse_double(f[6]);
		}
		auto &lp = sf.provenance.back();
		lp.methods.push_back(f[3]);
		lp.fitted.push_back(parse_double(f[4]));
		lp.softmax.push_back(parse_double(f[5]));
		if (f[7] == "1") {
			lp.selected.push_back(f[3]);
			lp.weights.push_back(parse_double(f[8]));
		} else if (f[7] != "0") {
			throw DataError(reader.where() + ": selected must be 0 or 1");
		}
	}
	return out;
}

std::vector<pipeline::SeriesForecast> read_provenance_csv(const std::filesystem::path &path) {
	auto in = open_in(path);
	return read_provenance_csv(in);
}

std::string ensemble_to_json(const pipeline::TrainedEnsemble &e) {
	json j;
	j["format"] = "fuma-ensemble";
	j["version"] = e.format_version;
	j["registry_version"] = features::kRegistryVersion;
	j["registry_hash"] = hex64(e.registry_hash);
	j["methods"] = e.methods;
	j["levels"] = reals(e.levels);
	j["models"] = json::array();
	for (const auto &m : e.models)
		j["models"].push_back({{"method", m.method},
		                       {"level", num(m.level)},
		                       {"model", model_json(m.model)},
		                       {"diagnostics", diagnostics_json(m.diagnostics)}});
	j["thresholds"] = json::array();
	for (const auto &t : e.thresholds.optimal)
		j["thresholds"].push_back({{"frequency", to_string(t.frequency)},
		                           {"mode", combiner::to_string(t.mode)},
		                           {"level", num(t.level)},
		                           {"tr", num(t.tr)},
		                           {"mean_msis", num(t.mean_msis)}});
	j["path"] = json::array();
	for (const auto &p : e.thresholds.path)
		j["path"].push_back({{"frequency", to_string(p.frequency)},
		                     {"mode", combiner::to_string(p.mode)},
		                     {"level", num(p.level)},
		                     {"tr", num(p.tr)},
		                     {"mean_msis", num(p.mean_msis)},
		                     {"count", p.count},
		                     {"excluded", p.excluded}});
	const auto &c = e.config;
	j["config"] = {{"levels", reals(c.levels)},
	               {"grid", reals(c.grid)},
	               {"seed", c.seed},
	               {"counts", c.counts},
	               {"max_failure_share", num(c.max_failure_share)},
	               {"gam",
	                {{"basis_size", c.gam.basis_size},
	                 {"log10_lambda_lo", num(c.gam.log10_lambda_lo)},
	                 {"log10_lambda_hi", num(c.gam.log10_lambda_hi)},
	                 {"max_cycles", c.gam.max_cycles},
	                 {"tolerance", num(c.gam.tolerance)},
	                 {"ridge", num(c.gam.ridge)}}}};
	return dump(j);
}

pipeline::TrainedEnsemble ensemble_from_json(std::string_view text) {
	json j;
	try {
		j = json::parse(text);
	} catch (const json::exception &e) {
		throw DataError(std::string("model file is not valid JSON: ") + e.what());
	}
	try {
		if (j.at("format").get<std::string>() != "fuma-ensemble")
			throw DataError("not a fuma model file");
		pipeline::TrainedEnsemble e;
		e.format_version = j.at("version").get<int>();
		if (e.format_version != pipeline::kFormatVersion)
			throw DataError("unsupported model file version " + std::to_string(e.format_version));
		e.registry_hash = from_hex64(j.at("registry_hash").get<std::string>());
		e.methods = j.at("methods").get<std::vector<std::string>>();
		e.levels = reals_from(j.at("levels"));
		for (const auto &m : j.at("models")) {
			pipeline::MethodModel mm;
			mm.method = m.at("method").get<std::string>();
			if (std::find(e.methods.begin(), e.methods.end(), mm.method) == e.methods.end())
				throw DataError("model file: unknown method " + mm.method);
			mm.level = real(m.at("level"));
			mm.model = model_from(m.at("model"), e.registry_hash);
			mm.diagnostics = diagnostics_from(m.at("diagnostics"));
			e.models.push_back(std::move(mm));
		}
		for (const auto &t : j.at("thresholds")) {
			const double tr = real(t.at("tr"));
			if (!(tr >= 0.0 && tr <= 1.0))
				throw DataError("model file: threshold outside [0, 1]");
			e.thresholds.optimal.push_back({frequency_from_string(t.at("frequency").get<std::string>()),
			                                combiner::mode_from_string(t.at("mode").get<std::string>()),
			                                real(t.at("level")), tr, real(t.at("mean_msis"))});
		}
		for (const auto &p : j.at("path"))
			e.thresholds.path.push_back({frequency_from_string(p.at("frequency").get<std::string>()),
			                             combiner::mode_from_string(p.at("mode").get<std::string>()),
			                             real(p.at("level")), real(p.at("tr")), real(p.at("mean_msis")),
			                             p.at("count").get<std::size_t>(), p.at("excluded").get<std::size_t>()});
		const auto &c = j.at("config");
		e.config.levels = reals_from(c.at("levels"));
		e.config.grid = reals_from(c.at("grid"));
		e.config.seed = c.at("seed").get<std::uint64_t>();
		e.config.counts = c.at("counts").get<std::array<std::size_t, 3>>();
		e.config.max_failure_share = real(c.at("max_failure_share"));
		const auto &g = c.at("gam");
		e.config.gam.basis_size = g.at("basis_size").get<int>();
		e.config.gam.log10_lambda_lo = real(g.at("log10_lambda_lo"));
		e.config.gam.log10_lambda_hi = real(g.at("log10_lambda_hi"));
		e.config.gam.max_cycles = g.at("max_cycles").get<int>();
		e.config.gam.tolerance = real(g.at("tolerance"));
		e.config.gam.ridge = real(g.at("ridge"));
		return e;
	} catch (const json::exception &e) {
		throw DataError(std::string("model file is malformed: ") + e.what());
	}
}

void save_ensemble(const std::filesystem::path &path, const pipeline::TrainedEnsemble &ensemble) {
	write_file(path, ensemble_to_json(ensemble));
}

pipeline::TrainedEnsemble load_ensemble(const std::filesystem::path &path) {
	auto in = open_in(path);
	std::stringstream ss;
	ss << in.rdbuf();
	return ensemble_from_json(ss.str());
}

void write_threshold_path_csv(std::ostream &out, const combiner::ThresholdResult &thresholds) {
	out << "frequency,mode,level,tr,mean_msis,count,excluded\n";
	for (const auto &p : thresholds.path)
		out << to_string(p.frequency) << ',' << combiner::to_string(p.mode) << ',' << format_double(p.level) << ','
		    << format_double(p.tr) << ',' << format_double(p.mean_msis) << ',' << p.count << ',' << p.excluded
		    << '\n';
}

void write_effects_csv(std::ostream &out, const pipeline::TrainedEnsemble &ensemble, int points,
                       std::span<const std::string> features) {
	if (points < 1)
		throw DataError("effects grid needs at least one point");
	for (const auto &f : features)
		fuma::features::index_of(f);
	out << "method,level,feature,x,effect\n";
	for (const auto &m : ensemble.models)
		for (const auto &s : m.model.smooths) {
			if (!features.empty() && std::find(features.begin(), features.end(), s.name) == features.end())
				continue;
			const double lo = s.spline.knots().front(), hi = s.spline.knots().back();
			std::vector<double> grid;
			for (int i = 0; i < points; ++i)
				grid.push_back(points == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (points - 1));
			const auto effect = m.model.partial_effect(s.name, grid);
			for (int i = 0; i < points; ++i)
				out << m.method << ',' << format_double(m.level) << ',' << s.name << ','
				    << format_double(grid[static_cast<std::size_t>(i)]) << ','
				    << format_double(effect[static_cast<std::size_t>(i)]) << '\n';
		}
}

std::string report_to_json(const pipeline::EvaluationReport &r) {
	json j;
	j["metrics"] = json::array();
	for (const auto &row : r.rows)
		j["metrics"].push_back({{"model", row.model},
		                        {"frequency", row.frequency},
		                        {"level", row.level},
		                        {"mean_msis", row.mean_msis},
		                        {"mean_mase", row.mean_mase},
		                        {"acd", row.acd},
		                        {"count", row.count},
		                        {"excluded", row.excluded}});
	j["selection"] = json::array();
	for (const auto &s : r.selection)
		j["selection"].push_back({{"frequency", s.frequency},
		                          {"level", s.level},
		                          {"method", s.method},
		                          {"selected", s.selected},
		                          {"series", s.series},
		                          {"rate", s.rate}});
	j["mcb"] = json::array();
	for (const auto &m : r.mcb)
		j["mcb"].push_back({{"level", m.level},
		                    {"model", m.model},
		                    {"mean_rank", m.mean_rank},
		                    {"half_width", m.half_width},
		                    {"not_different_from_best", m.not_different},
		                    {"series", m.series}});
	j["notes"] = r.notes;
	return dump(j);
}

void write_report_tables(const std::filesystem::path &dir, const pipeline::EvaluationReport &r) {
	std::filesystem::create_directories(dir);
	std::ostringstream metrics;
	metrics << "model,frequency,level,mean_msis,mean_mase,acd,count,excluded\n";
	for (const auto &row : r.rows)
		metrics << row.model << ',' << row.frequency << ',' << format_double(row.level) << ','
		        << format_double(row.mean_msis) << ',' << format_double(row.mean_mase) << ','
		        << format_double(row.acd) << ',' << row.count << ',' << row.excluded << '\n';
	write_file(dir / "metrics.csv", metrics.str());
	std::ostringstream selection;
	selection << "frequency,level,method,selected,series,rate\n";
	for (const auto &s : r.selection)
		selection << s.frequency << ',' << format_double(s.level) << ',' << s.method << ',' << s.selected << ','
		          << s.series << ',' << format_double(s.rate) << '\n';
	write_file(dir / "selection.csv", selection.str());
	std::ostringstream mcb;
	mcb << "level,model,mean_rank,half_width,not_different_from_best,series\n";
	for (const auto &m : r.mcb)
		mcb << format_double(m.level) << ',' << m.model << ',' << format_double(m.mean_rank) << ','
		    << format_double(m.half_width) << ',' << (m.not_different ? 1 : 0) << ',' << m.series << '\n';
	write_file(dir / "mcb.csv", mcb.str());
}

std::string training_summary_json(const pipeline::TrainResult &r) {
	json j;
	j["frequencies"] = json::array();
	for (const auto &s : r.summary)
		j["frequencies"].push_back({{"frequency", to_string(s.frequency)},
		                            {"series", s.series},
		                            {"failed", s.failed},
		                            {"fallbacks", s.fallbacks},
		                            {"excluded", s.excluded}});
	j["in_sample"] = json::array();
	for (const auto &row : r.in_sample)
		j["in_sample"].push_back({{"frequency", to_string(row.frequency)},
		                          {"level", row.level},
		                          {"name", row.name},
		                          {"mean_msis", row.mean_msis},
		                          {"count", row.count}});
	j["thresholds"] = json::array();
	for (const auto &t : r.ensemble.thresholds.optimal)
		j["thresholds"].push_back({{"frequency", to_string(t.frequency)},
		                           {"mode", combiner::to_string(t.mode)},
		                           {"level", t.level},
		                           {"tr", t.tr},
		                           {"mean_msis", t.mean_msis}});
	j["failures"] = r.failures;
	return dump(j);
}

std::string generator_config_json(const generator::ReferenceSetOptions &o, const generator::LengthSampler &lengths) {
	const auto &c = o.config;
	json j;
	j["seed"] = o.seed;
	j["first_index"] = o.first_index;
	j["counts"] = {{"yearly", o.counts[0]}, {"quarterly", o.counts[1]}, {"monthly", o.counts[2]}};
	j["mar"] = {{"max_components", c.max_components},
	            {"max_ar_order", c.max_ar_order},
	            {"ar_sd", c.ar_sd},
	            {"seasonal_lo", c.seasonal_lo},
	            {"seasonal_hi", c.seasonal_hi},
	            {"seasonal_prob", c.seasonal_prob},
	            {"sigma_offset", c.sigma_offset},
	            {"max_rejections", c.max_rejections},
	            {"shrink", c.shrink}};
	json len;
	for (auto f : kAllFrequencies) {
		const std::string key(to_string(f));
		if (lengths.is_empirical(f)) {
			len[key] = {{"kind", "empirical"}};
		} else {
			const auto d = generator::LengthSampler::default_distribution(f);
			len[key] = {{"kind", "log-normal"}, {"meanlog", d.meanlog}, {"sdlog", d.sdlog}};
		}
		len[key]["min"] = lengths.min_length(f);
		len[key]["max"] = lengths.max_length();
	}
	j["lengths"] = len;
	return dump(j);
}

} // namespace fuma::io
