#include "doctest.h"

#include "fuma/error.hpp"
#include "fuma/io.hpp"
#include "fuma/rng.hpp"
#include "synthetic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

using namespace fuma;
using namespace fuma::pipeline;

TEST_CASE("doubles survive text formatting exactly") {
	Rng rng(1);
	for (int i = 0; i < 10000; ++i) {
		const double v = std::ldexp(rng.normal(), static_cast<int>(rng.uniform(-300, 300)));
		CHECK(io::parse_double(io::format_double(v)) == v);
	}
	CHECK(io::format_double(0.1) == "0.10000000000000001");
	CHECK(std::isnan(io::parse_double(io::format_double(std::nan("")))));
	CHECK(io::parse_double(io::format_double(-std::numeric_limits<double>::infinity())) < 0);
	CHECK_THROWS_AS(io::parse_double("1.5x"), DataError);
	CHECK_THROWS_AS(io::parse_double(""), DataError);
}

TEST_CASE("series CSV round trip") {
	std::vector<TimeSeries> s{TimeSeries("a", testing::random_walk(1, 25), 1, 6),
	                          TimeSeries("b", testing::random_walk(2, 40), 12, 18),
	                          TimeSeries("c", testing::random_walk(3, 30), 4, 8)};
	std::stringstream ss;
	io::write_series_csv(ss, s);
	const auto back = io::read_series_csv(ss);
	REQUIRE(back.size() == 3);
	for (std::size_t i = 0; i < 3; ++i) {
		CHECK(back[i].id() == s[i].id());
		CHECK(back[i].period() == s[i].period());
		CHECK(back[i].horizon() == s[i].horizon());
		CHECK(std::equal(back[i].values().begin(), back[i].values().end(), s[i].values().begin(),
		                 s[i].values().end()));
	}
}

TEST_CASE("series CSV rows may come in any order") {
	std::istringstream in("id,frequency,index,value\r\n"
	                      "q,quarterly,3,3\n"
	                      "y,yearly,1,10\n"
	                      "q,quarterly,1,1\n"
	                      "\n"
	                      "q,quarterly,2,2\n"
	                      "y,yearly,2,11\n"
	                      "y,yearly,3,12\n"
	                      "q,quarterly,4,4\n"
	                      "q,quarterly,6,6\n"
	                      "q,quarterly,5,5\n");
	const auto s = io::read_series_csv(in, 2);
	REQUIRE(s.size() == 2);
	CHECK(s[0].id() == "q");
	CHECK(s[0][0] == 1.0);
	CHECK(s[0][2] == 3.0);
	CHECK(s[0][5] == 6.0);
	CHECK(s[0].horizon() == 2);
	CHECK(s[1].frequency() == Frequency::Yearly);
}

TEST_CASE("malformed series CSV is rejected") {
	const char *bad[] = {
		"",
		"id,freq,index,value\n",
		"id,frequency,index,value\na,yearly,1\n",
		"id,frequency,index,value\na,weekly,1,2\n",
		"id,frequency,index,value\na,yearly,x,2\n",
		"id,frequency,index,value\na,yearly,1,abc\n",
		"id,frequency,index,value\na,yearly,1,nan\n",
		"id,frequency,index,value\na,yearly,1,2\na,yearly,1,3\n",
		"id,frequency,index,value\na,yearly,1,2\na,monthly,2,3\n",
	};
	for (const char *text : bad) {
		std::istringstream in(text);
		CHECK_THROWS_AS(io::read_series_csv(in), DataError);
	}
}

TEST_CASE("forecast CSV round trip") {
	Rng rng(4);
	std::vector<SeriesForecast> list;
	for (int i = 0; i < 5; ++i) {
		SeriesForecast sf;
		sf.id = "id" + std::to_string(i);
		sf.frequency = Frequency::Monthly;
		for (double level : {0.8, 0.95}) {
			IntervalForecast f{level, {}, {}, {}};
			for (int t = 0; t < 7; ++t) {
				const double c = rng.normal(), h = rng.uniform();
				f.lower.push_back(c - h);
				f.point.push_back(c);
				f.upper.push_back(c + h);
			}
			sf.forecasts.push_back(f);
		}
		list.push_back(sf);
	}
	std::stringstream ss;
	io::write_forecast_csv(ss, list);
	const auto table = io::read_forecast_csv(ss, "x");
	CHECK(table.name == "x");
	REQUIRE(table.by_id.size() == 5);
	for (const auto &sf : list) {
		const auto &got = table.by_id.at(sf.id);
		REQUIRE(got.size() == 2);
		for (std::size_t l = 0; l < 2; ++l) {
			CHECK(got[l].level == sf.forecasts[l].level);
			CHECK(got[l].lower == sf.forecasts[l].lower);
			CHECK(got[l].point == sf.forecasts[l].point);
			CHECK(got[l].upper == sf.forecasts[l].upper);
		}
	}
	std::istringstream gap("id,level,step,lower,point,upper\na,0.95,1,0,1,2\na,0.95,3,0,1,2\n");
	CHECK_THROWS_AS(io::read_forecast_csv(gap, "g"), DataError);
}

TEST_CASE("provenance CSV round trip") {
	SeriesForecast sf;
	sf.id = "m1";
	sf.frequency = Frequency::Monthly;
	sf.provenance.push_back({0.8, {"ets", "naive", "snaive"}, {0.5, 1.5, 0.7}, {0.5, 0.2, 0.3}, 0.55,
	                         {"ets", "snaive"}, {0.625, 0.375}});
	sf.provenance.push_back({0.95, {"ets", "naive", "snaive"}, {0.1, 0.2, 0.3}, {0.4, 0.3, 0.3}, 1.0, {"ets"}, {1.0}});
	std::vector<SeriesForecast> list{sf};
	std::stringstream ss;
	io::write_provenance_csv(ss, list);
	const auto back = io::read_provenance_csv(ss);
	REQUIRE(back.size() == 1);
	CHECK(back[0].id == "m1");
	CHECK(back[0].frequency == Frequency::Monthly);
	REQUIRE(back[0].provenance.size() == 2);
	for (std::size_t l = 0; l < 2; ++l) {
		const auto &a = sf.provenance[l], &b = back[0].provenance[l];
		CHECK(a.level == b.level);
		CHECK(a.methods == b.methods);
		CHECK(a.fitted == b.fitted);
		CHECK(a.softmax == b.softmax);
		CHECK(a.threshold == b.threshold);
		CHECK(a.selected == b.selected);
		CHECK(a.weights == b.weights);
	}
}

TEST_CASE("malformed model files are rejected") {
	CHECK_THROWS_AS(io::ensemble_from_json("not json"), DataError);
	CHECK_THROWS_AS(io::ensemble_from_json("{\"format\": \"other\"}"), DataError);
	CHECK_THROWS_AS(io::ensemble_from_json("{\"format\": \"fuma-ensemble\", \"version\": 99}"), DataError);
	CHECK_THROWS_AS(io::ensemble_from_json("{\"format\": \"fuma-ensemble\", \"version\": 1}"), DataError);
}

TEST_CASE("a hand-built ensemble round trips") {
	TrainedEnsemble e;
	e.registry_hash = 0xdeadbeefcafef00dULL;
	e.levels = {0.8, 0.95};
	e.methods = {"ets"};
	MethodModel m;
	m.method = "ets";
	m.level = 0.8;
	m.model.columns = 3;
	m.model.intercept = 0.1;
	m.model.linear.push_back({"x", 0, -2.5});
	m.model.smooths.push_back({"z", 2, gam::CubicSpline({0.0, 1.0, 2.0}, {0.5, -0.5, 0.25}), 10.0, 2.5});
	m.diagnostics.demoted = {"w"};
	e.models.push_back(m);
	e.thresholds.optimal.push_back({Frequency::Quarterly, combiner::Mode::Mean, 0.8, 0.35, 1.25});
	const auto text = io::ensemble_to_json(e);
	const auto back = io::ensemble_from_json(text);
	CHECK(back.registry_hash == e.registry_hash);
	CHECK(back.models.at(0).model.registry_hash == e.registry_hash);
	CHECK(back.models.at(0).diagnostics.demoted == m.diagnostics.demoted);
	CHECK(back.threshold(Frequency::Quarterly, combiner::Mode::Mean, 0.95) == 0.35);
	const std::vector<double> x{1.0, 7.0, 1.5};
	CHECK(back.models[0].model.predict(x) == m.model.predict(x));
	CHECK(io::ensemble_to_json(back) == text);
}
