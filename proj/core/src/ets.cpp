#include "fuma/ets.hpp"
#include "fuma/error.hpp"
#include "fuma/optim.hpp"
#include "fuma/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fuma::ets {

std::string Form::name() const {
	std::string s = "A";
	switch (trend) {
	case Trend::None:
		s += "N";
		break;
	case Trend::Additive:
		s += "A";
		break;
	case Trend::Damped:
		s += "Ad";
		break;
	}
	s += seasonal ? "A" : "N";
	return s;
}

FittedMethod Model::describe() const {
	FittedMethod f;
	f.method = "ets(" + form.name() + ")";
	f.parameters.emplace_back("alpha", alpha);
	if (form.trend != Trend::None)
		f.parameters.emplace_back("beta", beta);
	if (form.trend == Trend::Damped)
		f.parameters.emplace_back("phi", phi);
	if (form.seasonal)
		f.parameters.emplace_back("gamma", gamma);
	f.sigma2 = sigma2;
	f.aicc = aicc;
	return f;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Layout {
	bool trend = false, damped = false, seasonal = false;
	std::size_t alpha = 0, beta = 0, gamma = 0, phi = 0, level = 0, slope = 0, size = 0;
};

Layout make_layout(const Form &form) {
	Layout l;
	l.trend = form.trend != Trend::None;
	l.damped = form.trend == Trend::Damped;
	l.seasonal = form.seasonal;
	std::size_t i = 0;
	l.alpha = i++;
	if (l.trend)
		l.beta = i++;
	if (l.seasonal)
		l.gamma = i++;
	if (l.damped)
		l.phi = i++;
	l.level = i++;
	if (l.trend)
		l.slope = i++;
	l.size = i;
	return l;
}

struct Params {
	double alpha, beta, gamma, phi, level, slope;
};

Params unpack(const Layout &l, std::span<const double> x) {
	return {x[l.alpha], l.trend ? x[l.beta] : 0.0, l.seasonal ? x[l.gamma] : 0.0,
	        l.damped ? x[l.phi] : 1.0, x[l.level], l.trend ? x[l.slope] : 0.0};
}

bool admissible(const Layout &l, const Params &p) {
	if (p.alpha < kLowerBound || p.alpha > kUpperBound)
		return false;
	if (l.trend && (p.beta < kLowerBound || p.beta > p.alpha))
		return false;
	if (l.seasonal && (p.gamma < kLowerBound || p.gamma > 1.0 - p.alpha))
		return false;
	if (l.damped && (p.phi < kPhiLower || p.phi > kPhiUpper))
		return false;
	return true;
}

// Additive seasonal indices from a classical decomposition of the first cycles.
std::vector<double> initial_season(std::span<const double> y, std::size_t m) {
	const std::size_t len = std::min(y.size(), 4 * m) / m * m;
	std::vector<double> trend(len, std::numeric_limits<double>::quiet_NaN());
	const std::size_t half = m / 2;
	for (std::size_t t = half; t + half < len; ++t) {
		double s = 0.0;
		if (m % 2 == 0) {
			s = 0.5 * y[t - half] + 0.5 * y[t + half];
			for (std::size_t k = t - half + 1; k < t + half; ++k)
				s += y[k];
		} else {
			for (std::size_t k = t - half; k <= t + half; ++k)
				s += y[k];
		}
		trend[t] = s / static_cast<double>(m);
	}
	std::vector<double> idx(m, 0.0), cnt(m, 0.0);
	for (std::size_t t = 0; t < len; ++t) {
		if (std::isnan(trend[t]))
			continue;
		idx[t % m] += y[t] - trend[t];
		cnt[t % m] += 1.0;
	}
	double avg = 0.0;
	for (std::size_t k = 0; k < m; ++k) {
		idx[k] = cnt[k] > 0.0 ? idx[k] / cnt[k] : 0.0;
		avg += idx[k];
	}
	avg /= static_cast<double>(m);
	for (double &v : idx)
		v -= avg;
	return idx;
}

struct Run {
	double sse;
	double level, slope;
	std::vector<double> season;
};

Run run(std::span<const double> y, std::size_t m, const Layout &l, const Params &p,
        const std::vector<double> &season0) {
	Run r{0.0, p.level, p.slope, season0};
	for (std::size_t t = 0; t < y.size(); ++t) {
		const double s = l.seasonal ? r.season[t % m] : 0.0;
		const double base = r.level + p.phi * r.slope;
		const double e = y[t] - base - s;
		r.sse += e * e;
		r.level = base + p.alpha * e;
		if (l.trend)
			r.slope = p.phi * r.slope + p.beta * e;
		if (l.seasonal)
			r.season[t % m] = s + p.gamma * e;
	}
	return r;
}

} // namespace

Model fit_form(std::span<const double> y, int period, Form form) {
	const std::size_t n = y.size();
	const auto m = static_cast<std::size_t>(std::max(period, 1));
	if (form.seasonal && (m < 2 || n < 2 * m + 2))
		throw MethodFailed("ets", "seasonal form " + form.name() + " needs n >= 2m + 2");
	if (n < 3)
		throw MethodFailed("ets", "series too short");
	const Layout layout = make_layout(form);

	std::vector<double> season0 = form.seasonal ? initial_season(y, m) : std::vector<double>(m, 0.0);
	const std::size_t k = std::min<std::size_t>(n, std::max<std::size_t>(10, 2 * m));
	std::vector<double> adj(k);
	for (std::size_t t = 0; t < k; ++t)
		adj[t] = y[t] - (form.seasonal ? season0[t % m] : 0.0);
	double l0, b0 = 0.0;
	if (layout.trend) {
		std::vector<double> design(2 * k);
		for (std::size_t t = 0; t < k; ++t) {
			design[2 * t] = 1.0;
			design[2 * t + 1] = static_cast<double>(t + 1);
		}
		const auto fit = stats::ols(design, 2, adj);
		l0 = fit.coef[0];
		b0 = fit.coef[1];
	} else {
		l0 = stats::mean(std::span<const double>(adj).first(std::min<std::size_t>(k, 5)));
	}

	double scale = stats::sd(y);
	if (!(scale > 0.0))
		scale = std::max(1e-8, 1e-3 * std::abs(stats::mean(y)));

	std::vector<double> x0(layout.size), step(layout.size);
	x0[layout.alpha] = 0.3;
	step[layout.alpha] = 0.1;
	if (layout.trend) {
		x0[layout.beta] = 0.03;
		step[layout.beta] = 0.01;
	}
	if (layout.seasonal) {
		x0[layout.gamma] = 0.05;
		step[layout.gamma] = 0.02;
	}
	if (layout.damped) {
		x0[layout.phi] = 0.95;
		step[layout.phi] = 0.01;
	}
	x0[layout.level] = l0;
	step[layout.level] = 0.1 * scale;
	if (layout.trend) {
		x0[layout.slope] = b0;
		step[layout.slope] = 0.01 * scale;
	}

	auto objective = [&](std::span<const double> x) {
		const Params p = unpack(layout, x);
		if (!admissible(layout, p))
			return kInf;
		return run(y, m, layout, p, season0).sse;
	};
	optim::NelderMeadOptions opts;
	opts.max_evaluations = 300 * static_cast<int>(layout.size);
	opts.rel_tol = 1e-10;
	opts.abs_tol = 1e-14 * scale * scale;
	auto best = optim::nelder_mead(objective, x0, step, opts);
	// One restart from the optimum with a smaller simplex.
	for (double &s : step)
		s *= 0.25;
	auto again = optim::nelder_mead(objective, best.x, step, opts);
	if (again.value < best.value)
		best = again;
	if (!std::isfinite(best.value))
		throw MethodFailed("ets", "optimiser found no admissible parameters for " + form.name());

	const Params p = unpack(layout, best.x);
	const Run r = run(y, m, layout, p, season0);

	Model model;
	model.form = form;
	model.period = static_cast<int>(m);
	model.n = n;
	model.alpha = p.alpha;
	model.beta = p.beta;
	model.gamma = p.gamma;
	model.phi = p.phi;
	model.level = r.level;
	model.slope = r.slope;
	model.season.resize(m);
	for (std::size_t j = 0; j < m; ++j)
		model.season[j] = form.seasonal ? r.season[(n + j) % m] : 0.0;
	model.sse = r.sse;

	int k_params = static_cast<int>(layout.size) + 1;
	if (form.seasonal)
		k_params += static_cast<int>(m) - 1;
	model.n_params = k_params;
	const double dn = static_cast<double>(n);
	const double floor = dn * (1e-10 * scale) * (1e-10 * scale);
	const double lik = dn * std::log(std::max(r.sse, floor) / dn);
	const double kd = static_cast<double>(k_params);
	model.aicc = (dn - kd - 1.0 > 0.0) ? lik + 2.0 * kd + 2.0 * kd * (kd + 1.0) / (dn - kd - 1.0) : kInf;
	model.sigma2 = r.sse / std::max(1.0, dn - kd + 1.0);
	return model;
}

Model fit_auto(std::span<const double> y, int period, const Taxonomy &taxonomy) {
	std::vector<Form> forms;
	for (bool seasonal : {false, true}) {
		if (seasonal && !(taxonomy.allow_seasonal && period > 1 &&
		                  y.size() >= 2 * static_cast<std::size_t>(period) + 2))
			continue;
		for (Trend t : taxonomy.trends)
			forms.push_back({t, seasonal});
	}
	if (forms.empty())
		throw MethodFailed("ets", "empty taxonomy");
	Model best;
	bool have = false;
	std::string last_error = "no candidate has a finite AICc";
	for (const auto &form : forms) {
		try {
			Model m = fit_form(y, period, form);
			if (!std::isfinite(m.aicc))
				continue;
			if (!have || m.aicc < best.aicc) {
				best = std::move(m);
				have = true;
			}
		} catch (const MethodFailed &e) {
			last_error = e.what();
		}
	}
	if (!have)
		throw MethodFailed("ets", last_error);
	return best;
}

PointVariance forecast(const Model &model, int horizon) {
	PointVariance out;
	const auto h = static_cast<std::size_t>(horizon);
	out.mean.resize(h);
	out.variance.resize(h);
	const auto m = static_cast<std::size_t>(std::max(model.period, 1));
	const bool trend = model.form.trend != Trend::None;
	double phi_sum = 0.0, phi_pow = 1.0, csq = 0.0;
	for (std::size_t j = 1; j <= h; ++j) {
		phi_pow *= model.phi;
		phi_sum += phi_pow;
		const double s = model.form.seasonal ? model.season[(j - 1) % m] : 0.0;
		out.mean[j - 1] = model.level + (trend ? phi_sum * model.slope : 0.0) + s;
		out.variance[j - 1] = model.sigma2 * (1.0 + csq);
		// c_j enters the variance of step j + 1.
		double c = model.alpha;
		if (trend)
			c += model.beta * phi_sum;
		if (model.form.seasonal && j % m == 0)
			c += model.gamma;
		csq += c * c;
	}
	return out;
}

} // namespace fuma::ets
