#include "fuma/arima.hpp"
#include "fuma/error.hpp"
#include "fuma/optim.hpp"
#include "fuma/stats.hpp"
#include "fuma/stl.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace fuma::arima {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sparse lag polynomial: value = sum coef_k B^{lag_k}, lag 0 excluded.
struct Lag {
	std::size_t lag;
	double coef;
};

// (1 - sum phi_i B^i)(1 - sum Phi_j B^{jm}) written as 1 - sum a_k B^k.
std::vector<Lag> expand_ar(std::span<const double> phi, std::span<const double> sphi, std::size_t m) {
	std::vector<double> full(phi.size() + sphi.size() * m + 1, 0.0);
	std::vector<double> a(phi.size() + 1, 0.0), b(sphi.size() * m + 1, 0.0);
	a[0] = 1.0;
	for (std::size_t i = 0; i < phi.size(); ++i)
		a[i + 1] = -phi[i];
	b[0] = 1.0;
	for (std::size_t j = 0; j < sphi.size(); ++j)
		b[(j + 1) * m] = -sphi[j];
	for (std::size_t i = 0; i < a.size(); ++i)
		for (std::size_t j = 0; j < b.size(); ++j)
			full[i + j] += a[i] * b[j];
	std::vector<Lag> out;
	for (std::size_t k = 1; k < full.size(); ++k)
		if (full[k] != 0.0)
			out.push_back({k, -full[k]});
	return out;
}

// (1 + sum theta_i B^i)(1 + sum Theta_j B^{jm}) written as 1 + sum b_k B^k.
std::vector<Lag> expand_ma(std::span<const double> theta, std::span<const double> stheta, std::size_t m) {
	std::vector<double> full(theta.size() + stheta.size() * m + 1, 0.0);
	std::vector<double> a(theta.size() + 1, 0.0), b(stheta.size() * m + 1, 0.0);
	a[0] = 1.0;
	for (std::size_t i = 0; i < theta.size(); ++i)
		a[i + 1] = theta[i];
	b[0] = 1.0;
	for (std::size_t j = 0; j < stheta.size(); ++j)
		b[(j + 1) * m] = stheta[j];
	for (std::size_t i = 0; i < a.size(); ++i)
		for (std::size_t j = 0; j < b.size(); ++j)
			full[i + j] += a[i] * b[j];
	std::vector<Lag> out;
	for (std::size_t k = 1; k < full.size(); ++k)
		if (full[k] != 0.0)
			out.push_back({k, full[k]});
	return out;
}

std::size_t max_lag(const std::vector<Lag> &p) { return p.empty() ? 0 : p.back().lag; }

std::vector<double> dense(const std::vector<Lag> &p, std::size_t len) {
	std::vector<double> out(len, 0.0);
	for (const auto &l : p)
		if (l.lag <= len)
			out[l.lag - 1] = l.coef;
	return out;
}

std::vector<double> negate(std::span<const double> x) {
	std::vector<double> out(x.begin(), x.end());
	for (double &v : out)
		v = -v;
	return out;
}

struct Coefs {
	std::vector<double> ar, ma, sar, sma;
	double mu = 0.0;
};

struct Layout {
	Order order;
	bool constant;
	std::size_t size() const {
		return static_cast<std::size_t>(order.p + order.q + order.P + order.Q) + (constant ? 1 : 0);
	}
	Coefs unpack(std::span<const double> x) const {
		Coefs c;
		std::size_t i = 0;
		auto take = [&](int count, std::vector<double> &dst) {
			dst.assign(x.begin() + static_cast<std::ptrdiff_t>(i),
			           x.begin() + static_cast<std::ptrdiff_t>(i + static_cast<std::size_t>(count)));
			i += static_cast<std::size_t>(count);
		};
		take(order.p, c.ar);
		take(order.q, c.ma);
		take(order.P, c.sar);
		take(order.Q, c.sma);
		c.mu = constant ? x[i] : 0.0;
		return c;
	}
};

// Smallest root modulus of 1 + c_1 z + ... + c_k z^k; infinity for a constant polynomial.
double min_root_modulus(std::span<const double> c) {
	std::size_t k = c.size();
	while (k > 0 && c[k - 1] == 0.0)
		--k;
	if (k == 0)
		return kInf;
	// Reciprocal roots are the eigenvalues of the companion matrix of z^k + c_1 z^{k-1} + ... + c_k.
	Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
	for (std::size_t j = 0; j < k; ++j)
		companion(0, static_cast<Eigen::Index>(j)) = -c[j];
	for (std::size_t i = 1; i < k; ++i)
		companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
	const Eigen::VectorXcd eig = companion.eigenvalues();
	double largest = 0.0;
	for (Eigen::Index i = 0; i < eig.size(); ++i)
		largest = std::max(largest, std::abs(eig[i]));
	return largest > 0.0 ? 1.0 / largest : kInf;
}

// Candidate models with roots this close to the unit circle are discarded, as
// automatic ARIMA procedures customarily do.
constexpr double kMinRoot = 1.01;

bool well_conditioned(const Coefs &c, std::size_t m) {
	const auto ar = expand_ar(c.ar, c.sar, m);
	const auto ma = expand_ma(c.ma, c.sma, m);
	auto ar_dense = negate(dense(ar, max_lag(ar)));
	return min_root_modulus(ar_dense) > kMinRoot && min_root_modulus(dense(ma, max_lag(ma))) > kMinRoot;
}

bool admissible(const Coefs &c) {
	return stats::is_stationary(c.ar) && stats::is_stationary(c.sar) &&
	       stats::is_stationary(negate(c.ma)) && stats::is_stationary(negate(c.sma));
}

// Conditional residuals for t >= start; earlier residuals are zero.
double css(std::span<const double> w, const std::vector<Lag> &ar, const std::vector<Lag> &ma, double mu,
           std::size_t start, std::vector<double> *residuals = nullptr) {
	const std::size_t n = w.size();
	std::vector<double> e(n, 0.0);
	double sse = 0.0;
	for (std::size_t t = start; t < n; ++t) {
		double v = w[t] - mu;
		for (const auto &l : ar)
			v -= l.coef * (w[t - l.lag] - mu);
		for (const auto &l : ma) {
			if (l.lag > t)
				break;
			v -= l.coef * e[t - l.lag];
		}
		e[t] = v;
		sse += v * v;
	}
	if (residuals)
		*residuals = std::move(e);
	return sse;
}

struct KalmanResult {
	double ssq = 0.0;   // sum v^2 / F
	double sumlog = 0.0; // sum log F
	std::size_t n = 0;
};

// Exact Gaussian likelihood of a zero-mean ARMA in Harvey state-space form.
KalmanResult kalman(std::span<const double> x, const std::vector<Lag> &ar, const std::vector<Lag> &ma) {
	const std::size_t r = std::max(max_lag(ar), max_lag(ma) + 1);
	const auto ri = static_cast<Eigen::Index>(r);
	const auto phi = dense(ar, r);
	const auto theta = dense(ma, r - 1);
	Eigen::MatrixXd T = Eigen::MatrixXd::Zero(ri, ri);
	for (std::size_t i = 0; i < r; ++i)
		T(static_cast<Eigen::Index>(i), 0) = phi[i];
	for (std::size_t i = 0; i + 1 < r; ++i)
		T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = 1.0;
	Eigen::VectorXd R(ri);
	R(0) = 1.0;
	for (std::size_t i = 1; i < r; ++i)
		R(static_cast<Eigen::Index>(i)) = theta[i - 1];
	const Eigen::MatrixXd RR = R * R.transpose();

	// Stationary covariance by doubling: P = sum_k T^k RR' T'^k.
	Eigen::MatrixXd P = RR, A = T;
	for (int it = 0; it < 64; ++it) {
		P += A * P * A.transpose();
		A = A * A;
		if (A.cwiseAbs().maxCoeff() < 1e-14)
			break;
	}

	KalmanResult out;
	Eigen::VectorXd a = Eigen::VectorXd::Zero(ri);
	bool steady = false;
	Eigen::VectorXd K_steady;
	double F_steady = 1.0;
	for (std::size_t t = 0; t < x.size(); ++t) {
		const double v = x[t] - a(0);
		if (!steady) {
			const double F = P(0, 0);
			if (!(F > 0.0))
				return {kInf, 0.0, x.size()};
			const Eigen::VectorXd K = P.col(0) / F;
			out.ssq += v * v / F;
			out.sumlog += std::log(F);
			a = T * (a + K * v);
			Eigen::MatrixXd Pu = P - K * P.row(0);
			Eigen::MatrixXd Pn = T * Pu * T.transpose() + RR;
			if ((Pn - P).cwiseAbs().maxCoeff() < 1e-11 * std::max(1.0, P(0, 0))) {
				steady = true;
				F_steady = Pn(0, 0);
				K_steady = Pn.col(0) / F_steady;
			}
			P = std::move(Pn);
		} else {
			out.ssq += v * v / F_steady;
			out.sumlog += std::log(F_steady);
			a = T * (a + K_steady * v);
		}
	}
	out.n = x.size();
	return out;
}

double sse_floor(std::span<const double> w) {
	double scale = stats::sd(w);
	if (!(scale > 0.0))
		scale = std::max(1e-8, std::abs(stats::mean(w)) * 1e-3);
	return static_cast<double>(w.size()) * (1e-10 * scale) * (1e-10 * scale);
}

std::vector<double> difference(std::span<const double> y, int d, int D, std::size_t m) {
	std::vector<double> w(y.begin(), y.end());
	for (int i = 0; i < D; ++i)
		w = stats::diff(w, static_cast<int>(m));
	for (int i = 0; i < d; ++i)
		w = stats::diff(w, 1);
	return w;
}

struct CssFit {
	Coefs coefs;
	double sse = kInf;
	std::size_t n_eff = 0;
};

CssFit fit_css(std::span<const double> w, const Layout &layout, std::size_t start) {
	const auto m = static_cast<std::size_t>(std::max(layout.order.period, 1));
	const std::size_t dim = layout.size();
	std::vector<double> x0(dim, 0.0), step(dim, 0.1);
	const double wsd = std::max(stats::sd(w), 1e-8);
	if (layout.constant) {
		x0[dim - 1] = stats::mean(w);
		step[dim - 1] = 0.1 * wsd;
	}
	auto objective = [&](std::span<const double> x) {
		const Coefs c = layout.unpack(x);
		if (!admissible(c))
			return kInf;
		return css(w, expand_ar(c.ar, c.sar, m), expand_ma(c.ma, c.sma, m), c.mu, start);
	};
	CssFit fit;
	fit.n_eff = w.size() - start;
	if (dim == 0) {
		fit.sse = objective(x0);
		fit.coefs = layout.unpack(x0);
		return fit;
	}
	optim::NelderMeadOptions opts;
	opts.max_evaluations = 200 * static_cast<int>(dim) + 200;
	opts.rel_tol = 1e-9;
	opts.abs_tol = sse_floor(w);
	auto best = optim::nelder_mead(objective, x0, step, opts);
	fit.sse = best.value;
	fit.coefs = layout.unpack(best.x);
	return fit;
}

std::vector<double> pack(const Coefs &c, bool constant) {
	std::vector<double> x;
	x.insert(x.end(), c.ar.begin(), c.ar.end());
	x.insert(x.end(), c.ma.begin(), c.ma.end());
	x.insert(x.end(), c.sar.begin(), c.sar.end());
	x.insert(x.end(), c.sma.begin(), c.sma.end());
	if (constant)
		x.push_back(c.mu);
	return x;
}

double aicc_value(double minus2loglik, int k, double n) {
	const double kd = k;
	if (n - kd - 1.0 <= 0.0)
		return kInf;
	return minus2loglik + 2.0 * kd + 2.0 * kd * (kd + 1.0) / (n - kd - 1.0);
}

Model finalize(std::span<const double> y, std::vector<double> w, const Order &order, bool constant,
               const Coefs &start_coefs) {
	const auto m = static_cast<std::size_t>(std::max(order.period, 1));
	const Layout layout{order, constant};
	const std::size_t n = w.size();

	auto ml_objective = [&](std::span<const double> x) {
		const Coefs c = layout.unpack(x);
		if (!admissible(c))
			return kInf;
		std::vector<double> centred(w);
		for (double &v : centred)
			v -= c.mu;
		const auto k = kalman(centred, expand_ar(c.ar, c.sar, m), expand_ma(c.ma, c.sma, m));
		if (!std::isfinite(k.ssq))
			return kInf;
		const double s2 = std::max(k.ssq / static_cast<double>(n), 1e-300);
		return static_cast<double>(n) * std::log(s2) + k.sumlog;
	};

	std::vector<double> x = pack(start_coefs, constant);
	double value = ml_objective(x);
	if (!x.empty()) {
		std::vector<double> step(x.size(), 0.05);
		if (constant)
			step.back() = 0.05 * std::max(stats::sd(w), 1e-8);
		optim::NelderMeadOptions opts;
		opts.max_evaluations = 150 * static_cast<int>(x.size()) + 100;
		opts.rel_tol = 1e-9;
		opts.abs_tol = 1e-9;
		auto best = optim::nelder_mead(ml_objective, x, step, opts);
		if (best.value < value) {
			x = best.x;
			value = best.value;
		}
	}

	Model model;
	model.order = order;
	model.has_constant = constant;
	const Coefs c = layout.unpack(x);
	model.ar = c.ar;
	model.ma = c.ma;
	model.sar = c.sar;
	model.sma = c.sma;
	model.constant = c.mu;
	model.y.assign(y.begin(), y.end());

	const auto arp = expand_ar(c.ar, c.sar, m);
	const auto map = expand_ma(c.ma, c.sma, m);
	css(w, arp, map, c.mu, max_lag(arp), &model.residuals);

	double sigma2 = 0.0, loglik = -kInf;
	if (std::isfinite(value)) {
		std::vector<double> centred(w);
		for (double &v : centred)
			v -= c.mu;
		const auto k = kalman(centred, arp, map);
		sigma2 = k.ssq / static_cast<double>(n);
		const double s2 = std::max(sigma2, 1e-300);
		loglik = -0.5 * (static_cast<double>(n) * std::log(2.0 * std::numbers::pi * s2) + k.sumlog +
		                 static_cast<double>(n));
	} else {
		// Parameters outside the admissible region; fall back to conditional residuals.
		double sse = 0.0;
		for (double e : model.residuals)
			sse += e * e;
		sigma2 = sse / static_cast<double>(std::max<std::size_t>(1, n - max_lag(arp)));
	}
	model.sigma2 = sigma2;
	model.loglik = loglik;
	const int k = static_cast<int>(layout.size()) + 1;
	model.aicc = std::isfinite(loglik) ? aicc_value(-2.0 * loglik, k, static_cast<double>(n)) : kInf;
	model.w = std::move(w);
	return model;
}

} // namespace

FittedMethod Model::describe() const {
	FittedMethod f;
	f.method = "arima(" + std::to_string(order.p) + "," + std::to_string(order.d) + "," +
	           std::to_string(order.q) + ")(" + std::to_string(order.P) + "," +
	           std::to_string(order.D) + "," + std::to_string(order.Q) + ")[" +
	           std::to_string(order.period) + "]";
	for (std::size_t i = 0; i < ar.size(); ++i)
		f.parameters.emplace_back("ar" + std::to_string(i + 1), ar[i]);
	for (std::size_t i = 0; i < ma.size(); ++i)
		f.parameters.emplace_back("ma" + std::to_string(i + 1), ma[i]);
	for (std::size_t i = 0; i < sar.size(); ++i)
		f.parameters.emplace_back("sar" + std::to_string(i + 1), sar[i]);
	for (std::size_t i = 0; i < sma.size(); ++i)
		f.parameters.emplace_back("sma" + std::to_string(i + 1), sma[i]);
	if (has_constant)
		f.parameters.emplace_back(order.d + order.D == 0 ? "mean" : "drift", constant);
	f.sigma2 = sigma2;
	f.aicc = aicc;
	return f;
}

double Model::psi1() const {
	return (ar.empty() ? 0.0 : ar[0]) + (ma.empty() ? 0.0 : ma[0]);
}

double kpss_statistic(std::span<const double> x) {
	const std::size_t n = x.size();
	if (n < 3)
		return 0.0;
	const double mu = stats::mean(x);
	std::vector<double> e(n);
	for (std::size_t t = 0; t < n; ++t)
		e[t] = x[t] - mu;
	const auto lags = static_cast<std::size_t>(std::trunc(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
	double s = 0.0, eta = 0.0;
	for (double v : e) {
		s += v;
		eta += s * s;
	}
	double lrv = 0.0;
	for (double v : e)
		lrv += v * v;
	for (std::size_t j = 1; j <= lags && j < n; ++j) {
		double g = 0.0;
		for (std::size_t t = j; t < n; ++t)
			g += e[t] * e[t - j];
		lrv += 2.0 * (1.0 - static_cast<double>(j) / static_cast<double>(lags + 1)) * g;
	}
	lrv /= static_cast<double>(n);
	if (!(lrv > 0.0))
		return 0.0;
	return eta / (static_cast<double>(n) * static_cast<double>(n) * lrv);
}

int ndiffs(std::span<const double> x) {
	std::vector<double> w(x.begin(), x.end());
	int d = 0;
	while (d < 2 && w.size() > 10) {
		if (!(stats::sd(w) > 0.0))
			break;
		if (kpss_statistic(w) < kKpssCritical5)
			break;
		w = stats::diff(w, 1);
		++d;
	}
	return d;
}

int nsdiffs(std::span<const double> x, int period) {
	if (period <= 1 || x.size() < 2 * static_cast<std::size_t>(period) + 1)
		return 0;
	return seasonal_strength(stl_decompose(x, period)) >= 0.64 ? 1 : 0;
}

Model fit(std::span<const double> y, const Order &order, bool include_constant) {
	const auto m = static_cast<std::size_t>(std::max(order.period, 1));
	if ((order.P > 0 || order.Q > 0 || order.D > 0) && m < 2)
		throw MethodFailed("auto-arima", "seasonal terms need period > 1");
	auto w = difference(y, order.d, order.D, m);
	const std::size_t start = static_cast<std::size_t>(order.p) + static_cast<std::size_t>(order.P) * m;
	const bool constant = include_constant && order.d + order.D <= 1;
	const Layout layout{order, constant};
	if (w.size() < start + layout.size() + 3)
		throw MethodFailed("auto-arima", "series too short for the requested order");
	const CssFit cfit = fit_css(w, layout, start);
	if (!std::isfinite(cfit.sse))
		throw MethodFailed("auto-arima", "CSS estimation failed");
	return finalize(y, std::move(w), order, constant, cfit.coefs);
}

Model fit_auto(std::span<const double> y, int period) {
	if (y.size() < 10)
		throw MethodFailed("auto-arima", "need at least 10 observations");
	const auto m = static_cast<std::size_t>(std::max(period, 1));
	const int D = nsdiffs(y, period);
	std::vector<double> sdiffed(y.begin(), y.end());
	if (D == 1)
		sdiffed = stats::diff(sdiffed, static_cast<int>(m));
	const int d = ndiffs(sdiffed);
	auto w = difference(y, d, D, m);
	const bool constant = d + D <= 1;

	const bool seasonal_terms = m > 1 && w.size() >= 3 * m + 8;
	const std::size_t start = 3 + (seasonal_terms ? m : 0);
	if (w.size() < start + 4)
		throw MethodFailed("auto-arima", "series too short after differencing");
	const double n_eff = static_cast<double>(w.size() - start);
	const double floor = sse_floor(w);

	struct Candidate {
		double aicc;
		Order order;
		Coefs coefs;
	};
	std::vector<Candidate> candidates;
	const int max_seasonal = seasonal_terms ? 1 : 0;
	auto key = [](const Order &o) { return ((o.p * 4 + o.q) * 2 + o.P) * 2 + o.Q; };
	std::vector<char> visited(64, 0);
	// Fits an order once; returns its CSS AICc (infinity when unusable).
	auto consider = [&](int p, int q, int P, int Q) {
		if (p < 0 || q < 0 || P < 0 || Q < 0 || p > 3 || q > 3 || P > max_seasonal || Q > max_seasonal)
			return kInf;
		const Order order{p, d, q, P, D, Q, period};
		if (visited[static_cast<std::size_t>(key(order))])
			return kInf;
		visited[static_cast<std::size_t>(key(order))] = 1;
		const Layout layout{order, constant};
		const int k = static_cast<int>(layout.size()) + 1;
		if (n_eff - k - 1.0 <= 0.0)
			return kInf;
		const CssFit cfit = fit_css(w, layout, start);
		if (!std::isfinite(cfit.sse) || !well_conditioned(cfit.coefs, m))
			return kInf;
		const double lik = n_eff * std::log(std::max(cfit.sse, floor) / n_eff);
		candidates.push_back({aicc_value(lik, k, n_eff), order, cfit.coefs});
		return candidates.back().aicc;
	};

	// Stepwise search: four starting models, then single and paired order moves
	// around the incumbent until none improves.
	consider(2, 2, max_seasonal, max_seasonal);
	consider(0, 0, 0, 0);
	consider(1, 0, max_seasonal, 0);
	consider(0, 1, 0, max_seasonal);
	auto incumbent = [&]() -> const Candidate * {
		const Candidate *best = nullptr;
		for (const auto &c : candidates)
			if (!best || c.aicc < best->aicc)
				best = &c;
		return best;
	};
	for (int iter = 0; iter < 100; ++iter) {
		const Candidate *cur = incumbent();
		if (!cur)
			break;
		const Order o = cur->order;
		const double current = cur->aicc;
		static constexpr int kMoves[][4] = {{-1, 0, 0, 0}, {1, 0, 0, 0},  {0, -1, 0, 0}, {0, 1, 0, 0},
		                                    {-1, -1, 0, 0}, {1, 1, 0, 0}, {0, 0, -1, 0}, {0, 0, 1, 0},
		                                    {0, 0, 0, -1}, {0, 0, 0, 1},  {0, 0, -1, -1}, {0, 0, 1, 1}};
		bool improved = false;
		for (const auto &mv : kMoves) {
			if (consider(o.p + mv[0], o.q + mv[1], o.P + mv[2], o.Q + mv[3]) < current) {
				improved = true;
				break;
			}
		}
		if (!improved)
			break;
	}
	std::stable_sort(candidates.begin(), candidates.end(),
	                 [](const Candidate &a, const Candidate &b) { return a.aicc < b.aicc; });

	// The best few CSS candidates are refined by maximum likelihood and compared again.
	constexpr std::size_t kRefine = 3;
	std::optional<Model> best;
	std::size_t refined = 0;
	for (const auto &cand : candidates) {
		if (refined == kRefine)
			break;
		Model model = finalize(y, w, cand.order, constant, cand.coefs);
		const Coefs fitted{model.ar, model.ma, model.sar, model.sma, model.constant};
		if (!std::isfinite(model.aicc) || !well_conditioned(fitted, m))
			continue;
		++refined;
		if (!best || model.aicc < best->aicc)
			best = std::move(model);
	}
	if (!best) {
		const Order white{0, d, 0, 0, D, 0, period};
		const CssFit cfit = fit_css(w, Layout{white, constant}, start);
		if (!std::isfinite(cfit.sse))
			throw MethodFailed("auto-arima", "no candidate model converged");
		best = finalize(y, std::move(w), white, constant, cfit.coefs);
	}
	return std::move(*best);
}

ets::PointVariance forecast(const Model &model, int horizon) {
	const auto h = static_cast<std::size_t>(horizon);
	const auto m = static_cast<std::size_t>(std::max(model.order.period, 1));
	const auto arp = expand_ar(model.ar, model.sar, m);
	const auto map = expand_ma(model.ma, model.sma, m);
	const std::size_t N = model.w.size();

	std::vector<double> w_ext(model.w);
	std::vector<double> e_ext(model.residuals);
	w_ext.resize(N + h);
	e_ext.resize(N + h, 0.0);
	for (std::size_t j = 0; j < h; ++j) {
		const std::size_t t = N + j;
		double v = model.constant;
		for (const auto &l : arp)
			if (l.lag <= t)
				v += l.coef * (w_ext[t - l.lag] - model.constant);
		for (const auto &l : map)
			if (l.lag <= t)
				v += l.coef * e_ext[t - l.lag];
		w_ext[t] = v;
	}

	// Differencing operator (1 - B)^d (1 - B^m)^D as 1 + sum delta_i B^i.
	std::vector<double> delta{1.0};
	auto multiply = [&](std::size_t lag) {
		std::vector<double> out(delta.size() + lag, 0.0);
		for (std::size_t i = 0; i < delta.size(); ++i) {
			out[i] += delta[i];
			out[i + lag] -= delta[i];
		}
		delta = std::move(out);
	};
	for (int i = 0; i < model.order.D; ++i)
		multiply(m);
	for (int i = 0; i < model.order.d; ++i)
		multiply(1);
	const std::size_t dlen = delta.size() - 1;

	ets::PointVariance out;
	out.mean.resize(h);
	out.variance.resize(h);
	std::vector<double> y_ext(model.y);
	const std::size_t n = model.y.size();
	y_ext.resize(n + h);
	for (std::size_t j = 0; j < h; ++j) {
		const std::size_t t = n + j;
		double v = w_ext[N + j];
		for (std::size_t i = 1; i <= dlen; ++i)
			v -= delta[i] * y_ext[t - i];
		y_ext[t] = v;
		out.mean[j] = v;
	}

	// psi weights of theta(B) / (phi(B) Delta(B)).
	std::vector<double> phi_full(max_lag(arp) + 1, 0.0);
	phi_full[0] = 1.0;
	for (const auto &l : arp)
		phi_full[l.lag] = -l.coef;
	std::vector<double> full(phi_full.size() + dlen, 0.0);
	for (std::size_t i = 0; i < phi_full.size(); ++i)
		for (std::size_t k = 0; k <= dlen; ++k)
			full[i + k] += phi_full[i] * delta[k];
	const auto theta = dense(map, h);
	std::vector<double> psi(h, 0.0);
	psi[0] = 1.0;
	double cum = 0.0;
	for (std::size_t j = 0; j < h; ++j) {
		if (j > 0) {
			double v = theta[j - 1];
			for (std::size_t k = 1; k < full.size() && k <= j; ++k)
				v -= full[k] * psi[j - k];
			psi[j] = v;
		}
		cum += psi[j] * psi[j];
		out.variance[j] = model.sigma2 * cum;
	}
	return out;
}

} // namespace fuma::arima
