#include "fuma/gam.hpp"
#include "fuma/error.hpp"
#include "fuma/optim.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fuma::gam {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct SplineMatrices {
	MatrixXd F; // k x k, maps knot values to second derivatives
	MatrixXd S; // k x k penalty
};

SplineMatrices spline_matrices(std::span<const double> knots) {
	const auto k = static_cast<Eigen::Index>(knots.size());
	if (k < 3)
		throw DataError("cubic spline needs at least 3 knots");
	std::vector<double> h(knots.size() - 1);
	for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
		h[i] = knots[i + 1] - knots[i];
		if (!(h[i] > 0.0))
			throw DataError("spline knots must be strictly increasing");
	}
	MatrixXd D = MatrixXd::Zero(k - 2, k);
	MatrixXd B = MatrixXd::Zero(k - 2, k - 2);
	for (Eigen::Index i = 0; i < k - 2; ++i) {
		const auto u = static_cast<std::size_t>(i);
		D(i, i) = 1.0 / h[u];
		D(i, i + 1) = -1.0 / h[u] - 1.0 / h[u + 1];
		D(i, i + 2) = 1.0 / h[u + 1];
		B(i, i) = (h[u] + h[u + 1]) / 3.0;
		if (i + 1 < k - 2)
			B(i, i + 1) = B(i + 1, i) = h[u + 1] / 6.0;
	}
	const Eigen::LLT<MatrixXd> llt(B);
	const MatrixXd inner = llt.solve(D);
	SplineMatrices out;
	out.F = MatrixXd::Zero(k, k);
	out.F.middleRows(1, k - 2) = inner;
	out.S = D.transpose() * inner;
	out.S = 0.5 * (out.S + out.S.transpose());
	return out;
}

// Basis row for a precomputed F.
void fill_basis_row(std::span<const double> knots, const MatrixXd &F, double x, double *out) {
	const auto k = knots.size();
	std::fill(out, out + k, 0.0);
	auto add_row = [&](std::size_t row, double w) {
		if (w == 0.0)
			return;
		for (std::size_t c = 0; c < k; ++c)
			out[c] += w * F(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c));
	};
	if (x < knots.front()) {
		const double h = knots[1] - knots[0], d = x - knots[0];
		out[0] += 1.0 - d / h;
		out[1] += d / h;
		add_row(0, -d * h / 3.0);
		add_row(1, -d * h / 6.0);
		return;
	}
	if (x > knots.back()) {
		const double h = knots[k - 1] - knots[k - 2], d = x - knots[k - 1];
		out[k - 1] += 1.0 + d / h;
		out[k - 2] += -d / h;
		add_row(k - 2, d * h / 6.0);
		add_row(k - 1, d * h / 3.0);
		return;
	}
	auto j = static_cast<std::size_t>(std::upper_bound(knots.begin(), knots.end(), x) - knots.begin());
	j = std::clamp<std::size_t>(j, 1, k - 1) - 1;
	const double h = knots[j + 1] - knots[j];
	const double am = (knots[j + 1] - x) / h, ap = (x - knots[j]) / h;
	const double em = knots[j + 1] - x, ep = x - knots[j];
	out[j] += am;
	out[j + 1] += ap;
	add_row(j, (em * em * em / h - h * em) / 6.0);
	add_row(j + 1, (ep * ep * ep / h - h * ep) / 6.0);
}

std::vector<double> quantile_knots(std::vector<double> sorted, int k) {
	std::sort(sorted.begin(), sorted.end());
	// Evenly spaced quantiles of the training distribution; falls back to
	// quantiles of the distinct values when ties collapse knots.
	auto at = [](const std::vector<double> &v, double p) {
		const double pos = p * static_cast<double>(v.size() - 1);
		const auto lo = static_cast<std::size_t>(std::floor(pos));
		const auto hi = std::min(lo + 1, v.size() - 1);
		return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
	};
	auto build = [&](const std::vector<double> &v) {
		std::vector<double> knots;
		for (int i = 0; i < k; ++i)
			knots.push_back(at(v, static_cast<double>(i) / (k - 1)));
		knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
		return knots;
	};
	auto knots = build(sorted);
	if (static_cast<int>(knots.size()) == k)
		return knots;
	sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
	return build(sorted);
}

struct Block {
	std::string name;
	std::size_t column = 0;
	std::vector<double> knots;
	MatrixXd Z; // k x (k - 1) sum-to-zero constraint null space
	MatrixXd S; // r x r normalised penalty
	Eigen::Index offset = 0;
	Eigen::Index size = 0;
};

struct Design {
	MatrixXd X;
	VectorXd y;
	std::vector<std::pair<std::string, std::size_t>> linear;
	std::vector<Block> smooths;
	Diagnostics diag;
};

Design build_design(const Data &data, const Options &options) {
	const std::size_t p = data.names.size();
	if (data.smooth.size() != p || data.x.size() != data.rows * p || data.y.size() != data.rows)
		throw DataError("GAM data dimensions are inconsistent");
	if (options.basis_size < 3)
		throw DataError("GAM basis size must be at least 3");
	std::vector<std::size_t> keep;
	for (std::size_t i = 0; i < data.rows; ++i) {
		bool ok = std::isfinite(data.y[i]);
		for (std::size_t j = 0; ok && j < p; ++j)
			ok = std::isfinite(data.x[i * p + j]);
		if (ok)
			keep.push_back(i);
	}
	const auto n = static_cast<Eigen::Index>(keep.size());
	Design d;
	d.diag.rows = keep.size();
	d.diag.small_sample = keep.size() < options.recommended_rows;
	if (n < 3)
		throw InsufficientData("GAM needs at least 3 rows with a finite response");
	d.y.resize(n);
	for (Eigen::Index i = 0; i < n; ++i)
		d.y(i) = data.y[keep[static_cast<std::size_t>(i)]];
	auto column = [&](std::size_t j) {
		VectorXd c(n);
		for (Eigen::Index i = 0; i < n; ++i)
			c(i) = data.x[keep[static_cast<std::size_t>(i)] * p + j];
		return c;
	};

	// Linear block: intercept first, then columns in order, skipping any that
	// are aliased with those already kept.
	std::vector<VectorXd> lin_cols{VectorXd::Ones(n)};
	auto try_linear = [&](std::size_t j, const VectorXd &c) {
		MatrixXd A(n, static_cast<Eigen::Index>(lin_cols.size()) + 1);
		for (std::size_t i = 0; i < lin_cols.size(); ++i)
			A.col(static_cast<Eigen::Index>(i)) = lin_cols[i];
		A.col(A.cols() - 1) = c;
		Eigen::ColPivHouseholderQR<MatrixXd> qr(A);
		qr.setThreshold(1e-10);
		if (qr.rank() < A.cols()) {
			d.diag.dropped.push_back(data.names[j]);
			return;
		}
		lin_cols.push_back(c);
		d.linear.emplace_back(data.names[j], j);
	};

	std::vector<std::pair<std::size_t, std::vector<double>>> smooth_cols;
	for (std::size_t j = 0; j < p; ++j) {
		const VectorXd c = column(j);
		std::vector<double> sorted(c.data(), c.data() + n);
		std::sort(sorted.begin(), sorted.end());
		const auto distinct = static_cast<std::size_t>(
			std::unique(sorted.begin(), sorted.end()) - sorted.begin());
		if (distinct < 2) {
			d.diag.dropped.push_back(data.names[j]);
			continue;
		}
		if (!data.smooth[j]) {
			try_linear(j, c);
			continue;
		}
		const int k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(options.basis_size), distinct));
		auto knots = k >= 3 ? quantile_knots(std::vector<double>(c.data(), c.data() + n), k) : std::vector<double>{};
		if (knots.size() < 3) {
			d.diag.demoted.push_back(data.names[j]);
			try_linear(j, c);
			continue;
		}
		smooth_cols.emplace_back(j, std::move(knots));
	}

	Eigen::Index cols = static_cast<Eigen::Index>(lin_cols.size());
	for (auto &[j, knots] : smooth_cols)
		cols += static_cast<Eigen::Index>(knots.size()) - 1;
	d.X.resize(n, cols);
	for (std::size_t i = 0; i < lin_cols.size(); ++i)
		d.X.col(static_cast<Eigen::Index>(i)) = lin_cols[i];
	Eigen::Index offset = static_cast<Eigen::Index>(lin_cols.size());
	for (auto &[j, knots] : smooth_cols) {
		const auto k = static_cast<Eigen::Index>(knots.size());
		const auto mats = spline_matrices(knots);
		MatrixXd Xb(n, k);
		std::vector<double> row(knots.size());
		for (Eigen::Index i = 0; i < n; ++i) {
			fill_basis_row(knots, mats.F, data.x[keep[static_cast<std::size_t>(i)] * p + j], row.data());
			for (Eigen::Index c = 0; c < k; ++c)
				Xb(i, c) = row[static_cast<std::size_t>(c)];
		}
		// Sum-to-zero over the training rows: Z spans the complement of X^T 1.
		const VectorXd constraint = Xb.transpose() * VectorXd::Ones(n);
		Eigen::HouseholderQR<MatrixXd> qr(constraint);
		const MatrixXd Q = qr.householderQ() * MatrixXd::Identity(k, k);
		Block b;
		b.name = data.names[j];
		b.column = j;
		b.knots = knots;
		b.Z = Q.rightCols(k - 1);
		const MatrixXd Xz = Xb * b.Z;
		b.S = b.Z.transpose() * mats.S * b.Z;
		const double snorm = b.S.norm();
		const double xnorm = (Xz.transpose() * Xz).norm();
		if (snorm > 0.0 && xnorm > 0.0)
			b.S *= xnorm / snorm;
		b.offset = offset;
		b.size = k - 1;
		d.X.middleCols(offset, k - 1) = Xz;
		offset += k - 1;
		d.smooths.push_back(std::move(b));
	}
	if (n <= static_cast<Eigen::Index>(lin_cols.size() + d.smooths.size()))
		throw InsufficientData("GAM has fewer rows than unpenalised coefficients");
	return d;
}

// Solution state of the penalised normal equations for a given set of lambdas.
struct State {
	MatrixXd G; // (X'X + sum lambda S)^-1
	VectorXd beta;
	double trace = 0.0;
	double rss = 0.0;
	bool ridge = false;
};

struct Normal {
	MatrixXd XtX;
	VectorXd Xty;
	double yty = 0.0;
	double n = 0.0;
};

double gcv_of(double n, double rss, double trace) {
	const double dof = n - trace;
	if (!(dof > 1e-8))
		return std::numeric_limits<double>::infinity();
	return n * std::max(rss, 0.0) / (dof * dof);
}

State solve_full(const Normal &ne, const Design &d, std::span<const double> lambdas, const Options &options) {
	MatrixXd M = ne.XtX;
	for (std::size_t t = 0; t < d.smooths.size(); ++t) {
		const auto &b = d.smooths[t];
		M.block(b.offset, b.offset, b.size, b.size) += lambdas[t] * b.S;
	}
	State s;
	const auto p = M.rows();
	Eigen::LLT<MatrixXd> llt(M);
	bool ok = llt.info() == Eigen::Success;
	if (ok) {
		const VectorXd diag = llt.matrixLLT().diagonal();
		ok = diag.minCoeff() > 1e-7 * diag.maxCoeff();
	}
	if (!ok) {
		const double scale = std::max(1.0, M.diagonal().mean());
		M.diagonal().array() += options.ridge * scale;
		llt.compute(M);
		s.ridge = true;
		if (llt.info() != Eigen::Success)
			throw InsufficientData("GAM normal equations are singular even with a ridge");
	}
	s.G = llt.solve(MatrixXd::Identity(p, p));
	s.G = 0.5 * (s.G + s.G.transpose());
	s.beta = s.G * ne.Xty;
	s.trace = (s.G.cwiseProduct(ne.XtX)).sum();
	s.rss = (d.y - d.X * s.beta).squaredNorm();
	return s;
}

// Low-rank update of one smooth's lambda from a base state in which that
// smooth has the smallest lambda, so every update adds a positive
// semi-definite penalty and stays well conditioned. Each evaluation is O(r^3).
class TermUpdate {
public:
	TermUpdate(const Normal &ne, const State &base, const Block &b) : base_(base), b_(b) {
		W_ = base.G.middleCols(b.offset, b.size);
		K_ = W_.middleRows(b.offset, b.size);
		const MatrixXd XW = ne.XtX * W_;
		V_ = W_.transpose() * XW;
		bj_ = base.beta.segment(b.offset, b.size);
		// X'(y - X beta) equals the penalty gradient at the base.
		gw_ = W_.transpose() * ne.Xty - XW.transpose() * base.beta;
	}

	/// RSS and tr(A) after adding delta >= 0 times the penalty.
	std::pair<double, double> evaluate(double delta) const {
		const auto r = b_.size;
		const MatrixXd C = delta * b_.S;
		const MatrixXd IKC = MatrixXd::Identity(r, r) + K_ * C;
		const MatrixXd CInv = IKC.transpose().partialPivLu().solve(C.transpose()).transpose();
		const VectorXd d = CInv * bj_;
		const double trace = base_.trace - (CInv.cwiseProduct(V_.transpose())).sum();
		const double rss = base_.rss + 2.0 * d.dot(gw_) + d.dot(V_ * d);
		return {rss, trace};
	}

private:
	const State &base_;
	const Block &b_;
	MatrixXd W_, K_, V_;
	VectorXd bj_, gw_;
};

Normal normal_equations(const Design &d) {
	Normal ne;
	ne.XtX = d.X.transpose() * d.X;
	ne.Xty = d.X.transpose() * d.y;
	ne.yty = d.y.squaredNorm();
	ne.n = static_cast<double>(d.X.rows());
	return ne;
}

} // namespace

CubicSpline::CubicSpline(std::vector<double> knots, std::vector<double> values)
	: knots_(std::move(knots)), values_(std::move(values)) {
	if (knots_.size() != values_.size())
		throw DataError("spline knots and values differ in length");
	const auto mats = spline_matrices(knots_);
	const Eigen::Map<const VectorXd> v(values_.data(), static_cast<Eigen::Index>(values_.size()));
	const VectorXd second = mats.F * v;
	second_.assign(second.data(), second.data() + second.size());
}

double CubicSpline::operator()(double x) const {
	const auto k = knots_.size();
	const auto &t = knots_;
	const auto &b = values_;
	const auto &c = second_;
	if (x < t.front()) {
		const double h = t[1] - t[0];
		const double slope = (b[1] - b[0]) / h - h * (2.0 * c[0] + c[1]) / 6.0;
		return b[0] + (x - t[0]) * slope;
	}
	if (x > t.back()) {
		const double h = t[k - 1] - t[k - 2];
		const double slope = (b[k - 1] - b[k - 2]) / h + h * (c[k - 2] + 2.0 * c[k - 1]) / 6.0;
		return b[k - 1] + (x - t[k - 1]) * slope;
	}
	auto j = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), x) - t.begin());
	j = std::clamp<std::size_t>(j, 1, k - 1) - 1;
	const double h = t[j + 1] - t[j];
	const double em = t[j + 1] - x, ep = x - t[j];
	return (em * b[j] + ep * b[j + 1]) / h + (em * em * em / h - h * em) * c[j] / 6.0 +
	       (ep * ep * ep / h - h * ep) * c[j + 1] / 6.0;
}

std::vector<double> CubicSpline::basis_row(std::span<const double> knots, double x) {
	const auto mats = spline_matrices(knots);
	std::vector<double> row(knots.size());
	fill_basis_row(knots, mats.F, x, row.data());
	return row;
}

std::vector<double> CubicSpline::penalty(std::span<const double> knots) {
	const auto mats = spline_matrices(knots);
	std::vector<double> out(static_cast<std::size_t>(mats.S.size()));
	for (Eigen::Index i = 0; i < mats.S.rows(); ++i)
		for (Eigen::Index j = 0; j < mats.S.cols(); ++j)
			out[static_cast<std::size_t>(i * mats.S.cols() + j)] = mats.S(i, j);
	return out;
}

double GamModel::predict(std::span<const double> row) const {
	if (row.size() != columns)
		throw DataError("GAM prediction row has " + std::to_string(row.size()) + " values, expected " +
		                std::to_string(columns));
	double f = intercept;
	for (const auto &l : linear)
		f += l.coef * row[l.column];
	for (const auto &s : smooths)
		f += s.spline(row[s.column]);
	return f;
}

double GamModel::predict(const features::FeatureVector &fv) const {
	if (fv.registry_hash != registry_hash)
		throw RegistryMismatch("feature registry hash differs from the one the model was trained with");
	return predict(fv.values);
}

std::vector<double> GamModel::term_values(std::span<const double> row) const {
	std::vector<double> out{intercept};
	for (const auto &l : linear)
		out.push_back(l.coef * row[l.column]);
	for (const auto &s : smooths)
		out.push_back(s.spline(row[s.column]));
	return out;
}

const SmoothTerm *GamModel::smooth(const std::string &name) const {
	for (const auto &s : smooths)
		if (s.name == name)
			return &s;
	return nullptr;
}

std::vector<double> GamModel::partial_effect(const std::string &name, std::span<const double> grid) const {
	const auto *s = smooth(name);
	if (!s)
		throw UnknownFeature("'" + name + "' is not a smooth term of model " + label);
	std::vector<double> out;
	out.reserve(grid.size());
	for (double x : grid)
		out.push_back(s->spline(x));
	return out;
}

Fit fit(const Data &data, const Options &options, std::string label) {
	Design d = build_design(data, options);
	const Normal ne = normal_equations(d);
	const std::size_t terms = d.smooths.size();
	std::vector<double> lambdas(terms, options.fixed_lambda.value_or(1.0));

	State s = solve_full(ne, d, lambdas, options);
	int cycles = 0;
	if (!options.fixed_lambda && terms > 0) {
		double before = gcv_of(ne.n, s.rss, s.trace);
		for (cycles = 1; cycles <= options.max_cycles; ++cycles) {
			for (std::size_t t = 0; t < terms; ++t) {
				const double current = lambdas[t];
				const double lo = std::pow(10.0, options.log10_lambda_lo);
				lambdas[t] = lo;
				const State base = solve_full(ne, d, lambdas, options);
				const TermUpdate update(ne, base, d.smooths[t]);
				auto gcv_at = [&](double log10_lambda) {
					const auto [rss, trace] = update.evaluate(std::max(0.0, std::pow(10.0, log10_lambda) - lo));
					return gcv_of(ne.n, rss, trace);
				};
				double best_log = std::log10(current);
				double best = gcv_at(best_log);
				double grid_best_log = options.log10_lambda_lo, grid_best = std::numeric_limits<double>::infinity();
				for (double g = options.log10_lambda_lo; g <= options.log10_lambda_hi + 1e-9; g += 1.0) {
					const double v = gcv_at(g);
					if (v < grid_best) {
						grid_best = v;
						grid_best_log = g;
					}
				}
				if (grid_best < best) {
					best = grid_best;
					best_log = grid_best_log;
				}
				const auto golden = optim::golden_section(
					gcv_at, std::max(options.log10_lambda_lo, grid_best_log - 1.0),
					std::min(options.log10_lambda_hi, grid_best_log + 1.0), 1e-4, 100);
				if (golden.value < best)
					best_log = golden.x[0];
				lambdas[t] = std::pow(10.0, best_log);
			}
			s = solve_full(ne, d, lambdas, options);
			const double after = gcv_of(ne.n, s.rss, s.trace);
			const bool converged = before - after < options.tolerance * std::max(before, 1e-300);
			before = after;
			if (converged)
				break;
		}
		cycles = std::min(cycles, options.max_cycles);
	}

	Fit out;
	out.diagnostics = std::move(d.diag);
	out.diagnostics.ridge = s.ridge;
	out.diagnostics.cycles = cycles;
	const VectorXd fitted = d.X * s.beta;
	const double rss = (d.y - fitted).squaredNorm();
	out.fitted.assign(fitted.data(), fitted.data() + fitted.size());
	out.diagnostics.gcv = gcv_of(ne.n, rss, s.trace);
	out.diagnostics.edf_total = s.trace;
	out.diagnostics.residual_variance = rss / std::max(ne.n - s.trace, 1e-12);

	const MatrixXd influence = s.G * ne.XtX;
	GamModel &m = out.model;
	m.label = std::move(label);
	m.columns = data.names.size();
	m.intercept = s.beta(0);
	for (std::size_t i = 0; i < d.linear.size(); ++i)
		m.linear.push_back({d.linear[i].first, d.linear[i].second, s.beta(static_cast<Eigen::Index>(i) + 1)});
	for (std::size_t t = 0; t < terms; ++t) {
		const auto &b = d.smooths[t];
		const VectorXd values = b.Z * s.beta.segment(b.offset, b.size);
		SmoothTerm term;
		term.name = b.name;
		term.column = b.column;
		term.spline = CubicSpline(b.knots, std::vector<double>(values.data(), values.data() + values.size()));
		term.lambda = lambdas[t];
		term.edf = influence.diagonal().segment(b.offset, b.size).sum();
		m.smooths.push_back(std::move(term));
	}
	return out;
}

Data feature_data(std::span<const features::FeatureVector> rows, std::span<const double> y) {
	if (rows.size() != y.size())
		throw DataError("feature rows and responses differ in number");
	Data data;
	for (const auto &info : features::registry()) {
		data.names.emplace_back(info.name);
		data.smooth.push_back(info.kind != features::Kind::Dummy);
	}
	data.rows = rows.size();
	data.x.reserve(rows.size() * data.names.size());
	for (const auto &fv : rows) {
		if (fv.values.size() != data.names.size() || fv.registry_hash != features::registry_hash())
			throw RegistryMismatch("feature vector does not match the current registry");
		data.x.insert(data.x.end(), fv.values.begin(), fv.values.end());
	}
	data.y.assign(y.begin(), y.end());
	return data;
}

Fit fit_features(std::span<const features::FeatureVector> rows, std::span<const double> y, const Options &options,
                 std::string label) {
	Fit f = fit(feature_data(rows, y), options, std::move(label));
	f.model.registry_hash = features::registry_hash();
	return f;
}

double gcv_direct(const Data &data, std::span<const double> lambdas, const Options &options) {
	const Design d = build_design(data, options);
	if (lambdas.size() != d.smooths.size())
		throw DataError("one lambda per smooth term is required");
	MatrixXd M = d.X.transpose() * d.X;
	for (std::size_t t = 0; t < d.smooths.size(); ++t) {
		const auto &b = d.smooths[t];
		M.block(b.offset, b.offset, b.size, b.size) += lambdas[t] * b.S;
	}
	const Eigen::ColPivHouseholderQR<MatrixXd> qr(M);
	const MatrixXd hat = d.X * qr.solve(d.X.transpose());
	const double n = static_cast<double>(d.X.rows());
	const double rss = (d.y - hat * d.y).squaredNorm();
	return gcv_of(n, rss, hat.trace());
}

} // namespace fuma::gam
