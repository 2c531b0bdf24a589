#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fuma::mcb {

/// P(range of k iid standard normals <= q), infinite degrees of freedom.
double studentized_range_cdf(double q, int k);
/// Inverse of studentized_range_cdf in q.
double studentized_range_quantile(double p, int k);
/// 95% studentized-range quantile for k models: tabulated for k <= 12,
/// computed by quadrature above.
double critical_range(int k);

struct Result {
	std::vector<std::string> models;
	std::vector<double> mean_rank;
	/// Common half-width 0.5 * q * sqrt(k (k + 1) / (6 n)), q = critical_range(k) / sqrt(2).
	double half_width = 0.0;
	std::size_t series = 0;
	std::size_t dropped = 0;
	std::size_t best = 0;
	/// Interval overlaps the best model's interval.
	std::vector<bool> not_different;
};

/// Multiple comparisons with the best on per-series scores (lower is better).
/// scores[i][j] is the score of model j on series i; rows with a non-finite
/// entry are dropped. Throws InsufficientData with fewer than 2 models or 10
/// complete series.
Result test(std::vector<std::string> models, std::span<const std::vector<double>> scores);

/// Average ranks of one row (1 = smallest), ties sharing their mean rank.
std::vector<double> rank_row(std::span<const double> row);

} // namespace fuma::mcb
