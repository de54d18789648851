#pragma once

#include <span>
#include <string_view>

namespace edc::stats {

/// Outcome of a two-sample comparison under minimization (smaller is better).
enum class Verdict { A_better, B_better, NoDifference };

/// Table mark for sample B measured against reference sample A:
/// "+" B better, "-" B worse, "≈" no significant difference.
std::string_view mark(Verdict v);

double mean(std::span<const double> xs);
/// Sample standard deviation (divisor n - 1); 0 for fewer than two values.
double sample_std(std::span<const double> xs);
double median(std::span<const double> xs);

struct RankSumResult {
  double p_value = 1.0;
  double u_statistic = 0.0;  // Mann-Whitney U of sample a
  double z = 0.0;
  Verdict verdict = Verdict::NoDifference;
};

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) test. Midranks for ties, normal
/// approximation with tie-corrected variance and a 0.5 continuity correction.
/// When p < alpha the sample with the smaller rank sum is the better one.
/// Throws std::invalid_argument if either sample has fewer than 3 values.
RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b,
                            double alpha = 0.05);

struct EffectSize {
  double d = 0.0;  // (mean(a) - mean(b)) / pooled sd; +-inf when sd is 0 and means differ
  Verdict verdict = Verdict::NoDifference;
};

/// Cohen's d with pooled standard deviation. |d| < 0.2 counts as no difference.
/// Throws std::invalid_argument if either sample has fewer than 2 values.
EffectSize cohens_d(std::span<const double> a, std::span<const double> b);

inline constexpr double kNegligibleEffect = 0.2;

}  // namespace edc::stats
