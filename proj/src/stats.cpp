#include "edc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace edc::stats {

std::string_view mark(Verdict v) {
  switch (v) {
    case Verdict::A_better: return "-";
    case Verdict::B_better: return "+";
    case Verdict::NoDifference: break;
  }
  return "≈";
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double median(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() < 3 || b.size() < 3) {
    throw std::invalid_argument("rank-sum test needs at least 3 values per sample");
  }
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t total = na + nb;

  struct Item {
    double value;
    bool from_a;
  };
  std::vector<Item> pooled;
  pooled.reserve(total);
  for (double x : a) pooled.push_back({x, true});
  for (double x : b) pooled.push_back({x, false});
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const Item& l, const Item& r) { return l.value < r.value; });

  double rank_sum_a = 0.0;
  double tie_term = 0.0;  // sum of (t^3 - t) over tie groups
  for (std::size_t i = 0; i < total;) {
    std::size_t j = i;
    while (j < total && pooled[j].value == pooled[i].value) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].from_a) rank_sum_a += midrank;
    }
    i = j;
  }

  const double dna = static_cast<double>(na);
  const double dnb = static_cast<double>(nb);
  const double dn = static_cast<double>(total);

  RankSumResult result;
  result.u_statistic = rank_sum_a - dna * (dna + 1.0) / 2.0;
  const double expected = dna * dnb / 2.0;
  const double variance = dna * dnb / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  if (!(variance > 0.0)) return result;  // every value identical

  const double deviation = result.u_statistic - expected;
  const double corrected = std::max(std::abs(deviation) - 0.5, 0.0);
  result.z = std::copysign(corrected / std::sqrt(variance), deviation);
  result.p_value = std::min(1.0, std::erfc(corrected / std::sqrt(variance) / std::sqrt(2.0)));
  if (result.p_value < alpha) {
    result.verdict = deviation < 0.0 ? Verdict::A_better : Verdict::B_better;
  }
  return result;
}

EffectSize cohens_d(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("Cohen's d needs at least 2 values per sample");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double sa = sample_std(a);
  const double sb = sample_std(b);
  const double pooled = std::sqrt(((na - 1.0) * sa * sa + (nb - 1.0) * sb * sb) / (na + nb - 2.0));
  const double diff = mean(a) - mean(b);

  EffectSize out;
  if (pooled == 0.0) {
    if (diff == 0.0) return out;
    out.d = std::copysign(std::numeric_limits<double>::infinity(), diff);
  } else {
    out.d = diff / pooled;
  }
  if (std::abs(out.d) >= kNegligibleEffect) {
    out.verdict = out.d < 0.0 ? Verdict::A_better : Verdict::B_better;
  }
  return out;
}

}  // namespace edc::stats
