/*
 * Copyright (C) 2026 The gazemap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gazemap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>

#include "gazemap/aggregate.hpp"

namespace gazemap {
namespace {

// Counts up to C(60, 30) fit in 64 bits; larger exact requests fall back to
// the normal approximation.
constexpr int kMaxExactN = 60;

void require_nonempty(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw Error(ErrorCode::kEmptySample, "both samples must be non-empty");
}

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double pooled_sd(const SampleSummary& a, const SampleSummary& b) {
  if (a.n < 2 || b.n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "each group needs at least two observations");
  }
  if (!(a.sd >= 0.0) || !(b.sd >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "standard deviations must be non-negative");
  }
  const double pooled_var = ((a.n - 1) * a.sd * a.sd + (b.n - 1) * b.sd * b.sd) /
                            static_cast<double>(a.n + b.n - 2);
  if (pooled_var <= 0.0) {
    throw Error(ErrorCode::kDegenerateVariance, "both groups have zero variance");
  }
  return std::sqrt(pooled_var);
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Bounded index by multiply-high; the bias for sample sizes this small is
// far below anything a percentile interval can resolve.
std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

void resample(std::mt19937_64& rng, std::span<const double> from, std::vector<double>& into) {
  into.resize(from.size());
  for (auto& v : into) v = from[draw_index(rng, from.size())];
}

// Runs `stat(rng)` once per resample with a generator derived from (seed, r).
template <typename Stat>
std::vector<double> bootstrap(std::uint32_t resamples, std::uint64_t seed, unsigned threads,
                              Stat stat) {
  std::vector<double> out(resamples);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      std::mt19937_64 rng(splitmix64(seed ^ splitmix64(r)));
      out[r] = stat(rng);
    }
  };
  if (threads <= 1 || resamples < 2) {
    run(0, resamples);
  } else {
    std::vector<std::future<void>> jobs;
    const std::size_t chunk = (resamples + threads - 1) / threads;
    for (std::size_t b = 0; b < resamples; b += chunk) {
      jobs.push_back(std::async(std::launch::async, run, b, std::min<std::size_t>(b + chunk, resamples)));
    }
    for (auto& j : jobs) j.get();
  }
  return out;
}

std::pair<double, double> percentile_interval(std::vector<double> stats, double level) {
  std::sort(stats.begin(), stats.end());
  const double tail = (1.0 - level) / 2.0;
  return {percentile_sorted(stats, tail), percentile_sorted(stats, 1.0 - tail)};
}

void check_bootstrap_args(double level, std::uint32_t resamples) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "confidence level must lie in (0,1)");
  }
  if (resamples == 0) throw Error(ErrorCode::kInvalidArgument, "resamples must be >= 1");
}

}  // namespace

SampleSummary summarize(std::span<const double> x) {
  SampleSummary s;
  s.n = static_cast<std::int64_t>(x.size());
  if (x.empty()) return s;
  s.mean = mean_of(x);
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(x.size() - 1));
  }
  return s;
}

std::vector<double> midranks(std::span<const double> values, std::vector<std::int64_t>* tie_sizes) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    if (tie_sizes && j > i) tie_sizes->push_back(static_cast<std::int64_t>(j - i + 1));
    i = j + 1;
  }
  return ranks;
}

double mann_whitney_exact_p(double u_min, std::int64_t n1, std::int64_t n2) {
  // counts[i][j][u]: orderings of i x's and j y's with U_x = u. The largest
  // element is either an x (beating all j y's) or a y.
  std::vector<std::vector<std::vector<std::uint64_t>>> counts(
      n1 + 1, std::vector<std::vector<std::uint64_t>>(n2 + 1));
  for (std::int64_t i = 0; i <= n1; ++i) {
    for (std::int64_t j = 0; j <= n2; ++j) {
      auto& c = counts[i][j];
      c.assign(static_cast<std::size_t>(i * j + 1), 0);
      if (i == 0 || j == 0) {
        c[0] = 1;
        continue;
      }
      const auto& with_x = counts[i - 1][j];
      const auto& with_y = counts[i][j - 1];
      for (std::size_t u = 0; u < c.size(); ++u) {
        if (u >= static_cast<std::size_t>(j) && u - j < with_x.size()) c[u] += with_x[u - j];
        if (u < with_y.size()) c[u] += with_y[u];
      }
    }
  }
  const auto& dist = counts[n1][n2];
  std::uint64_t total = 0, tail = 0;
  for (std::size_t u = 0; u < dist.size(); ++u) {
    total += dist[u];
    if (static_cast<double>(u) <= u_min) tail += dist[u];
  }
  return std::min(1.0, 2.0 * static_cast<double>(tail) / static_cast<double>(total));
}

StatResult mann_whitney_u(std::span<const double> x, std::span<const double> y,
                          const StatsOptions& options) {
  require_nonempty(x, y);
  const auto n1 = static_cast<std::int64_t>(x.size());
  const auto n2 = static_cast<std::int64_t>(y.size());
  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  std::vector<std::int64_t> ties;
  const auto ranks = midranks(pooled, &ties);
  const double r1 = std::accumulate(ranks.begin(), ranks.begin() + n1, 0.0);
  const double u1 = r1 - static_cast<double>(n1 * (n1 + 1)) / 2.0;
  const double u2 = static_cast<double>(n1 * n2) - u1;
  StatResult res;
  res.method = "mann_whitney_u";
  res.statistic = std::min(u1, u2);
  res.n1 = n1;
  res.n2 = n2;
  const std::int64_t n = n1 + n2;
  const bool exact = ties.empty() && n <= options.mwu_exact_cutoff && n <= kMaxExactN;
  if (exact) {
    res.p_value = mann_whitney_exact_p(res.statistic, n1, n2);
    res.notes = "exact two-sided";
  } else {
    double tie_term = 0.0;
    for (auto t : ties) tie_term += static_cast<double>(t * t * t - t);
    const double nn = static_cast<double>(n);
    const double var = static_cast<double>(n1 * n2) / 12.0 *
                       ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
    const double mu = static_cast<double>(n1 * n2) / 2.0;
    if (var <= 0.0) {
      res.p_value = 1.0;
    } else {
      const double z = std::max(0.0, std::abs(u1 - mu) - 0.5) / std::sqrt(var);
      res.p_value = std::min(1.0, dist::normal_two_sided(z));
    }
    res.notes = ties.empty() ? "normal approximation, continuity corrected"
                             : "normal approximation, tie and continuity corrected (ties present)";
  }
  return res;
}

StatResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                const StatsOptions& options) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument, "paired samples must have equal length");
  }
  if (x.empty()) throw Error(ErrorCode::kEmptySample, "paired samples are empty");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) diffs.push_back(x[i] - y[i]);
  }
  if (diffs.empty()) throw Error(ErrorCode::kAllZeroDifferences, "every paired difference is zero");
  std::vector<double> magnitudes(diffs.size());
  std::transform(diffs.begin(), diffs.end(), magnitudes.begin(), [](double d) { return std::abs(d); });
  std::vector<std::int64_t> ties;
  const auto ranks = midranks(magnitudes, &ties);
  double w_plus = 0.0;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (diffs[i] > 0) w_plus += ranks[i];
  }
  const auto n = static_cast<std::int64_t>(diffs.size());
  const double total = static_cast<double>(n * (n + 1)) / 2.0;
  const double w = std::min(w_plus, total - w_plus);
  StatResult res;
  res.method = "wilcoxon_signed_rank";
  res.statistic = w;
  res.n1 = static_cast<std::int64_t>(x.size());
  res.n2 = static_cast<std::int64_t>(y.size());
  if (n <= options.wilcoxon_exact_cutoff && n <= kMaxExactN) {
    // Subset sums of doubled ranks: midranks are multiples of 1/2.
    std::vector<std::int64_t> doubled(ranks.size());
    std::transform(ranks.begin(), ranks.end(), doubled.begin(),
                   [](double r) { return std::llround(2.0 * r); });
    const std::int64_t max_sum = std::accumulate(doubled.begin(), doubled.end(), std::int64_t{0});
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_sum + 1), 0);
    counts[0] = 1;
    for (auto r : doubled) {
      for (std::int64_t s = max_sum; s >= r; --s) counts[s] += counts[s - r];
    }
    const std::int64_t w2 = std::llround(2.0 * w);
    std::uint64_t tail = 0;
    for (std::int64_t s = 0; s <= w2; ++s) tail += counts[s];
    const double patterns = std::ldexp(1.0, static_cast<int>(n));
    res.p_value = std::min(1.0, 2.0 * static_cast<double>(tail) / patterns);
    res.notes = ties.empty() ? "exact two-sided; zero differences dropped"
                             : "exact two-sided over sign patterns of midranks; zero differences dropped";
  } else {
    double tie_term = 0.0;
    for (auto t : ties) tie_term += static_cast<double>(t * t * t - t);
    const double nn = static_cast<double>(n);
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    if (var <= 0.0) {
      res.p_value = 1.0;
    } else {
      const double z = std::max(0.0, std::abs(w_plus - total / 2.0) - 0.5) / std::sqrt(var);
      res.p_value = std::min(1.0, dist::normal_two_sided(z));
    }
    res.notes = "normal approximation, tie and continuity corrected; zero differences dropped";
  }
  return res;
}

StatResult students_t_summary(const SampleSummary& a, const SampleSummary& b) {
  const double sp = pooled_sd(a, b);
  const double se = sp * std::sqrt(1.0 / static_cast<double>(a.n) + 1.0 / static_cast<double>(b.n));
  StatResult res;
  res.method = "students_t";
  res.statistic = (a.mean - b.mean) / se;
  const double df = static_cast<double>(a.n + b.n - 2);
  res.p_value = dist::student_t_two_sided(res.statistic, df);
  res.effect_size = (a.mean - b.mean) / sp;
  res.n1 = a.n;
  res.n2 = b.n;
  res.notes = "pooled variance, two-sided, df=" + std::to_string(a.n + b.n - 2) +
              "; effect size is Cohen's d";
  return res;
}

StatResult students_t(std::span<const double> x, std::span<const double> y) {
  return students_t_summary(summarize(x), summarize(y));
}

double cohen_d_summary(const SampleSummary& a, const SampleSummary& b) {
  return (a.mean - b.mean) / pooled_sd(a, b);
}

double cohen_d(std::span<const double> x, std::span<const double> y) {
  return cohen_d_summary(summarize(x), summarize(y));
}

namespace {

double sample_variance(std::span<const double> x, double mean) {
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(x.size() - 1);
}

}  // namespace

StatResult bartlett(std::span<const double> x, std::span<const double> y) {
  const auto a = summarize(x);
  const auto b = summarize(y);
  if (a.n < 2 || b.n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "each group needs at least two observations");
  }
  const double va = sample_variance(x, a.mean), vb = sample_variance(y, b.mean);
  if (va <= 0.0 || vb <= 0.0) {
    throw Error(ErrorCode::kDegenerateVariance, "Bartlett's test needs positive variances");
  }
  const double da = static_cast<double>(a.n - 1), db = static_cast<double>(b.n - 1);
  const double dn = da + db;  // N - k
  const double sp2 = (da * va + db * vb) / dn;
  const double numerator = da * std::log(sp2 / va) + db * std::log(sp2 / vb);
  const double correction = 1.0 + (1.0 / 3.0) * (1.0 / da + 1.0 / db - 1.0 / dn);
  StatResult res;
  res.method = "bartlett";
  res.statistic = std::max(0.0, numerator / correction);
  res.p_value = std::min(1.0, dist::chi_square_1df_sf(res.statistic));
  res.n1 = a.n;
  res.n2 = b.n;
  res.notes = "k=2, chi-square with 1 df";
  return res;
}

double cliffs_delta_value(std::span<const double> x, std::span<const double> y) {
  require_nonempty(x, y);
  std::vector<double> sorted_y(y.begin(), y.end());
  std::sort(sorted_y.begin(), sorted_y.end());
  std::int64_t dominance = 0;
  for (double v : x) {
    const auto below = std::lower_bound(sorted_y.begin(), sorted_y.end(), v) - sorted_y.begin();
    const auto above = sorted_y.end() - std::upper_bound(sorted_y.begin(), sorted_y.end(), v);
    dominance += below - above;
  }
  return static_cast<double>(dominance) / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

std::string_view cliffs_magnitude(double delta) noexcept {
  const double m = std::abs(delta);
  if (m < 0.147) return "negligible";
  if (m < 0.33) return "small";
  if (m < 0.474) return "medium";
  return "large";
}

StatResult cliffs_delta(std::span<const double> x, std::span<const double> y,
                        const StatsOptions& options) {
  require_nonempty(x, y);
  check_bootstrap_args(options.level, options.resamples);
  StatResult res;
  res.method = "cliffs_delta";
  res.statistic = cliffs_delta_value(x, y);
  res.effect_size = res.statistic;
  res.n1 = static_cast<std::int64_t>(x.size());
  res.n2 = static_cast<std::int64_t>(y.size());
  res.p_value = mann_whitney_u(x, y, options).p_value;
  auto stats = bootstrap(options.resamples, options.seed, options.threads, [&](std::mt19937_64& rng) {
    std::vector<double> bx, by;
    resample(rng, x, bx);
    resample(rng, y, by);
    return cliffs_delta_value(bx, by);
  });
  auto [lo, hi] = percentile_interval(std::move(stats), options.level);
  res.ci_low = lo;
  res.ci_high = hi;
  res.notes = std::string(cliffs_magnitude(res.statistic)) + "; percentile bootstrap CI (" +
              std::to_string(options.resamples) + " resamples, seed " +
              std::to_string(options.seed) + "); p from Mann-Whitney U";
  return res;
}

BootstrapInterval bootstrap_ci_mean_diff(std::span<const double> x, std::span<const double> y,
                                         double level, std::uint32_t resamples,
                                         std::uint64_t seed, unsigned threads) {
  require_nonempty(x, y);
  check_bootstrap_args(level, resamples);
  BootstrapInterval out;
  out.mean_diff = mean_of(x) - mean_of(y);
  auto stats = bootstrap(resamples, seed, threads, [&](std::mt19937_64& rng) {
    std::vector<double> bx, by;
    resample(rng, x, bx);
    resample(rng, y, by);
    return mean_of(bx) - mean_of(by);
  });
  const auto at_or_below = std::count_if(stats.begin(), stats.end(), [](double d) { return d <= 0.0; });
  const auto at_or_above = std::count_if(stats.begin(), stats.end(), [](double d) { return d >= 0.0; });
  out.p_value = std::min(1.0, 2.0 * static_cast<double>(std::min(at_or_below, at_or_above)) /
                                  static_cast<double>(resamples));
  auto [lo, hi] = percentile_interval(std::move(stats), level);
  out.low = lo;
  out.high = hi;
  return out;
}

std::vector<double> bonferroni(std::span<const double> p_values, std::int64_t m) {
  if (m < 1) throw Error(ErrorCode::kBadM, "number of comparisons must be >= 1");
  std::vector<double> out;
  out.reserve(p_values.size());
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "p-value outside [0,1]");
    out.push_back(std::min(1.0, p * static_cast<double>(m)));
  }
  return out;
}

double bonferroni_alpha(double alpha, std::int64_t m) {
  if (m < 1) throw Error(ErrorCode::kBadM, "number of comparisons must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "alpha outside (0,1]");
  return alpha / static_cast<double>(m);
}

double nasa_tlx(const TlxRecord& r) {
  std::int64_t weight_sum = 0;
  for (int i = 0; i < 6; ++i) {
    if (!(r.ratings[i] >= 0.0 && r.ratings[i] <= 20.0)) {
      throw Error(ErrorCode::kRatingOutOfRange, "rating " + std::to_string(i) + " outside [0,20]", i);
    }
    // Each factor takes part in 5 of the 15 pairwise comparisons.
    if (r.weights[i] < 0 || r.weights[i] > 5) {
      throw Error(ErrorCode::kWeightSumInvalid, "weight " + std::to_string(i) + " outside [0,5]", i);
    }
    weight_sum += r.weights[i];
  }
  if (weight_sum != 15) {
    throw Error(ErrorCode::kWeightSumInvalid, "weights sum to " + std::to_string(weight_sum) + ", expected 15");
  }
  double total = 0.0;
  for (int i = 0; i < 6; ++i) total += r.ratings[i] * static_cast<double>(r.weights[i]);
  return total / 15.0;
}

namespace dist {
namespace {

double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::kInvalidArgument, "beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double df) {
  if (!(df > 0.0)) throw Error(ErrorCode::kInvalidArgument, "degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(incomplete_beta(df / 2.0, 0.5, x), 0.0, 1.0);
}

double normal_two_sided(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

double chi_square_1df_sf(double x) {
  if (x <= 0.0) return 1.0;
  return std::erfc(std::sqrt(x / 2.0));
}

}  // namespace dist

}  // namespace gazemap
