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

// Rank tests, t-test, Bartlett, effect sizes, bootstrap intervals,
// Bonferroni and NASA-TLX scoring.

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "gazemap/ingest.hpp"
#include "gazemap/model.hpp"

namespace gazemap {

struct StatsOptions {
  /// Exact Mann-Whitney when n1 + n2 <= cutoff and there are no ties.
  int mwu_exact_cutoff = 14;
  /// Exact Wilcoxon when the number of nonzero differences <= cutoff.
  int wilcoxon_exact_cutoff = 12;
  std::uint32_t resamples = 10000;
  std::uint64_t seed = 42;
  double level = 0.95;
  unsigned threads = 1;
};

struct SampleSummary {
  double mean = 0.0;
  double sd = 0.0;
  std::int64_t n = 0;
};

SampleSummary summarize(std::span<const double> x);

/// Midranks (1-based) of `values`, plus the tie groups' sizes.
std::vector<double> midranks(std::span<const double> values, std::vector<std::int64_t>* tie_sizes = nullptr);

StatResult mann_whitney_u(std::span<const double> x, std::span<const double> y,
                          const StatsOptions& options = {});

/// Exact two-sided p of Mann-Whitney U for tie-free samples of sizes n1, n2.
double mann_whitney_exact_p(double u_min, std::int64_t n1, std::int64_t n2);

/// Within the exact cutoff the null distribution is enumerated over sign
/// patterns of the (mid)ranks, so tied |differences| stay exact.
StatResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                const StatsOptions& options = {});

StatResult students_t(std::span<const double> x, std::span<const double> y);
StatResult students_t_summary(const SampleSummary& a, const SampleSummary& b);

StatResult bartlett(std::span<const double> x, std::span<const double> y);

double cohen_d(std::span<const double> x, std::span<const double> y);
double cohen_d_summary(const SampleSummary& a, const SampleSummary& b);

double cliffs_delta_value(std::span<const double> x, std::span<const double> y);
std::string_view cliffs_magnitude(double delta) noexcept;

/// delta with a seeded percentile-bootstrap interval; p comes from the
/// Mann-Whitney test on the same samples.
StatResult cliffs_delta(std::span<const double> x, std::span<const double> y,
                        const StatsOptions& options = {});

struct BootstrapInterval {
  double low = 0.0;
  double high = 0.0;
  double mean_diff = 0.0;
  /// Two-sided bootstrap p: twice the smaller tail mass at zero, capped at 1.
  double p_value = 1.0;
};

/// Percentile bootstrap of mean(x) - mean(y), resampling each group
/// independently. Resample r draws from its own generator seeded by (seed, r),
/// so the output is the same for any thread count.
BootstrapInterval bootstrap_ci_mean_diff(std::span<const double> x, std::span<const double> y,
                                         double level = 0.95, std::uint32_t resamples = 10000,
                                         std::uint64_t seed = 42, unsigned threads = 1);

std::vector<double> bonferroni(std::span<const double> p_values, std::int64_t m);
double bonferroni_alpha(double alpha, std::int64_t m);

double nasa_tlx(const TlxRecord& r);

namespace dist {

/// Regularized incomplete beta I_x(a, b), continued fraction (Lentz).
double incomplete_beta(double a, double b, double x);
/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);
/// P(|Z| >= |z|).
double normal_two_sided(double z);
/// Upper tail of chi-square with one degree of freedom.
double chi_square_1df_sf(double x);

}  // namespace dist

}  // namespace gazemap
