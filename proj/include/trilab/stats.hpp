/*
 * Copyright 2026 The trilab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace trilab {

double normal_cdf(double x);

/// Inverse standard normal CDF: Acklam's rational approximation refined by
/// one Halley step. u in (0, 1).
double normal_quantile(double u);

/// P(K > x) = 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 x^2), truncated once terms
/// drop below 1e-12. Returns 1 for x <= 0.
double kolmogorov_survival(double x);

/// The same alternating series with a fixed number of terms.
double kolmogorov_series(double x, int terms);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Sup-distance between the ECDF of `samples` and N(mean, sd). sd > 0,
/// at least 10 samples.
KsResult ks_one_sample(std::span<const double> samples, double target_mean, double target_sd);

/// Sup-distance between two ECDFs; p-value at effective size m n/(m + n).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct Summary {
    double mean = 0.0;
    double variance = 0.0;           // unbiased
    std::optional<double> skewness;  // absent for m < 3 or zero variance
};

Summary summarize(std::span<const double> samples);

/// (normal quantile at (i - 0.5)/m, i-th order statistic), i = 1..m.
std::vector<std::pair<double, double>> qq_export(std::span<const double> samples, double target_mean,
                                                 double target_sd);

struct GofReport {
    std::size_t m = 0;
    std::size_t excluded = 0;  // non-finite replications left out
    double target_mean = 0.0;
    double target_sd = 0.0;
    std::optional<KsResult> ks;  // absent when target_sd == 0
    Summary summary;
    std::vector<std::pair<double, double>> qq;
};

/// Drops non-finite values (counting them), then runs the one-sample test
/// and summaries. With target_sd == 0 only the summaries are filled.
GofReport goodness_of_fit(std::span<const double> samples, double target_mean, double target_sd);

/// JSON object with m, excluded, target_mean, target_sd, ks_stat, ks_pvalue,
/// sample_mean, sample_var, sample_skew (null when absent).
std::string gof_to_json(const GofReport& report);

}  // namespace trilab
