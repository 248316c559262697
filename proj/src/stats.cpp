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


#include "trilab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include <json.hpp>

#include "trilab/errors.hpp"
#include "trilab/series.hpp"

namespace trilab {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSeriesCutoff = 1e-12;

std::vector<double> sorted_copy(std::span<const double> xs) {
    std::vector<double> out(xs.begin(), xs.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) throw PreconditionError("normal_quantile needs u in (0, 1)");
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01, -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double low = 0.02425;
    double x;
    if (u < low) {
        const double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - low) {
        const double q = u - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement
    // Phi(x) - u, through the upper tail when u > 1/2 to avoid cancellation
    const double e = (u < 0.5 ? normal_cdf(x) - u : (1.0 - u) - 0.5 * std::erfc(x * kInvSqrt2));
    const double step = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
    return x - step / (1.0 + 0.5 * x * step);
}

double kolmogorov_series(double x, int terms) {
    double sum = 0.0;
    for (int j = 1; j <= terms; ++j) {
        const double term = std::exp(-2.0 * j * j * x * x);
        sum += (j % 2 == 1) ? term : -term;
    }
    return 2.0 * sum;
}

double kolmogorov_survival(double x) {
    if (!(x > 0.0)) return 1.0;
    if (x < 0.2) {
        // Dual (theta) form; the alternating series needs O(1/x) terms here.
        double sum = 0.0;
        for (int j = 1; j < 100; ++j) {
            const double odd = 2.0 * j - 1.0;
            const double term = std::exp(-odd * odd * kPi * kPi / (8.0 * x * x));
            sum += term;
            if (term < kSeriesCutoff) break;
        }
        return 1.0 - std::sqrt(2.0 * kPi) / x * sum;
    }
    double sum = 0.0;
    for (int j = 1;; ++j) {
        const double term = std::exp(-2.0 * j * j * x * x);
        if (term < kSeriesCutoff) break;
        sum += (j % 2 == 1) ? term : -term;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_one_sample(std::span<const double> samples, double target_mean, double target_sd) {
    if (!(target_sd > 0.0))
        throw PreconditionError("ks_one_sample needs target_sd > 0 (use a point-mass check for a degenerate limit)");
    if (samples.size() < 10) throw PreconditionError("ks_one_sample needs at least 10 samples");
    const std::vector<double> sorted = sorted_copy(samples);
    const auto m = static_cast<double>(sorted.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double cdf = normal_cdf((sorted[i] - target_mean) / target_sd);
        const double i_d = static_cast<double>(i);
        sup = std::max({sup, (i_d + 1.0) / m - cdf, cdf - i_d / m});
    }
    return {sup, kolmogorov_survival(sup * std::sqrt(m))};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 10 || b.size() < 10) throw PreconditionError("ks_two_sample needs at least 10 samples per side");
    const std::vector<double> x = sorted_copy(a);
    const std::vector<double> y = sorted_copy(b);
    const auto ma = static_cast<double>(x.size());
    const auto mb = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double sup = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        sup = std::max(sup, std::abs(static_cast<double>(i) / ma - static_cast<double>(j) / mb));
    }
    const double effective = ma * mb / (ma + mb);
    return {sup, kolmogorov_survival(sup * std::sqrt(effective))};
}

Summary summarize(std::span<const double> samples) {
    if (samples.size() < 2) throw PreconditionError("summarize needs at least 2 samples");
    const auto m = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= m;
    double m2 = 0.0;
    double m3 = 0.0;
    for (double x : samples) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    Summary s;
    s.mean = mean;
    s.variance = m2 / (m - 1.0);
    if (samples.size() >= 3 && s.variance > 0.0) {
        const double sd = std::sqrt(s.variance);
        s.skewness = m / ((m - 1.0) * (m - 2.0)) * m3 / (sd * sd * sd);
    }
    return s;
}

std::vector<std::pair<double, double>> qq_export(std::span<const double> samples, double target_mean,
                                                 double target_sd) {
    const std::vector<double> sorted = sorted_copy(samples);
    const auto m = static_cast<double>(sorted.size());
    std::vector<std::pair<double, double>> out;
    out.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double u = (static_cast<double>(i) + 0.5) / m;
        out.emplace_back(target_mean + target_sd * normal_quantile(u), sorted[i]);
    }
    return out;
}

GofReport goodness_of_fit(std::span<const double> samples, double target_mean, double target_sd) {
    std::vector<double> finite;
    finite.reserve(samples.size());
    std::copy_if(samples.begin(), samples.end(), std::back_inserter(finite), [](double x) { return std::isfinite(x); });
    GofReport report;
    report.m = finite.size();
    report.excluded = samples.size() - finite.size();
    report.target_mean = target_mean;
    report.target_sd = target_sd;
    report.summary = summarize(finite);
    if (target_sd > 0.0) {
        report.ks = ks_one_sample(finite, target_mean, target_sd);
        report.qq = qq_export(finite, target_mean, target_sd);
    }
    return report;
}

std::string gof_to_json(const GofReport& report) {
    nlohmann::ordered_json j;
    j["m"] = report.m;
    j["excluded"] = report.excluded;
    j["target_mean"] = report.target_mean;
    j["target_sd"] = report.target_sd;
    j["ks_stat"] = report.ks ? nlohmann::ordered_json(report.ks->statistic) : nlohmann::ordered_json(nullptr);
    j["ks_pvalue"] = report.ks ? nlohmann::ordered_json(report.ks->p_value) : nlohmann::ordered_json(nullptr);
    j["sample_mean"] = report.summary.mean;
    j["sample_var"] = report.summary.variance;
    j["sample_skew"] =
        report.summary.skewness ? nlohmann::ordered_json(*report.summary.skewness) : nlohmann::ordered_json(nullptr);
    return j.dump(2) + "\n";
}

}  // namespace trilab
