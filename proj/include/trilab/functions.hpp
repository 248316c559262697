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

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <variant>

namespace trilab {

/// f(x) = center * log(x / center). At x = center: f = 0, f' = 1, f'' = -1/center.
struct LogProduct {
    double center = 1.0;
};
/// f(x) = log x.
struct NaturalLog {};
/// f(x) = a x^2 + b x + c.
struct Quadratic {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};
/// f(x) = c0 + c1 x + c2 x^2 + c3 x^3 restricted to [lo, hi].
struct CubicWindow {
    std::array<double, 4> coeffs{};
    double lo = 0.0;
    double hi = 0.0;
};
/// User-supplied evaluators.
struct Custom {
    std::function<double(double)> f;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
};

using FunctionKind = std::variant<LogProduct, NaturalLog, Quadratic, CubicWindow, Custom>;

/// The function applied to each normalized row sum, with the analytic
/// derivatives the centering needs and a third-derivative bound valid on
/// (center - radius, center + radius).
struct FunctionSpec {
    FunctionKind kind;
    double domain_lo = -std::numeric_limits<double>::infinity();
    double domain_hi = std::numeric_limits<double>::infinity();
    bool domain_open = false;  // (lo, hi) when true, [lo, hi] otherwise
    double center = 0.0;
    double third_derivative_bound = 0.0;
    double neighborhood_radius = std::numeric_limits<double>::infinity();

    std::string name() const;
    bool in_domain(double x) const noexcept {
        return domain_open ? (x > domain_lo && x < domain_hi) : (x >= domain_lo && x <= domain_hi);
    }
};

// Factories. `mu` is the point the Taylor neighbourhood is centred on; for
// log-type functions the radius defaults to mu/2 (mu must be > 0).
FunctionSpec make_log_product(double mu, double radius = 0.0);
FunctionSpec make_natural_log(double mu, double radius = 0.0);
FunctionSpec make_quadratic(double a, double b, double c, double mu);
FunctionSpec make_linear(double mu);
FunctionSpec make_cubic_window(std::array<double, 4> coeffs, double lo, double hi, double mu, double radius);
FunctionSpec make_custom(Custom evaluators, double lo, double hi, double mu, double third_derivative_bound,
                         double radius);

/// f(x), f'(x), f''(x). DomainError carrying x when x is outside the domain.
double eval(const FunctionSpec& fs, double x);
double eval_d1(const FunctionSpec& fs, double x);
double eval_d2(const FunctionSpec& fs, double x);

/// (bound/6)|x - mu|^3, an upper bound on the second-order Taylor remainder
/// at mu. NeighborhoodError when |x - mu| >= radius.
double taylor_remainder_bound(const FunctionSpec& fs, double x, double mu);

}  // namespace trilab
