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


#include "trilab/functions.hpp"

#include <cmath>
#include <sstream>

#include "trilab/errors.hpp"

namespace trilab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_domain(const FunctionSpec& fs, double x) {
    if (!fs.in_domain(x)) {
        std::ostringstream msg;
        msg << fs.name() << ": argument " << x << " outside domain";
        throw DomainError(msg.str(), x);
    }
}

double log_radius(double mu, double radius) {
    if (!(mu > 0.0)) throw ConfigError("kind", "log-type functions need mu > 0");
    if (radius == 0.0) radius = 0.5 * mu;
    if (!(radius > 0.0 && radius < mu)) throw ConfigError("radius", "must lie in (0, mu)");
    return radius;
}

}  // namespace

std::string FunctionSpec::name() const {
    return std::visit(overloaded{[](const LogProduct&) { return "log_product"; },
                                 [](const NaturalLog&) { return "natural_log"; },
                                 [](const Quadratic&) { return "quadratic"; },
                                 [](const CubicWindow&) { return "cubic_window"; },
                                 [](const Custom&) { return "custom"; }},
                      kind);
}

FunctionSpec make_log_product(double mu, double radius) {
    radius = log_radius(mu, radius);
    const double inner = mu - radius;
    // |f'''(x)| = 2 mu / x^3, largest at the left edge
    return FunctionSpec{LogProduct{mu}, 0.0, std::numeric_limits<double>::infinity(), true, mu,
                        2.0 * mu / (inner * inner * inner), radius};
}

FunctionSpec make_natural_log(double mu, double radius) {
    radius = log_radius(mu, radius);
    const double inner = mu - radius;
    return FunctionSpec{NaturalLog{}, 0.0, std::numeric_limits<double>::infinity(), true, mu,
                        2.0 / (inner * inner * inner), radius};
}

FunctionSpec make_quadratic(double a, double b, double c, double mu) {
    FunctionSpec fs;
    fs.kind = Quadratic{a, b, c};
    fs.center = mu;
    return fs;
}

FunctionSpec make_linear(double mu) { return make_quadratic(0.0, 1.0, 0.0, mu); }

FunctionSpec make_cubic_window(std::array<double, 4> coeffs, double lo, double hi, double mu, double radius) {
    if (!(lo < hi)) throw ConfigError("lo", "must be below hi");
    if (!(radius > 0.0)) throw ConfigError("radius", "must be > 0");
    return FunctionSpec{CubicWindow{coeffs, lo, hi}, lo, hi, false, mu, 6.0 * std::abs(coeffs[3]), radius};
}

FunctionSpec make_custom(Custom evaluators, double lo, double hi, double mu, double third_derivative_bound,
                         double radius) {
    if (!evaluators.f || !evaluators.d1 || !evaluators.d2)
        throw ConfigError("kind", "custom function needs f, f' and f''");
    if (!(third_derivative_bound >= 0.0)) throw ConfigError("third_derivative_bound", "must be >= 0");
    if (!(radius > 0.0)) throw ConfigError("radius", "must be > 0");
    return FunctionSpec{std::move(evaluators), lo, hi, false, mu, third_derivative_bound, radius};
}

double eval(const FunctionSpec& fs, double x) {
    check_domain(fs, x);
    return std::visit(overloaded{[x](const LogProduct& l) { return l.center * std::log(x / l.center); },
                                 [x](const NaturalLog&) { return std::log(x); },
                                 [x](const Quadratic& q) { return (q.a * x + q.b) * x + q.c; },
                                 [x](const CubicWindow& w) {
                                     const auto& c = w.coeffs;
                                     return ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
                                 },
                                 [x](const Custom& c) { return c.f(x); }},
                      fs.kind);
}

double eval_d1(const FunctionSpec& fs, double x) {
    check_domain(fs, x);
    return std::visit(overloaded{[x](const LogProduct& l) { return l.center / x; },
                                 [x](const NaturalLog&) { return 1.0 / x; },
                                 [x](const Quadratic& q) { return 2.0 * q.a * x + q.b; },
                                 [x](const CubicWindow& w) {
                                     const auto& c = w.coeffs;
                                     return (3.0 * c[3] * x + 2.0 * c[2]) * x + c[1];
                                 },
                                 [x](const Custom& c) { return c.d1(x); }},
                      fs.kind);
}

double eval_d2(const FunctionSpec& fs, double x) {
    check_domain(fs, x);
    return std::visit(overloaded{[x](const LogProduct& l) { return -l.center / (x * x); },
                                 [x](const NaturalLog&) { return -1.0 / (x * x); },
                                 [](const Quadratic& q) { return 2.0 * q.a; },
                                 [x](const CubicWindow& w) { return 6.0 * w.coeffs[3] * x + 2.0 * w.coeffs[2]; },
                                 [x](const Custom& c) { return c.d2(x); }},
                      fs.kind);
}

double taylor_remainder_bound(const FunctionSpec& fs, double x, double mu) {
    const double distance = std::abs(x - mu);
    if (!(distance < fs.neighborhood_radius)) {
        std::ostringstream msg;
        msg << "|x - mu| = " << distance << " is outside the Taylor neighbourhood of radius "
            << fs.neighborhood_radius;
        throw NeighborhoodError(msg.str());
    }
    return fs.third_derivative_bound / 6.0 * distance * distance * distance;
}

}  // namespace trilab
