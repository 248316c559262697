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

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "trilab/errors.hpp"

namespace trilab::detail {

/// Running sum of adaptive Gauss-Kronrod pieces with their error estimates.
class Quadrature {
public:
    explicit Quadrature(double abs_tolerance) : tolerance_(abs_tolerance) {}

    template <class F>
    void add(F&& f, double a, double b) {
        if (!(b > a)) return;
        double error = 0.0;
        const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            f, a, b, 20, 1e-14, &error);
        sum_ += value;
        error_ += error;
    }

    /// Adds the integral over [a, b] (0 <= a < b, b may be infinite), cut at
    /// a, 2a, 4a, ... starting from `scale` so that mass concentrated near
    /// the origin is never straddled by a single wide panel.
    template <class F>
    void add_geometric(F&& f, double a, double b, double scale) {
        double lo = a;
        double hi = std::max(a, 0.0) + scale;
        while (lo < b) {
            const double upper = std::isinf(b) && hi > 1e6 * scale ? b : std::min(hi, b);
            add(f, lo, upper);
            lo = upper;
            hi = 2.0 * std::max(hi, lo);
        }
    }

    double value(const std::string& what) const {
        if (!(error_ <= tolerance_))
            throw NumericError(what + ": quadrature error bound " + std::to_string(error_) +
                                   " exceeds tolerance " + std::to_string(tolerance_),
                               error_);
        return sum_;
    }

private:
    double tolerance_;
    double sum_ = 0.0;
    double error_ = 0.0;
};

}  // namespace trilab::detail
