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


#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "trilab/distributions.hpp"
#include "trilab/errors.hpp"
#include "trilab/series.hpp"

using namespace trilab;

namespace {

bool close(double got, double want, double tol) { return std::abs(got - want) <= tol; }

std::vector<DistributionSpec> all_families() {
    return {make_spec(PointMass{3.0}),
            make_spec(Rademacher{}),
            make_spec(Exponential{1.0}),
            make_spec(Exponential{2.5}),
            make_spec(Uniform{0.0, 1.0}),
            make_spec(Uniform{-2.0, 5.0}),
            make_spec(Normal{0.0, 1.0}),
            make_spec(Normal{3.0, 0.5}),
            make_spec(LatticeCounterexample{0.5}),
            make_spec(FiniteDiscrete{{{0.0, 0.5}, {1.0, 0.25}, {4.0, 0.25}}})};
}

}  // namespace

TEST_CASE("family moments") {
    const auto e = make_spec(Exponential{1.0});
    CHECK(e.mu() == 1.0);
    CHECK(e.sigma2() == 1.0);
    CHECK(e.gamma().value() == 1.0);
    CHECK(e.positive_support());
    CHECK(e.log_moment_finite());

    const auto p = make_spec(PointMass{3.0});
    CHECK(p.mu() == 3.0);
    CHECK(p.sigma2() == 0.0);

    const auto l = make_spec(LatticeCounterexample{0.5});
    CHECK(l.mu() == 0.0);
    CHECK(close(l.sigma2(), 1.0, 1e-15));
    CHECK_FALSE(l.log_moment_finite());
    CHECK_FALSE(l.gamma().has_value());

    const auto u = make_spec(Uniform{-2.0, 5.0});
    CHECK(u.mu() == 1.5);
    CHECK(close(u.sigma2(), 49.0 / 12.0, 1e-14));
    CHECK_FALSE(u.positive_support());

    const auto d = make_spec(FiniteDiscrete{{{0.0, 0.5}, {1.0, 0.25}, {4.0, 0.25}}});
    CHECK(d.mu() == 1.25);
    CHECK(close(d.sigma2(), 2.6875, 1e-15));
}

TEST_CASE("canonical forms and parameter errors") {
    CHECK(std::holds_alternative<PointMass>(make_spec(Normal{2.0, 0.0}).family()));
    CHECK(std::holds_alternative<PointMass>(make_spec(FiniteDiscrete{{{7.0, 1.0}}}).family()));

    auto field_of = [](Family f) {
        try {
            make_spec(std::move(f));
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field_of(Exponential{0.0}) == "rate");
    CHECK(field_of(Exponential{-1.0}) == "rate");
    CHECK(field_of(Uniform{1.0, 1.0}) == "hi");
    CHECK(field_of(Normal{0.0, -1.0}) == "sd");
    CHECK(field_of(LatticeCounterexample{0.0}) == "epsilon");
    CHECK(field_of(FiniteDiscrete{{{0.0, 0.5}, {1.0, 0.4}}}) == "atoms.probability");
    CHECK(field_of(FiniteDiscrete{{}}) == "atoms");
}

TEST_CASE("sampling examples") {
    RandomStream s(5, 0);
    const auto p = make_spec(PointMass{3.0});
    const auto r = make_spec(Rademacher{});
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(sample(p, s) == 3.0);
        const double x = sample(r, s);
        REQUIRE((x == 1.0 || x == -1.0));
    }
    const auto e = make_spec(Exponential{1.0});
    RandomStream a = RandomStream::derive(42, StreamPurpose::Auxiliary, 0);
    RandomStream b = RandomStream::derive(42, StreamPurpose::Auxiliary, 0);
    CHECK(sample(e, a) == sample(e, b));
    CHECK(a.variates() == 1);
}

TEST_CASE("sample moments match exact moments within 5 standard errors") {
    constexpr int n = 1000000;
    for (const auto& spec : all_families()) {
        if (spec.lattice()) continue;
        CAPTURE(spec.family_name());
        RandomStream s = RandomStream::derive(2024, StreamPurpose::Auxiliary, 0);
        double m1 = 0.0;
        double m2 = 0.0;
        double m4 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = sample(spec, s) - spec.mu();
            m1 += d;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        m1 /= n;
        m2 /= n;
        m4 /= n;
        const double se_mean = std::sqrt(spec.sigma2() / n);
        const double se_var = std::sqrt(std::max(m4 - spec.sigma2() * spec.sigma2(), 0.0) / n);
        CHECK(std::abs(m1) <= 5.0 * se_mean);
        CHECK(std::abs(m2 - spec.sigma2()) <= 5.0 * se_var);
    }
}

TEST_CASE("truncated and tail second central moments") {
    const auto e = make_spec(Exponential{1.0});
    CHECK(close(truncated_second_central_moment(e, 1), 0.32332358381693654053, 1e-15));
    CHECK(close(truncated_second_central_moment(e, 2), 0.50212931632136057021, 1e-15));
    CHECK(close(truncated_second_central_moment(e, 3), 0.68863413889151893501, 1e-15));
    CHECK(close(truncated_second_central_moment(e, 10), 0.99796239250359002956, 1e-15));
    CHECK(close(tail_second_central_moment(e, 1), 0.67667641618306346, 1e-15));

    const auto r = make_spec(Rademacher{});
    for (std::uint64_t k : {1, 2, 17, 1000}) {
        CHECK(truncated_second_central_moment(r, k) == 1.0);
        CHECK(tail_second_central_moment(r, k) == 0.0);
    }

    const auto l = make_spec(LatticeCounterexample{0.5});
    CHECK(truncated_second_central_moment(l, 1) == 0.0);
    CHECK(close(tail_second_central_moment(l, 1), 1.0, 1e-15));

    const auto nrm = make_spec(Normal{0.0, 1.0});
    CHECK(close(truncated_second_central_moment(nrm, 1), 0.19874804309879919757, 1e-15));
    CHECK(close(tail_second_central_moment(nrm, 1), 0.80125195690120080243, 1e-15));

    const auto u = make_spec(Uniform{0.0, 1.0});
    CHECK(close(truncated_second_central_moment(u, 1), 0.01603750747748960457, 1e-15));
    CHECK(close(tail_second_central_moment(u, 1), 0.067295825855843728764, 1e-15));
    CHECK(tail_second_central_moment(u, 2) == 0.0);

    // atoms at |x - mu| = 1.25, 0.25, 2.75 with sigma = 1.6394
    const auto d = make_spec(FiniteDiscrete{{{0.0, 0.5}, {1.0, 0.25}, {4.0, 0.25}}});
    CHECK(close(truncated_second_central_moment(d, 1), 0.796875, 1e-15));
    CHECK(close(truncated_second_central_moment(d, 2), 2.6875, 1e-15));

    // |x - mu| == sigma k exactly: the atom counts as truncated
    const auto tie = make_spec(FiniteDiscrete{{{-1.0, 0.5}, {1.0, 0.5}}});
    CHECK(close(truncated_second_central_moment(tie, 1), 1.0, 1e-15));

    CHECK_THROWS_AS(truncated_second_central_moment(e, 0), PreconditionError);
}

TEST_CASE("truncated moments are monotone and bounded by sigma^2") {
    for (const auto& spec : all_families()) {
        CAPTURE(spec.family_name());
        double prev = -1.0;
        for (std::uint64_t k = 1; k <= 300; ++k) {
            const double c = truncated_second_central_moment(spec, k);
            REQUIRE(c >= prev);
            REQUIRE(c <= spec.sigma2() * (1.0 + 1e-15));
            REQUIRE(close(c + tail_second_central_moment(spec, k), spec.sigma2(), 1e-14));
            prev = c;
        }
    }
}

TEST_CASE("quadrature agrees with closed forms for k = 1..50") {
    for (const auto& spec : {make_spec(Exponential{1.0}), make_spec(Exponential{0.3}), make_spec(Normal{0.0, 1.0}),
                             make_spec(Normal{-4.0, 2.5}), make_spec(Uniform{-1.0, 3.0})}) {
        CAPTURE(spec.family_name());
        for (std::uint64_t k = 1; k <= 50; ++k) {
            CAPTURE(k);
            CHECK(close(truncated_second_central_moment_quadrature(spec, k), truncated_second_central_moment(spec, k),
                        1e-9));
        }
    }
}

TEST_CASE("counterexample breakpoint table") {
    const LatticeAtomTable t = counterexample_tail_table(0.5, 64);
    CHECK(t.log_atoms[0] == 1.0);
    CHECK(close(t.log_atoms[1], 5.6568542494923802, 1e-14));
    CHECK(close(t.log_atoms[2], 15.588457268119896, 1e-13));
    CHECK(close(t.log_atoms[3], 32.0, 1e-13));
    CHECK(close(t.tail_second_moments[0], 1.0, 1e-15));
    CHECK(close(t.tail_second_moments[1], kLatticeC * (kZeta2 - 1.0), 1e-15));
    CHECK(close(t.tail_second_moments[1], 0.39207289814597337, 1e-15));
    for (double eps : {0.1, 0.5, 2.0}) CHECK(counterexample_tail_table(eps, 8).tail_second_moments[0] == doctest::Approx(1.0).epsilon(1e-15));

    // Total mass summed independently of the table's log-sum-exp.
    long double mass = 0.0L;
    for (int m = 1; m <= 64; ++m) {
        const long double km2 = std::exp(-2.0L * std::pow(static_cast<long double>(m), 2.5L));
        mass += static_cast<long double>(kLatticeC) * km2 / (static_cast<long double>(m) * m);
    }
    CHECK(close(static_cast<double>(mass) + t.prob_zero, 1.0, 1e-12));
    CHECK(t.prob_zero > 0.0);
    CHECK(t.prob_zero < 1.0);

    CHECK_THROWS_AS(counterexample_tail_table(0.0, 8), ConfigError);
    CHECK_THROWS_AS(counterexample_tail_table(0.5, 1), ConfigError);
}

TEST_CASE("lattice atom values overflow to an explicit error") {
    const LatticeAtomTable t = counterexample_tail_table(0.5, 64);
    CHECK(close(lattice_atom_value(t, 1), std::exp(1.0), 1e-15));
    CHECK(std::isfinite(lattice_atom_value(t, 13)));  // ln k = 609.3
    CHECK_THROWS_AS(lattice_atom_value(t, 14), OverflowError);  // ln k = 733.4 > ln DBL_MAX
    CHECK(lattice_first_atom_above(0.5, 2.0) == 1);
    CHECK(lattice_first_atom_above(0.5, 286.0) == 2);
    CHECK(lattice_first_atom_above(0.5, 287.0) == 3);
    CHECK(lattice_first_atom_above_log(0.5, 1000.0) == 16);
}

TEST_CASE("lattice draws stay on the support") {
    const auto l = make_spec(LatticeCounterexample{0.5});
    RandomStream s(11, 3);
    int zeros = 0;
    const double e = std::exp(1.0);
    for (int i = 0; i < 100000; ++i) {
        const double x = sample(l, s);
        if (x == 0.0) {
            ++zeros;
            continue;
        }
        const double a = std::abs(x);
        REQUIRE((close(a, e, 1e-12) || close(a, std::exp(std::sqrt(32.0)), 1e-9 * a) ||
                 close(a, std::exp(std::pow(3.0, 2.5)), 1e-9 * a)));
    }
    const double p0 = make_spec(LatticeCounterexample{0.5}).lattice()->prob_zero;
    CHECK(std::abs(zeros / 1e5 - p0) < 5.0 * std::sqrt(p0 * (1 - p0) / 1e5));
}

TEST_CASE("capped log second moment") {
    CHECK(close(capped_log_second_moment(make_spec(Exponential{1.0}), 1000), 0.70275481132128349, 1e-10));
    CHECK(close(capped_log_second_moment(make_spec(Exponential{4.0}), 1000), 0.70275481132128349 / 16.0, 1e-10));
    CHECK(close(capped_log_second_moment(make_spec(Normal{0.0, 1.0}), 100000), 0.43936094422001189, 1e-10));
    CHECK(close(capped_log_second_moment(make_spec(LatticeCounterexample{0.5}), 286), 2.8254882030120581823, 1e-13));
    CHECK(close(capped_log_second_moment(make_spec(LatticeCounterexample{0.5}), 10), 1.5107083124919177256, 1e-13));
    CHECK(capped_log_second_moment(make_spec(Rademacher{}), 1000) == 0.0);
    CHECK(capped_log_second_moment(make_spec(PointMass{1.0}), 1000) == 0.0);
}

TEST_CASE("central absolute moments") {
    const auto e = make_spec(Exponential{1.0});
    CHECK(close(central_abs_moment(e, 3.0).value(), 2.4145532940573078591, 1e-13));
    CHECK(close(central_abs_moment(e, 4.0).value(), 9.0, 1e-12));
    CHECK(close(central_abs_moment(e, 2.5).value(), 1.4547943469020412715, 1e-13));
    CHECK(close(central_abs_moment(make_spec(Exponential{2.0}), 4.0).value(), 9.0 / 16.0, 1e-13));
    const auto nrm = make_spec(Normal{1.0, 1.0});
    CHECK(close(central_abs_moment(nrm, 3.0).value(), 1.5957691216057307118, 1e-14));
    CHECK(close(central_abs_moment(nrm, 2.5).value(), 1.2332684379936877872, 1e-14));
    CHECK(close(central_abs_moment(make_spec(Uniform{0.0, 1.0}), 4.0).value(), 0.0125, 1e-16));
    CHECK(central_abs_moment(make_spec(Rademacher{}), 7.0).value() == 1.0);
    CHECK(central_abs_moment(make_spec(PointMass{2.0}), 4.0).value() == 0.0);
    CHECK_FALSE(central_abs_moment(make_spec(LatticeCounterexample{0.5}), 4.0).has_value());
    CHECK(close(central_abs_moment(make_spec(LatticeCounterexample{0.5}), 2.0).value(), 1.0, 1e-15));
}
