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


#include "trilab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "quadrature.hpp"
#include "trilab/errors.hpp"
#include "trilab/series.hpp"

namespace trilab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kQuadratureTolerance = 1e-10;
// Ties |x - mu| == sigma k for discrete atoms survive rounding of sigma.
constexpr double kAtomSlack = 1e-12;

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

void require(bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(field, what);
}

// E|X-mu|^2 1{|X-mu| > threshold} for the lattice, threshold >= 0.
double lattice_tail(double epsilon, double threshold) {
    if (threshold < 1.0) return kLatticeC * kZeta2;
    return kLatticeC * zeta2_tail(lattice_first_atom_above(epsilon, threshold));
}

double lattice_within(double epsilon, double threshold) {
    if (threshold < 1.0) return 0.0;
    const std::uint64_t first = lattice_first_atom_above(epsilon, threshold);
    double sum = 0.0;
    for (std::uint64_t j = first - 1; j >= 1; --j) {
        const double x = static_cast<double>(j);
        sum += 1.0 / (x * x);
    }
    return kLatticeC * sum;
}

double log_sum_exp(const std::vector<double>& xs) {
    const double top = *std::max_element(xs.begin(), xs.end());
    double sum = 0.0;
    for (double x : xs) sum += std::exp(x - top);
    return top + std::log(sum);
}

// Density of D = X - mu and its support, continuous families only.
struct CentralDensity {
    double lo;
    double hi;
    double scale;
    double operator()(const DistributionSpec& spec, double d) const;
};

CentralDensity central_density(const DistributionSpec& spec) {
    const double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        overloaded{
            [&](const Exponential&) { return CentralDensity{-spec.mu(), inf, spec.sigma()}; },
            [&](const Uniform& u) {
                const double h = 0.5 * (u.hi - u.lo);
                return CentralDensity{-h, h, spec.sigma()};
            },
            [&](const Normal&) { return CentralDensity{-inf, inf, spec.sigma()}; },
            [&](const auto&) -> CentralDensity {
                throw PreconditionError("quadrature path requires a continuous family, got " +
                                        spec.family_name());
            }},
        spec.family());
}

double CentralDensity::operator()(const DistributionSpec& spec, double d) const {
    if (d < lo || d > hi) return 0.0;
    return std::visit(overloaded{[&](const Exponential& e) { return e.rate * std::exp(-e.rate * (d + spec.mu())); },
                                 [&](const Uniform&) { return 1.0 / (hi - lo); },
                                 [&](const Normal& n) { return normal_pdf(d / n.sd) / n.sd; },
                                 [](const auto&) { return 0.0; }},
                      spec.family());
}

// Integral of g(|d|) * density(d) over lo_r < |d| <= hi_r.
template <class G>
double radial_integral(const DistributionSpec& spec, G g, double lo_r, double hi_r, const char* what) {
    const CentralDensity density = central_density(spec);
    detail::Quadrature quad(kQuadratureTolerance);
    const auto right = [&](double d) { return g(d) * density(spec, d); };
    const auto left = [&](double d) { return g(d) * density(spec, -d); };
    const double right_hi = std::min(hi_r, density.hi);
    const double left_hi = std::min(hi_r, -density.lo);
    quad.add_geometric(right, lo_r, right_hi, density.scale);
    quad.add_geometric(left, lo_r, left_hi, density.scale);
    return quad.value(what);
}

}  // namespace

std::uint64_t lattice_first_atom_above_log(double epsilon, double log_threshold) {
    if (log_threshold < 0.0) return 1;
    const double exponent = 2.0 + epsilon;
    auto m = static_cast<std::uint64_t>(std::floor(std::pow(log_threshold, 1.0 / exponent)));
    if (m == 0) m = 1;
    while (m > 1 && std::pow(static_cast<double>(m - 1), exponent) > log_threshold) --m;
    while (!(std::pow(static_cast<double>(m), exponent) > log_threshold)) ++m;
    return m;
}

std::uint64_t lattice_first_atom_above(double epsilon, double threshold) {
    return lattice_first_atom_above_log(epsilon, std::log(threshold));
}

LatticeAtomTable counterexample_tail_table(double epsilon, std::size_t max_atoms) {
    require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon", "must be > 0");
    require(max_atoms >= 2, "M_max", "must be >= 2");
    LatticeAtomTable table;
    table.epsilon = epsilon;
    const double log_c = std::log(kLatticeC);
    for (std::size_t m = 1; m <= max_atoms; ++m) {
        const double x = static_cast<double>(m);
        const double log_atom = std::pow(x, 2.0 + epsilon);
        table.log_atoms.push_back(log_atom);
        table.atom_log_probs.push_back(log_c - 2.0 * log_atom - 2.0 * std::log(x));
        table.tail_second_moments.push_back(kLatticeC * zeta2_tail(m));
    }
    table.log_atom_mass = log_sum_exp(table.atom_log_probs);
    table.prob_zero = 1.0 - std::exp(table.log_atom_mass);
    if (!(table.prob_zero > 0.0 && table.prob_zero < 1.0))
        throw NumericError("counterexample: P(X = 0) outside (0, 1)", table.prob_zero);
    return table;
}

double lattice_atom_value(const LatticeAtomTable& table, std::size_t m) {
    if (m == 0 || m > table.size()) throw PreconditionError("lattice atom index out of range");
    const double log_atom = table.log_atoms[m - 1];
    if (log_atom > std::log(std::numeric_limits<double>::max()))
        throw OverflowError("counterexample atom k_" + std::to_string(m) + " = exp(" +
                            std::to_string(log_atom) +
                            ") exceeds the double range; use the analytic-only functions");
    return std::exp(log_atom);
}

std::string DistributionSpec::family_name() const {
    return std::visit(overloaded{[](const PointMass&) { return "point_mass"; },
                                 [](const Rademacher&) { return "rademacher"; },
                                 [](const Exponential&) { return "exponential"; },
                                 [](const Uniform&) { return "uniform"; },
                                 [](const Normal&) { return "normal"; },
                                 [](const LatticeCounterexample&) { return "lattice_counterexample"; },
                                 [](const FiniteDiscrete&) { return "finite_discrete"; }},
                      family_);
}

bool DistributionSpec::is_continuous() const noexcept {
    return std::holds_alternative<Exponential>(family_) || std::holds_alternative<Uniform>(family_) ||
           std::holds_alternative<Normal>(family_);
}

DistributionSpec make_spec(Family family) {
    // Canonicalise degenerate laws first.
    if (const auto* n = std::get_if<Normal>(&family)) {
        require(std::isfinite(n->mean), "mean", "must be finite");
        require(n->sd >= 0.0 && std::isfinite(n->sd), "sd", "must be >= 0");
        if (n->sd == 0.0) family = PointMass{n->mean};
    }
    if (const auto* fd = std::get_if<FiniteDiscrete>(&family)) {
        require(!fd->atoms.empty(), "atoms", "must be non-empty");
        double total = 0.0;
        for (const Atom& a : fd->atoms) {
            require(std::isfinite(a.value), "atoms.value", "must be finite");
            require(a.probability > 0.0, "atoms.probability", "must be > 0");
            total += a.probability;
        }
        require(std::abs(total - 1.0) <= 1e-12, "atoms.probability", "must sum to 1 within 1e-12");
        const double first = fd->atoms.front().value;
        if (std::all_of(fd->atoms.begin(), fd->atoms.end(), [&](const Atom& a) { return a.value == first; }))
            family = PointMass{first};
    }

    DistributionSpec spec;
    std::visit(
        overloaded{
            [&](const PointMass& p) {
                require(std::isfinite(p.value), "value", "must be finite");
                spec.mu_ = p.value;
                spec.sigma2_ = 0.0;
                spec.positive_support_ = p.value > 0.0;
            },
            [&](const Rademacher&) {
                spec.mu_ = 0.0;
                spec.sigma2_ = 1.0;
            },
            [&](const Exponential& e) {
                require(e.rate > 0.0 && std::isfinite(e.rate), "rate", "must be > 0");
                spec.mu_ = 1.0 / e.rate;
                spec.sigma2_ = 1.0 / (e.rate * e.rate);
                spec.positive_support_ = true;
            },
            [&](const Uniform& u) {
                require(std::isfinite(u.lo) && std::isfinite(u.hi), "lo", "bounds must be finite");
                require(u.lo < u.hi, "hi", "must exceed lo");
                spec.mu_ = 0.5 * (u.lo + u.hi);
                spec.sigma2_ = (u.hi - u.lo) * (u.hi - u.lo) / 12.0;
                spec.positive_support_ = u.lo >= 0.0;
            },
            [&](const Normal& n) {
                spec.mu_ = n.mean;
                spec.sigma2_ = n.sd * n.sd;
            },
            [&](const LatticeCounterexample& l) {
                spec.lattice_ = std::make_shared<const LatticeAtomTable>(
                    counterexample_tail_table(l.epsilon, kLatticeAtoms));
                spec.mu_ = 0.0;
                spec.sigma2_ = 1.0;
                spec.log_moment_finite_ = false;
            },
            [&](const FiniteDiscrete& fd) {
                double mean = 0.0;
                for (const Atom& a : fd.atoms) mean += a.probability * a.value;
                double var = 0.0;
                double cum = 0.0;
                bool positive = true;
                for (const Atom& a : fd.atoms) {
                    var += a.probability * (a.value - mean) * (a.value - mean);
                    cum += a.probability;
                    spec.cumulative_.push_back(cum);
                    positive = positive && a.value > 0.0;
                }
                spec.mu_ = mean;
                spec.sigma2_ = var;
                spec.positive_support_ = positive;
            }},
        family);
    spec.family_ = std::move(family);
    spec.sigma_ = std::sqrt(spec.sigma2_);
    if (spec.mu_ != 0.0) spec.gamma_ = spec.sigma_ / spec.mu_;
    return spec;
}

double sample(const DistributionSpec& spec, RandomStream& stream) {
    stream.tally();
    return std::visit(
        overloaded{[](const PointMass& p) { return p.value; },
                   [&](const Rademacher&) { return (stream() >> 63) ? 1.0 : -1.0; },
                   [&](const Exponential& e) {
                       // (bits + 1/2) 2^-53 lies strictly inside (0, 1), so the draw is > 0.
                       const double u = (static_cast<double>(stream() >> 11) + 0.5) * 0x1.0p-53;
                       return -std::log(u) / e.rate;
                   },
                   [&](const Uniform& u) {
                       const double v = (static_cast<double>(stream() >> 11) + 0.5) * 0x1.0p-53;
                       return u.lo + (u.hi - u.lo) * v;
                   },
                   [&](const Normal& n) { return n.mean + n.sd * stream.normal(); },
                   [&](const LatticeCounterexample&) {
                       const LatticeAtomTable& table = *spec.lattice();
                       double u = stream.uniform();
                       const bool negative = (stream() >> 63) != 0;
                       for (std::size_t i = 0; i < table.size(); ++i) {
                           const double p = std::exp(table.atom_log_probs[i]);
                           if (p == 0.0) break;
                           if (u < p) {
                               const double v = lattice_atom_value(table, i + 1);
                               return negative ? -v : v;
                           }
                           u -= p;
                       }
                       return 0.0;
                   },
                   [&](const FiniteDiscrete& fd) {
                       const double u = stream.uniform() * spec.cumulative_.back();
                       auto it = std::upper_bound(spec.cumulative_.begin(), spec.cumulative_.end(), u);
                       if (it == spec.cumulative_.end()) --it;
                       return fd.atoms[static_cast<std::size_t>(it - spec.cumulative_.begin())].value;
                   }},
        spec.family());
}

double tail_second_central_moment(const DistributionSpec& spec, std::uint64_t k) {
    if (k == 0) throw PreconditionError("truncation index k must be >= 1");
    const double kd = static_cast<double>(k);
    return std::visit(
        overloaded{[](const PointMass&) { return 0.0; },
                   [](const Rademacher&) { return 0.0; },
                   [&](const Exponential& e) {
                       // |X - mu| <= sigma k  <=>  rate X in [0, 1 + k] for k >= 1
                       const double y = 1.0 + kd;
                       return std::exp(-y) * (y * y + 1.0) / (e.rate * e.rate);
                   },
                   [&](const Uniform& u) {
                       const double h = 0.5 * (u.hi - u.lo);
                       const double t = spec.sigma() * kd;
                       return t >= h ? 0.0 : (h * h * h - t * t * t) / (3.0 * h);
                   },
                   [&](const Normal&) {
                       return spec.sigma2() * (2.0 * kd * normal_pdf(kd) + std::erfc(kd * kInvSqrt2));
                   },
                   [&](const LatticeCounterexample& l) { return lattice_tail(l.epsilon, kd); },
                   [&](const FiniteDiscrete& fd) {
                       const double t = spec.sigma() * kd * (1.0 + kAtomSlack);
                       double sum = 0.0;
                       for (const Atom& a : fd.atoms) {
                           const double d = a.value - spec.mu();
                           if (std::abs(d) > t) sum += a.probability * d * d;
                       }
                       return sum;
                   }},
        spec.family());
}

double truncated_second_central_moment(const DistributionSpec& spec, std::uint64_t k) {
    if (k == 0) throw PreconditionError("truncation index k must be >= 1");
    const double kd = static_cast<double>(k);
    return std::visit(
        overloaded{[&](const Normal&) {
                       return spec.sigma2() * (std::erf(kd * kInvSqrt2) - 2.0 * kd * normal_pdf(kd));
                   },
                   [&](const LatticeCounterexample& l) { return lattice_within(l.epsilon, kd); },
                   [&](const FiniteDiscrete& fd) {
                       const double t = spec.sigma() * kd * (1.0 + kAtomSlack);
                       double sum = 0.0;
                       for (const Atom& a : fd.atoms) {
                           const double d = a.value - spec.mu();
                           if (std::abs(d) <= t) sum += a.probability * d * d;
                       }
                       return sum;
                   },
                   [&](const auto&) { return spec.sigma2() - tail_second_central_moment(spec, k); }},
        spec.family());
}

double truncated_second_central_moment_quadrature(const DistributionSpec& spec, std::uint64_t k) {
    if (k == 0) throw PreconditionError("truncation index k must be >= 1");
    const double radius = spec.sigma() * static_cast<double>(k);
    return radial_integral(
        spec, [](double d) { return d * d; }, 0.0, radius, "truncated second moment");
}

double capped_log_second_moment(const DistributionSpec& spec, std::uint64_t n) {
    if (n == 0) throw PreconditionError("n must be >= 1");
    if (spec.sigma2() == 0.0) return 0.0;
    const double log_n = std::log(static_cast<double>(n));
    const double sigma = spec.sigma();
    return std::visit(
        overloaded{[](const PointMass&) { return 0.0; },
                   [](const Rademacher&) { return 0.0; },  // |X - mu| / sigma == 1
                   [&](const LatticeCounterexample& l) {
                       const std::uint64_t first = lattice_first_atom_above_log(l.epsilon, log_n);
                       double sum = 0.0;
                       for (std::uint64_t m = 1; m < first; ++m)
                           sum += std::pow(static_cast<double>(m), l.epsilon);
                       return kLatticeC * (sum + log_n * zeta2_tail(first));
                   },
                   [&](const FiniteDiscrete& fd) {
                       double sum = 0.0;
                       for (const Atom& a : fd.atoms) {
                           const double d = std::abs(a.value - spec.mu());
                           const double capped = std::min(log_n, std::log(d / sigma));
                           if (capped > 0.0) sum += a.probability * d * d * capped;
                       }
                       return sum;
                   },
                   [&](const auto&) {
                       const double inner = radial_integral(
                           spec, [sigma](double d) { return d * d * std::log(d / sigma); }, sigma,
                           sigma * static_cast<double>(n), "capped log moment");
                       return inner + log_n * tail_second_central_moment(spec, n);
                   }},
        spec.family());
}

std::optional<double> central_abs_moment(const DistributionSpec& spec, double p) {
    if (!(p >= 1.0)) throw PreconditionError("moment order p must be >= 1");
    return std::visit(
        overloaded{[](const PointMass&) -> std::optional<double> { return 0.0; },
                   [](const Rademacher&) -> std::optional<double> { return 1.0; },
                   [&](const Exponential& e) -> std::optional<double> {
                       // E|Y - 1|^p for Y ~ Exp(1): e^-1 (Gamma(p+1) + int_0^1 u^p e^u du)
                       double series = 0.0;
                       double factorial = 1.0;
                       for (int j = 0; j < 60; ++j) {
                           if (j > 0) factorial *= j;
                           series += 1.0 / (factorial * (p + j + 1.0));
                       }
                       return std::exp(-1.0) * (std::tgamma(p + 1.0) + series) / std::pow(e.rate, p);
                   },
                   [&](const Uniform& u) -> std::optional<double> {
                       const double h = 0.5 * (u.hi - u.lo);
                       return std::pow(h, p) / (p + 1.0);
                   },
                   [&](const Normal& n) -> std::optional<double> {
                       return std::pow(n.sd, p) * std::pow(2.0, 0.5 * p) * std::tgamma(0.5 * (p + 1.0)) /
                              std::sqrt(kPi);
                   },
                   [&](const LatticeCounterexample& l) -> std::optional<double> {
                       if (p > 2.0) return std::nullopt;
                       if (p == 2.0) return spec.sigma2();
                       // sum_m C/m^2 k_m^(p-2); terms decay like exp(-(2-p) m^(2+eps))
                       double sum = 0.0;
                       for (std::uint64_t m = 1;; ++m) {
                           const double x = static_cast<double>(m);
                           const double term = std::exp((p - 2.0) * std::pow(x, 2.0 + l.epsilon)) / (x * x);
                           sum += term;
                           if (term < 1e-18 * sum) break;
                       }
                       return kLatticeC * sum;
                   },
                   [&](const FiniteDiscrete& fd) -> std::optional<double> {
                       double sum = 0.0;
                       for (const Atom& a : fd.atoms) sum += a.probability * std::pow(std::abs(a.value - spec.mu()), p);
                       return sum;
                   }},
        spec.family());
}

}  // namespace trilab
