#pragma once

#include <array>
#include <optional>

namespace hopfdde {

/// Constants of
///   x'(t) = -[beta0/(1+x(t)^n) + delta] x(t) + k beta0 x(t-r)/(1+x(t-r)^n).
/// `r` is absent for operations that solve for the delay.
struct Parameters {
    double beta0 = 1.0;
    double n = 2.0;
    double delta = 0.1;
    double k = 1.5;
    std::optional<double> r;

    /// Throws UsageError unless beta0 > 0, delta > 0, n >= 1 and r > 0 when set.
    void validate() const;
    /// validate() plus k in (1, 2], required wherever x2 is involved.
    void validate_for_x2() const;

    Parameters with_r(double delay) const {
        Parameters p = *this;
        p.r = delay;
        return p;
    }
    Parameters without_r() const {
        Parameters p = *this;
        p.r.reset();
        return p;
    }
    double delay() const;
};

struct EquilibriumSet {
    double x1 = 0.0;
    std::optional<double> x2;
    /// (beta0/delta)(k-1) - 1 vanishes to relative 1e-14.
    bool degenerate_boundary = false;
};

/// B[m] = q^{(m)}(x2) for q(x) = beta(x) x, m = 1..5. B[0] holds q(x2).
struct DerivativeSet {
    std::array<double, 6> B{};

    double operator[](int m) const { return B.at(static_cast<std::size_t>(m)); }
};

double beta(double x, const Parameters& params);

/// beta^{(m)}(x) for m = 0..5.
std::array<double, 6> beta_derivatives(double x, const Parameters& params);

/// (beta0/delta)(k-1) - 1; x2 exists iff positive.
double existence_margin(const Parameters& params);

EquilibriumSet equilibria(const Parameters& params);

/// The nontrivial equilibrium; throws DomainError when it does not exist.
double require_x2(const Parameters& params);

DerivativeSet derivative_set(const Parameters& params, double x2);

/// B1 = delta/(k-1) [n delta/(beta0 (k-1)) - n + 1].
double b1_closed_form(const Parameters& params);

}  // namespace hopfdde
