#include "hopfdde/model.hpp"

#include <cmath>
#include <string>

#include "hopfdde/errors.hpp"

namespace hopfdde {

void Parameters::validate() const {
    if (!(beta0 > 0.0) || !std::isfinite(beta0))
        throw UsageError("beta0 must be positive, got " + std::to_string(beta0));
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw UsageError("delta must be positive, got " + std::to_string(delta));
    if (!(n >= 1.0) || !std::isfinite(n))
        throw UsageError("n must be >= 1, got " + std::to_string(n));
    if (!std::isfinite(k))
        throw UsageError("k must be finite");
    if (r && (!(*r > 0.0) || !std::isfinite(*r)))
        throw UsageError("r must be positive, got " + std::to_string(*r));
}

void Parameters::validate_for_x2() const {
    validate();
    if (!(k > 1.0 && k <= 2.0))
        throw UsageError("k must lie in (1, 2], got " + std::to_string(k));
}

double Parameters::delay() const {
    if (!r) throw UsageError("delay r is required");
    return *r;
}

double beta(double x, const Parameters& params) {
    return params.beta0 / (1.0 + std::pow(x, params.n));
}

std::array<double, 6> beta_derivatives(double x, const Parameters& params) {
    // beta * D = beta0 with D = 1 + x^n. Differentiating m times (Leibniz):
    //   sum_{j=0}^{m} C(m,j) beta^{(j)} D^{(m-j)} = 0,   m >= 1.
    const double n = params.n;
    std::array<double, 6> d{};  // D^{(i)}
    d[0] = 1.0 + std::pow(x, n);
    double falling = 1.0;
    for (int i = 1; i < 6; ++i) {
        falling *= n - (i - 1);
        d[i] = falling * std::pow(x, n - i);
    }
    static constexpr double binom[6][6] = {{1, 0, 0, 0, 0, 0},  {1, 1, 0, 0, 0, 0},
                                           {1, 2, 1, 0, 0, 0},  {1, 3, 3, 1, 0, 0},
                                           {1, 4, 6, 4, 1, 0},  {1, 5, 10, 10, 5, 1}};
    std::array<double, 6> b{};
    b[0] = params.beta0 / d[0];
    for (int m = 1; m < 6; ++m) {
        double acc = 0.0;
        for (int j = 0; j < m; ++j) acc += binom[m][j] * b[j] * d[m - j];
        b[m] = -acc / d[0];
    }
    return b;
}

double existence_margin(const Parameters& params) {
    return params.beta0 / params.delta * (params.k - 1.0) - 1.0;
}

EquilibriumSet equilibria(const Parameters& params) {
    params.validate();
    EquilibriumSet eq;
    const double ratio = params.beta0 / params.delta * (params.k - 1.0);
    const double margin = ratio - 1.0;
    if (std::abs(margin) <= 1e-14 * std::max(1.0, std::abs(ratio))) {
        eq.degenerate_boundary = true;
        return eq;
    }
    if (margin > 0.0) eq.x2 = std::pow(margin, 1.0 / params.n);
    return eq;
}

double require_x2(const Parameters& params) {
    params.validate_for_x2();
    const EquilibriumSet eq = equilibria(params);
    if (!eq.x2)
        throw DomainError("no nontrivial equilibrium: (beta0/delta)(k-1) - 1 = " +
                          std::to_string(existence_margin(params)));
    return *eq.x2;
}

DerivativeSet derivative_set(const Parameters& params, double x2) {
    const auto b = beta_derivatives(x2, params);
    DerivativeSet out;
    out.B[0] = b[0] * x2;
    for (int m = 1; m < 6; ++m) out.B[m] = b[m] * x2 + m * b[m - 1];
    return out;
}

double b1_closed_form(const Parameters& params) {
    const double km1 = params.k - 1.0;
    return params.delta / km1 *
           (params.n * params.delta / (params.beta0 * km1) - params.n + 1.0);
}

}  // namespace hopfdde
