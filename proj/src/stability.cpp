#include "hopfdde/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "hopfdde/errors.hpp"
#include "hopfdde/parallel.hpp"

namespace hopfdde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LinearData {
    double x2, B1, p, q;
};

LinearData linear_data(const Parameters& params) {
    const double x2 = require_x2(params);
    const double B1 = derivative_set(params, x2)[1];
    return {x2, B1, params.delta + B1, params.k * B1};
}

}  // namespace

std::string to_string(StabilityCase c) {
    switch (c) {
        case StabilityCase::NO_X2: return "NO_X2";
        case StabilityCase::I_A: return "I_A";
        case StabilityCase::I_B: return "I_B";
        case StabilityCase::II: return "II";
    }
    return "?";
}

double omega0_closed(double p, double q) {
    if (!(std::abs(q) > std::abs(p)))
        throw DomainError("no Hopf frequency: |k B1| <= |delta + B1|");
    return std::sqrt(q * q - p * p);
}

double omega0_transcendental(double p, double r) {
    if (!(r > 0.0)) throw UsageError("r must be positive");
    const double upper = std::numbers::pi / r;
    const double eps = 1e-9 * upper;
    auto f = [&](double w) { return w / std::tan(w * r) + p; };
    double lo = eps, hi = upper - eps;
    const double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw DomainError("omega cot(omega r) = -(delta + B1) has no root in (0, pi/r)");
    boost::uintmax_t max_iter = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-13; };
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
    return 0.5 * (a + b);
}

StabilityVerdict classify(const Parameters& params) {
    params.validate_for_x2();
    const double r = params.delay();
    StabilityVerdict v;
    if (!equilibria(params).x2) return v;

    const LinearData lin = linear_data(params);
    v.B1 = lin.B1;
    v.p = lin.p;
    v.q = lin.q;
    const double p = lin.p, q = lin.q;
    const bool hopf_frequency = std::abs(q) > std::abs(p);
    if (hopf_frequency) v.omega0 = omega0_closed(p, q);

    if (lin.B1 >= 0.0) {
        v.case_label = StabilityCase::II;
        v.asymptotically_stable = true;
        v.stable_r_window = {0.0, kInf};
        return v;
    }
    if (p < 0.0) {
        v.case_label = StabilityCase::I_A;
        if (!hopf_frequency) {
            v.window_criterion_inapplicable = true;
            return v;
        }
        const double lo = std::acos(p / q) / *v.omega0;
        const double hi = 1.0 / std::abs(p);
        v.stable_r_window = {lo, hi};
        v.asymptotically_stable = lo < r && r < hi;
        return v;
    }
    v.case_label = StabilityCase::I_B;
    if (p > std::abs(q)) {
        v.asymptotically_stable = true;
        v.stable_r_window = {0.0, kInf};
        return v;
    }
    if (hopf_frequency) {
        const double hi = std::acos(p / q) / *v.omega0;
        v.stable_r_window = {0.0, hi};
        v.asymptotically_stable = r < hi;
    }
    return v;
}

double characteristic_residual(const HopfPoint& h) {
    const std::complex<double> lambda(0.0, h.omega);
    return std::abs(lambda + h.p - h.q * std::exp(-lambda * h.r()));
}

HopfPoint hopf_delay(const Parameters& params) {
    const Parameters base = params.without_r();
    base.validate_for_x2();
    const LinearData lin = linear_data(base);
    if (lin.B1 > 0.0) throw DomainError("case II (B1 > 0): x2 is stable, no Hopf point");
    if (!(std::abs(lin.q) > std::abs(lin.p)))
        throw DomainError("|k B1| <= |delta + B1|: no Hopf point");
    HopfPoint h;
    h.omega = omega0_closed(lin.p, lin.q);
    h.params = base.with_r(std::acos(lin.p / lin.q) / h.omega);
    h.x2 = lin.x2;
    h.B1 = lin.B1;
    h.p = lin.p;
    h.q = lin.q;
    return h;
}

double transversality(const HopfPoint& h) {
    // lambda + p = q e^{-lambda r}  =>  d lambda/dr = -lambda q e^{-lambda r} / (1 + r q e^{-lambda r})
    const std::complex<double> lambda(0.0, h.omega);
    const std::complex<double> qe = h.q * std::exp(-lambda * h.r());
    const std::complex<double> den = 1.0 + h.r() * qe;
    if (std::abs(den) < 1e-12) throw NumericalError("degenerate crossing: 1 + r k B1 e^{-i omega r} = 0");
    return (-lambda * qe / den).real();
}

std::complex<double> characteristic_root(double p, double q, double r, std::complex<double> guess) {
    std::complex<double> z = guess;
    for (int it = 0; it < 100; ++it) {
        const std::complex<double> e = q * std::exp(-z * r);
        const std::complex<double> f = z + p - e;
        const std::complex<double> df = 1.0 + r * e;
        const std::complex<double> step = f / df;
        z -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) return z;
    }
    throw NumericalError("characteristic root Newton iteration did not converge");
}

double GridRange::at(int i) const {
    if (steps <= 1) return min;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

SurfaceMesh hopf_surface_mesh(double n, double beta0, const GridRange& k_grid,
                              const GridRange& delta_grid, unsigned threads) {
    if (k_grid.steps < 1 || delta_grid.steps < 1) throw UsageError("grid needs at least one point");
    if (!(k_grid.min > 0.0) || !(delta_grid.min > 0.0) || !std::isfinite(k_grid.max) ||
        !std::isfinite(delta_grid.max))
        throw UsageError("grid ranges must be finite and positive");

    const std::size_t nk = static_cast<std::size_t>(k_grid.steps);
    const std::size_t nd = static_cast<std::size_t>(delta_grid.steps);
    std::vector<std::optional<SurfaceRecord>> slots(nk * nd);
    parallel_for(slots.size(), threads, [&](std::size_t idx) {
        Parameters params;
        params.n = n;
        params.beta0 = beta0;
        params.k = k_grid.at(static_cast<int>(idx / nd));
        params.delta = delta_grid.at(static_cast<int>(idx % nd));
        try {
            const HopfPoint h = hopf_delay(params);
            slots[idx] = SurfaceRecord{n, beta0, params.k, params.delta, h.r(), h.omega};
        } catch (const DomainError&) {
        } catch (const UsageError&) {
        }
    });

    SurfaceMesh mesh;
    for (auto& s : slots) {
        if (s)
            mesh.records.push_back(*s);
        else
            ++mesh.omitted;
    }
    std::sort(mesh.records.begin(), mesh.records.end(), [](const auto& a, const auto& b) {
        return std::tie(a.k, a.delta) < std::tie(b.k, b.delta);
    });
    return mesh;
}

}  // namespace hopfdde
