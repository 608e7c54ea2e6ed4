#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hopfdde/model.hpp"

namespace hopfdde {

enum class StabilityCase { NO_X2, I_A, I_B, II };

std::string to_string(StabilityCase c);

struct StabilityVerdict {
    StabilityCase case_label = StabilityCase::NO_X2;
    bool asymptotically_stable = false;
    /// Range of r for which the criterion reports stability. The upper end is
    /// +inf when the criterion imposes none.
    std::optional<std::pair<double, double>> stable_r_window;
    /// Hopf frequency sqrt(q^2 - p^2) when |q| > |p|.
    std::optional<double> omega0;
    double B1 = 0.0;
    double p = 0.0;  // delta + B1
    double q = 0.0;  // k B1
    /// Case I.A with |q| <= |p|: the windowed criterion does not apply.
    bool window_criterion_inapplicable = false;
};

/// Linear stability of x2 by the case I.A / I.B / II criteria. Requires r.
StabilityVerdict classify(const Parameters& params);

/// sqrt(q^2 - p^2); DomainError when |q| <= |p|.
double omega0_closed(double p, double q);

/// Root of omega cot(omega r) = -p in (0, pi/r); DomainError without a sign change.
double omega0_transcendental(double p, double r);

struct HopfPoint {
    Parameters params;  // r filled in
    double omega = 0.0;
    double x2 = 0.0;
    double B1 = 0.0;
    double p = 0.0;
    double q = 0.0;

    double r() const { return *params.r; }
};

/// |i omega + p - q exp(-i omega r)|
double characteristic_residual(const HopfPoint& h);

/// r* = arccos(p/q)/omega*, omega* = sqrt(q^2 - p^2). Any r in `params` is ignored.
HopfPoint hopf_delay(const Parameters& params);

/// d Re(lambda)/dr at the crossing lambda = i omega*.
double transversality(const HopfPoint& h);

/// Characteristic root near `guess` for the given (p, q, r), by Newton on
/// lambda + p - q exp(-lambda r).
std::complex<double> characteristic_root(double p, double q, double r, std::complex<double> guess);

struct GridRange {
    double min = 0.0;
    double max = 0.0;
    int steps = 1;  // number of points; 1 means just `min`

    double at(int i) const;
};

struct SurfaceRecord {
    double n, beta0, k, delta, r, omega;
};

struct SurfaceMesh {
    std::vector<SurfaceRecord> records;  // sorted by (k, delta)
    std::size_t omitted = 0;
};

SurfaceMesh hopf_surface_mesh(double n, double beta0, const GridRange& k_grid,
                              const GridRange& delta_grid, unsigned threads = 1);

}  // namespace hopfdde
