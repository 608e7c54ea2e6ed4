#pragma once

#include <optional>
#include <string>

#include "hopfdde/center_manifold.hpp"
#include "hopfdde/stability.hpp"

namespace hopfdde {

struct LyapunovReport {
    double l1 = 0.0;
    std::optional<double> l2;
    HopfPoint hopf;
    CoefficientTable g;

    /// "supercritical" for l1 < 0, "subcritical" for l1 > 0, "degenerate" otherwise.
    std::string criticality() const;
};

/// (1/(2 omega^2)) Re(i g20 g11 + omega g21)
double l1(const CoefficientTable& g, double omega);

/// Second Lyapunov coefficient from the g_jk through order 5.
double l2(const CoefficientTable& g, double omega);

/// hopf_delay -> derivative_set -> projection_data -> build_wtable -> l1 (and l2).
LyapunovReport lyapunov_at(const Parameters& params, bool with_l2 = false);

}  // namespace hopfdde
