#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hopfdde/model.hpp"

namespace hopfdde {

struct Trajectory {
    std::vector<double> t;
    std::vector<double> x;
    Parameters params;
    /// History is the constant x2 + history_offset on [-r, 0].
    double history_offset = 0.0;
    double x2 = 0.0;
    int steps_per_delay = 0;

    double step() const;
};

/// RK4, method of steps on the grid h = r/steps_per_delay. Delayed values at the
/// half steps come from cubic Hermite interpolation of stored nodes and slopes.
Trajectory integrate(const Parameters& params, double history_offset, double t_max,
                     int steps_per_delay);

enum class AttractorKind { EQUILIBRIUM, LIMIT_CYCLE, UNDETERMINED };
std::string to_string(AttractorKind k);

struct AttractorReport {
    AttractorKind kind = AttractorKind::UNDETERMINED;
    std::optional<double> amplitude;
    std::optional<double> period;
    /// Half of max - min over the final window, whatever the kind.
    double half_range = 0.0;
};

/// Looks at the last `window` time units only.
AttractorReport detect_attractor(const Trajectory& traj, double window);

struct DirectionOptions {
    int steps_per_delay = 100;
    /// Horizon in units of the linear relaxation time 1/(transversality * Delta).
    double relaxation_times = 25.0;
    /// Offset of the initial history used to probe the small-amplitude behavior.
    double small_offset_fraction = 0.01;
    double large_offset_fraction = 0.5;
    double ratio_tolerance = 0.2;
};

struct DirectionProbe {
    double delta_r = 0.0;
    double r = 0.0;
    double history_offset = 0.0;
    AttractorReport attractor;
    /// Final half range below a tenth of the initial offset.
    bool decayed = false;
};

struct DirectionReport {
    double l1 = 0.0;
    double r_hopf = 0.0;
    double omega = 0.0;
    double transversality = 0.0;
    std::string predicted;  // from sign(l1)
    std::string simulated;  // "supercritical", "subcritical" or "inconclusive"
    std::vector<DirectionProbe> probes;
    /// amplitude(Delta_{i+1}) / amplitude(Delta_i) against sqrt(Delta_{i+1}/Delta_i).
    std::vector<double> amplitude_ratios;
    std::vector<double> expected_ratios;
    bool ratios_ok = false;

    bool matches() const { return simulated == predicted; }
};

/// Simulates either side of r_H. The side where x2 is unstable is read from the sign of
/// dRe(lambda)/dr at the crossing. For l1 < 0 each offset Delta is a supercritical probe
/// at the unstable side; for l1 > 0 the first offset is used on the stable side with a
/// small and a large history perturbation.
DirectionReport verify_direction(const Parameters& params, const std::vector<double>& offsets,
                                 const DirectionOptions& opt = {});

std::string trajectory_csv(const Trajectory& traj);
nlohmann::json to_json(const AttractorReport& rep);
nlohmann::json to_json(const DirectionReport& rep);

}  // namespace hopfdde
