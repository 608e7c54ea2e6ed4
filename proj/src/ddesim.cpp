#include "hopfdde/ddesim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "hopfdde/errors.hpp"
#include "hopfdde/lyapunov.hpp"
#include "hopfdde/stability.hpp"

namespace hopfdde {

namespace {

double rhs(double x, double xd, const Parameters& p) {
    const double produced = p.beta0 / (1.0 + std::pow(xd, p.n));
    const double lost = p.beta0 / (1.0 + std::pow(x, p.n)) + p.delta;
    return -lost * x + p.k * produced * xd;
}

struct PeakInfo {
    double t, height;
};

std::vector<PeakInfo> peaks(const std::vector<double>& t, const std::vector<double>& x,
                            std::size_t from) {
    std::vector<PeakInfo> out;
    for (std::size_t i = std::max<std::size_t>(from, 1); i + 1 < x.size(); ++i) {
        if (!(x[i] > x[i - 1] && x[i] >= x[i + 1])) continue;
        const double a = x[i - 1], b = x[i], c = x[i + 1];
        const double den = a - 2.0 * b + c;
        const double h = t[i] - t[i - 1];
        double shift = 0.0, height = b;
        if (den != 0.0) {
            shift = 0.5 * (a - c) / den;
            height = b - 0.25 * (a - c) * shift;
        }
        out.push_back({t[i] + shift * h, height});
    }
    return out;
}

}  // namespace

double Trajectory::step() const { return params.delay() / steps_per_delay; }

Trajectory integrate(const Parameters& params, double history_offset, double t_max,
                     int steps_per_delay) {
    params.validate_for_x2();
    if (!(t_max > 0.0)) throw UsageError("t_max must be positive");
    if (steps_per_delay < 100) throw UsageError("steps_per_delay must be at least 100");
    const double r = params.delay();
    const double x2 = require_x2(params);
    const double h = r / steps_per_delay;
    const auto N = static_cast<std::size_t>(steps_per_delay);
    const auto steps = static_cast<std::size_t>(std::ceil(t_max / h - 1e-9));
    const double x0 = x2 + history_offset;

    Trajectory tr;
    tr.params = params;
    tr.history_offset = history_offset;
    tr.x2 = x2;
    tr.steps_per_delay = steps_per_delay;
    tr.t.reserve(steps + 1);
    tr.x.reserve(steps + 1);
    std::vector<double> slope;  // right-sided x' at each node t_i >= 0
    slope.reserve(steps + 1);

    // Delayed state at node i - N (+ half step), i.e. at t_i - r (+ h/2).
    auto delayed = [&](std::size_t i, bool half) {
        if (i < N) return x0;  // constant history covers [-r, 0)
        const std::size_t j = i - N;
        if (!half) return tr.x[j];
        return 0.5 * (tr.x[j] + tr.x[j + 1]) + h * (slope[j] - slope[j + 1]) / 8.0;
    };

    tr.t.push_back(0.0);
    tr.x.push_back(x0);
    slope.push_back(rhs(x0, delayed(0, false), params));
    for (std::size_t i = 0; i < steps; ++i) {
        const double x = tr.x[i];
        const double dm = delayed(i, true);
        const double d1 = delayed(i + 1, false);
        const double k1 = slope[i];
        const double k2 = rhs(x + 0.5 * h * k1, dm, params);
        const double k3 = rhs(x + 0.5 * h * k2, dm, params);
        const double k4 = rhs(x + h * k3, d1, params);
        const double xn = x + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        const double tn = static_cast<double>(i + 1) * h;
        if (!std::isfinite(xn)) {
            std::ostringstream msg;
            msg << "integration blew up at t = " << tn;
            throw NumericalError(msg.str());
        }
        tr.t.push_back(tn);
        tr.x.push_back(xn);
        slope.push_back(rhs(xn, d1, params));
    }
    return tr;
}

std::string to_string(AttractorKind k) {
    switch (k) {
        case AttractorKind::EQUILIBRIUM: return "EQUILIBRIUM";
        case AttractorKind::LIMIT_CYCLE: return "LIMIT_CYCLE";
        case AttractorKind::UNDETERMINED: return "UNDETERMINED";
    }
    return "UNDETERMINED";
}

AttractorReport detect_attractor(const Trajectory& traj, double window) {
    AttractorReport rep;
    if (traj.t.empty() || !(window > 0.0)) return rep;
    const double t_end = traj.t.back();
    const auto first = static_cast<std::size_t>(
        std::lower_bound(traj.t.begin(), traj.t.end(), t_end - window) - traj.t.begin());
    const auto [lo, hi] = std::minmax_element(traj.x.begin() + first, traj.x.end());
    const double range = *hi - *lo;
    rep.half_range = 0.5 * range;
    if (range < 1e-8 * (1.0 + std::abs(traj.x2))) {
        rep.kind = AttractorKind::EQUILIBRIUM;
        return rep;
    }
    const auto pk = peaks(traj.t, traj.x, first);
    if (pk.size() < 3) return rep;
    std::vector<double> gaps;
    for (std::size_t i = 1; i < pk.size(); ++i) gaps.push_back(pk[i].t - pk[i - 1].t);
    const double mean_gap = [&] {
        double s = 0.0;
        for (double g : gaps) s += g;
        return s / static_cast<double>(gaps.size());
    }();
    for (std::size_t i = 1; i < pk.size(); ++i) {
        if (std::abs(pk[i].height - pk[i - 1].height) > 0.01 * range) return rep;
        if (std::abs(gaps[i - 1] - mean_gap) > 0.01 * mean_gap) return rep;
    }
    rep.kind = AttractorKind::LIMIT_CYCLE;
    rep.amplitude = 0.5 * range;
    rep.period = mean_gap;
    return rep;
}

DirectionReport verify_direction(const Parameters& params, const std::vector<double>& offsets,
                                 const DirectionOptions& opt) {
    if (offsets.empty()) throw UsageError("verify_direction needs at least one offset");
    for (double d : offsets)
        if (!(d > 0.0)) throw UsageError("offsets must be positive");

    const LyapunovReport lr = lyapunov_at(params.without_r());
    DirectionReport rep;
    rep.l1 = lr.l1;
    rep.r_hopf = lr.hopf.r();
    rep.omega = lr.hopf.omega;
    rep.transversality = transversality(lr.hopf);
    rep.predicted = lr.criticality();
    const double unstable_sign = rep.transversality > 0.0 ? 1.0 : -1.0;
    const double x2 = lr.hopf.x2;
    const double period = 2.0 * M_PI / rep.omega;

    auto run = [&](double delta_r, double side, double offset) {
        DirectionProbe pr;
        pr.delta_r = delta_r;
        pr.r = rep.r_hopf + side * delta_r;
        pr.history_offset = offset;
        const double relax = 1.0 / (std::abs(rep.transversality) * delta_r);
        const double t_max = std::max(opt.relaxation_times * relax, 40.0 * period);
        const Trajectory tr = integrate(params.with_r(pr.r), offset, t_max, opt.steps_per_delay);
        pr.attractor = detect_attractor(tr, 10.0 * period);
        pr.decayed = pr.attractor.half_range < 0.1 * std::abs(offset);
        return pr;
    };

    if (rep.l1 < 0.0) {
        for (double d : offsets) rep.probes.push_back(run(d, unstable_sign, opt.small_offset_fraction * x2));
        bool cycles = true;
        for (const auto& pr : rep.probes) cycles = cycles && pr.attractor.kind == AttractorKind::LIMIT_CYCLE;
        rep.ratios_ok = cycles && rep.probes.size() >= 2;
        for (std::size_t i = 1; cycles && i < rep.probes.size(); ++i) {
            const double got = *rep.probes[i].attractor.amplitude / *rep.probes[i - 1].attractor.amplitude;
            const double want = std::sqrt(offsets[i] / offsets[i - 1]);
            rep.amplitude_ratios.push_back(got);
            rep.expected_ratios.push_back(want);
            rep.ratios_ok = rep.ratios_ok && std::abs(got / want - 1.0) <= opt.ratio_tolerance;
        }
        rep.simulated = rep.ratios_ok ? "supercritical" : "inconclusive";
    } else {
        const double d = offsets.front();
        const DirectionProbe small = run(d, -unstable_sign, opt.small_offset_fraction * x2);
        const DirectionProbe large = run(d, -unstable_sign, opt.large_offset_fraction * x2);
        rep.probes = {small, large};
        const bool returns = large.decayed || large.attractor.kind == AttractorKind::EQUILIBRIUM;
        rep.simulated = (small.decayed && !returns) ? "subcritical" : "inconclusive";
    }
    return rep;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    os << std::setprecision(17) << "t,x\n";
    for (std::size_t i = 0; i < traj.t.size(); ++i) os << traj.t[i] << ',' << traj.x[i] << '\n';
    return os.str();
}

nlohmann::json to_json(const AttractorReport& rep) {
    nlohmann::json j;
    j["kind"] = to_string(rep.kind);
    j["amplitude"] = rep.amplitude ? nlohmann::json(*rep.amplitude) : nlohmann::json(nullptr);
    j["period"] = rep.period ? nlohmann::json(*rep.period) : nlohmann::json(nullptr);
    j["half_range"] = rep.half_range;
    return j;
}

nlohmann::json to_json(const DirectionReport& rep) {
    nlohmann::json j;
    j["l1"] = rep.l1;
    j["r_hopf"] = rep.r_hopf;
    j["omega"] = rep.omega;
    j["transversality"] = rep.transversality;
    j["predicted"] = rep.predicted;
    j["simulated"] = rep.simulated;
    j["matches"] = rep.matches();
    j["amplitude_ratios"] = rep.amplitude_ratios;
    j["expected_ratios"] = rep.expected_ratios;
    j["ratios_ok"] = rep.ratios_ok;
    auto& probes = j["probes"] = nlohmann::json::array();
    for (const auto& pr : rep.probes) {
        nlohmann::json e = to_json(pr.attractor);
        e["delta_r"] = pr.delta_r;
        e["r"] = pr.r;
        e["history_offset"] = pr.history_offset;
        e["decayed"] = pr.decayed;
        probes.push_back(e);
    }
    return j;
}

}  // namespace hopfdde
