#include "hopfdde/lyapunov.hpp"

#include <cmath>
#include <complex>

namespace hopfdde {

std::string LyapunovReport::criticality() const {
    if (l1 < 0.0) return "supercritical";
    if (l1 > 0.0) return "subcritical";
    return "degenerate";
}

double l1(const CoefficientTable& g, double omega) {
    const cplx i{0.0, 1.0};
    return (i * g.g_at(2, 0) * g.g_at(1, 1) + omega * g.g_at(2, 1)).real() / (2.0 * omega * omega);
}

double l2(const CoefficientTable& tab, double omega) {
    auto g = [&tab](int j, int k) { return tab.g_at(j, k); };
    auto gb = [&tab](int j, int k) { return std::conj(tab.g_at(j, k)); };
    const double w = omega;

    const double t1 = g(3, 2).real() / w;

    const double t2 = (g(2, 0) * gb(3, 1) - g(1, 1) * (4.0 * g(3, 1) + 3.0 * gb(2, 2)) -
                       (1.0 / 3.0) * g(0, 2) * (g(4, 0) + gb(1, 3)) - g(3, 0) * g(1, 2))
                          .imag() /
                      (w * w);

    const cplx re3 = g(2, 0) * (gb(1, 1) * (3.0 * g(1, 2) - gb(3, 0)) +
                                g(0, 2) * (gb(1, 2) - (1.0 / 3.0) * g(3, 0)) +
                                (1.0 / 3.0) * gb(0, 2) * g(0, 3)) +
                     g(1, 1) * (gb(0, 2) * ((5.0 / 3.0) * gb(3, 0) + 3.0 * g(1, 2)) +
                                (1.0 / 3.0) * g(0, 2) * gb(0, 3) - 4.0 * g(1, 1) * g(3, 0));
    const double im2011 = (g(2, 0) * g(1, 1)).imag();
    const double t3 = (re3.real() + 3.0 * im2011 * g(2, 1).imag()) / (w * w * w);

    const cplx im4 = g(1, 1) * gb(0, 2) *
                     (gb(2, 0) * gb(2, 0) - 3.0 * gb(2, 0) * g(1, 1) - 4.0 * g(1, 1) * g(1, 1));
    const double t4 = (im4.imag() + im2011 * (3.0 * (g(2, 0) * g(1, 1)).real() -
                                              2.0 * std::norm(g(0, 2)))) /
                      (w * w * w * w);

    return (t1 + t2 + t3 + t4) / 12.0;
}

LyapunovReport lyapunov_at(const Parameters& params, bool with_l2) {
    LyapunovReport rep;
    rep.hopf = hopf_delay(params);
    const ProjectionData pd = projection_data(rep.hopf);
    BuildOptions opts;
    opts.max_order = with_l2 ? 5 : 3;
    const CenterManifold cm = build_wtable(pd, opts);
    rep.g = cm.table;
    rep.l1 = l1(cm.table, rep.hopf.omega);
    if (with_l2) rep.l2 = l2(cm.table, rep.hopf.omega);
    return rep;
}

}  // namespace hopfdde
