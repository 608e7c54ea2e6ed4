#include "hopfdde/center_manifold.hpp"

#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "hopfdde/errors.hpp"

namespace hopfdde {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr int kMaxDegree = 5;

constexpr double factorial(int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

cplx expi(double phase) { return {std::cos(phase), std::sin(phase)}; }

std::string index_name(int j, int k) { return std::to_string(j) + std::to_string(k); }

/// Truncated bivariate polynomial in (u, conj(u)) with complex coefficients.
struct BiSeries {
    std::array<std::array<cplx, kMaxDegree + 1>, kMaxDegree + 1> c{};

    cplx& operator()(int a, int b) { return c[a][b]; }
    cplx operator()(int a, int b) const { return c[a][b]; }

    BiSeries times(const BiSeries& o, int max_degree) const {
        BiSeries out;
        for (int a = 0; a <= max_degree; ++a)
            for (int b = 0; a + b <= max_degree; ++b) {
                if (c[a][b] == cplx{}) continue;
                for (int x = 0; a + x <= max_degree; ++x)
                    for (int y = 0; a + b + x + y <= max_degree; ++y)
                        out.c[a + x][b + y] += c[a][b] * o.c[x][y];
            }
        return out;
    }
};

/// sum_{m=2}^{order} B_m/m! A^m, truncated at total degree `order`.
BiSeries taylor_nonlinearity(const BiSeries& A, const DerivativeSet& B, int order) {
    BiSeries out;
    BiSeries power = A;
    for (int m = 2; m <= order; ++m) {
        power = power.times(A, order);
        const double coef = B[m] / factorial(m);
        for (int a = 0; a <= order; ++a)
            for (int b = 0; a + b <= order; ++b) out(a, b) += coef * power(a, b);
    }
    return out;
}

void require_order(int order) {
    if (order < 2 || order > kMaxDegree) throw UsageError("f_jk order must be in 2..5");
}

}  // namespace

ProjectionData projection_data(const HopfPoint& h, const DerivativeSet& B) {
    ProjectionData pd;
    pd.omega = h.omega;
    pd.r = h.r();
    pd.delta = h.params.delta;
    pd.k = h.params.k;
    pd.B = B;
    const double p = h.params.delta + B[1];
    const double w = h.omega;
    const double r = pd.r;
    pd.psi10 = cplx(1.0 + p * r, -w * r) / ((1.0 + p * r) * (1.0 + p * r) + w * w * r * r);
    return pd;
}

ProjectionData projection_data(const HopfPoint& h) {
    return projection_data(h, derivative_set(h.params, h.x2));
}

QuasiPolynomial adjoint_eigenfunction(const ProjectionData& pd) {
    return QuasiPolynomial::term(pd.omega, pd.psi10, 0, -1);
}

cplx bilinear_form(const QuasiPolynomial& psi, const QuasiPolynomial& phi, const ProjectionData& pd) {
    if (psi.is_zero() || phi.is_zero()) return {};
    if (psi.omega() != pd.omega || phi.omega() != pd.omega)
        throw UsageError("bilinear form arguments must share the Hopf frequency");
    const QuasiPolynomial integrand = qp_multiply(psi.translated(pd.r), phi);
    return psi.eval(0.0) * phi.eval(0.0) + pd.q() * qp_definite_integral(integrand, -pd.r, 0.0);
}

cplx CoefficientTable::f_at(int j, int k) const {
    auto it = f.find({j, k});
    if (it == f.end()) throw UsageError("f_" + index_name(j, k) + " not available");
    return it->second;
}

cplx CoefficientTable::g_at(int j, int k) const {
    auto it = g.find({j, k});
    if (it == g.end()) throw UsageError("g_" + index_name(j, k) + " not available");
    return it->second;
}

const WEntry& WTable::at(int j, int k) const {
    auto it = w.find({j, k});
    if (it == w.end()) throw UsageError("w_" + index_name(j, k) + " not solved yet");
    return it->second;
}

std::map<Index, cplx> expand_fjk(int order, const WTable& W, const ProjectionData& pd) {
    require_order(order);
    const cplx e = expi(-pd.omega * pd.r);
    BiSeries at0, at_mr;
    at0(1, 0) = 1.0;
    at0(0, 1) = 1.0;
    at_mr(1, 0) = e;
    at_mr(0, 1) = std::conj(e);
    for (int deg = 2; deg < order; ++deg)
        for (int a = 0; a <= deg; ++a) {
            const WEntry& we = W.at(a, deg - a);
            const double norm = factorial(a) * factorial(deg - a);
            at0(a, deg - a) = we.at0 / norm;
            at_mr(a, deg - a) = we.at_mr / norm;
        }
    const BiSeries f0 = taylor_nonlinearity(at0, pd.B, order);
    const BiSeries fr = taylor_nonlinearity(at_mr, pd.B, order);
    std::map<Index, cplx> out;
    for (int j = 0; j <= order; ++j) {
        const int k = order - j;
        out[{j, k}] = factorial(j) * factorial(k) * (-f0(j, k) + pd.k * fr(j, k));
    }
    return out;
}

std::map<Index, cplx> closed_form_fjk(int order, const WTable& W, const ProjectionData& pd,
                                      Transcription variant) {
    require_order(order);
    const double B2 = pd.B[2], B3 = pd.B[3], B4 = pd.B[4], B5 = pd.B[5];
    const double k = pd.k;
    const double wr = pd.omega * pd.r;
    // e(m) = exp(-i m omega r)
    auto e = [wr](int m) { return expi(-m * wr); };
    auto w0 = [&W](int a, int b) { return W.at(a, b).at0; };
    auto wm = [&W](int a, int b) { return W.at(a, b).at_mr; };
    // The printed order-4/5 formulas carry a flipped sign on one B_m group at s = 0.
    const double s = variant == Transcription::as_printed ? -1.0 : 1.0;

    std::map<Index, cplx> f;
    switch (order) {
        case 2:
            f[{2, 0}] = -B2 * (1.0 - k * e(2));
            f[{1, 1}] = B2 * (k - 1.0);
            f[{0, 2}] = -B2 * (1.0 - k * e(-2));
            break;
        case 3:
            f[{3, 0}] = -3.0 * B2 * w0(2, 0) - B3 + 3.0 * k * B2 * e(1) * wm(2, 0) + k * B3 * e(3);
            f[{2, 1}] = -B2 * w0(2, 0) - 2.0 * B2 * w0(1, 1) + 2.0 * k * B2 * e(1) * wm(1, 1) +
                        k * B2 * e(-1) * wm(2, 0) - B3 * (1.0 - k * e(1));
            f[{1, 2}] = std::conj(f[{2, 1}]);
            f[{0, 3}] = std::conj(f[{3, 0}]);
            break;
        case 4: {
            f[{4, 0}] = -B2 * (3.0 * w0(2, 0) * w0(2, 0) + 4.0 * w0(3, 0)) - 6.0 * B3 * w0(2, 0) - B4 +
                        k * B2 * (3.0 * wm(2, 0) * wm(2, 0) + 4.0 * e(1) * wm(3, 0)) +
                        6.0 * k * B3 * e(2) * wm(2, 0) + k * B4 * e(4);
            f[{3, 1}] = -B2 * (3.0 * w0(1, 1) * w0(2, 0) + 3.0 * w0(2, 1) + w0(3, 0)) -
                        s * B3 * (3.0 * w0(1, 1) + 3.0 * w0(2, 0)) - B4 +
                        k * B2 * (3.0 * wm(1, 1) * wm(2, 0) + 3.0 * e(1) * wm(2, 1) + e(-1) * wm(3, 0)) +
                        k * B3 * (3.0 * e(2) * wm(1, 1) + 3.0 * wm(2, 0)) + k * B4 * e(2);
            f[{2, 2}] = -B2 * (2.0 * w0(1, 1) * w0(1, 1) + 2.0 * w0(1, 2) + w0(0, 2) * w0(2, 0) +
                               2.0 * w0(2, 1)) -
                        s * B3 * (w0(0, 2) + 4.0 * w0(1, 1) + w0(2, 0)) - B4 +
                        k * B2 * (2.0 * wm(1, 1) * wm(1, 1) + 2.0 * e(1) * wm(1, 2) +
                                  wm(0, 2) * wm(2, 0) + 2.0 * e(-1) * wm(2, 1)) +
                        k * B3 * (wm(0, 2) * e(2) + 4.0 * wm(1, 1) + e(-2) * wm(2, 0)) + k * B4;
            f[{1, 3}] = std::conj(f[{3, 1}]);
            f[{0, 4}] = std::conj(f[{4, 0}]);
            break;
        }
        case 5:
            f[{3, 2}] =
                -B2 * (w0(0, 2) * w0(3, 0) + 6.0 * w0(1, 1) * w0(2, 1) + 3.0 * w0(2, 2) +
                       3.0 * w0(1, 2) * w0(2, 0) + 2.0 * w0(3, 1)) -
                B3 * (6.0 * w0(1, 1) * w0(1, 1) + 3.0 * w0(1, 2) + 3.0 * w0(0, 2) * w0(2, 0) + w0(3, 0) +
                      6.0 * w0(1, 1) * w0(2, 0) + 6.0 * w0(2, 1)) -
                s * B4 * (3.0 * w0(2, 0) + 6.0 * w0(1, 1) + w0(0, 2)) - B5 +
                k * B2 * (6.0 * wm(1, 1) * wm(2, 1) + 3.0 * wm(1, 2) * wm(2, 0) + 3.0 * e(1) * wm(2, 2) +
                          wm(0, 2) * wm(3, 0) + 2.0 * e(-1) * wm(3, 1)) +
                k * B3 * (3.0 * wm(0, 2) * e(1) * wm(2, 0) + 6.0 * e(1) * wm(1, 1) * wm(1, 1) +
                          3.0 * e(2) * wm(1, 2) + e(-2) * wm(3, 0) + 6.0 * e(-1) * wm(1, 1) * wm(2, 0) +
                          6.0 * wm(2, 1)) +
                k * B4 * (3.0 * e(-1) * wm(2, 0) + 6.0 * e(1) * wm(1, 1) + wm(0, 2) * e(3)) +
                k * B5 * e(1);
            break;
    }
    return f;
}

WRightHandSide collect_rhs(int j, int k, const CoefficientTable& tab, const WTable& W,
                           const ProjectionData& pd) {
    const int order = j + k;
    if (j < 0 || k < 0 || order < 2) throw UsageError("invalid w index");
    // d/dt of sum w_ab u^a conj(u)^b/(a! b!) along u' = i omega u + G(u, conj u);
    // the linear part is absorbed in the (j-k) i omega multiplier, the rest is T.
    QuasiPolynomial T(pd.omega);
    for (int deg = 2; deg < order; ++deg)
        for (int a = 0; a <= deg; ++a) {
            const int b = deg - a;
            const double norm = factorial(a) * factorial(b);
            // a u^{a-1} conj(u)^b * g_cd u^c conj(u)^d/(c! d!)
            if (a > 0) {
                const int c = j - a + 1, d = k - b;
                if (c >= 0 && d >= 0 && c + d >= 2)
                    T += (static_cast<double>(a) * tab.g_at(c, d) / (norm * factorial(c) * factorial(d))) * W.at(a, b).fn;
            }
            // b u^a conj(u)^{b-1} * conj(g_cd) conj(u)^c u^d/(c! d!)
            if (b > 0) {
                const int d = j - a, c = k - b + 1;
                if (c >= 0 && d >= 0 && c + d >= 2)
                    T += (static_cast<double>(b) * std::conj(tab.g_at(c, d)) / (norm * factorial(c) * factorial(d))) *
                         W.at(a, b).fn;
            }
        }
    T *= factorial(j) * factorial(k);

    const cplx gjk = tab.g_at(j, k);
    const cplx gkj_bar = std::conj(tab.g_at(k, j));
    WRightHandSide out;
    out.ode = QuasiPolynomial::term(pd.omega, gjk, 0, 1) +
              QuasiPolynomial::term(pd.omega, gkj_bar, 0, -1) + T;
    out.cond = tab.f_at(j, k) - gjk - gkj_bar - T.eval(0.0);
    return out;
}

namespace {

/// e^{m i omega s} int_0^s e^{-m i omega t} rhs(t) dt
QuasiPolynomial particular_solution(int m, const QuasiPolynomial& rhs) {
    return qp_shift_rate(qp_integrate(qp_shift_rate(rhs, -m)), m);
}

WEntry finish_entry(QuasiPolynomial fn, const QuasiPolynomial& rhs, cplx cond) {
    WEntry e;
    e.at0 = fn.eval(0.0);
    e.at_mr = cplx{};
    e.fn = std::move(fn);
    e.ode_rhs = rhs;
    e.cond_rhs = cond;
    return e;
}

}  // namespace

WEntry solve_wjk(int j, int k, const QuasiPolynomial& rhs, cplx cond_rhs, const ProjectionData& pd) {
    const int m = j - k;
    if (std::abs(m) == 1) throw UsageError("w_" + index_name(j, k) + " is resonant; use solve_resonant");
    const QuasiPolynomial part = particular_solution(m, rhs.is_zero() ? QuasiPolynomial(pd.omega) : rhs);
    const cplx lambda = kI * (m * pd.omega);
    const cplx det = lambda + pd.p() - pd.q() * std::exp(-lambda * pd.r);
    if (std::abs(det) < 1e-10)
        throw NumericalError("near-resonant configuration while solving w_" + index_name(j, k));
    const cplx c = (cond_rhs + pd.q() * part.eval(-pd.r)) / det;
    WEntry e = finish_entry(QuasiPolynomial::term(pd.omega, c, 0, m) + part, rhs, cond_rhs);
    e.at_mr = e.fn.eval(-pd.r);
    return e;
}

WEntry solve_resonant(int j, int k, const QuasiPolynomial& rhs, cplx cond_rhs, const ProjectionData& pd,
                      ResonantSolveInfo* info) {
    const int m = j - k;
    if (std::abs(m) != 1) throw UsageError("w_" + index_name(j, k) + " is not resonant");
    const QuasiPolynomial part = particular_solution(m, rhs);
    const cplx lambda = kI * (m * pd.omega);
    const cplx em = std::exp(-lambda * pd.r);
    const double p = pd.p(), q = pd.q();

    // Adjoint eigenfunction for the eigenvalue m i omega; <adj, e^{m i omega s}> = 1.
    const cplx psi0 = m > 0 ? pd.psi10 : std::conj(pd.psi10);
    const QuasiPolynomial adj = QuasiPolynomial::term(pd.omega, psi0, 0, -m);
    const cplx normalization_rhs = -bilinear_form(adj, part, pd);

    // Unknowns (w(0), w(-r), mu):
    //   w(-r) - e^{-m i omega r} w(0)            = P(-r)      (solution map)
    //   (m i omega + p) w(0) - q w(-r)           = cond_rhs   (boundary relation)
    //   w(0)                                     = -<adj, P>  (orthogonality to adj)
    // The first two rows are dependent; mu borders along their left null vector (q, 1).
    Eigen::Matrix3cd A;
    Eigen::Vector3cd b;
    Eigen::Vector2cd border(std::conj(cplx(q)), 1.0);
    border.normalize();
    A << -em, 1.0, border(0), lambda + p, -q, border(1), 1.0, 0.0, 0.0;
    b << part.eval(-pd.r), cond_rhs, normalization_rhs;

    const Eigen::JacobiSVD<Eigen::Matrix3cd> svd(A);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / sv(2);
    if (!(cond <= 1e12))
        throw NumericalError("bordered system for w_" + index_name(j, k) + " is ill-conditioned");
    const Eigen::Vector3cd x = A.fullPivLu().solve(b);

    QuasiPolynomial fn = QuasiPolynomial::term(pd.omega, x(0), 0, m) + part;
    WEntry e = finish_entry(std::move(fn), rhs, cond_rhs);
    e.at_mr = x(1);
    if (info) {
        info->condition_number = cond;
        info->solvability_multiplier = x(2);
        info->solution_map_residual = std::abs(x(1) - em * x(0) - part.eval(-pd.r));
        info->boundary_residual = std::abs((lambda + p) * x(0) - q * x(1) - cond_rhs);
    }
    return e;
}

WEntry conjugate_entry(const WEntry& e) {
    WEntry c;
    c.fn = e.fn.conj();
    c.at0 = std::conj(e.at0);
    c.at_mr = std::conj(e.at_mr);
    c.ode_rhs = e.ode_rhs.conj();
    c.cond_rhs = std::conj(e.cond_rhs);
    return c;
}

CenterManifold build_wtable(const ProjectionData& pd, const BuildOptions& options) {
    if (options.max_order < 3 || options.max_order > kMaxDegree)
        throw UsageError("max_order must be in 3..5");
    CenterManifold cm;

    auto fill = [&](int order) {
        const auto f = options.source == FjkSource::expansion
                           ? expand_fjk(order, cm.W, pd)
                           : closed_form_fjk(order, cm.W, pd, options.transcription);
        for (const auto& [idx, value] : f) {
            const auto [j, k] = idx;
            if (j < k) continue;
            if (order == 5 && !(j == 3 && k == 2)) continue;
            cm.table.f[{j, k}] = value;
            cm.table.g[{j, k}] = pd.psi10 * value;
            if (j != k && order < 5) {
                cm.table.f[{k, j}] = std::conj(value);
                cm.table.g[{k, j}] = pd.psi10 * std::conj(value);
            }
        }
    };
    auto solve = [&](int j, int k) {
        const WRightHandSide rhs = collect_rhs(j, k, cm.table, cm.W, pd);
        WEntry e = std::abs(j - k) == 1 ? solve_resonant(j, k, rhs.ode, rhs.cond, pd, &cm.w21_info)
                                        : solve_wjk(j, k, rhs.ode, rhs.cond, pd);
        if (j != k) cm.W.w[{k, j}] = conjugate_entry(e);
        cm.W.w[{j, k}] = std::move(e);
    };

    fill(2);
    solve(2, 0);
    solve(1, 1);
    fill(3);
    if (options.max_order >= 4) {
        solve(3, 0);
        solve(2, 1);
        fill(4);
    }
    if (options.max_order >= 5) {
        solve(4, 0);
        solve(3, 1);
        solve(2, 2);
        fill(5);
    }
    return cm;
}

double ode_residual(const WEntry& e, int j, int k, const ProjectionData& pd) {
    const QuasiPolynomial d = e.fn.derivative();
    const cplx lambda = kI * ((j - k) * pd.omega);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i <= 10; ++i) {
        const double s = -pd.r * i / 10.0;
        const cplx rhs = lambda * e.fn.eval(s) + e.ode_rhs.eval(s);
        worst = std::max(worst, std::abs(d.eval(s) - rhs));
        scale = std::max(scale, std::abs(rhs));
    }
    return worst / (1.0 + scale);
}

double boundary_residual(const WEntry& e, int j, int k, const ProjectionData& pd) {
    const cplx lambda = kI * ((j - k) * pd.omega);
    return std::abs((lambda + pd.p()) * e.fn.eval(0.0) - pd.q() * e.fn.eval(-pd.r) - e.cond_rhs);
}

nlohmann::json to_json(const CenterManifold& cm) {
    auto pair = [](cplx z) { return nlohmann::json::array({z.real(), z.imag()}); };
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [idx, v] : cm.table.f) out["f_" + index_name(idx.first, idx.second)] = pair(v);
    for (const auto& [idx, v] : cm.table.g) out["g_" + index_name(idx.first, idx.second)] = pair(v);
    for (const auto& [idx, e] : cm.W.w) {
        out["w_" + index_name(idx.first, idx.second) + "_0"] = pair(e.at0);
        out["w_" + index_name(idx.first, idx.second) + "_mr"] = pair(e.at_mr);
    }
    return out;
}

}  // namespace hopfdde
