#pragma once

#include <map>
#include <utility>

#include <json.hpp>

#include "hopfdde/model.hpp"
#include "hopfdde/qpoly.hpp"
#include "hopfdde/stability.hpp"

namespace hopfdde {

/// Materialized projection onto the critical eigenspace at a Hopf point:
/// eigenfunctions exp(+-i omega s) and Psi_1(0).
struct ProjectionData {
    double omega = 0.0;
    double r = 0.0;
    double delta = 0.0;
    double k = 0.0;
    DerivativeSet B;
    cplx psi10;

    double p() const { return delta + B[1]; }
    double q() const { return k * B[1]; }
};

ProjectionData projection_data(const HopfPoint& h, const DerivativeSet& B);
ProjectionData projection_data(const HopfPoint& h);

/// psi10 * exp(-i omega zeta) on [0, r], the adjoint eigenfunction paired with exp(i omega s).
QuasiPolynomial adjoint_eigenfunction(const ProjectionData& pd);

/// <psi, phi> = psi(0) phi(0) + k B1 int_{-r}^{0} psi(zeta + r) phi(zeta) d zeta.
cplx bilinear_form(const QuasiPolynomial& psi, const QuasiPolynomial& phi, const ProjectionData& pd);

/// (j, k): exponent of u and of conj(u).
using Index = std::pair<int, int>;

/// Taylor coefficients f_jk of the nonlinearity restricted to the center
/// manifold and g_jk = psi10 f_jk.
struct CoefficientTable {
    std::map<Index, cplx> f;
    std::map<Index, cplx> g;

    bool has(int j, int k) const { return g.count({j, k}) != 0; }
    cplx f_at(int j, int k) const;
    cplx g_at(int j, int k) const;
};

/// One center-manifold coefficient function with the data it was solved from:
///   fn'(s) = (j-k) i omega fn(s) + ode_rhs(s),
///   ((j-k) i omega + B1 + delta) fn(0) - k B1 fn(-r) = cond_rhs.
struct WEntry {
    QuasiPolynomial fn;
    cplx at0;
    cplx at_mr;
    QuasiPolynomial ode_rhs;
    cplx cond_rhs;
};

struct WTable {
    std::map<Index, WEntry> w;

    bool has(int j, int k) const { return w.count({j, k}) != 0; }
    const WEntry& at(int j, int k) const;
};

/// f_jk for every j + k == order (2..5) by formal expansion of
///   -sum_m B_m/m! A_0^m + k sum_m B_m/m! A_{-r}^m,
///   A_s = u e^{i omega s} + conj(u) e^{-i omega s} + sum w_ab(s) u^a conj(u)^b/(a! b!).
/// Requires every w_ab with a + b < order.
std::map<Index, cplx> expand_fjk(int order, const WTable& W, const ProjectionData& pd);

enum class Transcription {
    corrected,   // hand-written formulas with sign errata fixed
    as_printed,  // verbatim, including the sign errata in f31, f22 and f32
};

/// Hand-transcribed closed forms of the same coefficients, for (j, k) with j >= k
/// and their conjugates: order 2 {20,11,02}, 3 {30,21,12,03}, 4 {40,31,22,13,04}, 5 {32}.
std::map<Index, cplx> closed_form_fjk(int order, const WTable& W, const ProjectionData& pd,
                                      Transcription variant = Transcription::corrected);

struct WRightHandSide {
    QuasiPolynomial ode;
    cplx cond;
};

/// Collects the ODE right-hand side and boundary condition for w_jk by
/// coefficient matching in (u, conj(u)). Needs g up to order j + k (including
/// g_kj) and every w_ab with a + b < j + k that pairs with a stored g.
WRightHandSide collect_rhs(int j, int k, const CoefficientTable& tab, const WTable& W,
                           const ProjectionData& pd);

/// Nonresonant solve, |j - k| != 1.
WEntry solve_wjk(int j, int k, const QuasiPolynomial& rhs, cplx cond_rhs, const ProjectionData& pd);

struct ResonantSolveInfo {
    double condition_number = 0.0;
    cplx solvability_multiplier;  // bordering multiplier, zero when the system is consistent
    double solution_map_residual = 0.0;
    double boundary_residual = 0.0;
};

/// Resonant solve for j - k = +-1. The two endpoint relations are dependent;
/// the free multiple of exp(+-i omega s) is fixed by orthogonality to the
/// matching adjoint eigenfunction under the bilinear form.
WEntry solve_resonant(int j, int k, const QuasiPolynomial& rhs, cplx cond_rhs,
                      const ProjectionData& pd, ResonantSolveInfo* info = nullptr);

inline WEntry solve_w21(const QuasiPolynomial& rhs, cplx cond_rhs, const ProjectionData& pd,
                        ResonantSolveInfo* info = nullptr) {
    return solve_resonant(2, 1, rhs, cond_rhs, pd, info);
}

/// w_kj from w_jk.
WEntry conjugate_entry(const WEntry& e);

struct CenterManifold {
    WTable W;
    CoefficientTable table;
    ResonantSolveInfo w21_info;
};

enum class FjkSource { expansion, closed_form };

struct BuildOptions {
    /// Highest order of f/g to compute: 3 is enough for l1, 5 for l2.
    int max_order = 5;
    FjkSource source = FjkSource::expansion;
    Transcription transcription = Transcription::corrected;
};

CenterManifold build_wtable(const ProjectionData& pd, const BuildOptions& options = {});

/// max over 11 points of [-r, 0] of |fn' - ((j-k) i omega fn + ode_rhs)| / (1 + max |RHS|).
double ode_residual(const WEntry& e, int j, int k, const ProjectionData& pd);
/// |((j-k) i omega + B1 + delta) fn(0) - k B1 fn(-r) - cond_rhs|
double boundary_residual(const WEntry& e, int j, int k, const ProjectionData& pd);

/// Keys "f_jk", "g_jk", "w_jk_0", "w_jk_mr" with digits for j, k; values [re, im].
nlohmann::json to_json(const CenterManifold& cm);

}  // namespace hopfdde
