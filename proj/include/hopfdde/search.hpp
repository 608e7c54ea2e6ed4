#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hopfdde/lyapunov.hpp"

namespace hopfdde {

/// A located l1 = 0 point on the Hopf surface.
struct Codim2Record {
    double n = 0.0;
    double beta0 = 0.0;
    double k = 0.0;
    double delta_star = 0.0;
    double r_star = 0.0;
    double omega_star = 0.0;
    double l1_residual = 0.0;
    double l2 = 0.0;
};

struct GridSpec {
    std::vector<double> n_values;
    std::vector<double> beta0_values;
    std::vector<double> k_values;
    double delta_seed = 1e-4;
    double delta_growth = 1.25;
    /// Upper end of the delta walk; unset means beta0 (k - 1), where x2 disappears.
    std::optional<double> delta_max;

    void validate() const;
    double delta_cap(double beta0, double k) const;
};

/// n in {1, 1.5, 2, 3..12}, beta0 in {0.5, 1, 1.5, 2, 2.5}, k in {1.1..1.9}.
GridSpec survey_preset();
/// Just the n = 2 slice of the preset (the 45 tabulated cells).
GridSpec survey_n2_preset();

GridSpec grid_from_json(const nlohmann::json& j);

/// l1 on the Hopf surface at (n, beta0, k, delta), r set to r_H(delta).
double l1_on_surface(double n, double beta0, double k, double delta);

/// Geometric walk in delta from the seed; first adjacent pair of Hopf points with
/// opposite l1 signs, or nullopt once the Hopf domain is left or delta_max passed.
std::optional<std::pair<double, double>> bracket_l1_sign_change(double n, double beta0, double k,
                                                                const GridSpec& grid);

/// Bisection in delta until |l1| <= tol_l1; then l2 at the located point.
/// UsageError if the bracket does not change sign, NumericalError (with the best
/// iterate in the message) if the bracket collapses first.
Codim2Record bisect_codim2(double n, double beta0, double k, double delta_lo, double delta_hi,
                           double tol_l1 = 1e-10);

/// bracket + bisect with the default walk; nullopt when no sign change exists.
std::optional<Codim2Record> find_codim2(double n, double beta0, double k, const GridSpec& grid,
                                        double tol_l1 = 1e-10);

struct CellOutcome {
    double n, beta0, k;
    /// Why no record was produced: "no-hopf" (never found a Hopf point),
    /// "no-sign-change" (Hopf points found, l1 never changed sign).
    std::string reason;
    /// Sign of l1 over the sampled Hopf points when reason == "no-sign-change".
    int l1_sign = 0;
};

struct ScanResult {
    std::vector<Codim2Record> records;  // sorted by (n, beta0, k)
    std::vector<CellOutcome> empty_cells;
};

ScanResult scan_grid(const GridSpec& grid, unsigned threads = 1, double tol_l1 = 1e-10);

/// One printed table row: (beta0, k, delta, r, l2).
struct GoldenRow {
    double beta0, k, delta, r, l2;
};

/// The 45 published n = 2 rows.
const std::vector<GoldenRow>& published_rows();

struct RowCheck {
    GoldenRow expected;
    std::optional<Codim2Record> actual;
    double delta_rel_err = 0.0;
    double r_rel_err = 0.0;
    double l2_abs_err = 0.0;
    bool delta_ok = false, r_ok = false, l2_ok = false, l2_negative = false;

    bool ok() const { return delta_ok && r_ok && l2_ok && l2_negative; }
};

struct TableTolerances {
    double delta_rel = 1e-6;
    double r_rel = 1e-5;
    double l2_abs = 5e-4;
};

struct TablesReport {
    ScanResult scan;
    std::vector<RowCheck> rows;  // one per golden row
    /// n = 1.5, beta0 = 1 record if located.
    std::optional<Codim2Record> n15_beta0_1;
    /// Every n >= 3 cell of the scan that produced no record.
    std::size_t n_ge3_cells = 0;
    std::size_t n_ge3_without_codim2 = 0;
    std::size_t n1_cells = 0;
    std::size_t n1_without_hopf = 0;

    bool all_rows_ok() const;
};

/// Runs the scan and checks the n = 2 slice against published_rows().
TablesReport reproduce_tables(const GridSpec& preset, unsigned threads = 1,
                              const TableTolerances& tol = {});

}  // namespace hopfdde
