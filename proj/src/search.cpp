#include "hopfdde/search.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "hopfdde/errors.hpp"
#include "hopfdde/parallel.hpp"

namespace hopfdde {

namespace {

Parameters surface_params(double n, double beta0, double k, double delta) {
    Parameters p;
    p.n = n;
    p.beta0 = beta0;
    p.k = k;
    p.delta = delta;
    return p;
}

std::vector<double> k_decades() {
    std::vector<double> ks;
    for (int i = 1; i <= 9; ++i) ks.push_back(1.0 + 0.1 * i);
    return ks;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// Outcome of the delta walk, including why it ended.
struct Walk {
    std::optional<std::pair<double, double>> bracket;
    bool saw_hopf = false;
    int l1_sign = 0;
};

Walk walk_delta(double n, double beta0, double k, const GridSpec& grid) {
    Walk out;
    const double cap = grid.delta_cap(beta0, k);
    std::optional<std::pair<double, double>> prev;  // (delta, l1)
    for (double delta = grid.delta_seed; delta <= cap; delta *= grid.delta_growth) {
        double value;
        try {
            value = l1_on_surface(n, beta0, k, delta);
        } catch (const DomainError&) {
            if (out.saw_hopf) break;
            continue;
        } catch (const NumericalError&) {
            continue;
        }
        out.saw_hopf = true;
        if (value == 0.0) {
            out.bracket = {delta, delta};
            return out;
        }
        if (prev && sign_of(prev->second) != sign_of(value)) {
            out.bracket = {prev->first, delta};
            return out;
        }
        if (out.l1_sign == 0) out.l1_sign = sign_of(value);
        prev = {delta, value};
    }
    return out;
}

Codim2Record make_record(double n, double beta0, double k, double delta) {
    const LyapunovReport rep = lyapunov_at(surface_params(n, beta0, k, delta), true);
    Codim2Record rec;
    rec.n = n;
    rec.beta0 = beta0;
    rec.k = k;
    rec.delta_star = delta;
    rec.r_star = rep.hopf.r();
    rec.omega_star = rep.hopf.omega;
    rec.l1_residual = rep.l1;
    rec.l2 = *rep.l2;
    return rec;
}

}  // namespace

void GridSpec::validate() const {
    if (n_values.empty() || beta0_values.empty() || k_values.empty())
        throw UsageError("grid needs nonempty n, beta0 and k lists");
    for (double n : n_values)
        if (!(n >= 1.0)) throw UsageError("grid n values must be >= 1");
    for (double b : beta0_values)
        if (!(b > 0.0)) throw UsageError("grid beta0 values must be positive");
    for (double k : k_values)
        if (!(k > 1.0 && k <= 2.0)) throw UsageError("grid k values must lie in (1, 2]");
    if (!(delta_seed > 0.0)) throw UsageError("delta_seed must be positive");
    if (!(delta_growth > 1.0)) throw UsageError("delta_growth must exceed 1");
    if (delta_max && !(*delta_max > 0.0)) throw UsageError("delta_max must be positive");
}

double GridSpec::delta_cap(double beta0, double k) const {
    return delta_max ? *delta_max : beta0 * (k - 1.0);
}

GridSpec survey_preset() {
    GridSpec g;
    g.n_values = {1.0, 1.5};
    for (int n = 2; n <= 12; ++n) g.n_values.push_back(n);
    g.beta0_values = {0.5, 1.0, 1.5, 2.0, 2.5};
    g.k_values = k_decades();
    return g;
}

GridSpec survey_n2_preset() {
    GridSpec g = survey_preset();
    g.n_values = {2.0};
    return g;
}

GridSpec grid_from_json(const nlohmann::json& j) {
    GridSpec g;
    try {
        g.n_values = j.at("n_values").get<std::vector<double>>();
        g.beta0_values = j.at("beta0_values").get<std::vector<double>>();
        g.k_values = j.at("k_values").get<std::vector<double>>();
        if (j.contains("delta_seed")) g.delta_seed = j.at("delta_seed").get<double>();
        if (j.contains("delta_growth")) g.delta_growth = j.at("delta_growth").get<double>();
        if (j.contains("delta_max") && !j.at("delta_max").is_null())
            g.delta_max = j.at("delta_max").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("bad grid spec: ") + e.what());
    }
    g.validate();
    return g;
}

double l1_on_surface(double n, double beta0, double k, double delta) {
    return lyapunov_at(surface_params(n, beta0, k, delta), false).l1;
}

std::optional<std::pair<double, double>> bracket_l1_sign_change(double n, double beta0, double k,
                                                                const GridSpec& grid) {
    grid.validate();
    return walk_delta(n, beta0, k, grid).bracket;
}

Codim2Record bisect_codim2(double n, double beta0, double k, double delta_lo, double delta_hi,
                           double tol_l1) {
    if (!(tol_l1 > 0.0)) throw UsageError("l1 tolerance must be positive");
    if (delta_lo > delta_hi) std::swap(delta_lo, delta_hi);
    double f_lo = l1_on_surface(n, beta0, k, delta_lo);
    if (f_lo == 0.0 || std::abs(f_lo) <= tol_l1) return make_record(n, beta0, k, delta_lo);
    double f_hi = l1_on_surface(n, beta0, k, delta_hi);
    if (f_hi == 0.0 || std::abs(f_hi) <= tol_l1) return make_record(n, beta0, k, delta_hi);
    if (sign_of(f_lo) == sign_of(f_hi))
        throw UsageError("l1 has the same sign at both ends of the delta bracket");

    double best = std::abs(f_lo) < std::abs(f_hi) ? delta_lo : delta_hi;
    double best_val = std::min(std::abs(f_lo), std::abs(f_hi));
    while (delta_hi - delta_lo >= 1e-14 * delta_hi) {
        const double mid = 0.5 * (delta_lo + delta_hi);
        const double f_mid = l1_on_surface(n, beta0, k, mid);
        if (std::abs(f_mid) < best_val) {
            best = mid;
            best_val = std::abs(f_mid);
        }
        if (f_mid == 0.0 || std::abs(f_mid) <= tol_l1) return make_record(n, beta0, k, mid);
        if (sign_of(f_mid) == sign_of(f_lo)) {
            delta_lo = mid;
            f_lo = f_mid;
        } else {
            delta_hi = mid;
        }
    }
    std::ostringstream msg;
    msg.precision(17);
    msg << "bisection collapsed before |l1| <= " << tol_l1 << "; best delta " << best << " with |l1| "
        << best_val;
    throw NumericalError(msg.str());
}

std::optional<Codim2Record> find_codim2(double n, double beta0, double k, const GridSpec& grid,
                                        double tol_l1) {
    const auto bracket = bracket_l1_sign_change(n, beta0, k, grid);
    if (!bracket) return std::nullopt;
    return bisect_codim2(n, beta0, k, bracket->first, bracket->second, tol_l1);
}

ScanResult scan_grid(const GridSpec& grid, unsigned threads, double tol_l1) {
    grid.validate();
    struct Cell {
        double n, beta0, k;
        std::optional<Codim2Record> record;
        CellOutcome outcome;
        std::optional<std::string> error;
    };
    std::vector<Cell> cells;
    for (double n : grid.n_values)
        for (double b : grid.beta0_values)
            for (double k : grid.k_values) cells.push_back({n, b, k, {}, {}, {}});

    parallel_for(cells.size(), threads, [&](std::size_t i) {
        Cell& c = cells[i];
        try {
            const Walk walk = walk_delta(c.n, c.beta0, c.k, grid);
            if (walk.bracket) {
                c.record = bisect_codim2(c.n, c.beta0, c.k, walk.bracket->first, walk.bracket->second,
                                         tol_l1);
            } else {
                c.outcome = {c.n, c.beta0, c.k, walk.saw_hopf ? "no-sign-change" : "no-hopf",
                             walk.l1_sign};
            }
        } catch (const std::exception& e) {
            c.error = e.what();
        }
    });

    ScanResult out;
    for (const Cell& c : cells) {
        if (c.error) throw NumericalError("scan cell failed: " + *c.error);
        if (c.record)
            out.records.push_back(*c.record);
        else
            out.empty_cells.push_back(c.outcome);
    }
    auto key = [](const auto& r) { return std::tie(r.n, r.beta0, r.k); };
    std::sort(out.records.begin(), out.records.end(),
              [&](const auto& a, const auto& b) { return key(a) < key(b); });
    std::sort(out.empty_cells.begin(), out.empty_cells.end(),
              [&](const auto& a, const auto& b) { return key(a) < key(b); });
    return out;
}

const std::vector<GoldenRow>& published_rows() {
    static const std::vector<GoldenRow> rows = {
        {0.5, 1.1, 0.0045705962, 26.125314, -0.021},   {0.5, 1.2, 0.0090491351, 25.751524, -0.0151},
        {0.5, 1.3, 0.0134437887, 25.422162, -0.0124},  {0.5, 1.4, 0.0177612407, 25.130258, -0.0108},
        {0.5, 1.5, 0.0220070315, 24.870352, -0.0097},  {0.5, 1.6, 0.0261858065, 24.638093, -0.0088},
        {0.5, 1.7, 0.0303014988, 24.429962, -0.0081},  {0.5, 1.8, 0.0343574676, 24.243076, -0.0076},
        {0.5, 1.9, 0.0383566021, 24.075039, -0.0071},

        {1.0, 1.1, 0.0091411924, 13.062657, -0.0205},  {1.0, 1.2, 0.0180982702, 12.875762, -0.0142},
        {1.0, 1.3, 0.0268875774, 12.711081, -0.0114},  {1.0, 1.4, 0.0355224814, 12.565129, -0.0097},
        {1.0, 1.5, 0.0440140630, 12.435176, -0.0085},  {1.0, 1.6, 0.0523716129, 12.319046, -0.0076},
        {1.0, 1.7, 0.0606029975, 12.214981, -0.0069},  {1.0, 1.8, 0.0687149345, 12.121538, -0.0063},
        {1.0, 1.9, 0.0767132043, 12.037519, -0.0059},

        {1.5, 1.1, 0.0137117887, 8.708438, -0.0204},   {1.5, 1.2, 0.0271474053, 8.583841, -0.0140},
        {1.5, 1.3, 0.0403313662, 8.474054, -0.0112},   {1.5, 1.4, 0.0532837222, 8.376752, -0.0095},
        {1.5, 1.5, 0.0660210946, 8.290117, -0.0083},   {1.5, 1.6, 0.0785741932, 8.212697, -0.0074},
        {1.5, 1.7, 0.0909044966, 8.143320, -0.0067},   {1.5, 1.8, 0.1030724022, 8.081025, -0.0061},
        {1.5, 1.9, 0.1150698062, 8.025013, -0.0056},

        {2.0, 1.1, 0.018282385, 6.531328, -0.0203},    {2.0, 1.2, 0.036196540, 6.437880, -0.014},
        {2.0, 1.3, 0.053775154, 6.355540, -0.0111},    {2.0, 1.4, 0.071044963, 6.282564, -0.0093},
        {2.0, 1.5, 0.088028126, 6.217588, -0.0082},    {2.0, 1.6, 0.104743225, 6.159523, -0.0073},
        {2.0, 1.7, 0.121205995, 6.107490, -0.0066},    {2.0, 1.8, 0.137429869, 6.060769, -0.0060},
        {2.0, 1.9, 0.153426408, 6.018759, -0.0055},

        {2.5, 1.1, 0.022852981, 5.225062, -0.0203},    {2.5, 1.2, 0.045245675, 5.150304, -0.0139},
        {2.5, 1.3, 0.067218943, 5.084432, -0.0110},    {2.5, 1.4, 0.088806203, 5.026051, -0.0093},
        {2.5, 1.5, 0.110035157, 4.974074, -0.0081},    {2.5, 1.6, 0.130929032, 4.927618, -0.0073},
        {2.5, 1.7, 0.151507494, 4.885992, -0.0066},    {2.5, 1.8, 0.171787337, 4.848615, -0.0060},
        {2.5, 1.9, 0.191783010, 4.815007, -0.0055},
    };
    return rows;
}

bool TablesReport::all_rows_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const RowCheck& r) { return r.ok(); });
}

TablesReport reproduce_tables(const GridSpec& preset, unsigned threads, const TableTolerances& tol) {
    TablesReport rep;
    rep.scan = scan_grid(preset, threads);
    auto near = [](double a, double b) { return std::abs(a - b) < 1e-9; };

    for (const GoldenRow& g : published_rows()) {
        RowCheck check;
        check.expected = g;
        for (const auto& rec : rep.scan.records)
            if (near(rec.n, 2.0) && near(rec.beta0, g.beta0) && near(rec.k, g.k)) check.actual = rec;
        if (check.actual) {
            const Codim2Record& a = *check.actual;
            check.delta_rel_err = std::abs(a.delta_star - g.delta) / g.delta;
            check.r_rel_err = std::abs(a.r_star - g.r) / g.r;
            check.l2_abs_err = std::abs(a.l2 - g.l2);
            check.delta_ok = check.delta_rel_err <= tol.delta_rel;
            check.r_ok = check.r_rel_err <= tol.r_rel;
            check.l2_ok = check.l2_abs_err <= tol.l2_abs;
            check.l2_negative = a.l2 < 0.0;
        }
        rep.rows.push_back(check);
    }

    for (const auto& rec : rep.scan.records) {
        if (near(rec.n, 1.5) && near(rec.beta0, 1.0) && near(rec.k, 1.5)) rep.n15_beta0_1 = rec;
        if (rec.n >= 3.0) ++rep.n_ge3_cells;
        if (near(rec.n, 1.0)) ++rep.n1_cells;
    }
    for (const auto& cell : rep.scan.empty_cells) {
        if (cell.n >= 3.0) {
            ++rep.n_ge3_cells;
            ++rep.n_ge3_without_codim2;
        }
        if (near(cell.n, 1.0)) {
            ++rep.n1_cells;
            if (cell.reason == "no-hopf") ++rep.n1_without_hopf;
        }
    }
    return rep;
}

}  // namespace hopfdde
