// hopfx: command-line front end for the hopfdde library.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "hopfdde/ddesim.hpp"
#include "hopfdde/errors.hpp"
#include "hopfdde/lyapunov.hpp"
#include "hopfdde/search.hpp"
#include "hopfdde/stability.hpp"

using namespace hopfdde;
using nlohmann::json;

namespace {

constexpr int kGoldenMismatch = 4;

unsigned thread_cap() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HOPFX_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) throw UsageError("HOPFX_THREADS must be a positive integer");
        n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return n;
}

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

json opt_num(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string csv_row(std::initializer_list<std::string> cells) {
    std::string out;
    for (const auto& c : cells) {
        if (!out.empty()) out += ',';
        out += c;
    }
    return out + '\n';
}

const char* kRecordHeader = "n,beta0,k,delta_star,r_star,omega_star,l1_residual,l2\n";

std::string record_csv(const Codim2Record& r) {
    return csv_row({num(r.n), num(r.beta0), num(r.k), num(r.delta_star), num(r.r_star),
                    num(r.omega_star), num(r.l1_residual), num(r.l2)});
}

json record_json(const Codim2Record& r) {
    return {{"n", r.n},           {"beta0", r.beta0},           {"k", r.k},
            {"delta_star", r.delta_star}, {"r_star", r.r_star}, {"omega_star", r.omega_star},
            {"l1_residual", r.l1_residual}, {"l2", r.l2}};
}

struct Common {
    std::string format = "csv";
    std::string output;
};

struct Point {
    double n = 0, beta0 = 0, k = 0, delta = 0, r = 0;

    Parameters params(bool with_r) const {
        Parameters p;
        p.n = n;
        p.beta0 = beta0;
        p.k = k;
        p.delta = delta;
        if (with_r) p.r = r;
        return p;
    }
};

void add_point(CLI::App* sub, Point& pt, bool delta, bool r) {
    sub->add_option("--n", pt.n, "Hill exponent")->required();
    sub->add_option("--beta0", pt.beta0, "maximal production rate")->required();
    sub->add_option("--k", pt.k, "amplification factor")->required();
    if (delta) sub->add_option("--delta", pt.delta, "loss rate")->required();
    if (r) sub->add_option("--r", pt.r, "delay")->required();
}

void emit(const Common& c, const std::string& text) {
    if (c.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.output);
    if (!f) throw UsageError("cannot open output file " + c.output);
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("bad number in list: '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hopf and codimension-two analysis of a delayed production/loss model"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("-o,--output", common.output, "write to this file instead of stdout");

    Point pt;

    auto* classify_cmd = app.add_subcommand("classify", "linear stability of x2 at a given delay");
    add_point(classify_cmd, pt, true, true);

    GridRange kr{1.1, 1.9, 9}, dr{0.001, 0.1, 100};
    auto* surface_cmd = app.add_subcommand("hopf-surface", "mesh of Hopf delays r(k, delta)");
    surface_cmd->add_option("--n", pt.n)->required();
    surface_cmd->add_option("--beta0", pt.beta0)->required();
    surface_cmd->add_option("--k-min", kr.min)->required();
    surface_cmd->add_option("--k-max", kr.max)->required();
    surface_cmd->add_option("--k-steps", kr.steps)->required()->check(CLI::PositiveNumber);
    surface_cmd->add_option("--delta-min", dr.min)->required();
    surface_cmd->add_option("--delta-max", dr.max)->required();
    surface_cmd->add_option("--delta-steps", dr.steps)->required()->check(CLI::PositiveNumber);

    bool want_l2 = false;
    auto* lyap_cmd = app.add_subcommand("lyapunov", "first (and second) Lyapunov coefficient at the Hopf point");
    add_point(lyap_cmd, pt, true, false);
    lyap_cmd->add_flag("--l2", want_l2, "also compute l2");

    std::optional<double> delta_lo, delta_hi;
    double tol = 1e-10;
    auto* find_cmd = app.add_subcommand("find-codim2", "locate l1 = 0 on the Hopf surface");
    add_point(find_cmd, pt, false, false);
    auto* lo_opt = find_cmd->add_option("--delta-lo", delta_lo);
    auto* hi_opt = find_cmd->add_option("--delta-hi", delta_hi);
    lo_opt->needs(hi_opt);
    hi_opt->needs(lo_opt);
    find_cmd->add_option("--tol", tol)->check(CLI::PositiveNumber);

    std::string preset, grid_path;
    auto* tables_cmd = app.add_subcommand("tables", "scan a grid and check the n = 2 golden rows");
    auto* preset_opt = tables_cmd->add_option("--preset", preset)->check(CLI::IsMember({"paper"}));
    auto* grid_opt = tables_cmd->add_option("--grid", grid_path, "GridSpec JSON file")->check(CLI::ExistingFile);
    preset_opt->excludes(grid_opt);

    double offset = 0.0, tmax = 0.0;
    int spd = 100;
    auto* sim_cmd = app.add_subcommand("simulate", "integrate the delay equation");
    add_point(sim_cmd, pt, true, true);
    sim_cmd->add_option("--offset", offset, "constant history is x2 + offset")->required();
    sim_cmd->add_option("--tmax", tmax)->required();
    sim_cmd->add_option("--steps-per-delay", spd);

    std::string offsets_text;
    auto* verify_cmd = app.add_subcommand("verify-direction", "simulate near r_H and compare with sign(l1)");
    add_point(verify_cmd, pt, true, false);
    verify_cmd->add_option("--offsets", offsets_text, "delay offsets from r_H, comma separated")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const bool as_json = common.format == "json";
    try {
        if (*classify_cmd) {
            const StabilityVerdict v = classify(pt.params(true));
            json window = nullptr;
            if (v.stable_r_window) window = {v.stable_r_window->first, v.stable_r_window->second};
            if (as_json) {
                emit(common, dump({{"case", to_string(v.case_label)},
                                   {"stable", v.asymptotically_stable},
                                   {"stable_r_window", window},
                                   {"omega0", opt_num(v.omega0)},
                                   {"B1", v.B1}, {"p", v.p}, {"q", v.q},
                                   {"window_criterion_inapplicable", v.window_criterion_inapplicable}}));
            } else {
                const auto w = v.stable_r_window;
                emit(common, std::string("case,stable,window_lo,window_hi,omega0,B1,p,q\n") +
                                 csv_row({to_string(v.case_label), v.asymptotically_stable ? "stable" : "unstable",
                                          w ? num(w->first) : "", w ? num(w->second) : "",
                                          v.omega0 ? num(*v.omega0) : "", num(v.B1), num(v.p), num(v.q)}));
            }
            return 0;
        }
        if (*surface_cmd) {
            const SurfaceMesh mesh = hopf_surface_mesh(pt.n, pt.beta0, kr, dr, thread_cap());
            if (as_json) {
                json arr = json::array();
                for (const auto& r : mesh.records)
                    arr.push_back({{"n", r.n}, {"beta0", r.beta0}, {"k", r.k}, {"delta", r.delta},
                                   {"r", r.r}, {"omega", r.omega}});
                emit(common, dump(arr));
            } else {
                std::string out = "n,beta0,k,delta,r,omega\n";
                for (const auto& r : mesh.records)
                    out += csv_row({num(r.n), num(r.beta0), num(r.k), num(r.delta), num(r.r), num(r.omega)});
                emit(common, out);
            }
            if (mesh.omitted) std::cerr << mesh.omitted << " grid points have no Hopf point\n";
            return 0;
        }
        if (*lyap_cmd) {
            const LyapunovReport rep = lyapunov_at(pt.params(false), want_l2);
            const HopfPoint& h = rep.hopf;
            if (as_json) {
                emit(common, dump({{"n", pt.n}, {"beta0", pt.beta0}, {"k", pt.k}, {"delta", pt.delta},
                                   {"r", h.r()}, {"omega", h.omega}, {"x2", h.x2}, {"l1", rep.l1},
                                   {"l2", opt_num(rep.l2)}, {"criticality", rep.criticality()}}));
            } else {
                emit(common, std::string("n,beta0,k,delta,r,omega,x2,l1,l2,criticality\n") +
                                 csv_row({num(pt.n), num(pt.beta0), num(pt.k), num(pt.delta), num(h.r()),
                                          num(h.omega), num(h.x2), num(rep.l1),
                                          rep.l2 ? num(*rep.l2) : "", rep.criticality()}));
            }
            return 0;
        }
        if (*find_cmd) {
            std::optional<Codim2Record> rec;
            if (delta_lo) {
                rec = bisect_codim2(pt.n, pt.beta0, pt.k, *delta_lo, *delta_hi, tol);
            } else {
                rec = find_codim2(pt.n, pt.beta0, pt.k, survey_preset(), tol);
            }
            if (!rec) throw DomainError("l1 does not change sign along the delta walk");
            emit(common, as_json ? dump(record_json(*rec)) : kRecordHeader + record_csv(*rec));
            return 0;
        }
        if (*tables_cmd) {
            if (preset.empty() && grid_path.empty()) throw UsageError("tables needs --preset or --grid");
            if (!grid_path.empty()) {
                std::ifstream f(grid_path);
                json spec;
                try {
                    f >> spec;
                } catch (const json::exception& e) {
                    throw UsageError(std::string("cannot parse grid file: ") + e.what());
                }
                const ScanResult scan = scan_grid(grid_from_json(spec), thread_cap());
                if (as_json) {
                    json arr = json::array();
                    for (const auto& r : scan.records) arr.push_back(record_json(r));
                    emit(common, dump(arr));
                } else {
                    std::string out = kRecordHeader;
                    for (const auto& r : scan.records) out += record_csv(r);
                    emit(common, out);
                }
                return 0;
            }
            const TablesReport rep = reproduce_tables(survey_preset(), thread_cap());
            std::vector<Codim2Record> rows;
            for (const auto& c : rep.rows)
                if (c.actual) rows.push_back(*c.actual);

            std::vector<const Codim2Record*> n15;
            for (const auto& r : rep.scan.records)
                if (r.n == 1.5) n15.push_back(&r);
            double n15_min_r = std::numeric_limits<double>::infinity();
            for (const auto* r : n15) n15_min_r = std::min(n15_min_r, r->r_star);

            if (as_json) {
                json arr = json::array(), checks = json::array(), n15j = json::array();
                for (const auto& r : rows) arr.push_back(record_json(r));
                for (const auto& c : rep.rows)
                    checks.push_back({{"beta0", c.expected.beta0}, {"k", c.expected.k},
                                      {"delta_rel_err", c.delta_rel_err}, {"r_rel_err", c.r_rel_err},
                                      {"l2_abs_err", c.l2_abs_err}, {"ok", c.ok()}});
                for (const auto* r : n15) n15j.push_back(record_json(*r));
                emit(common, dump({{"records", arr},
                                   {"row_checks", checks},
                                   {"n1_5", n15j},
                                   {"n_ge3_cells", rep.n_ge3_cells},
                                   {"n_ge3_without_codim2", rep.n_ge3_without_codim2},
                                   {"n1_cells", rep.n1_cells},
                                   {"n1_without_hopf", rep.n1_without_hopf}}));
            } else {
                std::string out = kRecordHeader;
                for (const auto& r : rows) out += record_csv(r);
                emit(common, out);
            }
            std::cerr << "n=1.5: " << n15.size() << " codim-2 points, smallest r* " << num(n15_min_r) << "\n"
                      << "3<=n<=12: " << rep.n_ge3_without_codim2 << " of " << rep.n_ge3_cells
                      << " cells without a codim-2 point\n"
                      << "n=1: " << rep.n1_without_hopf << " of " << rep.n1_cells << " cells without Hopf points\n";
            int bad = 0;
            for (const auto& c : rep.rows) {
                if (c.ok()) continue;
                ++bad;
                std::cerr << "mismatch beta0=" << c.expected.beta0 << " k=" << c.expected.k
                          << ": delta rel " << c.delta_rel_err << ", r rel " << c.r_rel_err << ", l2 abs "
                          << c.l2_abs_err << "\n";
            }
            if (bad) {
                std::cerr << bad << " of " << rep.rows.size() << " golden rows outside tolerance\n";
                return kGoldenMismatch;
            }
            return 0;
        }
        if (*sim_cmd) {
            const Trajectory tr = integrate(pt.params(true), offset, tmax, spd);
            if (as_json)
                emit(common, dump({{"t", tr.t}, {"x", tr.x}, {"x2", tr.x2}, {"history_offset", tr.history_offset}}));
            else
                emit(common, trajectory_csv(tr));
            return 0;
        }
        if (*verify_cmd) {
            const DirectionReport rep = verify_direction(pt.params(false), parse_list(offsets_text));
            emit(common, dump(to_json(rep)));
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
