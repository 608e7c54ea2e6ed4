#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hopfdde/errors.hpp"
#include "hopfdde/stability.hpp"
#include "oracles.hpp"

using namespace hopfdde;

namespace {

Parameters make(double n, double beta0, double delta, double k, std::optional<double> r = {}) {
    Parameters p;
    p.n = n;
    p.beta0 = beta0;
    p.delta = delta;
    p.k = k;
    p.r = r;
    return p;
}

const double kDeltaFig3 = 0.0440140630;

}  // namespace

TEST_CASE("classify examples") {
    SUBCASE("case II") {
        const StabilityVerdict v = classify(make(1, 1, 0.1, 1.5, 5.0));
        CHECK(v.case_label == StabilityCase::II);
        CHECK(v.asymptotically_stable);
        CHECK(to_string(v.case_label) == "II");
    }
    SUBCASE("case I.A window") {
        const StabilityVerdict v = classify(make(2, 1, kDeltaFig3, 1.5, 20.0));
        CHECK(v.case_label == StabilityCase::I_A);
        CHECK(v.asymptotically_stable);
        REQUIRE(v.stable_r_window.has_value());
        CHECK(v.stable_r_window->first == doctest::Approx(12.435176).epsilon(1e-6));
        CHECK(v.stable_r_window->second == doctest::Approx(35.067).epsilon(1e-4));
        CHECK(v.B1 == doctest::Approx(-0.0725302).epsilon(1e-6));
        CHECK(v.p == doctest::Approx(v.B1 + kDeltaFig3));
        CHECK(v.q == doctest::Approx(1.5 * v.B1));
    }
    SUBCASE("below the window") {
        const StabilityVerdict v = classify(make(2, 1, kDeltaFig3, 1.5, 10.0));
        CHECK(v.case_label == StabilityCase::I_A);
        CHECK_FALSE(v.asymptotically_stable);
    }
    SUBCASE("no x2") {
        const StabilityVerdict v = classify(make(2, 1, 1.0, 1.2, 3.0));
        CHECK(v.case_label == StabilityCase::NO_X2);
        CHECK_FALSE(v.asymptotically_stable);
    }
    SUBCASE("case I.B") {
        // n = 2, k = 1.5: B1 = 2 delta (4 delta - 1) < 0 and delta + B1 > 0 for delta in (1/8, 1/4).
        const Parameters base = make(2, 1, 0.22, 1.5);
        const double B1 = derivative_set(base, require_x2(base))[1];
        REQUIRE(B1 < 0.0);
        REQUIRE(0.22 + B1 > 0.0);
        const StabilityVerdict v = classify(base.with_r(1.0));
        CHECK(v.case_label == StabilityCase::I_B);
        CHECK(v.p > std::abs(v.q));
        CHECK(v.asymptotically_stable);
    }
    SUBCASE("requires r") { CHECK_THROWS_AS(classify(make(2, 1, 0.1, 1.5)), UsageError); }
}

TEST_CASE("case labels follow signs") {
    for (const Parameters& p : oracle::random_hopf_params(100, 31)) {
        const StabilityVerdict v = classify(p.with_r(1.0));
        if (v.B1 > 0) CHECK(v.case_label == StabilityCase::II);
        else if (v.p < 0) CHECK(v.case_label == StabilityCase::I_A);
        else CHECK(v.case_label == StabilityCase::I_B);
    }
}

TEST_CASE("omega0 closed form") {
    CHECK(omega0_closed(0.0, 1.0) == 1.0);
    CHECK(omega0_closed(-0.0285161, -0.1087953) == doctest::Approx(0.1049917).epsilon(1e-6));
    CHECK_THROWS_AS(omega0_closed(1.0, 0.5), DomainError);
}

TEST_CASE("omega0 transcendental") {
    CHECK(std::abs(omega0_transcendental(0.0, 1.0) - M_PI / 2) <= 1e-12);
    CHECK(omega0_transcendental(-0.0285161, 12.435176) == doctest::Approx(0.1049917).epsilon(1e-5));
    for (const Parameters& p : oracle::random_hopf_params(100, 37)) {
        const HopfPoint h = hopf_delay(p);
        const double w = omega0_transcendental(h.p, h.r());
        CHECK(std::abs(w - h.omega) <= 1e-10);
        CHECK(w > 0.0);
        CHECK(w < M_PI / h.r());
        CHECK(std::abs(w / std::tan(w * h.r()) + h.p) <= 1e-10);
    }
}

TEST_CASE("hopf_delay") {
    SUBCASE("table rows") {
        CHECK(std::abs(hopf_delay(make(2, 1, kDeltaFig3, 1.5)).r() - 12.435176) <= 1e-5);
        CHECK(std::abs(hopf_delay(make(2, 0.5, 0.0045705962, 1.1)).r() - 26.125314) <= 1e-5);
    }
    SUBCASE("invariants") {
        for (const Parameters& p : oracle::random_hopf_params(200, 41)) {
            const HopfPoint h = hopf_delay(p);
            const double r = h.r();
            CHECK(characteristic_residual(h) <= 1e-12);
            // Independent residual, written out.
            const cplx lam{0.0, h.omega};
            CHECK(std::abs(lam + p.delta + h.B1 - p.k * h.B1 * std::exp(-lam * r)) <= 1e-12);
            CHECK(h.omega > 0.0);
            CHECK(h.omega < M_PI / r);
            CHECK(std::abs(std::cos(h.omega * r) - h.p / h.q) <= 1e-12);
            CHECK(std::abs(std::sin(h.omega * r) + h.omega / h.q) <= 1e-12);
            CHECK(std::abs(r - std::acos(h.p / h.q) / h.omega) <= 1e-12 * r);
        }
    }
    SUBCASE("exact scaling") {
        for (const Parameters& p : oracle::random_hopf_params(50, 43)) {
            const HopfPoint a = hopf_delay(p);
            for (double c : {2.0, 3.0, 0.5}) {
                Parameters s = p;
                s.beta0 *= c;
                s.delta *= c;
                const HopfPoint b = hopf_delay(s);
                CHECK(b.r() == doctest::Approx(a.r() / c).epsilon(1e-14));
                CHECK(b.omega == doctest::Approx(a.omega * c).epsilon(1e-14));
            }
        }
    }
    SUBCASE("no Hopf point") {
        CHECK_THROWS_AS(hopf_delay(make(1, 1, 0.1, 1.5)), DomainError);   // case II
        CHECK_THROWS_AS(hopf_delay(make(2, 1, 0.45, 1.5)), DomainError);  // |q| <= |p| near the x2 boundary
        CHECK_THROWS_AS(hopf_delay(make(2, 1, 1000, 1.5)), DomainError);  // no x2
    }
}

TEST_CASE("transversality against root tracking") {
    auto tracked = [](const HopfPoint& h) {
        const double dr = 1e-5;
        const cplx up = oracle::newton_root(h.p, h.q, h.r() + dr, {0.0, h.omega});
        const cplx dn = oracle::newton_root(h.p, h.q, h.r() - dr, {0.0, h.omega});
        return (up.real() - dn.real()) / (2 * dr);
    };
    const HopfPoint fig3 = hopf_delay(make(2, 1, kDeltaFig3, 1.5));
    const double t = transversality(fig3);
    CHECK(t != 0.0);
    CHECK(t == doctest::Approx(tracked(fig3)).epsilon(1e-5));
    for (const Parameters& p : oracle::random_hopf_params(50, 47)) {
        const HopfPoint h = hopf_delay(p);
        const double a = transversality(h), b = tracked(h);
        CHECK((a > 0) == (b > 0));
        CHECK(a == doctest::Approx(b).epsilon(1e-4));
        // Library root finder agrees with the independent Newton.
        const cplx lib = characteristic_root(h.p, h.q, h.r() * 1.01, {0.0, h.omega});
        const cplx ref = oracle::newton_root(h.p, h.q, h.r() * 1.01, {0.0, h.omega});
        CHECK(std::abs(lib - ref) <= 1e-12);
    }
}

TEST_CASE("transversality scaling") {
    for (const Parameters& p : oracle::random_hopf_params(30, 53)) {
        const double a = transversality(hopf_delay(p));
        for (double c : {2.0, 3.0}) {
            Parameters s = p;
            s.beta0 *= c;
            s.delta *= c;
            CHECK(transversality(hopf_delay(s)) == doctest::Approx(c * c * a).epsilon(1e-12));
        }
    }
}

TEST_CASE("hopf surface mesh") {
    SUBCASE("single point") {
        const SurfaceMesh m = hopf_surface_mesh(2, 1, {1.5, 1.5, 1}, {kDeltaFig3, kDeltaFig3, 1});
        REQUIRE(m.records.size() == 1);
        CHECK(std::abs(m.records[0].r - 12.435176) <= 1e-5);
        CHECK(m.omitted == 0);
    }
    SUBCASE("points without x2 are omitted") {
        const SurfaceMesh m = hopf_surface_mesh(2, 1, {1.5, 1.5, 1}, {0.01, 2.0, 5});
        CHECK(m.records.size() + m.omitted == 5);
        CHECK(m.omitted >= 3);
        for (const auto& r : m.records) CHECK(r.delta < 0.5);
    }
    SUBCASE("scaling pointwise") {
        const SurfaceMesh a = hopf_surface_mesh(2, 1, {1.1, 1.9, 9}, {0.002, 0.2, 30});
        const SurfaceMesh b = hopf_surface_mesh(2, 0.5, {1.1, 1.9, 9}, {0.001, 0.1, 30});
        REQUIRE(a.records.size() == b.records.size());
        for (std::size_t i = 0; i < a.records.size(); ++i) {
            CHECK(b.records[i].r == doctest::Approx(2 * a.records[i].r).epsilon(1e-14));
            CHECK(b.records[i].delta == doctest::Approx(a.records[i].delta / 2).epsilon(1e-14));
        }
    }
    SUBCASE("deterministic under threads") {
        const SurfaceMesh a = hopf_surface_mesh(3, 1.5, {1.1, 1.9, 17}, {0.001, 0.4, 40}, 1);
        const SurfaceMesh b = hopf_surface_mesh(3, 1.5, {1.1, 1.9, 17}, {0.001, 0.4, 40}, 4);
        REQUIRE(a.records.size() == b.records.size());
        for (std::size_t i = 0; i < a.records.size(); ++i) {
            CHECK(a.records[i].k == b.records[i].k);
            CHECK(a.records[i].delta == b.records[i].delta);
            CHECK(a.records[i].r == b.records[i].r);
        }
        for (std::size_t i = 1; i < a.records.size(); ++i) {
            const auto& x = a.records[i - 1];
            const auto& y = a.records[i];
            CHECK((x.k < y.k || (x.k == y.k && x.delta < y.delta)));
        }
    }
    SUBCASE("case II never yields Hopf points") {
        const SurfaceMesh m = hopf_surface_mesh(1, 1, {1.1, 1.9, 9}, {0.001, 0.5, 30});
        CHECK(m.records.empty());
    }
}
