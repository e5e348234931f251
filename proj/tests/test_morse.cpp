#include <catch2/catch_amalgamated.hpp>

#include <knotforge/json_io.hpp>
#include <knotforge/morse.hpp>
#include <knotforge/theta.hpp>

#include "oracles.hpp"

using namespace knotforge;

static FiberwiseMorseData load_fixture(const std::string& name) {
    return morse_from_json(load_json_file(oracle::fixture_path(name)));
}

static FiberwiseMorseData product_torus() {
    FiberwiseMorseData m;
    m.fiber_genus = 1;
    m.critical_loci = {{"min", 0, 1, 1}, {"a", 1, 1, 1}, {"b", 1, 1, 1}, {"max", 2, 1, 1}};
    m.monodromy = {{1, 0}, {0, 1}};
    return m;
}

TEST_CASE("fixtures load and validate") {
    for (auto* name : {"s2xs1", "genus1_anosov", "genus1_rot", "genus1_selfevent"})
        CHECK_NOTHROW(load_fixture(name));
}

TEST_CASE("validation rejects malformed data") {
    // Euler characteristic bookkeeping (period-weighted).
    {
        auto m = product_torus();
        m.critical_loci.pop_back();
        CHECK_THROWS_AS(m.validate(), ingestion_error);
    }
    // Duplicate locus ids.
    {
        auto m = product_torus();
        m.critical_loci[2].id = "a";
        CHECK_THROWS_AS(m.validate(), ingestion_error);
    }
    // Monodromy must be 2g x 2g and unimodular.
    {
        auto m = product_torus();
        m.monodromy = {{2, 0}, {0, 1}};
        CHECK_THROWS_AS(m.validate(), ingestion_error);
    }
    {
        auto m = product_torus();
        m.monodromy = {{1, 0}};
        CHECK_THROWS_AS(m.validate(), ingestion_error);
    }
    // Events must join period-1 index-1 loci.
    {
        auto m = product_torus();
        m.one_one_events = {{"min", "a", Rational(1, 3), 1}};
        CHECK_THROWS_AS(m.validate(), ingestion_error);
    }
    {
        // One period-2 saddle keeps chi balanced, but events need period 1.
        FiberwiseMorseData m;
        m.fiber_genus = 1;
        m.critical_loci = {{"min", 0, 1, 1}, {"a", 1, 2, 1}, {"max", 2, 1, 1}};
        m.monodromy = {{1, 0}, {0, 1}};
        m.one_one_events = {{"a", "a", Rational(1, 3), 1}};
        CHECK_THROWS_AS(m.validate(), ingestion_error);
    }
    // Angles must be distinct and avoid the base fiber.
    {
        auto m = product_torus();
        m.one_one_events = {{"a", "b", Rational(1, 3), 1}, {"b", "a", Rational(1, 3), 1}};
        CHECK_THROWS_AS(m.validate(), ingestion_error);
    }
    {
        auto m = product_torus();
        m.one_one_events = {{"a", "b", Rational(0), 1}};
        CHECK_THROWS_AS(m.validate(), ingestion_error);
    }
    // Signs and indices are constrained.
    {
        auto m = product_torus();
        m.critical_loci[0].sign = 2;
        CHECK_THROWS_AS(m.validate(), ingestion_error);
    }
    {
        auto m = product_torus();
        m.critical_loci[0].index = 3;
        CHECK_THROWS_AS(m.validate(), ingestion_error);
    }
    // Branching cycles in the transfer graph.
    {
        auto m = product_torus();
        m.one_one_events = {{"a", "b", Rational(1, 5), 1},
                            {"b", "a", Rational(2, 5), 1},
                            {"b", "a", Rational(3, 5), 1}};
        CHECK_THROWS_AS(m.validate(), ingestion_error);
    }
}

TEST_CASE("angle drop counts base-fiber crossings along the decreasing path") {
    using knotforge::detail::angle_drop;
    Rational phi0(0);
    // Self-event: one full turn.
    CHECK(angle_drop(Rational(1, 2), Rational(1, 2), phi0) == 1);
    // 1/3 down through 0 and around to 2/3: one crossing.
    CHECK(angle_drop(Rational(1, 3), Rational(2, 3), phi0) == 1);
    // 2/3 down to 1/3 stays away from 0.
    CHECK(angle_drop(Rational(2, 3), Rational(1, 3), phi0) == 0);
    // Base fiber placed inside / outside the traversed arc.
    CHECK(angle_drop(Rational(1, 3), Rational(2, 3), Rational(1, 2)) == 0);
    CHECK(angle_drop(Rational(2, 3), Rational(1, 3), Rational(1, 2)) == 1);
}

TEST_CASE("alexander polynomials") {
    CHECK(alexander_polynomial(load_fixture("s2xs1")) == LaurentPoly(1));
    CHECK(alexander_polynomial(load_fixture("genus1_anosov")) == oracle::char_poly2(2, 1, 1, 1));
    CHECK(alexander_polynomial(load_fixture("genus1_rot")) == oracle::char_poly2(0, -1, 1, 0));
    CHECK(alexander_polynomial(load_fixture("genus1_selfevent")) ==
          oracle::char_poly2(1, 0, 0, 1));
}

TEST_CASE("irreducible orbits") {
    auto m = load_fixture("genus1_anosov");
    auto orbits = irreducible_orbits(m);
    REQUIRE(orbits.size() == 5);
    CHECK(orbits[0].id == "min");
    CHECK(orbits[4].id == "cycle(ev0,ev1)");
    CHECK(orbits[4].period == 1);
    CHECK(orbits[4].sign == 1);
    CHECK(orbits[4].index == 1);

    auto r = irreducible_orbits(load_fixture("genus1_rot"));
    REQUIRE(r.size() == 3);
    CHECK(r[1].period == 2);
    CHECK(r[1].sign == -1);
}

TEST_CASE("closed orbit series against direct expansion") {
    struct Case {
        const char* name;
        std::vector<oracle::OrbitDatum> orbits;
    };
    // (period, sign, index) per irreducible orbit, derived by hand.
    std::vector<Case> cases = {
        {"s2xs1", {{1, 1, 0}, {1, 1, 2}}},
        {"genus1_anosov", {{1, 1, 0}, {1, 1, 1}, {1, 1, 1}, {1, 1, 2}, {1, 1, 1}}},
        {"genus1_rot", {{1, 1, 0}, {2, -1, 1}, {1, 1, 2}}},
        {"genus1_selfevent", {{1, 1, 0}, {1, 1, 1}, {1, 1, 1}, {1, 1, 2}, {1, 1, 1}}},
    };
    for (auto& c : cases) {
        auto m = load_fixture(c.name);
        auto s = closed_orbit_series(m, 10);
        auto self_coeffs = s.self_loop_series.series(10);
        std::map<int, Rational> sm(self_coeffs.begin(), self_coeffs.end());
        auto bd_coeffs = s.boundary_series.series(10);
        std::map<int, Rational> bm(bd_coeffs.begin(), bd_coeffs.end());
        for (int k = 1; k <= 10; ++k) {
            INFO(c.name << " order " << k);
            CHECK(sm[k] == oracle::self_loop_coeff(c.orbits, k));
            CHECK(bm[k] == oracle::boundary_coeff(c.orbits, k));
        }
        // Enumeration counts match the iterate formula.
        for (int N : {1, 2, 3, 7})
            CHECK((int)enumerate_closed_orbits(m, N).size() ==
                  oracle::closed_orbit_count(c.orbits, N));
    }
}

TEST_CASE("closed orbit series closed forms") {
    LaurentPoly t = LaurentPoly::t_power(1);
    LaurentPoly one = LaurentPoly(1);
    RationalFn geo(t, one - t);

    auto s1 = closed_orbit_series(load_fixture("s2xs1"));
    CHECK(s1.self_loop_series == geo + geo);
    CHECK(s1.boundary_series == geo + geo);

    auto s2 = closed_orbit_series(load_fixture("genus1_anosov"));
    CHECK(s2.self_loop_series == geo * RationalFn(LaurentPoly(5)));
    CHECK(s2.boundary_series == -geo);

    auto s3 = closed_orbit_series(load_fixture("genus1_rot"));
    RationalFn half(-LaurentPoly::t_power(2), one + LaurentPoly::t_power(2));
    CHECK(s3.self_loop_series == geo + geo + half);
    CHECK(s3.boundary_series == geo + geo - half);

    auto s4 = closed_orbit_series(load_fixture("genus1_selfevent"));
    CHECK(s4.self_loop_series == geo * RationalFn(LaurentPoly(5)));
    CHECK(s4.boundary_series == -geo);
}

TEST_CASE("denominator bound") {
    for (auto* name : {"s2xs1", "genus1_anosov", "genus1_rot", "genus1_selfevent"}) {
        auto rep = check_denominator(load_fixture(name));
        INFO(name);
        CHECK(rep.is_laurent);
        LaurentPoly omt = LaurentPoly(1) - LaurentPoly::t_power(1);
        CHECK(rep.bound == omt * omt * rep.delta);
        CHECK(rep.product == RationalFn(rep.bound) * rep.self_loop_series);
        CHECK(rep.product.is_polynomial());
    }
}

TEST_CASE("assemble_F") {
    Diagram tad = omega(0);
    auto m = load_fixture("genus1_anosov");
    auto series = closed_orbit_series(m);

    // Pairing series on the connecting edge; loop filled from the dynamics.
    std::map<int, RationalFn> pairing;
    pairing.emplace(1, series.boundary_series);
    auto F = assemble_F(tad, pairing, m);
    CHECK(F.delta == alexander_polynomial(m));
    CHECK(F.edge_series.at(2) == series.self_loop_series);
    LaurentPoly omt = LaurentPoly(1) - LaurentPoly::t_power(1);
    CHECK(F.traced.D == omt * omt);

    // Missing pairing data.
    std::map<int, RationalFn> none;
    CHECK_THROWS_AS(assemble_F(tad, none, m), argument_error);

    // A denominator outside (1-t)^2 * Delta is rejected.
    std::map<int, RationalFn> bad;
    LaurentPoly cube = omt * omt * omt;
    bad.emplace(1, RationalFn(LaurentPoly::t_power(1), cube));
    bad.emplace(2, series.self_loop_series);
    CHECK_THROWS_AS(assemble_F(tad, bad, alexander_polynomial(m)), invariant_violation);
}

TEST_CASE("morse json round-trip") {
    for (auto* name : {"s2xs1", "genus1_anosov", "genus1_rot", "genus1_selfevent"}) {
        auto m = load_fixture(name);
        auto m2 = morse_from_json(morse_to_json(m));
        CHECK(alexander_polynomial(m) == alexander_polynomial(m2));
        CHECK(closed_orbit_series(m).self_loop_series ==
              closed_orbit_series(m2).self_loop_series);
    }
}
