#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "knotforge/cli.hpp"

#include "oracles.hpp"

using namespace knotforge;

namespace {

std::string golden_data(const std::string& name) {
    return std::string(KNOTFORGE_TEST_DIR) + "/golden/data/" + name;
}

} // namespace

TEST_CASE("quotient command reports dimension and auto stabilization") {
    RunConfig cfg;
    cfg.command = "quotient";
    cfg.degree = 1;
    cfg.window = 2;
    cfg.nh_only = true;
    Report rep = run(cfg);
    CHECK(rep.pass);
    CHECK(rep.data["command"] == "quotient");
    CHECK(rep.data["dimension"] == 4);
    CHECK(rep.data["stabilization_check"] == true);
    CHECK(rep.data["relation_count"].get<int64_t>() > 0);
    CHECK(rep.data["basis"].size() == 4);
    CHECK(rep.text.find("dimension 4") != std::string::npos);
    CHECK(rep.rendered("text") == rep.text);
    CHECK(rep.rendered("json") == dump_json(rep.data));
}

TEST_CASE("quotient command skips stabilization beyond degree 1") {
    RunConfig cfg;
    cfg.command = "quotient";
    cfg.degree = 2;
    cfg.window = 1;
    cfg.nh_only = true;
    Report rep = run(cfg);
    CHECK(rep.pass);
    CHECK(rep.data["stabilization_check"].is_null());
    CHECK(rep.data["dimension"].get<int>() > 0);
}

TEST_CASE("theta reduce picks a window from the exponents") {
    RunConfig cfg;
    cfg.command = "theta-reduce";
    cfg.p = 2;
    cfg.q = -3;
    Report rep = run(cfg);
    CHECK(rep.data["window"] == 3);
    DiagramVector red = vector_from_json(rep.data["reduced"]);
    CHECK(W(red) == PolyModConstants(LaurentPoly::t_power(1)));

    cfg.p = 4;
    cfg.q = 0;
    CHECK(run(cfg).data["window"] == 4);

    cfg.window = 5;
    cfg.window_set = true;
    CHECK(run(cfg).data["window"] == 5);
}

TEST_CASE("theta verify command") {
    RunConfig cfg;
    cfg.command = "theta-verify";
    cfg.max_exponent = 1;
    Report rep = run(cfg);
    CHECK(rep.pass);
    CHECK(rep.data["pass"] == true);
    CHECK(rep.data["theta_rank"] == 1);
    CHECK(rep.data["window"] == 3);
    REQUIRE(rep.data["checks"].is_array());
    for (auto& c : rep.data["checks"]) CHECK(c["pass"] == true);
}

TEST_CASE("morse commands read fixture files") {
    RunConfig alex;
    alex.command = "morse-alexander";
    alex.input_path = oracle::fixture_path("genus1_anosov");
    Report rep = run(alex);
    CHECK(rep.data["alexander"] == laurent_to_json(oracle::char_poly2(2, 1, 1, 1)));

    RunConfig zeta;
    zeta.command = "morse-zeta";
    zeta.input_path = oracle::fixture_path("s2xs1");
    zeta.order = 3;
    Report zrep = run(zeta);
    CHECK(zrep.data["irreducible_orbits"].size() == 2);
    CHECK(zrep.data["closed_orbit_classes"].size() == 6);
    RationalFn two_t(LaurentPoly::monomial(Rational(2), 1),
                     LaurentPoly(1) - LaurentPoly::t_power(1));
    CHECK(zrep.data["self_loop_series"] == rationalfn_to_json(two_t));
    CHECK(zrep.data["boundary_series"] == rationalfn_to_json(two_t));
    zeta.order = 0;
    CHECK_THROWS_AS(run(zeta), argument_error);

    RunConfig den;
    den.command = "morse-check-denominator";
    den.input_path = oracle::fixture_path("genus1_rot");
    Report drep = run(den);
    CHECK(drep.pass);
    CHECK(drep.data["is_laurent_polynomial"] == true);
}

TEST_CASE("surgery commands") {
    RunConfig cfg;
    cfg.command = "surgery-z";
    cfg.n = 1;
    cfg.input_path = golden_data("theta01.json");
    Report rep = run(cfg);
    CHECK(rep.data["n"] == 1);
    CHECK(rep.data["window"] == 2);
    CHECK(rep.data["scalar"] == "2");
    DiagramVector z = vector_from_json(rep.data["result"]);
    CHECK(W(z) == PolyModConstants(LaurentPoly::monomial(Rational(2), 1)));

    RunConfig wh;
    wh.command = "surgery-whitehead";
    Report wrep = run(wh);
    CHECK(wrep.data["nonzero"] == true);
    CHECK(wrep.data["W_value"] ==
          laurent_to_json(LaurentPoly::monomial(Rational(2), 1)));

    RunConfig sc;
    sc.command = "scheme-check";
    sc.max_k = 4;
    Report srep = run(sc);
    CHECK(srep.pass);
    CHECK(srep.data["rows"].size() == 4);
}

TEST_CASE("run rejects unknown commands and bad options") {
    RunConfig cfg;
    cfg.command = "no-such-command";
    CHECK_THROWS_AS(run(cfg), argument_error);

    RunConfig bad;
    bad.command = "quotient";
    bad.ihx_convention = "C";
    CHECK_THROWS_AS(run(bad), argument_error);
}

TEST_CASE("config from json resolves inputs against the case directory") {
    json j{{"command", "morse-alexander"}, {"input", "x.json"}};
    RunConfig cfg = detail::config_from_json(j, "/some/dir");
    CHECK(cfg.command == "morse-alexander");
    CHECK(cfg.input_path == "/some/dir/x.json");

    json abs{{"command", "morse-alexander"}, {"input", "/abs/x.json"}};
    CHECK(detail::config_from_json(abs, "/some/dir").input_path == "/abs/x.json");

    json win{{"command", "theta-reduce"}, {"p", 1}, {"q", 2}, {"window", 4}};
    RunConfig wcfg = detail::config_from_json(win, ".");
    CHECK(wcfg.window == 4);
    CHECK(wcfg.window_set);
    CHECK_FALSE(detail::config_from_json(json{{"command", "x"}}, ".").window_set);

    CHECK_THROWS_AS(detail::config_from_json(json{{"degree", 1}}, "."),
                    ingestion_error);
    CHECK_THROWS_AS(
        detail::config_from_json(json{{"command", "quotient"}, {"degree", "x"}}, "."),
        ingestion_error);
}

TEST_CASE("golden harness compares bytes and localizes differences") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "kf_cli_golden";
    fs::remove_all(dir);
    fs::create_directories(dir);

    json cfg_json{{"schema_version", 1}, {"command", "scheme-check"}, {"max_k", 2}};
    std::ofstream(dir / "case.json") << cfg_json.dump(2) << "\n";

    // No .expected sibling yet.
    CHECK_THROWS_AS(golden_check(dir.string()), ingestion_error);

    RunConfig sub = detail::config_from_json(cfg_json, dir.string());
    std::string want = run(sub).rendered("json");
    std::ofstream(dir / "case.expected", std::ios::binary) << want;
    Report ok = golden_check(dir.string());
    CHECK(ok.pass);
    CHECK(ok.data["case_count"] == 1);
    CHECK(ok.data["failures"] == 0);

    std::string bad = want;
    bad[10] = bad[10] == 'x' ? 'y' : 'x';
    std::ofstream(dir / "case.expected", std::ios::binary) << bad;
    Report mismatch = golden_check(dir.string());
    CHECK_FALSE(mismatch.pass);
    CHECK(mismatch.data["failures"] == 1);
    CHECK(mismatch.data["cases"][0]["pass"] == false);
    CHECK(mismatch.data["cases"][0]["first_difference_at"] == 10);
    CHECK(mismatch.data["cases"][0]["expected_bytes"] == (int64_t)bad.size());
    CHECK(mismatch.data["cases"][0]["actual_bytes"] == (int64_t)want.size());

    fs::remove(dir / "case.json");
    fs::remove(dir / "case.expected");
    Report empty = golden_check(dir.string());
    CHECK(empty.pass);
    CHECK(empty.data["warning"] == "empty suite");

    CHECK_THROWS_AS(golden_check((dir / "missing").string()), ingestion_error);
    fs::remove_all(dir);
}

TEST_CASE("timing is attached only when requested") {
    RunConfig cfg;
    cfg.command = "scheme-check";
    cfg.max_k = 2;
    CHECK_FALSE(run(cfg).data.contains("timing_ms"));
    setenv("KNOTFORGE_TIMING", "1", 1);
    json data = run(cfg).data;
    unsetenv("KNOTFORGE_TIMING");
    REQUIRE(data.contains("timing_ms"));
    CHECK(data["timing_ms"].get<int64_t>() >= 0);
}
