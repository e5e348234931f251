#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "knotforge/json_io.hpp"
#include "knotforge/morse.hpp"
#include "knotforge/quotient.hpp"
#include "knotforge/surgery.hpp"
#include "knotforge/theta.hpp"

namespace knotforge {

struct RunConfig {
    std::string command; // quotient, theta-verify, theta-reduce, morse-zeta,
                         // morse-alexander, morse-check-denominator,
                         // surgery-z, surgery-whitehead, scheme-check, golden
    std::string input_path;
    std::string suite_path;
    int degree = 1;
    int window = 3;
    bool window_set = false;
    bool nh_only = false;
    int max_exponent = 3; // theta-verify --max
    int order = 10;       // morse-zeta --order
    int p = 0;            // theta-reduce
    int q = 0;
    int n = 1;     // surgery-z --n
    int max_k = 6; // scheme-check --max-k
    std::string ihx_convention = "B";
    bool stu_first_positive = true;
    bool stability_check = false;
    int threads = 1;
    std::string output_path;
    std::string format = "json";
};

struct Report {
    bool pass = true;
    json data;
    std::string text;

    std::string rendered(const std::string& format) const {
        if (format == "text") return text;
        return dump_json(data);
    }
};

namespace detail {

inline bool timing_enabled() {
    const char* v = std::getenv("KNOTFORGE_TIMING");
    return v && std::string(v) == "1";
}

inline RelationOptions options_of(const RunConfig& cfg) {
    RelationOptions opts;
    if (cfg.ihx_convention != "A" && cfg.ihx_convention != "B")
        throw argument_error("ihx-sign-convention must be A or B");
    opts.ihx_sign_convention = cfg.ihx_convention[0];
    opts.stu_first_resolution_positive = cfg.stu_first_positive;
    return opts;
}

inline json config_echo(const RunConfig& cfg) {
    return json{{"command", cfg.command}, {"threads", cfg.threads}};
}

} // namespace detail

inline Report run(const RunConfig& cfg);

namespace detail {

inline Report run_quotient(const RunConfig& cfg) {
    Report rep;
    RelationOptions opts = options_of(cfg);
    Window w{cfg.degree, cfg.window, cfg.nh_only, opts};
    QuotientSpace qs = build_quotient(w, cfg.threads);
    json basis = json::array();
    for (auto& d : qs.basis) basis.push_back(d.brief());
    json stab;
    bool run_stab = cfg.stability_check || cfg.degree == 1;
    if (run_stab) {
        try {
            stabilization_check(cfg.degree, cfg.window, cfg.nh_only, opts, cfg.threads);
            stab = true;
        } catch (const consistency_error&) {
            stab = false;
            rep.pass = false;
        }
    }
    rep.data = json{{"schema_version", kSchemaVersion},
                    {"command", "quotient"},
                    {"degree", cfg.degree},
                    {"window", cfg.window},
                    {"nh_only", cfg.nh_only},
                    {"ihx_sign_convention", cfg.ihx_convention},
                    {"stu_first_resolution_positive", cfg.stu_first_positive},
                    {"dimension", qs.dimension()},
                    {"relation_count", qs.relation_count},
                    {"basis", basis},
                    {"stabilization_check", stab}};
    rep.text = "quotient: degree " + std::to_string(cfg.degree) + ", window " +
               std::to_string(cfg.window) + (cfg.nh_only ? " (NH)" : "") + "\n" +
               "dimension " + std::to_string(qs.dimension()) + ", relations " +
               std::to_string(qs.relation_count) + "\n";
    if (!stab.is_null())
        rep.text += std::string("stabilization ") + (stab.get<bool>() ? "pass" : "FAIL") + "\n";
    return rep;
}

inline Report run_theta_verify(const RunConfig& cfg) {
    Report rep;
    IsomorphismReport r = verify_isomorphism(cfg.max_exponent, cfg.threads, options_of(cfg));
    json checks = json::array();
    rep.text = "theta verify --max " + std::to_string(cfg.max_exponent) + "\n";
    for (auto& c : r.checks) {
        checks.push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        rep.text += c.name + ": " + (c.pass ? "pass" : "FAIL " + c.detail) + "\n";
    }
    rep.pass = r.pass;
    rep.data = json{{"schema_version", kSchemaVersion},
                    {"command", "theta-verify"},
                    {"max_exponent", r.max_exponent},
                    {"window", r.window_K},
                    {"checks", checks},
                    {"theta_rank", r.theta_rank},
                    {"pass", r.pass}};
    rep.text += std::string("overall: ") + (r.pass ? "pass" : "FAIL") + "\n";
    return rep;
}

inline Report run_theta_reduce(const RunConfig& cfg) {
    Report rep;
    int K = cfg.window_set
                ? cfg.window
                : std::max({3, std::abs(cfg.p), std::abs(cfg.q), std::abs(cfg.p + cfg.q)});
    Window w{1, K, true, options_of(cfg)};
    QuotientSpace qs = build_quotient(w, cfg.threads);
    DiagramVector red = qs.reduce(theta(cfg.p, cfg.q));
    rep.data = json{{"schema_version", kSchemaVersion},
                    {"command", "theta-reduce"},
                    {"p", cfg.p},
                    {"q", cfg.q},
                    {"window", K},
                    {"reduced", vector_to_json(red)},
                    {"brief", red.brief()}};
    rep.text = "theta(" + std::to_string(cfg.p) + "," + std::to_string(cfg.q) + ") reduces to " +
               red.brief() + " in window " + std::to_string(K) + "\n";
    return rep;
}

inline Report run_morse_zeta(const RunConfig& cfg) {
    Report rep;
    FiberwiseMorseData m = morse_from_json(load_json_file(cfg.input_path));
    if (cfg.order < 1) throw argument_error("morse zeta: --order must be >= 1");
    ClosedOrbitSeries series = closed_orbit_series(m);
    std::vector<ClosedALPath> paths = enumerate_closed_orbits(m, cfg.order);
    json orbits = json::array();
    for (auto& o : series.orbits)
        orbits.push_back(json{{"id", o.id},
                              {"sign", o.sign},
                              {"period", o.period},
                              {"index", o.index},
                              {"iterate_series", rationalfn_to_json(o.iterate_series())}});
    json classes = json::array();
    for (auto& p : paths)
        classes.push_back(json{{"orbit_id", p.orbit_id},
                               {"multiplicity", p.multiplicity},
                               {"period", p.period},
                               {"sign", p.sign},
                               {"index", p.index}});
    rep.data = json{{"schema_version", kSchemaVersion},
                    {"command", "morse-zeta"},
                    {"order", cfg.order},
                    {"irreducible_orbits", orbits},
                    {"closed_orbit_classes", classes},
                    {"boundary_series", rationalfn_to_json(series.boundary_series)},
                    {"self_loop_series", rationalfn_to_json(series.self_loop_series)}};
    rep.text = "irreducible orbits: " + std::to_string(series.orbits.size()) + "\n" +
               "closed classes with period <= " + std::to_string(cfg.order) + ": " +
               std::to_string(paths.size()) + "\n" + "boundary series:  " +
               series.boundary_series.str() + "\n" + "self-loop series: " +
               series.self_loop_series.str() + "\n";
    return rep;
}

inline Report run_morse_alexander(const RunConfig& cfg) {
    Report rep;
    FiberwiseMorseData m = morse_from_json(load_json_file(cfg.input_path));
    LaurentPoly delta = alexander_polynomial(m);
    rep.data = json{{"schema_version", kSchemaVersion},
                    {"command", "morse-alexander"},
                    {"alexander", laurent_to_json(delta)},
                    {"str", delta.str()}};
    rep.text = "Alexander polynomial: " + delta.str() + "\n";
    return rep;
}

inline Report run_morse_check_denominator(const RunConfig& cfg) {
    Report rep;
    FiberwiseMorseData m = morse_from_json(load_json_file(cfg.input_path));
    DenominatorReport r = check_denominator(m);
    rep.pass = r.is_laurent;
    rep.data = json{{"schema_version", kSchemaVersion},
                    {"command", "morse-check-denominator"},
                    {"alexander", laurent_to_json(r.delta)},
                    {"bound", laurent_to_json(r.bound)},
                    {"self_loop_series", rationalfn_to_json(r.self_loop_series)},
                    {"product", rationalfn_to_json(r.product)},
                    {"is_laurent_polynomial", r.is_laurent}};
    rep.text = "(1-t)^2 * Delta * selfLoopSeries = " + r.product.str() + "\n" +
               (r.is_laurent ? "bound holds: Laurent polynomial\n" : "BOUND VIOLATED\n");
    return rep;
}

inline Report run_surgery_z(const RunConfig& cfg) {
    Report rep;
    Diagram d = diagram_from_json(load_json_file(cfg.input_path));
    int K = std::max(cfg.window_set ? cfg.window : 2, d.max_abs_exponent());
    Window w{cfg.n, K, true, options_of(cfg)};
    QuotientSpace qs = build_quotient(w, cfg.threads);
    DiagramVector z = Z_of_surgery(d, cfg.n, qs);
    rep.data = json{{"schema_version", kSchemaVersion},
                    {"command", "surgery-z"},
                    {"n", cfg.n},
                    {"window", K},
                    {"scalar", Rational(int64_t(1) << cfg.n).str()},
                    {"result", vector_to_json(z)},
                    {"brief", z.brief()}};
    rep.text = "Z_" + std::to_string(cfg.n) + " = " + z.brief() + "\n";
    return rep;
}

inline Report run_surgery_whitehead(const RunConfig& cfg) {
    Report rep;
    DiagramVector out = whitehead_example(cfg.threads);
    PolyModConstants wv = W(out);
    rep.data = json{{"schema_version", kSchemaVersion},
                    {"command", "surgery-whitehead"},
                    {"result", vector_to_json(out)},
                    {"brief", out.brief()},
                    {"W_value", laurent_to_json(wv.representative())},
                    {"nonzero", !wv.is_zero()}};
    rep.text = "Z_1(Wh(K)) = " + out.brief() + "\n" + "W(result) = " +
               wv.representative().str() + " (mod constants), nonzero\n";
    return rep;
}

inline Report run_scheme_check(const RunConfig& cfg) {
    Report rep;
    SchemeIdentityReport r = check_scheme_identities(cfg.max_k);
    json rows = json::array();
    rep.text = "scheme identities up to k = " + std::to_string(cfg.max_k) + "\n";
    for (auto& row : r.rows) {
        rows.push_back(json{{"k", row.k}, {"identity2", row.identity2}, {"identity3", row.identity3}});
        rep.text += "k=" + std::to_string(row.k) + ": (2) " + (row.identity2 ? "pass" : "FAIL") +
                    ", (3) " + (row.identity3 ? "pass" : "FAIL") + "\n";
    }
    rep.pass = r.pass;
    rep.data = json{{"schema_version", kSchemaVersion},
                    {"command", "scheme-check"},
                    {"max_k", r.max_k},
                    {"rows", rows},
                    {"pass", r.pass}};
    return rep;
}

inline RunConfig config_from_json(const json& j, const std::string& base_dir) {
    RunConfig cfg;
    const char* what = "run config";
    check_schema_version(j, what);
    cfg.command = string_field(j, "command", what);
    auto opt_int = [&](const char* name, int& slot) {
        if (j.contains(name)) slot = int_field(j, name, what);
    };
    auto opt_bool = [&](const char* name, bool& slot) {
        if (j.contains(name)) {
            if (!j[name].is_boolean())
                throw ingestion_error(std::string(what) + ": field '" + name + "' must be a bool");
            slot = j[name].get<bool>();
        }
    };
    opt_int("degree", cfg.degree);
    if (j.contains("window")) {
        cfg.window = int_field(j, "window", what);
        cfg.window_set = true;
    }
    opt_bool("nh_only", cfg.nh_only);
    opt_int("max", cfg.max_exponent);
    opt_int("order", cfg.order);
    opt_int("p", cfg.p);
    opt_int("q", cfg.q);
    opt_int("n", cfg.n);
    opt_int("max_k", cfg.max_k);
    opt_int("threads", cfg.threads);
    opt_bool("stability_check", cfg.stability_check);
    opt_bool("stu_first_positive", cfg.stu_first_positive);
    if (j.contains("ihx_convention")) cfg.ihx_convention = string_field(j, "ihx_convention", what);
    if (j.contains("input")) {
        std::filesystem::path p(string_field(j, "input", what));
        cfg.input_path = p.is_absolute() ? p.string() : (std::filesystem::path(base_dir) / p).string();
    }
    return cfg;
}

inline Report run_golden(const RunConfig& cfg) {
    Report rep;
    namespace fs = std::filesystem;
    if (!fs::is_directory(cfg.suite_path))
        throw ingestion_error("golden suite directory not found: " + cfg.suite_path);
    std::vector<fs::path> cases;
    for (auto& entry : fs::directory_iterator(cfg.suite_path))
        if (entry.path().extension() == ".json") cases.push_back(entry.path());
    std::sort(cases.begin(), cases.end());
    json results = json::array();
    int failures = 0;
    rep.text = "golden suite: " + cfg.suite_path + "\n";
    for (auto& c : cases) {
        RunConfig sub = config_from_json(load_json_file(c.string()), c.parent_path().string());
        if (cfg.threads > 0) sub.threads = cfg.threads;
        std::string got = run(sub).rendered("json");
        fs::path expected_path = c;
        expected_path.replace_extension(".expected");
        std::ifstream ef(expected_path, std::ios::binary);
        if (!ef) throw ingestion_error("missing golden file: " + expected_path.string());
        std::string expected((std::istreambuf_iterator<char>(ef)), std::istreambuf_iterator<char>());
        bool ok = (got == expected);
        if (!ok) ++failures;
        json row{{"case", c.filename().string()}, {"pass", ok}};
        if (!ok) {
            row["expected_bytes"] = (int64_t)expected.size();
            row["actual_bytes"] = (int64_t)got.size();
            size_t i = 0;
            while (i < got.size() && i < expected.size() && got[i] == expected[i]) ++i;
            row["first_difference_at"] = (int64_t)i;
        }
        results.push_back(row);
        rep.text += c.filename().string() + ": " + (ok ? "pass" : "MISMATCH") + "\n";
    }
    rep.pass = failures == 0;
    rep.data = json{{"schema_version", kSchemaVersion},
                    {"command", "golden"},
                    {"cases", results},
                    {"case_count", (int64_t)cases.size()},
                    {"failures", failures},
                    {"pass", rep.pass}};
    if (cases.empty()) {
        rep.data["warning"] = "empty suite";
        rep.text += "warning: empty suite\n";
    }
    return rep;
}

} // namespace detail

inline Report run(const RunConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    Report rep;
    if (cfg.command == "quotient")
        rep = detail::run_quotient(cfg);
    else if (cfg.command == "theta-verify")
        rep = detail::run_theta_verify(cfg);
    else if (cfg.command == "theta-reduce")
        rep = detail::run_theta_reduce(cfg);
    else if (cfg.command == "morse-zeta")
        rep = detail::run_morse_zeta(cfg);
    else if (cfg.command == "morse-alexander")
        rep = detail::run_morse_alexander(cfg);
    else if (cfg.command == "morse-check-denominator")
        rep = detail::run_morse_check_denominator(cfg);
    else if (cfg.command == "surgery-z")
        rep = detail::run_surgery_z(cfg);
    else if (cfg.command == "surgery-whitehead")
        rep = detail::run_surgery_whitehead(cfg);
    else if (cfg.command == "scheme-check")
        rep = detail::run_scheme_check(cfg);
    else if (cfg.command == "golden")
        rep = detail::run_golden(cfg);
    else
        throw argument_error("unknown command: " + cfg.command);
    if (detail::timing_enabled()) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        rep.data["timing_ms"] = (int64_t)ms;
        rep.text += "elapsed: " + std::to_string(ms) + " ms\n";
    }
    return rep;
}

inline Report golden_check(const std::string& suite_path, int threads = 0) {
    RunConfig cfg;
    cfg.command = "golden";
    cfg.suite_path = suite_path;
    cfg.threads = threads;
    return detail::run_golden(cfg);
}

} // namespace knotforge
