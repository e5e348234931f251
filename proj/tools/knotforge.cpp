#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "knotforge/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"knotforge: exact arithmetic for colored Jacobi diagrams and closed-orbit series"};
    knotforge::RunConfig cfg;
    std::string stu_order = "positive";

    app.add_option("--threads", cfg.threads, "worker threads (0 = hardware)")->capture_default_str();
    app.add_option("--output", cfg.output_path, "write the report to this file instead of stdout");
    app.add_option("--format", cfg.format, "report format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    app.require_subcommand(1);

    auto* quot = app.add_subcommand("quotient", "build a windowed diagram quotient");
    quot->add_option("--degree", cfg.degree, "diagram degree (1..3)")->required();
    quot->add_option("--window", cfg.window, "exponent window K")->required();
    quot->add_flag("--nh-only", cfg.nh_only, "restrict to nullhomologous Wilson colorings");
    quot->add_option("--ihx-sign-convention", cfg.ihx_convention, "IHX term signs")
        ->check(CLI::IsMember({"A", "B"}));
    quot->add_option("--stu-order", stu_order, "sign of the first STU resolution")
        ->check(CLI::IsMember({"positive", "negative"}));
    quot->add_flag("--stability-check", cfg.stability_check,
                   "force the window K vs K+2 stability comparison");
    quot->callback([&] {
        cfg.command = "quotient";
        cfg.window_set = true;
    });

    auto* theta = app.add_subcommand("theta", "degree-1 generator machinery");
    theta->require_subcommand(1);
    auto* tverify = theta->add_subcommand("verify", "check the isomorphism with Q[t]/Q");
    tverify->add_option("--max", cfg.max_exponent, "largest exponent exercised")->required();
    tverify->callback([&] { cfg.command = "theta-verify"; });
    auto* treduce = theta->add_subcommand("reduce", "reduce Theta(p,q) to the quotient basis");
    treduce->add_option("--p", cfg.p, "Wilson arc exponent")->required();
    treduce->add_option("--q", cfg.q, "chord exponent")->required();
    auto* tw = treduce->add_option("--window", cfg.window, "exponent window K");
    treduce->callback([&] {
        cfg.command = "theta-reduce";
        cfg.window_set = tw->count() > 0;
    });

    auto* morse = app.add_subcommand("morse", "fiberwise Morse data and closed orbits");
    morse->require_subcommand(1);
    auto* zeta = morse->add_subcommand("zeta", "closed-orbit series and enumeration");
    zeta->add_option("--input", cfg.input_path, "morse data JSON file")->required();
    zeta->add_option("--order", cfg.order, "enumeration order")->capture_default_str();
    zeta->callback([&] { cfg.command = "morse-zeta"; });
    auto* alex = morse->add_subcommand("alexander", "det(tI - monodromy)");
    alex->add_option("--input", cfg.input_path, "morse data JSON file")->required();
    alex->callback([&] { cfg.command = "morse-alexander"; });
    auto* denom = morse->add_subcommand("check-denominator",
                                        "verify (1-t)^2*Delta bounds the self-loop series");
    denom->add_option("--input", cfg.input_path, "morse data JSON file")->required();
    denom->callback([&] { cfg.command = "morse-check-denominator"; });

    auto* surgery = app.add_subcommand("surgery", "surgery-formula arithmetic");
    surgery->require_subcommand(1);
    auto* zcmd = surgery->add_subcommand("z", "Z_n of the surgery presentation of a chord diagram");
    zcmd->add_option("--input", cfg.input_path, "diagram JSON file")->required();
    zcmd->add_option("--n", cfg.n, "degree (1 or 2)")->required();
    zcmd->callback([&] { cfg.command = "surgery-z"; });
    auto* wh = surgery->add_subcommand("whitehead", "the doubled-knot example");
    wh->callback([&] { cfg.command = "surgery-whitehead"; });

    auto* scheme = app.add_subcommand("scheme", "forest-scheme symbol algebra");
    scheme->require_subcommand(1);
    auto* scheck = scheme->add_subcommand("check", "telescoping identities up to max-k");
    scheck->add_option("--max-k", cfg.max_k, "largest scheme size")->capture_default_str();
    scheck->callback([&] { cfg.command = "scheme-check"; });

    auto* golden = app.add_subcommand("golden", "byte-exact regression suite");
    golden->add_option("--suite", cfg.suite_path, "suite directory")->required();
    golden->callback([&] { cfg.command = "golden"; });

    // Let --threads/--output/--format trail the subcommand as well.
    std::function<void(CLI::App*)> allow_trailing_globals = [&](CLI::App* a) {
        a->fallthrough();
        for (auto* s : a->get_subcommands([](const CLI::App*) { return true; }))
            allow_trailing_globals(s);
    };
    allow_trailing_globals(&app);

    CLI11_PARSE(app, argc, argv);
    cfg.stu_first_positive = (stu_order == "positive");

    try {
        knotforge::Report rep = knotforge::run(cfg);
        std::string out = rep.rendered(cfg.format);
        if (cfg.output_path.empty()) {
            std::cout << out;
        } else {
            std::ofstream f(cfg.output_path, std::ios::binary);
            if (!f) {
                std::cerr << "cannot write " << cfg.output_path << "\n";
                return 2;
            }
            f << out;
        }
        return rep.pass ? 0 : 1;
    } catch (const knotforge::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
