#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sato/sato.hpp"

#ifndef SATO_DATA_DIR
#define SATO_DATA_DIR "data"
#endif

namespace {

int emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 2;
    }
    out << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Normal forms of quiver connections in the Sato Grassmannian"};
    app.require_subcommand(1);
    app.fallthrough();

    sato::RunConfig cfg;
    cfg.data_dir = SATO_DATA_DIR;
    std::string format = "text", out_path, spec_path;
    long order = cfg.order;
    int depth = 0;
    std::uint64_t seed = 0;
    app.add_option("--order", order, "Truncation order (>= 4)")->capture_default_str();
    app.add_option("--depth", depth, "Splitting depth override");
    app.add_option("--seed", seed, "Seed for generated companion matrices")->capture_default_str();
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    app.add_option("--out", out_path, "Write the report to this file");
    app.add_option("--data-dir", cfg.data_dir, "Directory holding the bundled fixtures")->capture_default_str();

    auto* nf = app.add_subcommand("normal-form", "KS and companion normal forms of a quiver spec");
    nf->add_option("spec", spec_path, "Quiver spec file")->required();
    nf->add_flag("--random-b", cfg.random_b, "Draw B from --seed when the file has none");

    auto* solve = app.add_subcommand("solve", "Flat sections on every sheet of the moduli cover");
    solve->add_option("spec", spec_path, "Quiver spec file with B")->required();
    solve->add_flag("--recover-f", cfg.recover_f, "Use the recovered exponential factor as f");

    auto* curve = app.add_subcommand("curve", "Classical limit curve of a string quiver");
    curve->add_option("spec", spec_path, "Quiver spec file")->required();

    auto* fourier = app.add_subcommand("fourier", "Local Fourier transform of the KS classes");
    fourier->add_option("spec", spec_path, "Quiver spec file")->required();

    sato::VirasoroParams vp;
    int string_n = 0, string_k = 0;
    auto* vir = app.add_subcommand("virasoro", "Guarded Virasoro identities");
    vir->add_option("--m", vp.m)->capture_default_str();
    vir->add_option("--n", vp.n)->capture_default_str();
    vir->add_option("--T", vp.T, "Variable cutoff")->capture_default_str();
    vir->add_option("--G", vp.G, "Index guard")->capture_default_str();
    vir->add_option("--d", vp.d, "Monomial degree bound")->capture_default_str();
    vir->add_option("--string-n", string_n, "Quiver degree for the L_{nk} identity");
    vir->add_option("--string-k", string_k, "k for the L_{nk} identity");

    auto* example = app.add_subcommand("verify-example", "Reproduce the bundled degree-5 worked example");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    cfg.order = order;
    cfg.seed = seed;
    if (depth) cfg.depth = depth;
    if (string_n && string_k) {
        vp.string_n = string_n;
        vp.string_k = string_k;
    }

    try {
        sato::Report rep;
        if (*vir) rep = sato::cmd_virasoro(vp);
        else if (*example) rep = sato::cmd_verify_example(cfg);
        else {
            const sato::LoadedSpec spec = sato::load_quiver_spec(spec_path);
            if (*nf) rep = sato::cmd_normal_form(spec, cfg);
            else if (*solve) rep = sato::cmd_solve(spec, cfg);
            else if (*curve) rep = sato::cmd_curve(spec, cfg);
            else if (*fourier) rep = sato::cmd_fourier(spec, cfg);
        }
        const std::string text = format == "json" ? rep.to_json().dump(2) + "\n" : rep.text();
        if (const int rc = emit(text, out_path)) return rc;
        return rep.passed() ? 0 : 1;
    } catch (const sato::Error& e) {
        if (format == "json") {
            const sato::json err{{"error", {{"kind", std::string(sato::to_string(e.kind()))}, {"message", e.what()}}}};
            emit(err.dump(2) + "\n", out_path);
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return 2;
    }
}
