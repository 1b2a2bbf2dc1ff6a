#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ifstype/classes.hpp"
#include "ifstype/config.hpp"
#include "ifstype/constructions.hpp"
#include "ifstype/errors.hpp"
#include "ifstype/net.hpp"
#include "ifstype/oracle.hpp"
#include "ifstype/report.hpp"
#include "ifstype/spectra.hpp"

namespace fs = std::filesystem;
using namespace ifstype;

namespace {

// flag values; zero/NaN/empty mean "not given", fall back to the config
struct Flags {
    std::string config;
    std::string out;
    std::uint32_t L = 0;
    std::uint32_t Lc = 0;
    std::size_t cap = 0;
    double qmin = NAN;
    double qmax = NAN;
    double qstep = NAN;
};

void add_common(CLI::App* sub, Flags& fl) {
    sub->add_option("--config", fl.config, "JSON run configuration");
    sub->add_option("--out", fl.out, "output directory (analyze, spectra) or file");
    sub->add_option("--L", fl.L, "walk length for outer dimension bounds");
    sub->add_option("--Lc", fl.Lc, "cycle length cap for inner dimension bounds");
    sub->add_option("--cap", fl.cap, "characteristic vector cap for the closure");
    sub->add_option("--qmin", fl.qmin, "lower end of the q grid");
    sub->add_option("--qmax", fl.qmax, "upper end of the q grid");
    sub->add_option("--qstep", fl.qstep, "q grid step");
}

RunConfig resolve(const Flags& fl) {
    if (fl.config.empty()) fail("ConfigError", "--config is required");
    RunConfig cfg = load_config(fl.config);
    if (fl.L) cfg.outer_len = fl.L;
    if (fl.Lc) cfg.cycle_len = fl.Lc;
    if (fl.cap) cfg.closure_cap = fl.cap;
    if (!std::isnan(fl.qmin)) cfg.grid.qmin = fl.qmin;
    if (!std::isnan(fl.qmax)) cfg.grid.qmax = fl.qmax;
    if (!std::isnan(fl.qstep)) cfg.grid.step = fl.qstep;
    if (!fl.out.empty()) cfg.out = fl.out;
    if (!(cfg.grid.qmin <= cfg.grid.qmax)) fail("ConfigError", "grid needs qmin <= qmax");
    if (!(cfg.grid.step > 0)) fail("ConfigError", "grid steps must be positive");
    return cfg;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) fail("IoError", "cannot write " + p.string());
    out << text;
}

// single-file subcommands print to stdout unless --out names a file
void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-")
        std::cout << text;
    else
        write_file(out, text);
}

void run_analyze(const Flags& fl) {
    RunConfig cfg = resolve(fl);
    Omega om = build_omega(cfg.ifs(), cfg.closure_cap);
    ClassGraph cg = analyze_classes(om);
    if (cfg.construction) require_requirements(om, cg, *cfg.construction);
    fs::path dir = cfg.out;
    fs::create_directories(dir);
    write_file(dir / "omega.txt", render_omega(om));
    write_file(dir / "classes.txt", render_classes(om, cg));
    write_file(dir / "dimset.txt", render_dimset(om, cg, cfg.cycle_len, cfg.outer_len));
}

void run_spectra(const Flags& fl) {
    RunConfig cfg = resolve(fl);
    if (!cfg.construction)
        fail("ConfigError", "spectra needs a construction config naming the blocks");
    Omega om = build_omega(cfg.ifs(), cfg.closure_cap);
    ClassGraph cg = analyze_classes(om);
    SpectrumCurve curve = tau_mu(om, cg, *cfg.construction, cfg.grid, cfg.cycle_len, cfg.outer_len);
    std::vector<Crossing> xs;
    if (curve.samples.size() >= 2) xs = crossings(curve);
    MultifractalCurve mf = assemble_f(curve, cfg.grid);
    fs::path dir = cfg.out;
    fs::create_directories(dir);
    write_file(dir / "tau.csv", render_tau_csv(curve));
    write_file(dir / "f.csv", render_f_csv(mf));
    write_file(dir / "crossings.txt", render_crossings(xs));
}

void run_construct(const Flags& fl, const std::string& kind, std::uint32_t R,
                   const std::string& probs_text, const std::string& shared_text) {
    RunConfig cfg;
    if (!fl.config.empty()) cfg = load_config(fl.config);
    if (!kind.empty()) {
        if (R == 0) fail("ConfigError", "construct needs --R with a kind");
        std::vector<Rat> probs;
        std::string token;
        std::istringstream stream(probs_text);
        while (std::getline(stream, token, ','))
            if (!token.empty()) probs.push_back(rat_parse(token));
        std::optional<Rat> shared;
        if (!shared_text.empty()) shared = rat_parse(shared_text);
        if (kind == "multipoint")
            cfg.construction = multipoint(R, probs, shared);
        else if (kind == "multiinterval")
            cfg.construction = multiinterval(R, probs, shared);
        else
            fail("ConfigError", "kind must be multipoint or multiinterval, got \"" + kind + "\"");
        cfg.system.reset();
    }
    if (!cfg.construction)
        fail("ConfigError", "construct needs a kind argument or a construction config");
    emit(fl.out, render_config(cfg));
}

void run_dump_omega(const Flags& fl) {
    RunConfig cfg = resolve(fl);
    Omega om = build_omega(cfg.ifs(), cfg.closure_cap);
    emit(fl.out, render_omega(om));
}

void run_dump_classes(const Flags& fl) {
    RunConfig cfg = resolve(fl);
    Omega om = build_omega(cfg.ifs(), cfg.closure_cap);
    emit(fl.out, render_classes(om, analyze_classes(om)));
}

void run_dimset(const Flags& fl) {
    RunConfig cfg = resolve(fl);
    Omega om = build_omega(cfg.ifs(), cfg.closure_cap);
    ClassGraph cg = analyze_classes(om);
    emit(fl.out, render_dimset(om, cg, cfg.cycle_len, cfg.outer_len));
}

void run_oracle(const Flags& fl) {
    RunConfig cfg = resolve(fl);
    const WeightedIFS& f = cfg.ifs();
    std::vector<Rat> pts = cfg.oracle_points;
    if (pts.empty()) pts = {Rat(0), Rat(1, 2), Rat(1)};
    std::vector<double> qs = cfg.oracle_qs;
    if (qs.empty()) qs = {0.0, 1.0};
    std::vector<std::pair<Rat, SlopeEstimate>> dims;
    for (const Rat& x : pts)
        dims.emplace_back(x, empirical_local_dim(f, x, cfg.oracle_depths));
    std::vector<std::pair<double, SlopeEstimate>> lqs;
    std::vector<SlopeEstimate> est = empirical_lq(f, qs, cfg.oracle_depths);
    for (std::size_t i = 0; i < qs.size(); ++i) lqs.emplace_back(qs[i], est[i]);
    emit(fl.out, render_oracle(dims, lqs));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-type analysis of equicontractive self-similar measures"};
    app.require_subcommand(1);
    Flags fl;

    CLI::App* analyze = app.add_subcommand("analyze", "write omega.txt, classes.txt, dimset.txt");
    add_common(analyze, fl);

    CLI::App* spectra = app.add_subcommand("spectra", "write tau.csv, f.csv, crossings.txt");
    add_common(spectra, fl);

    CLI::App* construct =
        app.add_subcommand("construct", "generate a system config from block data");
    std::string kind, probs_text, shared_text;
    std::uint32_t R = 0;
    construct->add_option("kind", kind, "multipoint or multiinterval");
    construct->add_option("--R", R, "subdivision of the digit grid");
    construct->add_option("--probs", probs_text, "comma-separated block weights, \"a/b\" each");
    construct->add_option("--shared", shared_text, "weight of the remaining maps");
    add_common(construct, fl);

    CLI::App* dump_omega = app.add_subcommand("dump-omega", "print the characteristic closure");
    add_common(dump_omega, fl);

    CLI::App* dump_classes = app.add_subcommand("dump-classes", "print the loop class structure");
    add_common(dump_classes, fl);

    CLI::App* dimset = app.add_subcommand("dimset", "print attainable dimension sets");
    add_common(dimset, fl);

    CLI::App* oracle = app.add_subcommand("oracle", "print brute-force estimator results");
    add_common(oracle, fl);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) run_analyze(fl);
        if (spectra->parsed()) run_spectra(fl);
        if (construct->parsed()) run_construct(fl, kind, R, probs_text, shared_text);
        if (dump_omega->parsed()) run_dump_omega(fl);
        if (dump_classes->parsed()) run_dump_classes(fl);
        if (dimset->parsed()) run_dimset(fl);
        if (oracle->parsed()) run_oracle(fl);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "InternalError: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
