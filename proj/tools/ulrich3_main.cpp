#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ulrich3/cli.hpp"

namespace {

bool parse_range(const std::string& s, int& lo, int& hi) {
    const auto pos = s.find("..");
    if (pos == std::string::npos) return false;
    try {
        lo = std::stoi(s.substr(0, pos));
        hi = std::stoi(s.substr(pos + 2));
    } catch (...) {
        return false;
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "ulrich3: exact cohomology tables for the SL2-equivariant instanton bundles on P^3 "
        "and the Ulrich-rank classification of Veronese threefolds"};
    app.require_subcommand(1);

    ucli::RunConfig cfg;
    std::string range;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--seed", cfg.seed, "seed for prime draws and sample points");
        c->add_option("--trunc", cfg.trunc, "override the initial truncation bound");
        c->add_option("--mode", cfg.mode, "rank mode: auto|modular|exact")
            ->default_val("auto");
        c->add_option("--cache-dir", cfg.cache_dir,
                      "cache directory (default: $ULRICH3_CACHE_DIR or .ulrich3-cache)");
        c->add_option("--format", cfg.format, "output format: json|csv|md")->default_val("md");
        c->add_flag("--long", cfg.long_run, "allow long-running computations (m >= 3)");
        c->add_option("--out", cfg.out_dir, "output directory")->default_val(".");
    };

    CLI::App* resolution =
        app.add_subcommand("resolution", "solve and verify the equivariant resolution");
    resolution->add_option("--m", cfg.m, "family index (>= 1)")->required();
    add_common(resolution);

    CLI::App* cohomology =
        app.add_subcommand("cohomology", "cohomology table of a sheaf over a twist range");
    cohomology->add_option("--sheaf", cfg.sheaf, "O|E|EE|S2E")->default_val("S2E");
    cohomology->add_option("--m", cfg.m, "family index");
    cohomology->add_option("--range", range, "twist range a..b (default -2m-6..2m+2)");
    add_common(cohomology);

    CLI::App* check = app.add_subcommand("check", "run a verification and emit a certificate");
    check->add_option("what", cfg.check_what,
                      "instanton|coh0|lepotier|moduli-dim|ulrich|natural")
        ->required();
    check->add_option("--m", cfg.m, "family index");
    check->add_option("--range", range, "twist range for the natural-cohomology check");
    add_common(check);

    CLI::App* ranks = app.add_subcommand("ranks", "Ulrich rank constraints for X^n_d");
    ranks->add_option("--n", cfg.n, "dimension of the Veronese variety")->default_val(3);
    ranks->add_option("--d", cfg.d, "degree of the embedding")->required();
    add_common(ranks);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (!range.empty()) {
        if (!parse_range(range, cfg.tmin, cfg.tmax) || cfg.tmin > cfg.tmax) {
            std::cerr << "usage error: --range expects a..b with a <= b\n";
            return 2;
        }
        cfg.have_range = true;
    }
    for (CLI::App* sub : {resolution, cohomology, check, ranks})
        if (sub->parsed()) cfg.command = sub->get_name();

    return ucli::dispatch(cfg);
}
