#include "ulrich3/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "ulrich3/cache.hpp"
#include "ulrich3/instanton.hpp"
#include "ulrich3/serialize.hpp"
#include "ulrich3/ulrich.hpp"

namespace ucli {

namespace fs = std::filesystem;

u3::Options engine_options(const RunConfig& cfg) {
    u3::Options opt;
    opt.seed = cfg.seed;
    opt.trunc_override = cfg.trunc;
    opt.long_run = cfg.long_run;
    if (cfg.mode == "auto")
        opt.mode = u3::Options::RankMode::Auto;
    else if (cfg.mode == "modular")
        opt.mode = u3::Options::RankMode::Modular;
    else if (cfg.mode == "exact")
        opt.mode = u3::Options::RankMode::Exact;
    else
        throw u3::EngineError("unknown mode '" + cfg.mode + "' (auto|modular|exact)");
    return opt;
}

std::string resolved_cache_dir(const RunConfig& cfg) {
    if (!cfg.cache_dir.empty()) return cfg.cache_dir;
    if (const char* env = std::getenv("ULRICH3_CACHE_DIR"); env && *env) return env;
    return ".ulrich3-cache";
}

namespace {

instanton::Sheaf parse_sheaf(const std::string& s) {
    if (s == "O") return instanton::Sheaf::O;
    if (s == "E") return instanton::Sheaf::E;
    if (s == "EE") return instanton::Sheaf::EE;
    if (s == "S2E") return instanton::Sheaf::S2E;
    throw u3::EngineError("unknown sheaf '" + s + "' (O|E|EE|S2E)");
}

std::string twist_cache_key(const RunConfig& cfg, const std::string& sheaf, int m, int t) {
    return std::string(u3::kEngineVersion) + "|cohomology|" + sheaf + "|m=" +
           std::to_string(m) + "|t=" + std::to_string(t) + "|trunc=" +
           std::to_string(cfg.trunc) + "|seed=" + std::to_string(cfg.seed) +
           "|mode=" + cfg.mode;
}

// Table over an arbitrary twist list with per-twist disk caching. The
// resolution and tensor complex are only built when a twist misses.
cech::CohomologyTable cached_table(const RunConfig& cfg, instanton::Sheaf sheaf, int m,
                                   const std::vector<int>& twists, const Cache& cache) {
    const u3::Options opt = engine_options(cfg);
    cech::CohomologyTable tab;
    tab.sheaf = instanton::sheaf_name(sheaf);
    tab.m = sheaf == instanton::Sheaf::O ? 0 : m;
    tab.prov.seed = opt.seed;
    tab.prov.engine = u3::kEngineVersion;

    std::optional<instanton::EquivariantResolution> res;
    std::optional<psheaf::FreeComplex> complex; // the complex hypercohomology runs on
    std::optional<psheaf::FreeComplex> dual;    // its dual (self-dual sheaves only)
    auto ensure_complex = [&]() {
        if (complex) return;
        if (sheaf == instanton::Sheaf::O) {
            psheaf::FreeComplex c;
            c.terms = {psheaf::FreeSheaf::line(0)};
            complex = std::move(c);
        } else {
            res = instanton::build_resolution(m, opt);
            if (sheaf == instanton::Sheaf::E)
                complex = res->complex();
            else
                complex = psheaf::tensor_complexes(res->complex(), res->complex());
            dual = psheaf::dual_complex(*complex);
        }
    };

    for (int t : twists) {
        const std::string key = twist_cache_key(cfg, tab.sheaf, tab.m, t);
        cech::CohomologyTable::Row row;
        row.t = t;
        bool from_cache = false;
        if (auto hit = cache.get(key)) {
            try {
                for (int i = 0; i < 4; ++i) row.h[i] = hit->at("h").at(i).get<int64_t>();
                row.B = hit->value("trunc", 0);
                if (tab.prov.primes.empty())
                    tab.prov.primes = hit->value("primes", std::vector<uint64_t>{});
                tab.prov.rank_mode = hit->value("rank_mode", tab.prov.rank_mode);
                from_cache = true;
                std::cerr << "cached: " << tab.sheaf << " m=" << tab.m << " t=" << t << "\n";
            } catch (...) {
                from_cache = false;
            }
        }
        if (!from_cache) {
            ensure_complex();
            cech::SheafDims hr =
                cech::sheaf_dims(*complex, dual ? &*dual : nullptr, t, opt);
            row.h = hr.h;
            if (sheaf == instanton::Sheaf::S2E) {
                for (int i = 0; i < 4; ++i) {
                    row.h[i] -= psheaf::line_cohomology(i, t);
                    if (row.h[i] < 0)
                        throw u3::EngineError("S2E subtraction went negative at twist " +
                                              std::to_string(t));
                }
            }
            row.B = hr.B_used;
            if (tab.prov.primes.empty()) tab.prov.primes = hr.primes;
            tab.prov.rank_mode = hr.rank_mode;
            Json payload;
            payload["h"] = Json::array({row.h[0], row.h[1], row.h[2], row.h[3]});
            payload["trunc"] = row.B;
            payload["primes"] = hr.primes;
            payload["rank_mode"] = hr.rank_mode;
            cache.put(key, payload);
        }
        const int64_t chi = instanton::sheaf_chi(sheaf, tab.m, t);
        if (row.h[0] - row.h[1] + row.h[2] - row.h[3] != chi)
            throw u3::EngineError("table row at twist " + std::to_string(t) +
                                  " fails the Hilbert polynomial certification");
        tab.rows.push_back(row);
    }
    return tab;
}

bool needs_long_guard(const std::string& what) {
    return what == "coh0" || what == "lepotier" || what == "moduli-dim" ||
           what == "ulrich" || what == "natural";
}

void write_json_file(const std::string& path, const Json& j) {
    write_text_atomic(path, j.dump(2) + "\n");
}

int engine_failure(const std::exception& e) {
    std::cerr << "engine error: " << e.what() << "\n";
    return 2;
}

} // namespace

int run_resolution(const RunConfig& cfg) {
    if (cfg.m < 1) {
        std::cerr << "usage error: resolution needs --m >= 1\n";
        return 2;
    }
    try {
        const u3::Options opt = engine_options(cfg);
        instanton::EquivariantResolution r = instanton::build_resolution(cfg.m, opt);
        fs::create_directories(cfg.out_dir);
        const std::string psi_path =
            (fs::path(cfg.out_dir) / ("psi-m" + std::to_string(cfg.m) + ".json")).string();
        const std::string kappa_path =
            (fs::path(cfg.out_dir) / ("kappa-m" + std::to_string(cfg.m) + ".json")).string();
        write_json_file(psi_path, matrix_to_json(r.psi));
        write_json_file(kappa_path, matrix_to_json(r.kappa));
        std::cout << "resolution m=" << cfg.m << ": wrote " << psi_path << ", " << kappa_path
                  << "\n";
        std::cout << "solution spaces: 1, 1; constant rank " << 3 * cfg.m << ": OK; charge "
                  << r.k << "\n";
        return 0;
    } catch (const std::exception& e) {
        return engine_failure(e);
    }
}

int run_cohomology(const RunConfig& cfg) {
    if (cfg.m < 1 && cfg.sheaf != "O") {
        std::cerr << "usage error: cohomology needs --m >= 1\n";
        return 2;
    }
    try {
        const instanton::Sheaf sheaf = parse_sheaf(cfg.sheaf);
        const bool tensor_backed =
            sheaf == instanton::Sheaf::EE || sheaf == instanton::Sheaf::S2E;
        if (tensor_backed && cfg.m >= 3 && !cfg.long_run) {
            std::cerr << "cohomology --sheaf " << cfg.sheaf << " --m " << cfg.m
                      << " requires --long\n";
            return 2;
        }
        int tmin = cfg.have_range ? cfg.tmin : -2 * cfg.m - 6;
        int tmax = cfg.have_range ? cfg.tmax : 2 * cfg.m + 2;
        std::vector<int> twists;
        for (int t = tmin; t <= tmax; ++t) twists.push_back(t);
        Cache cache(resolved_cache_dir(cfg));
        cech::CohomologyTable tab = cached_table(cfg, sheaf, cfg.m, twists, cache);

        fs::create_directories(cfg.out_dir);
        const std::string base = "cohomology-" + tab.sheaf +
                                 (sheaf == instanton::Sheaf::O ? std::string()
                                                               : "-m" + std::to_string(tab.m));
        const std::string table_path = (fs::path(cfg.out_dir) / (base + ".json")).string();
        write_json_file(table_path, table_to_json(tab));
        if (cfg.format == "json")
            std::cout << table_to_json(tab).dump(2) << "\n";
        else if (cfg.format == "csv")
            std::cout << render_table_csv(tab);
        else
            std::cout << render_table_md(tab);
        std::cerr << "wrote " << table_path << "\n";
        return 0;
    } catch (const std::exception& e) {
        return engine_failure(e);
    }
}

int run_check(const RunConfig& cfg) {
    if (cfg.m < 1) {
        std::cerr << "usage error: check needs --m >= 1\n";
        return 2;
    }
    const std::string what = cfg.check_what;
    if (what != "instanton" && what != "coh0" && what != "lepotier" && what != "moduli-dim" &&
        what != "ulrich" && what != "natural") {
        std::cerr << "usage error: unknown check '" << what
                  << "' (instanton|coh0|lepotier|moduli-dim|ulrich|natural)\n";
        return 2;
    }
    if (needs_long_guard(what) && cfg.m >= 3 && !cfg.long_run) {
        std::cerr << "check " << what << " --m " << cfg.m << " requires --long\n";
        return 2;
    }
    try {
        const u3::Options opt = engine_options(cfg);
        Json cert;
        cert["check"] = what;
        cert["m"] = cfg.m;
        cert["engine"] = u3::kEngineVersion;
        cert["seed"] = cfg.seed;
        int exit_code = 0;

        if (what == "instanton") {
            instanton::Certificate c = instanton::instanton_axioms(cfg.m, opt);
            cert["verdict"] = c.pass ? "verified" : "falsified";
            cert["details"] = c.details;
            exit_code = c.pass ? 0 : 1;
        } else if (what == "coh0") {
            instanton::Certificate c = instanton::verify_coh0(cfg.m, opt);
            cert["d"] = 2 * cfg.m + 1;
            cert["verdict"] = c.pass ? "verified" : "falsified";
            cert["details"] = c.details;
            exit_code = c.pass ? 0 : 1;
        } else if (what == "lepotier") {
            instanton::LePotierReport rep = instanton::verify_lepotier(cfg.m, opt);
            cert["verdict"] = "finding";
            cert["h"] = Json::array({rep.h[0], rep.h[1], rep.h[2], rep.h[3]});
            cert["vanishes"] = rep.vanishes;
            cert["details"] = Json::array(
                {rep.vanishes
                     ? "H*(S2E(-2)) = 0: the twist -2 Ulrich condition holds at this point"
                     : "H*(S2E(-2)) != 0: this point lies on the divisor of non-vanishing"});
            exit_code = 0;
        } else if (what == "moduli-dim") {
            instanton::Certificate c = instanton::moduli_dimension_check(cfg.m, opt);
            cert["verdict"] = c.pass ? "verified" : "falsified";
            cert["details"] = c.details;
            exit_code = c.pass ? 0 : 1;
        } else if (what == "ulrich") {
            const int d = 2 * cfg.m + 1;
            const auto tw = ulrich::ulrich_twists(d);
            Cache cache(resolved_cache_dir(cfg));
            cech::CohomologyTable tab =
                cached_table(cfg, instanton::Sheaf::S2E, cfg.m,
                             {tw[0], tw[1], tw[2]}, cache);
            ulrich::UlrichCertificate uc = ulrich::check_ulrich(tab, d);
            cert["d"] = d;
            cert["twists"] = Json::array({tw[0], tw[1], tw[2]});
            Json dims = Json::array();
            for (int s = 0; s < 3; ++s)
                dims.push_back(Json::array(
                    {uc.dims[s][0], uc.dims[s][1], uc.dims[s][2], uc.dims[s][3]}));
            cert["dims"] = std::move(dims);
            cert["verdict"] = uc.pass ? "verified" : "falsified";
            cert["failed_twists"] = uc.failed_twists;
            if (uc.pass) {
                cert["details"] = Json::array(
                    {"S2E(2d-2) is Ulrich on the degree-" + std::to_string(d) +
                     " Veronese threefold: all twelve dimensions vanish"});
            } else {
                std::string s = "vanishing fails at twist";
                for (int t : uc.failed_twists) s += " " + std::to_string(t);
                cert["details"] = Json::array({s});
            }
            exit_code = uc.pass ? 0 : 1;
        } else { // natural
            int tmin = cfg.have_range ? cfg.tmin : -2 * cfg.m - 6;
            int tmax = cfg.have_range ? cfg.tmax : 2 * cfg.m + 2;
            std::vector<int> twists;
            for (int t = tmin; t <= tmax; ++t) twists.push_back(t);
            Cache cache(resolved_cache_dir(cfg));
            cech::CohomologyTable tab =
                cached_table(cfg, instanton::Sheaf::S2E, cfg.m, twists, cache);
            ulrich::NaturalReport rep = ulrich::natural_cohomology(tab, tmin, tmax);
            cert["range"] = Json::array({tmin, tmax});
            cert["verdict"] = rep.natural ? "verified" : "falsified";
            cert["violations"] = rep.violations;
            exit_code = rep.natural ? 0 : 1;
        }

        fs::create_directories(cfg.out_dir);
        const std::string path =
            (fs::path(cfg.out_dir) / ("check-" + what + "-m" + std::to_string(cfg.m) + ".json"))
                .string();
        write_json_file(path, cert);
        std::cout << "check " << what << " m=" << cfg.m << ": "
                  << cert["verdict"].get<std::string>() << " (" << path << ")\n";
        return exit_code;
    } catch (const std::exception& e) {
        return engine_failure(e);
    }
}

int run_ranks(const RunConfig& cfg) {
    try {
        if (cfg.n < 1 || cfg.d < 1) {
            std::cerr << "usage error: ranks needs --n >= 1 and --d >= 1\n";
            return 2;
        }
        if (cfg.n == 3) {
            if (cfg.d < 2) {
                std::cerr << "usage error: the threefold classification needs --d >= 2\n";
                return 2;
            }
            ulrich::RankConstraint rc = ulrich::ur_set(cfg.d);
            std::cout << "Ur(X_" << cfg.d << ") = ";
            if (rc.exclude_rank_one)
                std::cout << "N* \\ {1}";
            else
                std::cout << rc.modulus << "N*";
            std::cout << "  [case d mod 6 = " << cfg.d % 6 << "]\n";
            return 0;
        }
        const int64_t mod = ulrich::rank_divisibility(cfg.n, cfg.d);
        int64_t fact = 1;
        for (int j = 2; j <= cfg.n; ++j) fact *= j;
        if (cfg.d % fact == 0) {
            std::cout << "Ur(X^" << cfg.n << "_" << cfg.d << ") = " << fact
                      << "N*  [n! divides d]\n";
        } else {
            std::cout << "every Ulrich rank on X^" << cfg.n << "_" << cfg.d
                      << " is divisible by " << mod << "; completeness unknown\n";
        }
        return 0;
    } catch (const std::exception& e) {
        return engine_failure(e);
    }
}

int dispatch(const RunConfig& cfg) {
    if (cfg.command == "resolution") return run_resolution(cfg);
    if (cfg.command == "cohomology") return run_cohomology(cfg);
    if (cfg.command == "check") return run_check(cfg);
    if (cfg.command == "ranks") return run_ranks(cfg);
    std::cerr << "usage error: unknown command '" << cfg.command << "'\n";
    return 2;
}

} // namespace ucli
