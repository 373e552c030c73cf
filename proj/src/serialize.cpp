#include "ulrich3/serialize.hpp"

#include <filesystem>
#include <fstream>

namespace ucli {

namespace {

int64_t to_i64(const u3::Int& v, const char* what) {
    if (!v.fits_slong_p())
        throw u3::EngineError(std::string(what) + " does not fit in 64 bits");
    return v.get_si();
}

} // namespace

Json matrix_to_json(const psheaf::PolyMatrix& m) {
    Json j;
    j["rows"] = m.target.rank();
    j["cols"] = m.source.rank();
    j["source_twists"] = m.source.twists;
    j["target_twists"] = m.target.twists;
    Json entries = Json::array();
    for (int i = 0; i < m.target.rank(); ++i)
        for (int c = 0; c < m.source.rank(); ++c) {
            const psheaf::Poly& p = m.at(i, c);
            if (p.is_zero()) continue;
            Json terms = Json::array();
            for (auto& [mono, coef] : p.terms)
                terms.push_back(Json::array({to_i64(coef.get_num(), "numerator"),
                                             to_i64(coef.get_den(), "denominator"), mono.e[0],
                                             mono.e[1], mono.e[2], mono.e[3]}));
            entries.push_back(Json::array({i, c, terms}));
        }
    j["entries"] = std::move(entries);
    return j;
}

psheaf::PolyMatrix matrix_from_json(const Json& j) {
    psheaf::FreeSheaf src, tgt;
    src.twists = j.at("source_twists").get<std::vector<int>>();
    tgt.twists = j.at("target_twists").get<std::vector<int>>();
    if ((int)tgt.twists.size() != j.at("rows").get<int>() ||
        (int)src.twists.size() != j.at("cols").get<int>())
        throw u3::EngineError("matrix file shape fields disagree");
    psheaf::PolyMatrix m(tgt, src);
    for (const auto& ent : j.at("entries")) {
        const int r = ent.at(0).get<int>();
        const int c = ent.at(1).get<int>();
        psheaf::Poly p = psheaf::Poly::zero(tgt.twists.at(r) - src.twists.at(c));
        for (const auto& term : ent.at(2)) {
            psheaf::Monomial mono;
            mono.e = {term.at(2).get<int>(), term.at(3).get<int>(), term.at(4).get<int>(),
                      term.at(5).get<int>()};
            p.terms.emplace_back(mono, u3::Rat((long)term.at(0).get<int64_t>(),
                                               (long)term.at(1).get<int64_t>()));
        }
        p.normalize();
        m.at(r, c) = std::move(p);
    }
    m.validate_degrees();
    return m;
}

Json table_to_json(const cech::CohomologyTable& t) {
    Json j;
    j["sheaf"] = t.sheaf;
    j["m"] = t.m;
    Json entries = Json::array();
    for (auto& r : t.rows) {
        Json row;
        row["t"] = r.t;
        row["h"] = Json::array({r.h[0], r.h[1], r.h[2], r.h[3]});
        row["trunc"] = r.B;
        entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    Json prov;
    prov["engine"] = t.prov.engine;
    prov["seed"] = t.prov.seed;
    prov["rank_mode"] = t.prov.rank_mode;
    prov["primes"] = t.prov.primes;
    j["provenance"] = std::move(prov);
    return j;
}

cech::CohomologyTable table_from_json(const Json& j) {
    cech::CohomologyTable t;
    t.sheaf = j.at("sheaf").get<std::string>();
    t.m = j.at("m").get<int>();
    for (const auto& row : j.at("entries")) {
        cech::CohomologyTable::Row r;
        r.t = row.at("t").get<int>();
        for (int i = 0; i < 4; ++i) r.h[i] = row.at("h").at(i).get<int64_t>();
        r.B = row.value("trunc", 0);
        t.rows.push_back(r);
    }
    const auto& prov = j.at("provenance");
    t.prov.engine = prov.value("engine", "");
    t.prov.seed = prov.value("seed", (uint64_t)0);
    t.prov.rank_mode = prov.value("rank_mode", "");
    t.prov.primes = prov.value("primes", std::vector<uint64_t>{});
    return t;
}

std::string render_table_md(const cech::CohomologyTable& t) {
    std::string s = "| i\\t |";
    for (auto& r : t.rows) s += " " + std::to_string(r.t) + " |";
    s += "\n|---|";
    for (size_t i = 0; i < t.rows.size(); ++i) s += "---|";
    s += "\n";
    for (int i = 3; i >= 0; --i) {
        s += "| " + std::to_string(i) + " |";
        for (auto& r : t.rows)
            s += r.h[i] == 0 ? " . |" : " " + std::to_string(r.h[i]) + " |";
        s += "\n";
    }
    return s;
}

std::string render_table_csv(const cech::CohomologyTable& t) {
    std::string s = "t,h0,h1,h2,h3\n";
    for (auto& r : t.rows)
        s += std::to_string(r.t) + "," + std::to_string(r.h[0]) + "," + std::to_string(r.h[1]) +
             "," + std::to_string(r.h[2]) + "," + std::to_string(r.h[3]) + "\n";
    return s;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw u3::EngineError("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

} // namespace ucli
