#include <doctest.h>

#include "ulrich3/instanton.hpp"

using namespace cech;

namespace {

psheaf::FreeComplex line_complex(int twist) {
    psheaf::FreeComplex c;
    c.terms = {psheaf::FreeSheaf::line(twist)};
    return c;
}

exactalg::SparseMatrix sparse_mul(const exactalg::SparseMatrix& a,
                                  const exactalg::SparseMatrix& b) {
    exactalg::SparseMatrix r(a.rows, b.cols);
    std::vector<std::vector<std::pair<int, u3::Rat>>> bycol(b.rows);
    for (auto& e : b.entries) bycol[e.row].emplace_back(e.col, e.v);
    for (auto& e : a.entries)
        for (auto& [c, v] : bycol[e.col]) r.add(e.row, c, e.v * v);
    r.canonicalize();
    return r;
}

} // namespace

TEST_CASE("piece_basis: the deep corner monomial is present; counts match") {
    for (int B : {1, 2, 4}) {
        auto basis = piece_basis(15, -4, B, B + 4);
        psheaf::Monomial corner;
        corner.e = {-1, -1, -1, -1};
        bool found = false;
        for (auto& m : basis) found = found || m == corner;
        CHECK(found);
    }
    // closed-form count equals enumeration across windows
    for (uint8_t mask : {1, 3, 7, 15, 10, 12}) {
        for (int n : {-9, -4, -1, 0, 3}) {
            for (int B : {1, 3}) {
                const int cap = B + 3;
                CHECK((int64_t)piece_basis(mask, n, B, cap).size() ==
                      piece_count(mask, n, B, cap));
            }
        }
    }
}

TEST_CASE("single line bundle: hypercohomology equals the Bott formula") {
    u3::Options opt;
    auto c = line_complex(-4);
    auto r = hypercohomology(c, 0, opt);
    CHECK(r.h == std::array<int64_t, 4>{0, 0, 0, 1});
    auto f = fast_path_two_row(c, 0);
    CHECK(f == std::array<int64_t, 4>{0, 0, 0, 1});

    auto o = line_complex(0);
    for (int t = -8; t <= 6; ++t) {
        auto hr = hypercohomology(o, t, opt);
        for (int i = 0; i < 4; ++i) CHECK(hr.h[i] == psheaf::line_cohomology(i, t));
    }
}

TEST_CASE("E_1: defining vanishing, charge, fast-path agreement") {
    u3::Options opt;
    auto c = instanton::build_resolution(1, opt).complex();
    CHECK(hypercohomology(c, -2, opt).h == std::array<int64_t, 4>{0, 0, 0, 0});
    CHECK(hypercohomology(c, -1, opt).h == std::array<int64_t, 4>{0, 1, 0, 0});
    // spec'd table row sanity: at t = -4 duality and chi force all zeros
    CHECK(hypercohomology(c, -4, opt).h == std::array<int64_t, 4>{0, 0, 0, 0});
}

TEST_CASE("fast path refuses 5-term complexes") {
    u3::Options opt;
    auto c = instanton::build_resolution(1, opt).complex();
    auto ee = psheaf::tensor_complexes(c, c);
    CHECK_THROWS_AS((void)fast_path_two_row(ee, 0), u3::EngineError);
}

TEST_CASE("fast path h1 formula at t = m-2") {
    u3::Options opt;
    for (int m : {1, 2}) {
        auto c = instanton::build_resolution(m, opt).complex();
        auto f = fast_path_two_row(c, m - 2);
        const int64_t expect = u3::binom(m + 1, 2) * m - 2 * u3::binom(m + 1, 3);
        CHECK(f == std::array<int64_t, 4>{0, expect, 0, 0});
        if (m == 2) CHECK(expect == 4);
    }
}

TEST_CASE("reference assembly: total differentials square to zero and give the same ranks") {
    u3::Options opt;
    auto c = instanton::build_resolution(1, opt).complex();
    for (int t : {-1, 0}) {
        const int B = default_bound(c, t);
        auto mats = assemble_total_rational(c, t, B);
        REQUIRE(mats.size() == 5); // n = 0..4 -> 0..5 with last+3 = 5 levels - 1
        for (size_t n = 0; n + 1 < mats.size(); ++n) {
            auto prod = sparse_mul(mats[n + 1], mats[n]);
            CHECK(prod.entries.empty());
        }
        // reference H == production H at the same bound
        u3::Options fixed = opt;
        fixed.trunc_override = B;
        auto hr = hypercohomology(c, t, fixed);
        std::vector<int64_t> dims, ranks;
        dims.push_back(mats[0].cols);
        for (auto& m : mats) dims.push_back(m.rows);
        for (auto& m : mats) ranks.push_back(exactalg::rank(m, exactalg::RankRequest::exact()).rank);
        for (size_t n = 0; n < dims.size(); ++n) {
            int64_t h = dims[n];
            if (n < ranks.size()) h -= ranks[n];
            if (n > 0) h -= ranks[n - 1];
            CHECK(h == hr.all[n]);
        }
    }
}

TEST_CASE("weight splitting and the single-block fallback agree") {
    u3::Options opt;
    auto c = instanton::build_resolution(1, opt).complex();
    psheaf::FreeComplex stripped = c;
    for (auto& t : stripped.terms) {
        t.weights.clear(); // drop labels: forces the single-block path
        t.rep.reset();
    }
    CHECK(!stripped.weight_consistent());
    for (int t : {-2, -1, 0, 1}) {
        auto a = hypercohomology(c, t, opt);
        auto b = hypercohomology(stripped, t, opt);
        CHECK(a.weight_split);
        CHECK(!b.weight_split);
        CHECK(a.h == b.h);
    }
}

TEST_CASE("table: empty range, chi certification, row lookup") {
    u3::Options opt;
    auto tab = table(line_complex(0), nullptr, 3, 2, "O", 0,
                     [](int t) { return u3::chi_line_poly(t); }, opt);
    CHECK(tab.rows.empty());

    auto tab2 = table(line_complex(0), nullptr, -5, 3, "O", 0,
                      [](int t) { return u3::chi_line_poly(t); }, opt);
    CHECK(tab2.rows.size() == 9);
    CHECK(tab2.find(2)->h[0] == 10);
    CHECK(tab2.find(-5)->h[3] == 4);
    CHECK(tab2.find(4) == nullptr);
}

TEST_CASE("sheaf_dims picks a side and agrees with the direct engine") {
    u3::Options opt;
    auto c = instanton::build_resolution(1, opt).complex();
    auto d = psheaf::dual_complex(c);
    for (int t = -6; t <= 2; ++t) {
        auto s = sheaf_dims(c, &d, t, opt);
        auto direct = hypercohomology(c, t, opt);
        CHECK(s.h == direct.h);
    }
}

TEST_CASE("exact mode refuses oversized differentials") {
    u3::Options opt;
    opt.mode = u3::Options::RankMode::Exact;
    opt.exact_threshold = 50; // deliberately tiny
    auto c = instanton::build_resolution(1, opt).complex();
    CHECK_THROWS_WITH_AS((void)hypercohomology(c, 0, opt),
                         doctest::Contains("exact mode refused"), u3::EngineError);
}

TEST_CASE("truncation override runs at the requested bound") {
    u3::Options opt;
    opt.trunc_override = 4;
    auto r = hypercohomology(line_complex(-4), 0, opt);
    CHECK(r.B_used == 4);
    CHECK(r.h == std::array<int64_t, 4>{0, 0, 0, 1});
}
