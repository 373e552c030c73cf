#include <doctest.h>

#include "ulrich3/instanton.hpp"
#include "ulrich3/ulrich.hpp"

using namespace ulrich;

TEST_CASE("ulrich_hilbert: examples and linearity in rank") {
    CHECK(ulrich_hilbert(3, 3, 3, 1) == 140);
    for (int n = 1; n <= 5; ++n)
        for (int d = 2; d <= 6; ++d)
            for (int r = 1; r <= 4; ++r) CHECK(ulrich_hilbert(n, d, r, -d) == 0);
    for (int d = 2; d <= 9; ++d)
        for (int r = 1; r <= 3; ++r)
            for (int t = -5; t <= 5; ++t)
                CHECK(ulrich_hilbert(1, d, r, t) == r * (d + t));
}

TEST_CASE("ulrich_hilbert integer roots are exactly -d, -2d, ..., -nd") {
    for (int n = 2; n <= 4; ++n)
        for (int d : {2, 3, 5}) {
            for (int t = -d * n + 1; t < 0; ++t) {
                const bool is_root = ulrich_hilbert(n, d, 2, t) == 0;
                CHECK(is_root == (t % d == 0));
            }
        }
}

TEST_CASE("rank_divisibility: headline values") {
    CHECK(rank_divisibility(5, 2) == 8);
    CHECK(rank_divisibility(3, 6) == 6);
    CHECK(rank_divisibility(3, 9) == 3);
    CHECK(rank_divisibility(3, 7) == 1);
    CHECK(rank_divisibility(3, 8) == 2);
    CHECK(rank_divisibility(3, 12) == 6);
}

TEST_CASE("rank_divisibility equals n! when n! divides d, n <= 6") {
    for (int n = 1; n <= 6; ++n) {
        int64_t fact = 1;
        for (int j = 2; j <= n; ++j) fact *= j;
        for (int mult = 1; mult <= 3; ++mult)
            CHECK(rank_divisibility(n, (int)(mult * fact)) == fact);
    }
}

TEST_CASE("ur_set: classification by d mod 6, checked against the arithmetic") {
    CHECK_THROWS_AS((void)ur_set(1), u3::EngineError);
    CHECK(ur_set(7).modulus == 1);
    CHECK(ur_set(7).exclude_rank_one);
    CHECK(ur_set(8).modulus == 2);
    CHECK(!ur_set(8).exclude_rank_one);
    CHECK(ur_set(12).modulus == 6);
    CHECK(ur_set(9).modulus == 3);
    for (int d = 2; d <= 200; ++d) {
        auto rc = ur_set(d); // the constructor cross-checks rank_divisibility
        switch (d % 6) {
            case 0: CHECK(rc.modulus == 6); break;
            case 1:
            case 5: CHECK(rc.modulus == 1); break;
            case 2:
            case 4: CHECK(rc.modulus == 2); break;
            case 3: CHECK(rc.modulus == 3); break;
        }
        CHECK(rc.exclude_rank_one == (rc.modulus == 1));
    }
}

TEST_CASE("decompose_d: examples, errors, round trip, charge identity") {
    auto d3 = decompose_d(3);
    CHECK(d3.h == 0);
    CHECK(d3.e == 1);
    CHECK(d3.m == 1);
    CHECK(d3.k == 1);
    auto d7 = decompose_d(7);
    CHECK(d7.h == 1);
    CHECK(d7.e == 0);
    CHECK(d7.m == 3);
    CHECK(d7.k == 6);
    auto d5 = decompose_d(5);
    CHECK(d5.e == 2);
    CHECK(d5.k == 3);
    CHECK(4 * d5.k == (25 - 1) / 2);
    CHECK_THROWS_AS((void)decompose_d(4), u3::EngineError);
    CHECK_THROWS_AS((void)decompose_d(1), u3::EngineError);
    for (int d = 3; d <= 99; d += 2) {
        auto dd = decompose_d(d);
        CHECK(6 * dd.h + 2 * dd.e + 1 == d);
        CHECK(dd.e >= 0);
        CHECK(dd.e <= 2);
        CHECK(4 * dd.k == ((int64_t)d * d - 1) / 2);
    }
}

TEST_CASE("ulrich_twists") {
    CHECK(ulrich_twists(3) == std::array<int, 3>{1, -2, -5});
    CHECK(ulrich_twists(5) == std::array<int, 3>{3, -2, -7});
    CHECK(ulrich_twists(7) == std::array<int, 3>{5, -2, -9});
}

namespace {
cech::CohomologyTable fake_table(std::vector<std::pair<int, std::array<int64_t, 4>>> rows) {
    cech::CohomologyTable t;
    t.sheaf = "S2E";
    t.m = 1;
    for (auto& [tt, h] : rows) t.rows.push_back({tt, h, 2});
    return t;
}
} // namespace

TEST_CASE("check_ulrich: pass, constructed failure, missing twist") {
    auto pass = fake_table({{1, {0, 0, 0, 0}}, {-2, {0, 0, 0, 0}}, {-5, {0, 0, 0, 0}}});
    auto cert = check_ulrich(pass, 3);
    CHECK(cert.pass);
    CHECK(cert.twists == std::array<int, 3>{1, -2, -5});

    auto bad = fake_table({{1, {0, 0, 0, 0}}, {-2, {0, 0, 1, 0}}, {-5, {0, 0, 0, 0}}});
    auto cert2 = check_ulrich(bad, 3);
    CHECK(!cert2.pass);
    CHECK(cert2.failed_twists == std::vector<int>{-2});

    auto partial = fake_table({{1, {0, 0, 0, 0}}});
    CHECK_THROWS_AS((void)check_ulrich(partial, 3), u3::EngineError);
}

TEST_CASE("check_ulrich: a line bundle is not Ulrich here") {
    u3::Options opt;
    auto tab = instanton::sheaf_table(instanton::Sheaf::O, 0, -7, 1, opt);
    auto cert = check_ulrich(tab, 3);
    CHECK(!cert.pass);
    bool names_one = false;
    for (int t : cert.failed_twists) names_one = names_one || t == 1;
    CHECK(names_one); // h0(O(1)) = 4 != 0
}

TEST_CASE("natural_cohomology: verdicts") {
    auto good = fake_table({{0, {0, 5, 0, 0}}, {1, {0, 0, 0, 0}}});
    CHECK(natural_cohomology(good, 0, 1).natural);
    auto bad = fake_table({{0, {2, 1, 0, 0}}});
    auto rep = natural_cohomology(bad, 0, 0);
    CHECK(!rep.natural);
    CHECK(rep.violations == std::vector<int>{0});
    CHECK(natural_cohomology(good, 1, 0).natural); // empty range: vacuous
}
