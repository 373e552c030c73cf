#include "ulrich3/instanton.hpp"

#include <algorithm>
#include <random>

#include "ulrich3/elimination.hpp"

namespace instanton {

psheaf::FreeComplex EquivariantResolution::complex() const {
    psheaf::FreeComplex c;
    c.terms = {kappa.source, kappa.target, psi.target};
    c.maps = {kappa, psi};
    c.validate();
    return c;
}

namespace {

// stack rows of b below a (same column space)
exactalg::SparseMatrix vstack(const exactalg::SparseMatrix& a, const exactalg::SparseMatrix& b) {
    if (a.cols != b.cols) throw u3::EngineError("vstack column mismatch");
    exactalg::SparseMatrix m(a.rows + b.rows, a.cols);
    for (auto& e : a.entries) m.add(e.row, e.col, e.v);
    for (auto& e : b.entries) m.add(a.rows + e.row, e.col, e.v);
    m.canonicalize();
    return m;
}

// linear constraints on a degree-m column vector kappa (source O(-2m-1),
// target V_{3m} (x) O(-m-1)) forcing psi . kappa = 0 as polynomials
exactalg::SparseMatrix composition_constraints(const psheaf::PolyMatrix& psi, int m) {
    const int T = psi.source.rank();  // 3m+1, kappa target
    const int R = psi.target.rank();  // 3m+2
    const auto mons_m = psheaf::monomials_of_degree(m);
    const auto mons_m1 = psheaf::monomials_of_degree(m + 1);
    const int M = (int)mons_m.size();
    auto nu_idx = [&](const psheaf::Monomial& nu) {
        auto it = std::lower_bound(mons_m1.begin(), mons_m1.end(), nu);
        if (it == mons_m1.end() || !(*it == nu))
            throw u3::EngineError("composition constraint monomial missing");
        return (int)(it - mons_m1.begin());
    };
    exactalg::SparseMatrix sys(R * (int)mons_m1.size(), T * M);
    for (int kgen = 0; kgen < T; ++kgen)
        for (int mu = 0; mu < M; ++mu) {
            const int col = kgen * M + mu;
            for (int r = 0; r < R; ++r)
                for (auto& [lam, c] : psi.at(r, kgen).terms)
                    sys.add(r * (int)mons_m1.size() + nu_idx(mons_m[mu] * lam), col, c);
        }
    sys.canonicalize();
    return sys;
}

std::array<int64_t, 4> sample_point(std::mt19937_64& rng) {
    std::uniform_int_distribution<int64_t> coord(-9, 9);
    for (;;) {
        std::array<int64_t, 4> x{coord(rng), coord(rng), coord(rng), coord(rng)};
        if (x[0] || x[1] || x[2] || x[3]) return x;
    }
}

} // namespace

EquivariantResolution build_resolution(int m, const u3::Options& opt) {
    if (m < 1) throw u3::EngineError("build_resolution needs m >= 1");
    const auto v3m = sl2::RepDecomposition::irrep(3 * m);
    const auto v3m1 = sl2::RepDecomposition::irrep(3 * m + 1);
    const auto v0 = sl2::RepDecomposition::irrep(0);

    // psi: the unique equivariant linear map V_{3m}(-m-1) -> V_{3m+1}(-m)
    auto psis = sl2::equivariant_maps(v3m, v3m1, 1, -m - 1);
    if (psis.size() != 1)
        throw u3::EngineError("psi solution space has dimension " +
                              std::to_string(psis.size()) + ", expected 1");
    psheaf::PolyMatrix psi = std::move(psis[0]);

    // kappa: combined system, equivariance + psi . kappa = 0
    exactalg::SparseMatrix sys = vstack(sl2::equivariant_constraints(v0, v3m, m),
                                        composition_constraints(psi, m));
    auto kernel = exactalg::kernel_basis(sys);
    if (kernel.size() != 1)
        throw u3::EngineError("kappa solution space has dimension " +
                              std::to_string(kernel.size()) + ", expected 1");
    psheaf::PolyMatrix kappa =
        sl2::coefficients_to_matrix(kernel[0], v0, v3m, m, -2 * m - 1);

    EquivariantResolution res;
    res.m = m;
    res.k = charge(m);
    res.psi = std::move(psi);
    res.kappa = std::move(kappa);

    // invariants before returning
    if (!res.psi.compose(res.kappa).is_zero())
        throw u3::EngineError("psi . kappa is not zero");
    for (char g : {'e', 'f', 'h'}) {
        if (!sl2::equivariance_residual(res.psi, v3m, v3m1, g).is_zero())
            throw u3::EngineError("psi fails equivariance");
        if (!sl2::equivariance_residual(res.kappa, v0, v3m, g).is_zero())
            throw u3::EngineError("kappa fails equivariance");
    }
    std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ull);
    for (int s = 0; s < 20; ++s) {
        auto x = sample_point(rng);
        auto ev = res.psi.evaluate(x);
        int64_t rk = exactalg::rank(ev, exactalg::RankRequest::exact()).rank;
        if (rk != 3 * m)
            throw u3::EngineError("psi rank " + std::to_string(rk) + " at a sample point, expected " +
                                  std::to_string(3 * m));
    }
    res.complex().validate();
    return res;
}

Certificate verify_exactness(const EquivariantResolution& r, int degree_bound,
                             const u3::Options& opt) {
    Certificate cert;
    cert.check = "exactness";
    cert.m = r.m;
    cert.pass = true;
    exactalg::PrimeSource ps(opt.seed);
    exactalg::CertifiedRanker ranker(opt.mode, opt.exact_threshold, ps);
    const psheaf::FreeComplex c = r.complex();

    for (int t = -3; t <= degree_bound; ++t) {
        const int64_t chi = psheaf::euler_characteristic(c, t);
        const int64_t expect = 2 * u3::chi_line_poly(t) - r.k * (t + 2);
        if (chi != expect) {
            cert.pass = false;
            cert.details.push_back("Hilbert identity fails at t=" + std::to_string(t));
        }
    }
    for (int t = 0; t <= degree_bound; ++t) {
        exactalg::SparseMatrix kt = r.kappa.graded_piece(t);
        exactalg::SparseMatrix pt = r.psi.graded_piece(t);
        const int64_t rk_k = ranker.rank_rat(kt);
        const int64_t rk_p = ranker.rank_rat(pt);
        if (rk_k != kt.cols) {
            cert.pass = false;
            cert.details.push_back("kappa_t not injective at t=" + std::to_string(t) +
                                   " (position 0)");
        }
        if (rk_k + rk_p != pt.cols) {
            cert.pass = false;
            cert.details.push_back("middle exactness fails at t=" + std::to_string(t) +
                                   " (position 1): " + std::to_string(rk_k) + " + " +
                                   std::to_string(rk_p) + " != " + std::to_string(pt.cols));
        }
    }
    if (cert.pass)
        cert.details.push_back("graded exactness and Hilbert identity hold up to degree " +
                               std::to_string(degree_bound));
    return cert;
}

std::string sheaf_name(Sheaf s) {
    switch (s) {
        case Sheaf::O: return "O";
        case Sheaf::E: return "E";
        case Sheaf::EE: return "EE";
        case Sheaf::S2E: return "S2E";
    }
    return "?";
}

int64_t sheaf_chi(Sheaf s, int m, int t) {
    const int64_t k = charge(m);
    const int64_t c = u3::chi_line_poly(t);
    switch (s) {
        case Sheaf::O: return c;
        case Sheaf::E: return 2 * c - k * (t + 2);
        case Sheaf::EE: return 4 * c - 4 * k * (t + 2);
        case Sheaf::S2E: return 3 * c - 4 * k * (t + 2);
    }
    return 0;
}

cech::CohomologyTable sheaf_table(Sheaf s, const EquivariantResolution& r,
                                  const psheaf::FreeComplex* tensor, int tmin, int tmax,
                                  const u3::Options& opt) {
    const int m = r.m;
    auto chi = [s, m](int t) { return sheaf_chi(s, m, t); };
    // E, E (x) E and S^2 E are canonically self-dual, so the engine may
    // evaluate any twist on whichever presentation truncates smaller
    switch (s) {
        case Sheaf::O: {
            psheaf::FreeComplex c;
            c.terms = {psheaf::FreeSheaf::line(0)};
            return cech::table(c, nullptr, tmin, tmax, "O", 0, chi, opt);
        }
        case Sheaf::E: {
            psheaf::FreeComplex c = r.complex();
            psheaf::FreeComplex cd = psheaf::dual_complex(c);
            return cech::table(c, &cd, tmin, tmax, "E", m, chi, opt);
        }
        case Sheaf::EE: {
            if (!tensor) throw u3::EngineError("tensor complex required");
            psheaf::FreeComplex cd = psheaf::dual_complex(*tensor);
            return cech::table(*tensor, &cd, tmin, tmax, "EE", m, chi, opt);
        }
        case Sheaf::S2E: {
            if (!tensor) throw u3::EngineError("tensor complex required");
            psheaf::FreeComplex cd = psheaf::dual_complex(*tensor);
            cech::CohomologyTable tab;
            tab.sheaf = "S2E";
            tab.m = m;
            tab.prov.seed = opt.seed;
            tab.prov.engine = u3::kEngineVersion;
            for (int t = tmin; t <= tmax; ++t) {
                cech::SheafDims hr = cech::sheaf_dims(*tensor, &cd, t, opt);
                std::array<int64_t, 4> h{};
                for (int i = 0; i < 4; ++i) {
                    h[i] = hr.h[i] - psheaf::line_cohomology(i, t);
                    if (h[i] < 0)
                        throw u3::EngineError(
                            "S2E subtraction went negative at twist " + std::to_string(t));
                }
                if (h[0] - h[1] + h[2] - h[3] != chi(t))
                    throw u3::EngineError("S2E table row fails the Hilbert certification at t=" +
                                          std::to_string(t));
                tab.rows.push_back({t, h, hr.B_used});
                if (tab.prov.primes.empty()) tab.prov.primes = hr.primes;
                tab.prov.rank_mode = hr.rank_mode;
            }
            return tab;
        }
    }
    throw u3::EngineError("unknown sheaf");
}

cech::CohomologyTable sheaf_table(Sheaf s, int m, int tmin, int tmax, const u3::Options& opt) {
    if (s == Sheaf::O) {
        psheaf::FreeComplex c;
        c.terms = {psheaf::FreeSheaf::line(0)};
        return cech::table(c, nullptr, tmin, tmax, "O", 0,
                           [](int t) { return u3::chi_line_poly(t); }, opt);
    }
    EquivariantResolution r = build_resolution(m, opt);
    if (s == Sheaf::E) return sheaf_table(s, r, nullptr, tmin, tmax, opt);
    psheaf::FreeComplex tensor = psheaf::tensor_complexes(r.complex(), r.complex());
    return sheaf_table(s, r, &tensor, tmin, tmax, opt);
}

Certificate instanton_axioms(int m, const u3::Options& opt) {
    Certificate cert;
    cert.check = "instanton";
    cert.m = m;
    cert.pass = true;
    EquivariantResolution r = build_resolution(m, opt);
    // table construction certifies every row against the rank-2 chi formula
    cech::CohomologyTable tab = sheaf_table(Sheaf::E, r, nullptr, -4, 1, opt);
    const auto* rm2 = tab.find(-2);
    const auto* rm1 = tab.find(-1);
    if (rm2->h != std::array<int64_t, 4>{0, 0, 0, 0}) {
        cert.pass = false;
        cert.details.push_back("H*(E(-2)) != 0");
    } else {
        cert.details.push_back("H*(E(-2)) = 0");
    }
    if (rm1->h[1] != r.k) {
        cert.pass = false;
        cert.details.push_back("h1(E(-1)) = " + std::to_string(rm1->h[1]) +
                               ", expected charge " + std::to_string(r.k));
    } else {
        cert.details.push_back("h1(E(-1)) = charge = " + std::to_string(r.k));
    }
    cert.details.push_back("chi table certified over [-4, 1] (rank 2, c1 = 0, c2 = " +
                           std::to_string(r.k) + ", c3 = 0)");
    return cert;
}

Certificate verify_coh0(int m, const u3::Options& opt) {
    Certificate cert;
    cert.check = "coh0";
    cert.m = m;
    cert.pass = true;
    const int d = 2 * m + 1;
    const int t = d - 2;
    EquivariantResolution r = build_resolution(m, opt);
    psheaf::FreeComplex tensor = psheaf::tensor_complexes(r.complex(), r.complex());
    psheaf::FreeComplex tdual = psheaf::dual_complex(tensor);
    cech::SheafDims hr = cech::sheaf_dims(tensor, &tdual, t, opt);
    // the whole H^0 of the tensor square must come from the trivial summand
    const int64_t h0_line = psheaf::line_cohomology(0, t);
    if (hr.h[0] != h0_line) {
        cert.pass = false;
        cert.details.push_back("h0(EE(" + std::to_string(t) + ")) = " + std::to_string(hr.h[0]) +
                               " != h0(O(" + std::to_string(t) + ")) = " + std::to_string(h0_line));
    }
    for (int i = 0; i < 4; ++i) {
        const int64_t s2 = hr.h[i] - psheaf::line_cohomology(i, t);
        if (s2 < 0) throw u3::EngineError("S2E subtraction went negative");
        if (s2 != 0) {
            cert.pass = false;
            cert.details.push_back("h" + std::to_string(i) + "(S2E(" + std::to_string(t) +
                                   ")) = " + std::to_string(s2) + " != 0");
        }
    }
    if (cert.pass)
        cert.details.push_back("H*(S2E(" + std::to_string(t) + ")) = 0 for d = " +
                               std::to_string(d) + "; full H0 of the tensor square is the " +
                               "trivial summand (" + std::to_string(h0_line) + ")");
    return cert;
}

LePotierReport verify_lepotier(int m, const u3::Options& opt) {
    EquivariantResolution r = build_resolution(m, opt);
    psheaf::FreeComplex tensor = psheaf::tensor_complexes(r.complex(), r.complex());
    psheaf::FreeComplex tdual = psheaf::dual_complex(tensor);
    cech::SheafDims hr = cech::sheaf_dims(tensor, &tdual, -2, opt);
    LePotierReport rep;
    rep.m = m;
    for (int i = 0; i < 4; ++i) rep.h[i] = hr.h[i] - psheaf::line_cohomology(i, -2);
    if (rep.h[0] - rep.h[1] + rep.h[2] - rep.h[3] != 0)
        throw u3::EngineError("chi(S2E(-2)) must vanish");
    rep.vanishes = rep.h == std::array<int64_t, 4>{0, 0, 0, 0};
    return rep;
}

Certificate moduli_dimension_check(int m, const u3::Options& opt) {
    Certificate cert;
    cert.check = "moduli-dim";
    cert.m = m;
    cert.pass = true;
    EquivariantResolution r = build_resolution(m, opt);
    psheaf::FreeComplex tensor = psheaf::tensor_complexes(r.complex(), r.complex());
    psheaf::FreeComplex tdual = psheaf::dual_complex(tensor);
    cech::SheafDims hr = cech::sheaf_dims(tensor, &tdual, 0, opt);
    std::array<int64_t, 4> h{};
    for (int i = 0; i < 4; ++i) {
        h[i] = hr.h[i] - psheaf::line_cohomology(i, 0);
        if (h[i] < 0) throw u3::EngineError("S2E subtraction went negative");
    }
    const int64_t expect = 8 * r.k - 3;
    if (h[0] != 0) {
        cert.pass = false;
        cert.details.push_back("h0(S2E) = " + std::to_string(h[0]) + " != 0");
    }
    if (h[1] != expect) {
        cert.pass = false;
        cert.details.push_back("h1(S2E) = " + std::to_string(h[1]) + " != 8k-3 = " +
                               std::to_string(expect));
    }
    if (h[2] != 0) {
        cert.pass = false;
        cert.details.push_back("h2(S2E) = " + std::to_string(h[2]) + " != 0");
    }
    if (cert.pass)
        cert.details.push_back("tangent dimension 8k-3 = " + std::to_string(expect) +
                               ", obstruction space zero");
    return cert;
}

} // namespace instanton
