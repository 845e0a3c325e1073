#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ergotrope/arithmetic.hpp"
#include "ergotrope/lattice.hpp"

using namespace ergotrope;
using namespace ergotrope::lattice;

TEST_SUITE("lattice") {

TEST_CASE("free 1-d chain assembles as the unit tridiagonal") {
    pot::PotentialSpec free;
    auto H = build_hamiltonian(free, std::monostate{}, LatticeBox::interval(1, 3), {});
    REQUIRE(H.tridiagonal());
    CHECK(H.tri().index_offset == 1);
    CHECK(H.tri().diag == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(H.tri().offdiag == std::vector<double>{1.0, 1.0});
}

TEST_CASE("free 2x2 grid has two unit couplings per site") {
    pot::PotentialSpec free;
    free.dimension = 2;
    LatticeBox box{{0, 0}, {1, 1}};
    auto H = build_hamiltonian(free, std::monostate{}, box, {});
    REQUIRE_FALSE(H.tridiagonal());
    const auto& M = H.dense();
    for (int i = 0; i < 4; ++i) {
        int count = 0;
        for (int j = 0; j < 4; ++j) {
            if (i == j) CHECK(M.at(i, j) == 0.0);
            if (i != j && M.at(i, j) != 0.0) {
                CHECK(M.at(i, j) == 1.0);
                ++count;
            }
        }
        CHECK(count == 2);
    }
}

TEST_CASE("exp-decay kernel obeys the envelope and truncation") {
    KernelSpec k;
    k.kind = KernelSpec::Kind::ExpDecay;
    k.amplitude = 1.0;
    k.rate = 1.0;
    std::int64_t R = k.truncation_radius();
    CHECK(R >= 32); // e^{-R} <= 1e-14

    pot::PotentialSpec free;
    auto H = build_hamiltonian(free, std::monostate{}, LatticeBox::interval(-40, 40), k);
    REQUIRE_FALSE(H.tridiagonal());
    std::int64_t n = H.order();
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) {
            auto d = std::llabs(i - j);
            if (d == 0) continue;
            double w = H.entry(i, j);
            CHECK(std::fabs(w) <= std::exp(-static_cast<double>(d)) + 1e-18);
            if (d > R) CHECK(w == 0.0);
            if (d <= R) CHECK(w == doctest::Approx(std::exp(-static_cast<double>(d))));
        }
}

TEST_CASE("assembled matrices are exactly symmetric") {
    pot::PotentialSpec amo;
    amo.family = pot::Family::AlmostMathieu;
    amo.g = 1.2;
    amo.alpha = {arith::Frequency::golden().value()};
    KernelSpec k;
    k.kind = KernelSpec::Kind::ExpDecay;
    k.amplitude = 0.7;
    k.rate = 0.9;
    auto H = build_hamiltonian(amo, pot::fixed_phase(amo, 0.31L), LatticeBox::interval(-15, 15), k);
    const auto& M = H.dense();
    for (int i = 0; i < M.n; ++i)
        for (int j = 0; j < M.n; ++j) CHECK(M.at(i, j) == M.at(j, i));
}

TEST_CASE("covariance: shifted phase equals shifted box after relabeling") {
    pot::PotentialSpec amo;
    amo.family = pot::Family::AlmostMathieu;
    amo.g = 2.0;
    amo.alpha = {arith::Frequency::golden().value()};
    std::int64_t k[1] = {9};
    auto box = LatticeBox::interval(-6, 6);
    auto A = build_hamiltonian(amo, pot::fixed_phase(amo, 0.12L), box.shifted(k), {});
    auto B = build_hamiltonian(amo, pot::shifted_phase(amo, pot::fixed_phase(amo, 0.12L), k), box, {});
    for (std::size_t i = 0; i < A.tri().diag.size(); ++i)
        CHECK(A.tri().diag[i] == doctest::Approx(B.tri().diag[i]).epsilon(1e-12));
}

TEST_CASE("restriction: identity, single site, and containment errors") {
    pot::PotentialSpec mary;
    mary.family = pot::Family::Maryland;
    mary.g = 2.0;
    mary.alpha = {arith::Frequency::golden().value()};
    auto phase = pot::fixed_phase(mary, 0.1L);
    auto H = build_hamiltonian(mary, phase, LatticeBox::interval(1, 5), {});

    auto R = restrict_operator(H, LatticeBox::interval(2, 4));
    CHECK(R.tri().index_offset == 2);
    CHECK(R.order() == 3);
    CHECK(R.tri().diag[0] == H.tri().diag[1]);

    auto single = restrict_operator(H, LatticeBox::interval(3, 3));
    CHECK(single.order() == 1);
    CHECK(single.tri().diag[0] == H.tri().diag[2]);

    auto full = restrict_operator(H, H.box);
    CHECK(full.tri().diag == H.tri().diag);
    CHECK(full.tri().offdiag == H.tri().offdiag);

    CHECK_THROWS_AS(restrict_operator(H, LatticeBox::interval(0, 3)), std::invalid_argument);
}

TEST_CASE("2-d restriction extracts the right principal submatrix") {
    pot::PotentialSpec amo;
    amo.family = pot::Family::AlmostMathieu;
    amo.dimension = 2;
    amo.g = 8.0;
    amo.alpha = {arith::Frequency::golden().value(), arith::Frequency::sqrt2_minus_1().value()};
    auto phase = pot::fixed_phase(amo, 0.41L);
    LatticeBox host{{-3, -3}, {3, 3}};
    auto H = build_hamiltonian(amo, phase, host, {});
    LatticeBox sub{{-1, -1}, {1, 1}};
    auto R = restrict_operator(H, sub);
    CHECK(R.order() == 9);
    std::int64_t site[2] = {0, 1};
    CHECK(R.entry(sub.index_of(site), sub.index_of(site)) ==
          H.entry(host.index_of(site), host.index_of(site)));
}

TEST_CASE("gershgorin hull contains every eigenvalue realization") {
    pot::PotentialSpec amo;
    amo.family = pot::Family::AlmostMathieu;
    amo.g = 2.0;
    amo.alpha = {arith::Frequency::golden().value()};
    RngStream rng(3, 0);
    auto box = LatticeBox::interval(-100, 100);
    auto H = build_hamiltonian(amo, pot::sample_phase(amo, rng, 101), box, {});
    auto [lo, hi] = gershgorin_hull(H);
    CHECK(lo >= -6.0 - 1e-12); // 2|g| + 2 for the 1-d AMO at g=2
    CHECK(hi <= 6.0 + 1e-12);
    auto vals = linalg::tridiagonal_eigenvalues(H.tri());
    CHECK(vals.front() >= lo - 1e-9);
    CHECK(vals.back() <= hi + 1e-9);
}

TEST_CASE("csv dump lists nonzero entries with site labels") {
    pot::PotentialSpec free;
    auto H = build_hamiltonian(free, std::monostate{}, LatticeBox::interval(0, 1), {});
    std::ostringstream os;
    dump_csv(H, os);
    CHECK(os.str() == "row_site,col_site,value\n0,1,1\n1,0,1\n");
}

} // TEST_SUITE
