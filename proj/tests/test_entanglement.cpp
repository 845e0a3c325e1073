#include <doctest.h>

#include <cmath>

#include "ergotrope/arithmetic.hpp"
#include "ergotrope/entanglement.hpp"

using namespace ergotrope;
using namespace ergotrope::ent;

namespace {

pot::PotentialSpec amo_spec(double g = 2.0) {
    pot::PotentialSpec s;
    s.family = pot::Family::AlmostMathieu;
    s.g = g;
    s.alpha = {arith::Frequency::golden().value()};
    return s;
}

} // namespace

TEST_SUITE("entanglement") {

TEST_CASE("binary entropy pinned values and clamp band") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(binary_entropy(0.25) == doctest::Approx(0.562335).epsilon(1e-6));
    CHECK(binary_entropy(1.0 + 5e-10) == 0.0); // clamped
    CHECK_THROWS_AS(binary_entropy(1.1), std::invalid_argument);
    CHECK_THROWS_AS(binary_entropy(-0.1), std::invalid_argument);
}

TEST_CASE("block entropy: zero projection, half-half eigenvalues, single site") {
    // P = 0 on a 3-site box
    spectral::ProjectionMatrix P;
    P.box = lattice::LatticeBox::interval(0, 2);
    P.mat = linalg::DenseSym::zero(3);
    CHECK(entropy_of_block(P, P.box) == 0.0);

    // block restriction with eigenvalues {1/2, 1/2}: S = 2 log 2
    spectral::ProjectionMatrix H2;
    H2.box = lattice::LatticeBox::interval(0, 1);
    H2.mat = linalg::DenseSym::zero(2);
    H2.mat.at(0, 0) = 0.5;
    H2.mat.at(1, 1) = 0.5;
    CHECK(entropy_of_block(H2, H2.box) == doctest::Approx(2.0 * std::log(2.0)));

    // half-filled free chain, single-site block: P(0,0) ~ 1/2 so S ~ log 2
    pot::PotentialSpec free;
    auto host = lattice::LatticeBox::interval(-400, 399);
    auto H = lattice::build_hamiltonian(free, std::monostate{}, host, {});
    auto spec = spectral::decompose(H);
    double S1 = entropy_of_block(spec, 0.0, lattice::LatticeBox::interval(0, 0));
    CHECK(S1 == doctest::Approx(std::log(2.0)).epsilon(1e-4));
}

TEST_CASE("both block-entropy routes agree") {
    auto spec_pot = amo_spec(1.2);
    auto host = lattice::LatticeBox::interval(-30, 30);
    auto H = lattice::build_hamiltonian(spec_pot, pot::fixed_phase(spec_pot, 0.17L), host, {});
    auto spec = spectral::decompose(H);
    auto block = lattice::LatticeBox::interval(-7, 7);
    auto P = spectral::fermi_projection(spec, 0.3);
    CHECK(entropy_of_block(P, block) ==
          doctest::Approx(entropy_of_block(spec, 0.3, block)).epsilon(1e-10));
}

TEST_CASE("entropy bounds and the monotone fermi window") {
    auto spec_pot = amo_spec(1.0);
    auto host = lattice::LatticeBox::interval(-25, 25);
    auto H = lattice::build_hamiltonian(spec_pot, pot::fixed_phase(spec_pot, 0.05L), host, {});
    auto spec = spectral::decompose(H);
    auto block = lattice::LatticeBox::interval(-6, 6);
    double below = spec.eig.values.front() - 0.5;
    double above = spec.eig.values.back() + 0.5;
    CHECK(entropy_of_block(spec, below, block) == 0.0);
    CHECK(entropy_of_block(spec, above, block) == 0.0);
    bool positive_inside = false;
    for (double eF = below; eF <= above; eF += 0.25) {
        double S = entropy_of_block(spec, eF, block);
        CHECK(S >= 0.0);
        CHECK(S <= static_cast<double>(block.size()) * std::log(2.0) + 1e-6);
        if (S > 0.1) positive_inside = true;
    }
    CHECK(positive_inside);
}

TEST_CASE("complementary blocks of a pure state carry equal entropy") {
    pot::PotentialSpec free;
    auto host = lattice::LatticeBox::interval(-40, 40);
    auto H = lattice::build_hamiltonian(free, std::monostate{}, host, {});
    auto spec = spectral::decompose(H);
    auto P = spectral::fermi_projection(spec, 0.0);

    auto left = lattice::LatticeBox::interval(-40, -3);
    auto right = lattice::LatticeBox::interval(-2, 40);
    CHECK(entropy_of_block(P, left) ==
          doctest::Approx(entropy_of_block(P, right)).epsilon(1e-8));
}

TEST_CASE("scaling study is deterministic and host-stable for localized specs") {
    auto spec = amo_spec(2.0);
    std::int64_t Ls[] = {8, 16};
    HostMargin m16{0.0, 16};
    auto a = entropy_scaling_study(spec, {}, 0.0, Ls, m16, 6, 2024, 2);
    auto b = entropy_scaling_study(spec, {}, 0.0, Ls, m16, 6, 2024, 1);
    REQUIRE(a.L == b.L);
    for (std::size_t i = 0; i < a.mean_S.size(); ++i)
        CHECK(a.mean_S[i] == b.mean_S[i]); // bit-identical across jobs

    HostMargin m32{0.0, 32};
    auto c = entropy_scaling_study(spec, {}, 0.0, Ls, m32, 6, 2024, 2);
    for (std::size_t i = 0; i < a.mean_S.size(); ++i)
        CHECK(std::fabs(a.mean_S[i] - c.mean_S[i]) < 1e-3); // margin doubling
}

TEST_CASE("decay fit recovers synthetic exponentials and flags non-exponential data") {
    std::vector<double> d, v;
    for (int n = 1; n <= 12; ++n) {
        d.push_back(n);
        v.push_back(std::exp(-0.5 * n));
    }
    auto fit = decay_fit(d, v, 1, 12);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> w;
    for (int n = 1; n <= 12; ++n) w.push_back(1.0 / d[static_cast<std::size_t>(n - 1)]);
    auto poly = decay_fit(d, w, 1, 12);
    CHECK(poly.r2 < 0.95); // 1/n is visibly not exponential on a linear axis

    std::vector<double> cst(12, 0.7);
    auto flat = decay_fit(d, cst, 1, 12);
    CHECK(flat.slope == 0.0);
    CHECK(flat.r2 == 0.0);

    CHECK_THROWS_AS(decay_fit(d, v, 1, 4), std::invalid_argument); // < 5 points
}

TEST_CASE("area law verdicts on synthetic curves") {
    EntropyCurve area;
    for (std::int64_t L : {25, 50, 100, 200, 400}) {
        area.L.push_back(L);
        area.mean_S.push_back(3.0);
        area.stderr_S.push_back(0.01);
    }
    CHECK(area_law_fit(area, 1).verdict == ScalingVerdict::Area);

    EntropyCurve enh;
    for (std::int64_t L : {25, 50, 100, 200, 400}) {
        enh.L.push_back(L);
        enh.mean_S.push_back(std::log(static_cast<double>(L)) / 3.0);
        enh.stderr_S.push_back(0.01);
    }
    auto ef = area_law_fit(enh, 1);
    CHECK(ef.verdict == ScalingVerdict::EnhancedArea);
    CHECK(ef.area_fit.slope == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

    EntropyCurve vol;
    for (std::int64_t L : {25, 50, 100, 200, 400}) {
        vol.L.push_back(L);
        vol.mean_S.push_back(0.7 * static_cast<double>(L));
        vol.stderr_S.push_back(0.01);
    }
    CHECK(area_law_fit(vol, 1).verdict == ScalingVerdict::Volume);

    EntropyCurve junk;
    for (std::int64_t L : {25, 50, 100, 200}) {
        junk.L.push_back(L);
        junk.mean_S.push_back(L % 50 == 0 ? 5.0 : std::sqrt(static_cast<double>(L)));
        junk.stderr_S.push_back(0.01);
    }
    CHECK(area_law_fit(junk, 1).verdict == ScalingVerdict::Undetermined);

    EntropyCurve narrow;
    for (std::int64_t L : {25, 30, 35, 40}) {
        narrow.L.push_back(L);
        narrow.mean_S.push_back(1.0);
        narrow.stderr_S.push_back(0.01);
    }
    CHECK_THROWS_AS(area_law_fit(narrow, 1), std::invalid_argument); // span < 4
}

TEST_CASE("projection decay study separates localized from free") {
    std::vector<std::int64_t> dist;
    for (std::int64_t n = 4; n <= 24; n += 2) dist.push_back(n);

    auto loc = projection_decay_study(amo_spec(2.0), {}, 0.0, std::nullopt, dist, 12, 12,
                                      31, 2);
    CHECK(loc.fit_P.slope < -0.3);
    CHECK(loc.fit_P.r2 >= 0.9);
    CHECK(loc.fit_Q.slope < -0.2);

    pot::PotentialSpec free;
    auto f = projection_decay_study(free, {}, 0.0, std::nullopt, dist, 12, 1, 31, 1);
    CHECK((f.fit_P.r2 < 0.5 || std::fabs(f.fit_P.slope) < 0.02));
}

TEST_CASE("Q dominates |P| entrywise in the study outputs") {
    std::vector<std::int64_t> dist{2, 4, 6, 8, 10, 12};
    auto st = projection_decay_study(amo_spec(1.5), {}, 0.1, std::nullopt, dist, 10, 8,
                                     77, 2);
    for (std::size_t i = 0; i < st.distances.size(); ++i)
        CHECK(st.mean_absP[i] <= st.mean_Q[i] + 1e-9);
}

} // TEST_SUITE
