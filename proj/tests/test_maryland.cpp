#include <doctest.h>

#include <cmath>
#include <complex>

#include "ergotrope/arithmetic.hpp"
#include "ergotrope/cocycle.hpp"
#include "ergotrope/lattice.hpp"
#include "ergotrope/maryland.hpp"
#include "ergotrope/spectral.hpp"

using namespace ergotrope;
using namespace ergotrope::maryland;

namespace {
const double kPi = std::acos(-1.0);

MarylandParams golden_params(double g = 2.0, long double omega = 0.1L) {
    MarylandParams p;
    p.g = g;
    p.alpha = arith::Frequency::golden().value();
    p.omega = omega;
    return p;
}
} // namespace

TEST_SUITE("maryland") {

TEST_CASE("density of states closed forms") {
    // n(0, 2) = sqrt(2)/(4 pi)
    CHECK(dos(0.0, 2.0) == doctest::Approx(std::sqrt(2.0) / (4.0 * kPi)).epsilon(1e-12));
    for (double lam : {0.3, 1.7, 5.0})
        CHECK(dos(lam, 2.0) == doctest::Approx(dos(-lam, 2.0)).epsilon(1e-12));
    // Cauchy tail
    CHECK(dos(10.0, 1.0) < 2e-3);
    CHECK(dos(0.0, -2.0) == doctest::Approx(dos(0.0, 2.0))); // scale |g|
    CHECK_THROWS_AS(dos(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("integrated density of states: symmetry, limits, normalization") {
    CHECK(ids(0.0, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ids(-1e6, 2.0) < 1e-5);
    CHECK(ids(1e6, 2.0) > 1.0 - 1e-5);

    // n = N' consistency: quadrature of n over [-50,50] equals the IDS gap
    double riemann = 0.0;
    int steps = 20000;
    for (int i = 0; i < steps; ++i) {
        double lam = -50.0 + 100.0 * (i + 0.5) / steps;
        riemann += dos(lam, 2.0) * (100.0 / steps);
    }
    CHECK(riemann == doctest::Approx(ids(50.0, 2.0) - ids(-50.0, 2.0)).epsilon(1e-6));
    // Cauchy normalization needs a window wide enough for the g=2 tails
    CHECK(ids(13000.0, 2.0) - ids(-13000.0, 2.0) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("ids is strictly increasing") {
    double prev = ids(-8.0, 2.0);
    for (double lam = -8.0 + 1e-3; lam <= 8.0; lam += 0.25) {
        double cur = ids(lam, 2.0);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("ids_inverse solves the monotone equation") {
    CHECK(ids_inverse(0.5, 2.0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(ids_inverse(0.6, 2.0) > 0.0);
    CHECK(ids_inverse(1e-4, 2.0) < -50.0); // deep Cauchy tail
    CHECK_THROWS_AS(ids_inverse(1e-12, 2.0), std::domain_error);
    for (double t : {0.1, 0.31, 0.5, 0.77, 0.93})
        CHECK(ids(ids_inverse(t, 2.0), 2.0) == doctest::Approx(t).epsilon(1e-9));
}

TEST_CASE("label map hits the singularity guard") {
    auto p = golden_params(2.0, 0.5L); // label 0 sits on the tan singularity
    CHECK_THROWS_AS(label_to_eigenvalue(p, 0), std::domain_error);
}

TEST_CASE("labelled eigenvalues are distinct and phase-covariant") {
    auto p = golden_params();
    double l0 = label_to_eigenvalue(p, 0);
    double l1 = label_to_eigenvalue(p, 1);
    CHECK(l0 != l1);
    // lambda_l(omega) = lambda_0(omega + l alpha)
    auto p_shift = golden_params(2.0, p.omega + p.alpha);
    CHECK(label_to_eigenvalue(p_shift, 0) == doctest::Approx(l1).epsilon(1e-9));
}

TEST_CASE("eta root: closed form at lambda=0, g=2 and Vieta product") {
    auto er = eta_root(0.0, 2.0);
    CHECK(er.gamma == doctest::Approx(std::log(1.0 + std::sqrt(2.0))).epsilon(1e-12));
    CHECK(er.phi == doctest::Approx(kPi / 2.0).epsilon(1e-12));
    CHECK(std::abs(er.eta0 - std::complex<double>(0.0, 1.0 - std::sqrt(2.0))) < 1e-12);

    auto e2 = eta_root(0.7, 1.3);
    std::complex<double> partner = std::complex<double>(0.7, 1.3) - e2.eta0;
    CHECK(std::abs(e2.eta0 * partner - 1.0) < 1e-12); // Vieta
    CHECK(std::abs(e2.eta0) == doctest::Approx(std::exp(-e2.gamma)).epsilon(1e-14));
}

TEST_CASE("eta-root gamma equals the closed-form Lyapunov exponent on a grid") {
    for (double g : {1.0, 2.0})
        for (double lam = -4.0; lam <= 4.0; lam += 0.5)
            CHECK(eta_root(lam, g).gamma ==
                  doctest::Approx(cocycle::maryland_lyapunov_closed_form(lam, g))
                      .epsilon(1e-10));
}

TEST_CASE("fourier coefficients l_m: closed values and decay envelope") {
    auto l1 = fourier_coeff_l(1, 0.0, 2.0);
    CHECK(l1.real() == doctest::Approx(0.0));
    CHECK(l1.imag() == doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-12));
    auto l2 = fourier_coeff_l(2, 0.0, 2.0);
    CHECK(std::abs(l2) < 1e-14); // sin(2 phi) = sin(pi) = 0
    double gamma = eta_root(0.0, 2.0).gamma;
    for (int m = 1; m <= 20; ++m)
        CHECK(std::abs(fourier_coeff_l(m, 0.0, 2.0)) <=
              (2.0 / m) * std::exp(-gamma * m) + 1e-15);
    CHECK_THROWS_AS(fourier_coeff_l(0, 0.0, 2.0), std::invalid_argument);
}

TEST_CASE("t coefficients: denominator, pairing, tail") {
    auto p = golden_params();
    double lam = 0.0;
    auto tc = t_coefficients(p, lam);
    // |t_1| = |l_1| / (2 |sin(pi alpha)|)
    double denom = 2.0 * std::fabs(std::sin(kPi * static_cast<double>(p.alpha)));
    CHECK(std::abs(tc.at(1)) ==
          doctest::Approx(std::abs(fourier_coeff_l(1, lam, p.g)) / denom).epsilon(1e-12));
    // pairing t_{-m} = -conj(t_m) makes t purely imaginary on the circle
    for (int m = 1; m <= tc.M; ++m)
        CHECK(std::abs(tc.at(-m) + std::conj(tc.at(m))) < 1e-14);
    for (double th : {0.3, 1.1, 2.9}) {
        std::complex<double> t(0.0, 0.0);
        for (int m = 1; m <= tc.M; ++m) {
            auto e = std::polar(1.0, m * th);
            t += tc.at(m) * e + tc.at(-m) * std::conj(e);
        }
        CHECK(std::fabs(t.real()) < 1e-12);
    }
    // truncation tail below 1e-8 beyond half the kept order
    for (int m = tc.M / 2 + 1; m <= tc.M; ++m) CHECK(std::abs(tc.at(m)) < 1e-8);
}

TEST_CASE("resonant denominators are rejected") {
    MarylandParams p;
    p.g = 2.0;
    p.alpha = 0.25L; // 4 alpha = 1: resonance at m = 4
    p.omega = 0.1L;
    CHECK_THROWS_AS(t_coefficients(p, 0.0), std::runtime_error);
}

TEST_CASE("psi0: normalization, decay rate, and the assembled eigen-residual") {
    auto p = golden_params();
    double lam = label_to_eigenvalue(p, 0);

    auto psi = psi0_range(p, lam, -80, 80);
    double norm = 0.0;
    for (const auto& c : psi) norm += std::norm(c);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-4));

    // fitted decay of log|psi0| vs n at least gamma/2 steep
    double gamma = eta_root(lam, p.g).gamma;
    std::vector<double> xs, ys;
    for (std::int64_t n = 3; n <= 40; ++n) {
        double a = std::abs(psi[static_cast<std::size_t>(n + 80)]);
        if (a > 1e-280) {
            xs.push_back(static_cast<double>(n));
            ys.push_back(std::log(a));
        }
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double nn = static_cast<double>(xs.size());
    double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    CHECK(slope <= -0.5 * gamma);

    // eigen-residual on the interior of a 161-site box
    std::int64_t R = 80;
    pot::PotentialSpec spec;
    spec.family = pot::Family::Maryland;
    spec.g = p.g;
    spec.alpha = {p.alpha};
    auto H = lattice::build_hamiltonian(spec, pot::fixed_phase(spec, p.omega),
                                        lattice::LatticeBox::interval(-R, R), {});
    const auto& T = H.tri();
    double res2 = 0.0, norm2 = 0.0;
    auto at = [&](std::int64_t n) { return psi[static_cast<std::size_t>(n + 80)]; };
    for (std::int64_t n = -R; n <= R; ++n) norm2 += std::norm(at(n));
    for (std::int64_t n = -R + 1; n < R; ++n) {
        auto r = at(n + 1) + at(n - 1) +
                 (T.diag[static_cast<std::size_t>(n + R)] - lam) * at(n);
        res2 += std::norm(r);
    }
    CHECK(std::sqrt(res2 / norm2) < 1e-6);
}

TEST_CASE("psi0 profile depends on the phase only through the eigenvalue") {
    auto p = golden_params();
    double lam = 1.234;
    auto a = psi0(p, lam, 3);
    auto b = psi0(golden_params(2.0, 0.37L), lam, 3);
    CHECK(std::abs(a - b) < 1e-12);
}

} // TEST_SUITE
