#include "ergotrope/maryland.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ergotrope::maryland {

namespace {

const double kPi = std::acos(-1.0);

// trapezoid quadrature of a smooth 2pi-periodic integrand, doubled until the
// value is stable (spectral accuracy)
template <typename F>
double periodic_quadrature(F&& f, int start_order, double tol) {
    double prev = 0.0;
    for (int q = start_order; q <= (1 << 17); q *= 2) {
        double s = 0.0;
        for (int j = 0; j < q; ++j) s += f(2.0 * kPi * j / q);
        s /= q;
        if (q > start_order && std::fabs(s - prev) <= tol * std::max(1.0, std::fabs(s)))
            return s;
        prev = s;
    }
    return prev;
}

} // namespace

double dos(double lambda, double g) {
    if (g == 0.0) throw std::invalid_argument("dos: g != 0");
    double ga = std::fabs(g);
    return periodic_quadrature(
        [&](double th) {
            double u = 2.0 * std::cos(th) - lambda;
            return (ga / kPi) / (u * u + ga * ga);
        },
        512, 1e-14);
}

double ids(double lambda, double g) {
    if (g == 0.0) throw std::invalid_argument("ids: g != 0");
    double ga = std::fabs(g);
    return periodic_quadrature(
        [&](double th) {
            return 0.5 + std::atan((lambda - 2.0 * std::cos(th)) / ga) / kPi;
        },
        512, 1e-14);
}

double ids_inverse(double target, double g) {
    if (target < 1e-10 || target > 1.0 - 1e-10)
        throw std::domain_error("ids_inverse: target " + std::to_string(target) +
                                " within 1e-10 of {0,1} (eigenvalue at infinity)");
    // bracket, then bisection with secant acceleration
    double lo = -4.0 - 2.0 * std::fabs(g), hi = -lo;
    while (ids(lo, g) > target) lo *= 2.0;
    while (ids(hi, g) < target) hi *= 2.0;
    double flo = ids(lo, g) - target, fhi = ids(hi, g) - target;
    for (int it = 0; it < 200; ++it) {
        double mid = (fhi != flo) ? lo - flo * (hi - lo) / (fhi - flo) : 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        double fm = ids(mid, g) - target;
        if (std::fabs(fm) <= 1e-10) return mid;
        if (fm < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return 0.5 * (lo + hi);
}

double label_to_eigenvalue(const MarylandParams& p, std::int64_t l) {
    long double x = p.omega + static_cast<long double>(l) * p.alpha;
    x -= floorl(x);
    if (fabsl(x - 0.5L) < 1e-10L)
        throw std::domain_error("label_to_eigenvalue: phase at label " + std::to_string(l) +
                                " sits on the tan singularity (eigenvalue at infinity)");
    long double t = x + 0.5L;
    if (t >= 1.0L) t -= 1.0L;
    return ids_inverse(static_cast<double>(t), p.g);
}

EtaRoot eta_root(double lambda, double g) {
    if (g == 0.0) throw std::invalid_argument("eta_root: g != 0");
    std::complex<double> z(lambda, g);
    std::complex<double> root = std::sqrt(z * z - 4.0);
    std::complex<double> eta = 0.5 * (z - root);
    if (std::abs(eta) > 1.0) eta = 0.5 * (z + root);
    EtaRoot out;
    out.eta0 = eta;
    out.gamma = -std::log(std::abs(eta));
    double phi = -std::arg(eta);
    if (phi < 0.0) phi += 2.0 * kPi; // normalize to [0, 2pi), then fold to [0, pi]
    if (phi > kPi) phi = 2.0 * kPi - phi;
    out.phi = phi;
    return out;
}

std::complex<double> fourier_coeff_l(std::int64_t m, double lambda, double g) {
    if (m == 0)
        throw std::invalid_argument("fourier_coeff_l: m != 0 (the m = 0 term is absorbed "
                                    "into the psi0 normalization)");
    auto er = eta_root(lambda, g);
    auto ma = static_cast<double>(std::llabs(m));
    return std::complex<double>(0.0, 2.0 / ma) * std::exp(-er.gamma * ma) *
           std::sin(ma * er.phi);
}

TCoefficients t_coefficients(const MarylandParams& p, double lambda) {
    TCoefficients out;
    // pick M so the dropped tail of |t_m| is below 1e-12; the denominator is
    // bounded below through the Diophantine quality of alpha at these scales
    std::vector<std::complex<double>> plus, minus;
    int M = 0;
    int quiet = 0;
    for (int m = 1; m <= p.max_fourier_order; ++m) {
        long double ph = static_cast<long double>(m) * p.alpha;
        ph -= floorl(ph);
        double s = 2.0 * std::fabs(std::sin(kPi * static_cast<double>(ph)));
        if (s < 1e-12)
            throw std::runtime_error("t_coefficients: resonant denominator at m = " +
                                     std::to_string(m));
        auto lm = fourier_coeff_l(m, lambda, p.g);
        std::complex<double> dplus = 1.0 - std::polar(1.0, 2.0 * kPi * static_cast<double>(ph));
        std::complex<double> dminus = 1.0 - std::polar(1.0, -2.0 * kPi * static_cast<double>(ph));
        plus.push_back(lm / dplus);
        minus.push_back(lm / dminus);
        double mag = std::max(std::abs(plus.back()), std::abs(minus.back()));
        M = m;
        if (mag < 1e-12) {
            if (++quiet >= 3) break; // three consecutive negligible terms
        } else {
            quiet = 0;
        }
    }
    out.M = M;
    out.t.assign(static_cast<std::size_t>(2 * M + 1), {0.0, 0.0});
    for (int m = 1; m <= M; ++m) {
        out.t[static_cast<std::size_t>(M + m)] = plus[static_cast<std::size_t>(m - 1)];
        out.t[static_cast<std::size_t>(M - m)] = minus[static_cast<std::size_t>(m - 1)];
    }
    return out;
}

std::vector<std::complex<double>> psi0_range(const MarylandParams& p, double lambda,
                                             std::int64_t n_lo, std::int64_t n_hi) {
    if (n_lo > n_hi) throw std::invalid_argument("psi0_range: empty range");
    auto tc = t_coefficients(p, lambda);
    double nrm = 1.0 / std::sqrt(kPi * dos(lambda, p.g) / std::fabs(p.g));
    auto count = static_cast<std::size_t>(n_hi - n_lo + 1);

    std::vector<std::complex<double>> prev(count);
    for (int q = std::max(p.quadrature_order, 4 * tc.M + 64); q <= (1 << 17); q *= 2) {
        std::vector<std::complex<double>> out(count, {0.0, 0.0});
        for (int j = 0; j < q; ++j) {
            double th = 2.0 * kPi * j / q;
            std::complex<double> t(0.0, 0.0);
            for (int m = 1; m <= tc.M; ++m) {
                auto e = std::polar(1.0, m * th);
                t += tc.at(m) * e + tc.at(-m) * std::conj(e);
            }
            std::complex<double> f =
                std::exp(t) / (2.0 * std::cos(th) - std::complex<double>(lambda, p.g));
            // e^{-i n theta} factor, advanced by multiplication along n
            auto step = std::polar(1.0, -th);
            auto e = std::polar(1.0, -static_cast<double>(n_lo) * th);
            for (std::size_t i = 0; i < count; ++i) {
                out[i] += f * e;
                e *= step;
            }
        }
        for (auto& v : out) v *= nrm / static_cast<double>(q);
        if (q > p.quadrature_order) {
            double delta = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < count; ++i) {
                delta = std::max(delta, std::abs(out[i] - prev[i]));
                scale = std::max(scale, std::abs(out[i]));
            }
            if (delta <= 1e-8 * std::max(scale, 1e-30)) return out;
        }
        prev = std::move(out);
        if (q * 2 > (1 << 17))
            throw std::runtime_error("psi0: quadrature failed to converge; raise the order");
    }
    return prev;
}

std::complex<double> psi0(const MarylandParams& p, double lambda, std::int64_t n) {
    return psi0_range(p, lambda, n, n)[0];
}

} // namespace ergotrope::maryland
