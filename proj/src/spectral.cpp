#include "ergotrope/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace ergotrope::spectral {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Spectrum decompose(const lattice::LatticeOperator& H) {
    Spectrum s;
    s.box = H.box;
    if (H.tridiagonal())
        s.eig = linalg::tridiagonal_eigen(H.tri());
    else
        s.eig = linalg::dense_eigen(H.dense());
    return s;
}

ProjectionMatrix fermi_projection(const Spectrum& spec, double fermi_energy) {
    const auto& eig = spec.eig;
    int n = eig.n;
    ProjectionMatrix P;
    P.box = spec.box;
    P.fermi_energy = fermi_energy;
    P.mat = linalg::DenseSym::zero(n);
    P.mat.index_offset = eig.index_offset;
    int r = 0;
    while (r < n && eig.values[static_cast<std::size_t>(r)] <= fermi_energy) ++r;
    P.rank = r;
    for (int k = 0; k < r; ++k) {
        const double* psi = eig.vectors.data() + static_cast<std::size_t>(k) * n;
        for (int i = 0; i < n; ++i) {
            double pi = psi[i];
            if (pi == 0.0) continue;
            double* row = P.mat.a.data() + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) row[j] += pi * psi[j];
        }
    }
    // enforce exact symmetry against rounding asymmetries in the accumulation
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double v = 0.5 * (P.mat.at(i, j) + P.mat.at(j, i));
            P.mat.at(i, j) = v;
            P.mat.at(j, i) = v;
        }
    return P;
}

double ProjectionMatrix::validate() const {
    int n = mat.n;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double p2 = 0.0;
            for (int k = 0; k < n; ++k) p2 += mat.at(i, k) * mat.at(k, j);
            worst = std::max(worst, std::fabs(p2 - mat.at(i, j)));
            worst = std::max(worst, std::fabs(mat.at(i, j) - mat.at(j, i)));
        }
    return worst;
}

linalg::DenseSym fermi_projection_block(const Spectrum& spec, double fermi_energy,
                                        const lattice::LatticeBox& sub, int* rank) {
    if (!spec.box.contains(sub))
        throw std::invalid_argument("fermi_projection_block: block not inside host box");
    const auto& eig = spec.eig;
    int n = eig.n;
    int m = static_cast<int>(sub.size());
    std::vector<int> rows(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        rows[static_cast<std::size_t>(i)] = static_cast<int>(spec.box.index_of(sub.site_of(i)));
    int r = 0;
    while (r < n && eig.values[static_cast<std::size_t>(r)] <= fermi_energy) ++r;
    if (rank) *rank = r;
    auto P = linalg::DenseSym::zero(m);
    P.index_offset = sub.dim() == 1 ? sub.lo[0] : 0;
    for (int k = 0; k < r; ++k) {
        const double* psi = eig.vectors.data() + static_cast<std::size_t>(k) * n;
        for (int i = 0; i < m; ++i) {
            double pi = psi[rows[static_cast<std::size_t>(i)]];
            for (int j = 0; j <= i; ++j)
                P.at(i, j) += pi * psi[rows[static_cast<std::size_t>(j)]];
        }
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j) P.at(j, i) = P.at(i, j);
    return P;
}

CorrelatorMatrix eigenfunction_correlator(const Spectrum& spec, const EnergyWindow& I) {
    const auto& eig = spec.eig;
    int n = eig.n;
    CorrelatorMatrix Q;
    Q.box = spec.box;
    Q.window = I;
    Q.mat = linalg::DenseSym::zero(n);
    Q.mat.index_offset = eig.index_offset;
    for (int k = 0; k < n; ++k) {
        if (!I.contains(eig.values[static_cast<std::size_t>(k)])) continue;
        const double* psi = eig.vectors.data() + static_cast<std::size_t>(k) * n;
        for (int i = 0; i < n; ++i) {
            double pi = std::fabs(psi[i]);
            if (pi == 0.0) continue;
            double* row = Q.mat.a.data() + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) row[j] += pi * std::fabs(psi[j]);
        }
    }
    return Q;
}

double green_entry(const lattice::LatticeOperator& H, double lambda, std::int64_t k,
                   std::int64_t l) {
    if (H.box.dim() != 1)
        throw std::invalid_argument("green_entry: 1-d sites; use solve_shifted directly for d > 1");
    std::int64_t a = H.box.lo[0];
    std::int64_t n = H.order();
    if (k < a || l < a || k >= a + n || l >= a + n)
        throw std::invalid_argument("green_entry: site outside box");
    std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
    rhs[static_cast<std::size_t>(l - a)] = 1.0;
    auto x = H.tridiagonal() ? linalg::solve_shifted(H.tri(), lambda, rhs)
                             : linalg::solve_shifted(H.dense(), lambda, rhs);
    return x[static_cast<std::size_t>(k - a)];
}

SignedLogMag green_via_determinants(const linalg::SymTridiag& T, double lambda,
                                    std::int64_t k, std::int64_t l) {
    std::int64_t a = T.index_offset;
    std::int64_t b = a + T.order() - 1;
    if (!(a <= k && k <= l && l <= b))
        throw std::invalid_argument("green_via_determinants: need a <= k <= l <= b");
    auto det_over = [&](std::int64_t lo, std::int64_t hi) -> linalg::SignedLogDet {
        if (lo > hi) return {};
        return linalg::log_det_tridiagonal(T.restricted(lo, hi), lambda);
    };
    auto d_left = det_over(a, k - 1);
    auto d_right = det_over(l + 1, b);
    auto d_full = det_over(a, b);
    if (d_full.sign == 0)
        throw std::runtime_error("green_via_determinants: lambda is an eigenvalue");
    SignedLogMag out;
    double log_off = 0.0;
    int sign_off = 1;
    for (std::int64_t i = k; i < l; ++i) {
        double o = T.offdiag[static_cast<std::size_t>(i - a)];
        if (o == 0.0) return {0, -kInf};
        log_off += std::log(std::fabs(o));
        if (o < 0.0) sign_off = -sign_off;
    }
    if (d_left.sign == 0 || d_right.sign == 0) return {0, -kInf};
    int parity = ((k + l) % 2 == 0) ? 1 : -1;
    out.sign = parity * sign_off * d_left.sign * d_right.sign * d_full.sign;
    out.log_abs = log_off + d_left.log_abs + d_right.log_abs - d_full.log_abs;
    return out;
}

bool bad_membership(const lattice::LatticeOperator& H_box, double lambda, double eps) {
    std::int64_t a = H_box.box.lo[0], b = H_box.box.hi[0];
    if ((a + b) % 2 != 0)
        throw std::invalid_argument("bad_membership: box has no integer center");
    return bad_membership(H_box, lambda, eps, (a + b) / 2);
}

bool bad_membership(const lattice::LatticeOperator& H_box, double lambda, double eps,
                    std::int64_t c) {
    if (eps <= 0.0) throw std::invalid_argument("bad_membership: eps > 0");
    if (H_box.box.dim() != 1)
        throw std::invalid_argument("bad_membership: 1-d boxes");
    std::int64_t a = H_box.box.lo[0], b = H_box.box.hi[0];
    if (c < a || c > b)
        throw std::invalid_argument("bad_membership: reference site outside box");
    std::int64_t n = H_box.order();
    std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
    rhs[static_cast<std::size_t>(c - a)] = 1.0;
    std::vector<double> x;
    try {
        x = H_box.tridiagonal() ? linalg::solve_shifted(H_box.tri(), lambda, rhs)
                                : linalg::solve_shifted(H_box.dense(), lambda, rhs);
    } catch (const linalg::SingularShift&) {
        return true; // resolvent blows up on the spectrum
    }
    double edge = std::max(std::fabs(x.front()), std::fabs(x.back()));
    if (!std::isfinite(edge)) return true;
    return edge >= eps;
}

bool res_membership(std::span<const double> eigenvalues, double lambda, double eps) {
    if (eps < 0.0) throw std::invalid_argument("res_membership: eps >= 0");
    double best = kInf;
    for (double mu : eigenvalues) best = std::min(best, std::fabs(mu - lambda));
    return best <= eps;
}

bool res_membership(const lattice::LatticeOperator& H_box, double lambda, double eps) {
    std::vector<double> vals;
    if (H_box.tridiagonal())
        vals = linalg::tridiagonal_eigenvalues(H_box.tri());
    else
        vals = linalg::dense_eigen(H_box.dense()).values;
    return res_membership(vals, lambda, eps);
}

double dynamical_amplitude(const linalg::EigenDecomposition& eig, const EnergyWindow& I,
                           int m, int n, std::span<const double> times) {
    if (times.empty()) throw std::invalid_argument("dynamical_amplitude: empty time grid");
    std::vector<std::pair<double, double>> terms; // (lambda, psi(m) psi(n))
    for (int k = 0; k < eig.n; ++k) {
        double lam = eig.values[static_cast<std::size_t>(k)];
        if (!I.contains(lam)) continue;
        terms.emplace_back(lam, eig.vec(m, k) * eig.vec(n, k));
    }
    double best = 0.0;
    for (double t : times) {
        std::complex<double> s = 0.0;
        for (auto [lam, w] : terms) s += std::polar(w, -t * lam);
        best = std::max(best, std::abs(s));
    }
    return best;
}

std::vector<double> default_time_grid(double dt, double t_max, int linear_points) {
    std::vector<double> t;
    t.push_back(0.0);
    for (int i = 1; i <= linear_points; ++i)
        t.push_back(t_max * static_cast<double>(i) / linear_points);
    for (double x = dt; x <= t_max; x *= 2.0) t.push_back(x);
    std::sort(t.begin(), t.end());
    return t;
}

EnergyWindow spectrum_hull(const linalg::EigenDecomposition& eig) {
    if (eig.values.empty()) throw std::invalid_argument("spectrum_hull: empty spectrum");
    return {eig.values.front(), eig.values.back(), true, true};
}

std::int64_t localization_center(std::span<const double> psi, std::int64_t index_offset) {
    double best = -1.0;
    std::int64_t arg = 0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        double v = std::fabs(psi[i]);
        if (v > best) {
            best = v;
            arg = static_cast<std::int64_t>(i);
        }
    }
    if (best == 0.0) throw std::invalid_argument("localization_center: zero vector");
    return index_offset + arg;
}

} // namespace ergotrope::spectral
