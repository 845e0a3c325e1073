#include "ergotrope/lattice.hpp"

#include <cmath>
#include <ostream>

namespace ergotrope::lattice {

std::int64_t KernelSpec::truncation_radius() const {
    if (kind == Kind::Laplacian) return 1;
    double r = std::ceil(-std::log(1e-14 / amplitude) / rate);
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(r));
}

double KernelSpec::coupling(std::span<const std::int64_t> diff) const {
    std::int64_t l1 = 0;
    for (auto d : diff) l1 += std::llabs(d);
    if (l1 == 0) return 0.0;
    if (kind == Kind::Laplacian) return l1 == 1 ? 1.0 : 0.0;
    if (l1 > truncation_radius()) return 0.0;
    return amplitude * std::exp(-rate * static_cast<double>(l1));
}

double KernelSpec::l1_norm(int dim) const {
    if (kind == Kind::Laplacian) return 2.0 * dim;
    // count of lattice points at l1 distance r in Z^d grows like c r^{d-1};
    // sum the truncated series directly
    double s = 0.0;
    std::int64_t R = truncation_radius();
    std::vector<double> shell(static_cast<std::size_t>(R) + 1, 0.0);
    // number of points with |n|_1 = r in dimension dim, via the recurrence on d
    std::vector<std::vector<double>> cnt(dim + 1, std::vector<double>(R + 1, 0.0));
    cnt[0][0] = 1.0;
    for (int d = 1; d <= dim; ++d)
        for (std::int64_t r = 0; r <= R; ++r) {
            double c = 0.0;
            for (std::int64_t a = -r; a <= r; ++a) c += cnt[d - 1][r - std::llabs(a)];
            cnt[d][r] = c;
        }
    for (std::int64_t r = 1; r <= R; ++r)
        s += cnt[dim][r] * amplitude * std::exp(-rate * static_cast<double>(r));
    return s;
}

double LatticeOperator::entry(std::int64_t i, std::int64_t j) const {
    if (tridiagonal()) {
        const auto& T = tri();
        if (i == j) return T.diag[static_cast<std::size_t>(i)];
        if (std::llabs(i - j) == 1)
            return T.offdiag[static_cast<std::size_t>(std::min(i, j))];
        return 0.0;
    }
    return dense().at(static_cast<int>(i), static_cast<int>(j));
}

LatticeOperator build_hamiltonian(const pot::PotentialSpec& spec, const pot::Phase& phase,
                                  const LatticeBox& box, const KernelSpec& kernel) {
    auto V = pot::sample_potential(spec, phase, box);
    LatticeOperator H;
    H.box = box;
    std::int64_t n = box.size();

    if (box.dim() == 1 && kernel.kind == KernelSpec::Kind::Laplacian) {
        linalg::SymTridiag T;
        T.index_offset = box.lo[0];
        T.diag = std::move(V);
        T.offdiag.assign(static_cast<std::size_t>(std::max<std::int64_t>(n - 1, 0)), 1.0);
        H.matrix = std::move(T);
        return H;
    }

    auto M = linalg::DenseSym::zero(static_cast<int>(n));
    M.index_offset = box.dim() == 1 ? box.lo[0] : 0;
    std::int64_t R = kernel.truncation_radius();

    // enumerate nonzero kernel offsets once
    std::vector<std::vector<std::int64_t>> offsets;
    std::vector<double> weights;
    std::vector<std::int64_t> off(box.dim(), -R);
    while (true) {
        double w = kernel.coupling(off);
        if (w != 0.0) {
            offsets.push_back(off);
            weights.push_back(w);
        }
        int ax = box.dim() - 1;
        while (ax >= 0 && ++off[ax] > R) off[ax--] = -R;
        if (ax < 0) break;
    }

    std::vector<std::int64_t> site(box.dim()), other(box.dim());
    for (std::int64_t i = 0; i < n; ++i) {
        site = box.site_of(i);
        M.at(static_cast<int>(i), static_cast<int>(i)) = V[static_cast<std::size_t>(i)];
        for (std::size_t o = 0; o < offsets.size(); ++o) {
            for (int ax = 0; ax < box.dim(); ++ax) other[ax] = site[ax] + offsets[o][ax];
            if (!box.contains(other)) continue; // Dirichlet
            std::int64_t j = box.index_of(other);
            M.at(static_cast<int>(i), static_cast<int>(j)) = weights[o];
        }
    }
    H.matrix = std::move(M);
    return H;
}

LatticeOperator restrict_operator(const LatticeOperator& H, const LatticeBox& sub) {
    if (!H.box.contains(sub))
        throw std::invalid_argument("restrict_operator: sub-box not contained");
    LatticeOperator out;
    out.box = sub;
    if (H.tridiagonal()) {
        out.matrix = H.tri().restricted(sub.lo[0], sub.hi[0]);
        return out;
    }
    std::int64_t m = sub.size();
    auto M = linalg::DenseSym::zero(static_cast<int>(m));
    M.index_offset = sub.dim() == 1 ? sub.lo[0] : 0;
    std::vector<std::int64_t> rows(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i) rows[static_cast<std::size_t>(i)] = H.box.index_of(sub.site_of(i));
    const auto& A = H.dense();
    for (std::int64_t i = 0; i < m; ++i)
        for (std::int64_t j = 0; j < m; ++j)
            M.at(static_cast<int>(i), static_cast<int>(j)) =
                A.at(static_cast<int>(rows[static_cast<std::size_t>(i)]),
                     static_cast<int>(rows[static_cast<std::size_t>(j)]));
    out.matrix = std::move(M);
    return out;
}

std::pair<double, double> gershgorin_hull(const LatticeOperator& H) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    std::int64_t n = H.order();
    for (std::int64_t i = 0; i < n; ++i) {
        double d = H.entry(i, i), r = 0.0;
        if (H.tridiagonal()) {
            const auto& T = H.tri();
            if (i > 0) r += std::fabs(T.offdiag[static_cast<std::size_t>(i - 1)]);
            if (i + 1 < n) r += std::fabs(T.offdiag[static_cast<std::size_t>(i)]);
        } else {
            for (std::int64_t j = 0; j < n; ++j)
                if (j != i) r += std::fabs(H.dense().at(static_cast<int>(i), static_cast<int>(j)));
        }
        if (first || d - r < lo) lo = d - r;
        if (first || d + r > hi) hi = d + r;
        first = false;
    }
    return {lo, hi};
}

void dump_csv(const LatticeOperator& H, std::ostream& os) {
    os << "row_site,col_site,value\n";
    std::int64_t n = H.order();
    auto site_str = [&](std::int64_t idx) {
        auto s = H.box.site_of(idx);
        std::string str;
        for (std::size_t j = 0; j < s.size(); ++j)
            str += (j ? ";" : "") + std::to_string(s[j]);
        return str;
    };
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) {
            double v = H.entry(i, j);
            if (v != 0.0) os << site_str(i) << "," << site_str(j) << "," << v << "\n";
        }
}

} // namespace ergotrope::lattice
