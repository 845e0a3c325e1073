#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ergotrope::lattice {

// Finite box in Z^d with row-major site <-> index linearization.
struct LatticeBox {
    std::vector<std::int64_t> lo, hi; // per axis, inclusive

    int dim() const { return static_cast<int>(lo.size()); }

    std::int64_t size() const {
        std::int64_t s = 1;
        for (int j = 0; j < dim(); ++j) s *= hi[j] - lo[j] + 1;
        return s;
    }

    bool contains(std::span<const std::int64_t> site) const {
        for (int j = 0; j < dim(); ++j)
            if (site[j] < lo[j] || site[j] > hi[j]) return false;
        return true;
    }

    bool contains(const LatticeBox& sub) const {
        if (sub.dim() != dim()) return false;
        for (int j = 0; j < dim(); ++j)
            if (sub.lo[j] < lo[j] || sub.hi[j] > hi[j]) return false;
        return true;
    }

    std::int64_t index_of(std::span<const std::int64_t> site) const {
        std::int64_t idx = 0;
        for (int j = 0; j < dim(); ++j)
            idx = idx * (hi[j] - lo[j] + 1) + (site[j] - lo[j]);
        return idx;
    }

    std::vector<std::int64_t> site_of(std::int64_t index) const {
        std::vector<std::int64_t> site(dim());
        for (int j = dim() - 1; j >= 0; --j) {
            std::int64_t w = hi[j] - lo[j] + 1;
            site[j] = lo[j] + index % w;
            index /= w;
        }
        return site;
    }

    static LatticeBox interval(std::int64_t a, std::int64_t b) {
        if (a > b) throw std::invalid_argument("LatticeBox: empty interval");
        return {{a}, {b}};
    }

    // [-M, M]^d, side L = 2M+1
    static LatticeBox centered_cube(int d, std::int64_t M) {
        if (d < 1 || M < 0) throw std::invalid_argument("LatticeBox: bad cube");
        LatticeBox b;
        b.lo.assign(d, -M);
        b.hi.assign(d, M);
        return b;
    }

    LatticeBox shifted(std::span<const std::int64_t> k) const {
        LatticeBox b = *this;
        for (int j = 0; j < dim(); ++j) {
            b.lo[j] += k[j];
            b.hi[j] += k[j];
        }
        return b;
    }
};

} // namespace ergotrope::lattice
