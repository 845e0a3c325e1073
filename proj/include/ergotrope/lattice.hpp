#pragma once

#include <iosfwd>
#include <variant>

#include "ergotrope/lattice_box.hpp"
#include "ergotrope/linalg.hpp"
#include "ergotrope/potentials.hpp"

namespace ergotrope::lattice {

// Hopping kernel W(n).  ExpDecay realizes W(n) = amplitude * exp(-rate*|n|_1)
// for 0 < |n|_1 <= R, with R chosen so dropped entries sit below double
// precision noise; Laplacian is the nearest-neighbor special case.
struct KernelSpec {
    enum class Kind { Laplacian, ExpDecay };
    Kind kind = Kind::Laplacian;
    double amplitude = 1.0;
    double rate = 1.0;

    std::int64_t truncation_radius() const;
    double coupling(std::span<const std::int64_t> diff) const; // W(m - n), 0 on diagonal
    double l1_norm(int dim) const;                             // sum_{n != 0} |W(n)|
};

// Finite-volume one-body operator H = W + V on a box, Dirichlet outside.
struct LatticeOperator {
    LatticeBox box;
    std::variant<linalg::SymTridiag, linalg::DenseSym> matrix;

    bool tridiagonal() const { return std::holds_alternative<linalg::SymTridiag>(matrix); }
    const linalg::SymTridiag& tri() const { return std::get<linalg::SymTridiag>(matrix); }
    const linalg::DenseSym& dense() const { return std::get<linalg::DenseSym>(matrix); }
    std::int64_t order() const { return box.size(); }

    double entry(std::int64_t i, std::int64_t j) const; // by linear index
};

// H(m,n) = W(m-n) + V(omega,n) delta(m-n) on the box.  The d = 1 Laplacian
// path returns the tridiagonal form.  Sampler errors (e.g. a Maryland
// singular phase) propagate.
LatticeOperator build_hamiltonian(const pot::PotentialSpec& spec, const pot::Phase& phase,
                                  const LatticeBox& box, const KernelSpec& kernel);

// Principal submatrix on sub's sites; site labels survive via index offsets.
LatticeOperator restrict_operator(const LatticeOperator& H, const LatticeBox& sub);

// Gershgorin bounds [min_i(H_ii - r_i), max_i(H_ii + r_i)]; every eigenvalue
// of H lies inside.
std::pair<double, double> gershgorin_hull(const LatticeOperator& H);

// debug dump: CSV rows (row-site, col-site, value), nonzero entries only
void dump_csv(const LatticeOperator& H, std::ostream& os);

} // namespace ergotrope::lattice
