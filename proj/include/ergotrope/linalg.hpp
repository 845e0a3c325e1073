#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ergotrope::linalg {

// Symmetric tridiagonal matrix; index_offset labels the lattice site of row 0.
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> offdiag; // size diag.size()-1 (empty for order <= 1)
    std::int64_t index_offset = 0;

    int order() const { return static_cast<int>(diag.size()); }
    SymTridiag restricted(std::int64_t lo, std::int64_t hi) const; // sites [lo,hi]
};

// Dense symmetric matrix, row-major full storage (assembly keeps it exactly
// symmetric).
struct DenseSym {
    int n = 0;
    std::vector<double> a; // n*n
    std::int64_t index_offset = 0;

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
    static DenseSym zero(int n);
};

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    std::vector<double> vectors; // column-major: vectors[i + n*k] = psi_k(i)
    int n = 0;
    std::int64_t index_offset = 0;

    double vec(int row, int k) const { return vectors[static_cast<std::size_t>(k) * n + row]; }
};

struct SingularShift : std::runtime_error {
    explicit SingularShift(int pivot_index)
        : std::runtime_error("solve_shifted: singular shift at pivot " +
                             std::to_string(pivot_index)),
          pivot(pivot_index) {}
    int pivot;
};

// Implicit-shift QL on a symmetric tridiagonal matrix, eigenvectors
// accumulated.  Deterministic for fixed input.
EigenDecomposition tridiagonal_eigen(const SymTridiag& T);

// Eigenvalues only (no vector accumulation); used where only the spectrum is
// needed (Res sets, hulls of large boxes).
std::vector<double> tridiagonal_eigenvalues(const SymTridiag& T);

// Householder reduction to tridiagonal form followed by QL.  `max_order`
// guards against accidentally huge boxes.
EigenDecomposition dense_eigen(const DenseSym& M, int max_order = 2500);

// Cyclic Jacobi, restricted to small orders; kept as an independent
// cross-check oracle for the QL path.
EigenDecomposition jacobi_eigen(const DenseSym& M);

// det(T - lambda) through the three-term recurrence, rescaled each step.
// Returns {sign in {-1,0,+1}, log|det|}; the empty determinant is (+1, 0)
// and an exact zero is (0, -inf).
struct SignedLogDet {
    int sign = 1;
    double log_abs = 0.0;
};
SignedLogDet log_det_tridiagonal(const SymTridiag& T, double lambda);

// x with (M - lambda) x = rhs.  Tridiagonal path: banded elimination with
// partial pivoting; dense path: LU with partial pivoting.
std::vector<double> solve_shifted(const SymTridiag& T, double lambda,
                                  std::span<const double> rhs);
std::vector<double> solve_shifted(const DenseSym& M, double lambda,
                                  std::span<const double> rhs);

// y = M x
std::vector<double> matvec(const SymTridiag& T, std::span<const double> x);
std::vector<double> matvec(const DenseSym& M, std::span<const double> x);

double max_abs(std::span<const double> v);
double inf_norm(const DenseSym& M);

} // namespace ergotrope::linalg
