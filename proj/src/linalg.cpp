#include "ergotrope/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ergotrope::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_finite(std::span<const double> v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

// Implicit-shift QL with Wilkinson shift on a symmetric tridiagonal matrix.
// d[0..n-1] diagonal (in: matrix, out: eigenvalues), e[i] couples (i, i+1)
// (e[n-1] is workspace).  z, if non-null, is an n x n column-major matrix
// whose columns get rotated along (identity in, eigenvectors out; pass the
// accumulated Householder Q to diagonalize a dense matrix).
// Derived from the Algol tql2 procedure (Bowdler, Martin, Reinsch, Wilkinson)
// via EISPACK/NR.
void ql_implicit(int n, double* d, double* e, double* z) {
    if (n == 0) return;
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= kEps * dd) break;
            }
            if (m != l) {
                if (iter++ >= 64)
                    throw std::runtime_error("tridiagonal_eigen: QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z) {
                        double* zi = z + static_cast<std::size_t>(i) * n;
                        double* zi1 = zi + n;
                        for (int k = 0; k < n; ++k) {
                            double fk = zi1[k];
                            zi1[k] = s * zi[k] + c * fk;
                            zi[k] = c * zi[k] - s * fk;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

void sort_ascending(EigenDecomposition& eig) {
    int n = eig.n;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int a, int b) { return eig.values[a] < eig.values[b]; });
    std::vector<double> v(n), z;
    for (int k = 0; k < n; ++k) v[k] = eig.values[perm[k]];
    eig.values = std::move(v);
    if (!eig.vectors.empty()) {
        z.resize(eig.vectors.size());
        for (int k = 0; k < n; ++k)
            std::copy_n(eig.vectors.begin() + static_cast<std::size_t>(perm[k]) * n, n,
                        z.begin() + static_cast<std::size_t>(k) * n);
        eig.vectors = std::move(z);
    }
}

} // namespace

SymTridiag SymTridiag::restricted(std::int64_t lo, std::int64_t hi) const {
    std::int64_t a = index_offset;
    std::int64_t b = index_offset + order() - 1;
    if (lo < a || hi > b || lo > hi)
        throw std::invalid_argument("SymTridiag::restricted: interval not contained");
    SymTridiag out;
    out.index_offset = lo;
    auto i0 = static_cast<std::size_t>(lo - a);
    auto m = static_cast<std::size_t>(hi - lo + 1);
    out.diag.assign(diag.begin() + i0, diag.begin() + i0 + m);
    if (m > 1) out.offdiag.assign(offdiag.begin() + i0, offdiag.begin() + i0 + m - 1);
    return out;
}

DenseSym DenseSym::zero(int n) {
    DenseSym m;
    m.n = n;
    m.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    return m;
}

EigenDecomposition tridiagonal_eigen(const SymTridiag& T) {
    check_finite(T.diag, "tridiagonal_eigen");
    check_finite(T.offdiag, "tridiagonal_eigen");
    int n = T.order();
    if (n < 1) throw std::invalid_argument("tridiagonal_eigen: order >= 1");
    EigenDecomposition eig;
    eig.n = n;
    eig.index_offset = T.index_offset;
    eig.values = T.diag;
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    std::copy(T.offdiag.begin(), T.offdiag.end(), e.begin());
    eig.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int k = 0; k < n; ++k) eig.vectors[static_cast<std::size_t>(k) * n + k] = 1.0;
    ql_implicit(n, eig.values.data(), e.data(), eig.vectors.data());
    sort_ascending(eig);
    return eig;
}

std::vector<double> tridiagonal_eigenvalues(const SymTridiag& T) {
    check_finite(T.diag, "tridiagonal_eigenvalues");
    check_finite(T.offdiag, "tridiagonal_eigenvalues");
    int n = T.order();
    if (n < 1) throw std::invalid_argument("tridiagonal_eigenvalues: order >= 1");
    std::vector<double> d = T.diag;
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    std::copy(T.offdiag.begin(), T.offdiag.end(), e.begin());
    ql_implicit(n, d.data(), e.data(), nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

// Householder reduction with accumulated transformations (tred2 lineage),
// then QL on the resulting tridiagonal form.
EigenDecomposition dense_eigen(const DenseSym& M, int max_order) {
    int n = M.n;
    if (n < 1) throw std::invalid_argument("dense_eigen: order >= 1");
    if (n > max_order)
        throw std::invalid_argument("dense_eigen: order " + std::to_string(n) +
                                    " exceeds cap " + std::to_string(max_order) +
                                    "; use a smaller box");
    check_finite(M.a, "dense_eigen");

    EigenDecomposition eig;
    eig.n = n;
    eig.index_offset = M.index_offset;
    std::vector<double>& z = eig.vectors;
    z.assign(static_cast<std::size_t>(n) * n, 0.0);
    // column-major copy of the symmetric input
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(j) * n + i] = M.at(i, j);

    auto V = [&](int i, int j) -> double& { return z[static_cast<std::size_t>(j) * n + i]; };
    std::vector<double> d(n), e(n, 0.0);

    for (int j = 0; j < n; ++j) d[j] = V(n - 1, j);
    for (int i = n - 1; i > 0; --i) {
        double scale = 0.0, h = 0.0;
        for (int k = 0; k < i; ++k) scale += std::fabs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (int j = 0; j < i; ++j) {
                d[j] = V(i - 1, j);
                V(i, j) = 0.0;
                V(j, i) = 0.0;
            }
        } else {
            for (int k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0.0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (int j = 0; j < i; ++j) e[j] = 0.0;
            for (int j = 0; j < i; ++j) {
                f = d[j];
                V(j, i) = f;
                g = e[j] + V(j, j) * f;
                for (int k = j + 1; k <= i - 1; ++k) {
                    g += V(k, j) * d[k];
                    e[k] += V(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (int j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            double hh = f / (h + h);
            for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (int j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (int k = j; k <= i - 1; ++k) V(k, j) -= f * e[k] + g * d[k];
                d[j] = V(i - 1, j);
                V(i, j) = 0.0;
            }
        }
        d[i] = h;
    }
    // accumulate the Householder transformations
    for (int i = 0; i < n - 1; ++i) {
        V(n - 1, i) = V(i, i);
        V(i, i) = 1.0;
        double h = d[i + 1];
        if (h != 0.0) {
            for (int k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
            for (int j = 0; j <= i; ++j) {
                double g = 0.0;
                for (int k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
                for (int k = 0; k <= i; ++k) V(k, j) -= g * d[k];
            }
        }
        for (int k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
    }
    for (int j = 0; j < n; ++j) {
        d[j] = V(n - 1, j);
        V(n - 1, j) = 0.0;
    }
    V(n - 1, n - 1) = 1.0;

    // e[i] currently couples (i-1, i); QL wants (i, i+1)
    for (int i = 0; i + 1 < n; ++i) e[i] = e[i + 1];
    e[n - 1] = 0.0;
    eig.values = std::move(d);
    ql_implicit(n, eig.values.data(), e.data(), z.data());
    sort_ascending(eig);
    return eig;
}

EigenDecomposition jacobi_eigen(const DenseSym& M) {
    int n = M.n;
    if (n < 1 || n > 64)
        throw std::invalid_argument("jacobi_eigen: oracle limited to orders 1..64");
    std::vector<double> a = M.a;
    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    EigenDecomposition eig;
    eig.n = n;
    eig.index_offset = M.index_offset;
    eig.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int k = 0; k < n; ++k) eig.vectors[static_cast<std::size_t>(k) * n + k] = 1.0;
    auto Q = [&](int i, int j) -> double& {
        return eig.vectors[static_cast<std::size_t>(j) * n + i];
    };

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
        if (off < 1e-300) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = A(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                double t = std::copysign(1.0, theta) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double qkp = Q(k, p), qkq = Q(k, q);
                    Q(k, p) = c * qkp - s * qkq;
                    Q(k, q) = s * qkp + c * qkq;
                }
            }
    }
    eig.values.resize(n);
    for (int k = 0; k < n; ++k) eig.values[k] = A(k, k);
    sort_ascending(eig);
    return eig;
}

SignedLogDet log_det_tridiagonal(const SymTridiag& T, double lambda) {
    int n = T.order();
    SignedLogDet out;
    if (n == 0) return out; // empty determinant = 1
    double log_scale = 0.0;
    double prev = 1.0;                 // D_{-1}
    double cur = T.diag[0] - lambda;   // D_0
    for (int k = 1; k < n; ++k) {
        double o = T.offdiag[k - 1];
        double next = (T.diag[k] - lambda) * cur - o * o * prev;
        prev = cur;
        cur = next;
        double m = std::max(std::fabs(cur), std::fabs(prev));
        if (m > 1e100 || (m > 0.0 && m < 1e-100)) {
            cur /= m;
            prev /= m;
            log_scale += std::log(m);
        }
    }
    if (cur == 0.0) {
        out.sign = 0;
        out.log_abs = -std::numeric_limits<double>::infinity();
        return out;
    }
    out.sign = cur > 0.0 ? 1 : -1;
    out.log_abs = std::log(std::fabs(cur)) + log_scale;
    return out;
}

// Banded Gaussian elimination with partial pivoting (dgtsv-style; the pivot
// search introduces one extra superdiagonal of fill-in).
std::vector<double> solve_shifted(const SymTridiag& T, double lambda,
                                  std::span<const double> rhs) {
    int n = T.order();
    if (static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("solve_shifted: rhs size mismatch");
    std::vector<double> dl(n, 0.0), dd(n), du(n, 0.0), du2(n, 0.0), x(rhs.begin(), rhs.end());
    for (int i = 0; i < n; ++i) dd[i] = T.diag[i] - lambda;
    for (int i = 0; i + 1 < n; ++i) {
        du[i] = T.offdiag[i];
        dl[i + 1] = T.offdiag[i];
    }
    for (int i = 0; i + 1 < n; ++i) {
        if (std::fabs(dd[i]) >= std::fabs(dl[i + 1])) {
            if (dd[i] == 0.0) throw SingularShift(i);
            double m = dl[i + 1] / dd[i];
            dd[i + 1] -= m * du[i];
            x[i + 1] -= m * x[i];
            if (i + 2 < n) du2[i] = 0.0;
        } else {
            double m = dd[i] / dl[i + 1];
            dd[i] = dl[i + 1];
            double t = dd[i + 1];
            dd[i + 1] = du[i] - m * t;
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -m * du[i + 1];
            }
            du[i] = t;
            std::swap(x[i], x[i + 1]);
            x[i + 1] -= m * x[i];
        }
    }
    if (dd[n - 1] == 0.0) throw SingularShift(n - 1);
    // back substitution
    x[n - 1] /= dd[n - 1];
    if (n >= 2) x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2];
    for (int i = n - 3; i >= 0; --i)
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i];
    return x;
}

std::vector<double> solve_shifted(const DenseSym& M, double lambda,
                                  std::span<const double> rhs) {
    int n = M.n;
    if (static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("solve_shifted: rhs size mismatch");
    std::vector<double> a(M.a);
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i) * n + i] -= lambda;
    std::vector<double> x(rhs.begin(), rhs.end());
    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int i = col + 1; i < n; ++i)
            if (std::fabs(A(i, col)) > std::fabs(A(piv, col))) piv = i;
        if (A(piv, col) == 0.0) throw SingularShift(col);
        if (piv != col) {
            for (int j = col; j < n; ++j) std::swap(A(piv, j), A(col, j));
            std::swap(x[piv], x[col]);
        }
        double invp = 1.0 / A(col, col);
        for (int i = col + 1; i < n; ++i) {
            double m = A(i, col) * invp;
            if (m == 0.0) continue;
            for (int j = col + 1; j < n; ++j) A(i, j) -= m * A(col, j);
            x[i] -= m * x[col];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
        x[i] = s / A(i, i);
    }
    return x;
}

std::vector<double> matvec(const SymTridiag& T, std::span<const double> x) {
    int n = T.order();
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = T.diag[i] * x[i];
        if (i > 0) s += T.offdiag[i - 1] * x[i - 1];
        if (i + 1 < n) s += T.offdiag[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

std::vector<double> matvec(const DenseSym& M, std::span<const double> x) {
    int n = M.n;
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        const double* row = M.a.data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double inf_norm(const DenseSym& M) {
    double best = 0.0;
    for (int i = 0; i < M.n; ++i) {
        double s = 0.0;
        for (int j = 0; j < M.n; ++j) s += std::fabs(M.at(i, j));
        best = std::max(best, s);
    }
    return best;
}

} // namespace ergotrope::linalg
