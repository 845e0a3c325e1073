#include "ergotrope/arithmetic.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ergotrope::arith {

namespace {
constexpr long double kRationalEps = 1e-17L; // remainder below this reads as exact
constexpr std::int64_t kMaxPartial = std::int64_t{1} << 52;
} // namespace

Frequency::Frequency(long double value) : value_(value) {
    if (!(value > 0.0L && value < 1.0L))
        throw std::invalid_argument("Frequency: value must lie in (0,1)");
}

Frequency Frequency::golden() { return Frequency((sqrtl(5.0L) - 1.0L) / 2.0L); }
Frequency Frequency::sqrt2_minus_1() { return Frequency(sqrtl(2.0L) - 1.0L); }
Frequency Frequency::e_minus_2() { return Frequency(expl(1.0L) - 2.0L); }

void Frequency::extend(int K) const {
    if (exhausted_ || static_cast<int>(conv_.size()) >= K) return;
    // standard recurrence p_k = a_k p_{k-1} + p_{k-2}, same for q
    std::int64_t pm2 = 0, pm1 = 1; // p_{-2}, p_{-1}
    std::int64_t qm2 = 1, qm1 = 0; // q_{-2}, q_{-1}
    long double x = value_;
    conv_.clear();
    for (int k = 0; k < K; ++k) {
        long double a = floorl(x);
        if (a < 0.0L || a > static_cast<long double>(kMaxPartial)) {
            // partial quotient too large to represent: value is rational at
            // working precision
            rational_ = exhausted_ = true;
            break;
        }
        auto ai = static_cast<std::int64_t>(a);
        std::int64_t p = ai * pm1 + pm2;
        std::int64_t q = ai * qm1 + qm2;
        if (q < qm2 || q > (std::int64_t{1} << 60)) {
            exhausted_ = true; // denominator overflow; stop cleanly
            break;
        }
        conv_.push_back({p, q});
        pm2 = pm1; pm1 = p;
        qm2 = qm1; qm1 = q;
        long double r = x - a;
        if (r < kRationalEps * fmaxl(1.0L, fabsl(x))) {
            rational_ = exhausted_ = true;
            break;
        }
        x = 1.0L / r;
    }
}

std::span<const Convergent> Frequency::convergents(int K) const {
    if (K < 1) throw std::invalid_argument("convergents: K >= 1 required");
    extend(K);
    auto n = std::min<std::size_t>(conv_.size(), static_cast<std::size_t>(K));
    return {conv_.data(), n};
}

double beta_irrationality(std::span<const Convergent> cv, std::vector<double>* tail) {
    if (cv.size() < 3)
        throw std::invalid_argument("beta_irrationality: need K >= 3 convergents");
    double best = 0.0;
    std::vector<double> terms;
    terms.reserve(cv.size() - 1);
    for (std::size_t k = 0; k + 1 < cv.size(); ++k) {
        double t = std::log(static_cast<double>(cv[k + 1].q)) /
                   static_cast<double>(cv[k].q);
        terms.push_back(t);
        best = std::max(best, t);
    }
    if (tail) {
        tail->clear();
        std::size_t from = terms.size() >= 3 ? terms.size() - 3 : 0;
        tail->assign(terms.begin() + static_cast<std::ptrdiff_t>(from), terms.end());
    }
    return best;
}

double beta_irrationality(const Frequency& alpha, int K, std::vector<double>* tail) {
    auto cv = alpha.convergents(K);
    if (alpha.rational())
        throw std::domain_error("beta_irrationality: beta undefined for rationals");
    return beta_irrationality(cv, tail);
}

long double dist_to_integers(long double x) {
    return fabsl(x - roundl(x));
}

double diophantine_margin(const Frequency& alpha, double tau, std::int64_t N) {
    if (N < 1) throw std::invalid_argument("diophantine_margin: N >= 1");
    long double a = alpha.value();
    long double best = std::numeric_limits<long double>::max();
    for (std::int64_t n = 1; n <= N; ++n) {
        // dist is even in n, so positive n suffice
        long double d = dist_to_integers(static_cast<long double>(n) * a);
        long double v = powl(static_cast<long double>(n), static_cast<long double>(tau)) * d;
        best = std::min(best, v);
        if (best == 0.0L) break;
    }
    return static_cast<double>(best);
}

namespace {

// enumerate n in the l1 ball of radius N (half of it: first nonzero
// coordinate positive, by symmetry of dist(<n,alpha>,Z))
void margin_scan(std::span<const long double> alpha, double tau, std::int64_t N,
                 std::vector<std::int64_t>& n, std::size_t axis,
                 std::int64_t budget, bool leading_zero, long double& best) {
    if (axis == alpha.size()) {
        if (leading_zero) return; // n == 0
        long double s = 0.0L;
        std::int64_t l1 = 0;
        for (std::size_t j = 0; j < n.size(); ++j) {
            s += static_cast<long double>(n[j]) * alpha[j];
            l1 += std::llabs(n[j]);
        }
        long double v = powl(static_cast<long double>(l1),
                             static_cast<long double>(tau)) *
                        dist_to_integers(s);
        best = std::min(best, v);
        return;
    }
    std::int64_t lo = leading_zero ? 0 : -budget;
    for (std::int64_t c = lo; c <= budget; ++c) {
        n[axis] = c;
        margin_scan(alpha, tau, N, n, axis + 1, budget - std::llabs(c),
                    leading_zero && c == 0, best);
    }
    n[axis] = 0;
}

} // namespace

double diophantine_margin(std::span<const long double> alpha, double tau,
                          std::int64_t N) {
    if (N < 1) throw std::invalid_argument("diophantine_margin: N >= 1");
    if (alpha.empty()) throw std::invalid_argument("diophantine_margin: empty alpha");
    if (alpha.size() == 1) return diophantine_margin(Frequency(alpha[0]), tau, N);
    std::vector<std::int64_t> n(alpha.size(), 0);
    long double best = std::numeric_limits<long double>::max();
    margin_scan(alpha, tau, N, n, 0, N, true, best);
    return static_cast<double>(best);
}

double torus_phase(long double omega, long double alpha, std::int64_t n) {
    long double x = omega + static_cast<long double>(n) * alpha;
    x -= floorl(x);
    if (x >= 1.0L) x -= 1.0L; // floorl rounding guard
    return static_cast<double>(x);
}

double torus_phase(long double omega, std::span<const long double> alpha,
                   std::span<const std::int64_t> n) {
    long double x = omega;
    for (std::size_t j = 0; j < alpha.size(); ++j)
        x += static_cast<long double>(n[j]) * alpha[j];
    x -= floorl(x);
    if (x >= 1.0L) x -= 1.0L;
    return static_cast<double>(x);
}

} // namespace ergotrope::arith
