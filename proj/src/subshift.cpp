#include "ergotrope/subshift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ergotrope::subshift {

namespace {

void check_stochastic(int k, std::span<const double> P) {
    if (static_cast<int>(P.size()) != k * k)
        throw std::invalid_argument("transition matrix: wrong size");
    for (int i = 0; i < k; ++i) {
        double s = 0.0;
        for (int j = 0; j < k; ++j) {
            double v = P[static_cast<std::size_t>(i) * k + j];
            if (v < 0.0) throw std::invalid_argument("transition matrix: negative entry");
            s += v;
        }
        if (std::fabs(s - 1.0) > 1e-12)
            throw std::invalid_argument("transition matrix: row " + std::to_string(i) +
                                        " sums to " + std::to_string(s));
    }
}

// strongly-connected check on the positivity pattern; throws naming the
// states unreachable from state 0
void check_irreducible(int k, std::span<const double> P) {
    auto reach = [&](bool forward) {
        std::vector<char> seen(k, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < k; ++j) {
                double v = forward ? P[static_cast<std::size_t>(i) * k + j]
                                   : P[static_cast<std::size_t>(j) * k + i];
                if (v > 0.0 && !seen[j]) {
                    seen[j] = 1;
                    stack.push_back(j);
                }
            }
        }
        return seen;
    };
    for (bool fwd : {true, false}) {
        auto seen = reach(fwd);
        std::string missing;
        for (int j = 0; j < k; ++j)
            if (!seen[j]) missing += (missing.empty() ? "" : ",") + std::to_string(j);
        if (!missing.empty())
            throw std::invalid_argument("transition matrix: reducible, states {" + missing +
                                        "} not " + (fwd ? "reachable from" : "connected to") +
                                        " state 0");
    }
}

// aperiodicity via Wielandt: P^m entrywise positive for some m <= k^2
void check_aperiodic(int k, std::span<const double> P) {
    std::vector<char> pos(static_cast<std::size_t>(k) * k), nxt(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = P[i] > 0.0;
    auto all_positive = [&](const std::vector<char>& m) {
        return std::all_of(m.begin(), m.end(), [](char c) { return c != 0; });
    };
    for (int step = 1; step <= k * k; ++step) {
        if (all_positive(pos)) return;
        std::fill(nxt.begin(), nxt.end(), 0);
        for (int i = 0; i < k; ++i)
            for (int l = 0; l < k; ++l)
                if (pos[static_cast<std::size_t>(i) * k + l])
                    for (int j = 0; j < k; ++j)
                        if (P[static_cast<std::size_t>(l) * k + j] > 0.0)
                            nxt[static_cast<std::size_t>(i) * k + j] = 1;
        pos.swap(nxt);
    }
    throw std::invalid_argument("transition matrix: periodic chain (no positive power)");
}

} // namespace

std::vector<double> stationary_distribution(int k, std::span<const double> P) {
    check_stochastic(k, P);
    check_irreducible(k, P);
    std::vector<double> p(k, 1.0 / k), q(k);
    for (int iter = 0; iter < 200000; ++iter) {
        // Cesaro-damped power step: p <- (p + pP)/2, renormalized
        for (int j = 0; j < k; ++j) {
            double s = 0.0;
            for (int i = 0; i < k; ++i) s += p[i] * P[static_cast<std::size_t>(i) * k + j];
            q[j] = 0.5 * (p[j] + s);
        }
        double norm = 0.0;
        for (double v : q) norm += v;
        for (double& v : q) v /= norm;
        double delta = 0.0;
        for (int j = 0; j < k; ++j) delta = std::max(delta, std::fabs(q[j] - p[j]));
        p.swap(q);
        if (delta < 1e-16) break;
    }
    double res = 0.0;
    for (int j = 0; j < k; ++j) {
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += p[i] * P[static_cast<std::size_t>(i) * k + j];
        res = std::max(res, std::fabs(s - p[j]));
    }
    if (res > 1e-12)
        throw std::runtime_error("stationary_distribution: residual " + std::to_string(res));
    return p;
}

std::vector<double> matrix_power(int k, std::span<const double> P, std::int64_t m) {
    std::vector<double> result(static_cast<std::size_t>(k) * k, 0.0);
    for (int i = 0; i < k; ++i) result[static_cast<std::size_t>(i) * k + i] = 1.0;
    std::vector<double> base(P.begin(), P.end()), tmp(result.size());
    auto mul = [&](const std::vector<double>& x, const std::vector<double>& y) {
        std::fill(tmp.begin(), tmp.end(), 0.0);
        for (int i = 0; i < k; ++i)
            for (int l = 0; l < k; ++l) {
                double v = x[static_cast<std::size_t>(i) * k + l];
                if (v == 0.0) continue;
                for (int j = 0; j < k; ++j)
                    tmp[static_cast<std::size_t>(i) * k + j] +=
                        v * y[static_cast<std::size_t>(l) * k + j];
            }
        return tmp;
    };
    while (m > 0) {
        if (m & 1) result = mul(result, base);
        m >>= 1;
        if (m > 0) base = mul(base, base);
    }
    return result;
}

SubshiftSpec SubshiftSpec::from_transition(int k, std::span<const double> P) {
    if (k < 2) throw std::invalid_argument("SubshiftSpec: alphabet size >= 2");
    check_stochastic(k, P);
    check_irreducible(k, P);
    check_aperiodic(k, P);
    SubshiftSpec spec;
    spec.k = k;
    spec.transition.assign(P.begin(), P.end());
    spec.adjacency.resize(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) spec.adjacency[i] = P[i] > 0.0 ? 1 : 0;
    spec.stationary = stationary_distribution(k, P);
    return spec;
}

SubshiftSpec SubshiftSpec::full_shift(int k) {
    std::vector<double> P(static_cast<std::size_t>(k) * k, 1.0 / k);
    return from_transition(k, P);
}

double cylinder_measure(const SubshiftSpec& spec, const Cylinder& cyl) {
    if (cyl.word.empty()) throw std::invalid_argument("cylinder_measure: empty word");
    for (int a : cyl.word)
        if (a < 0 || a >= spec.k)
            throw std::invalid_argument("cylinder_measure: letter out of alphabet");
    double nu = spec.stationary[cyl.word[0]];
    for (std::size_t i = 0; i + 1 < cyl.word.size(); ++i) {
        if (!spec.A(cyl.word[i], cyl.word[i + 1])) return 0.0;
        nu *= spec.P(cyl.word[i], cyl.word[i + 1]);
    }
    return nu;
}

double bounded_distortion_ratio(const SubshiftSpec& spec, const Cylinder& cyl1,
                                const Cylinder& cyl2, bool* empty_intersection) {
    if (empty_intersection) *empty_intersection = false;
    std::int64_t j = static_cast<std::int64_t>(cyl1.word.size()) - 1;
    std::int64_t gap = cyl2.base - (cyl1.base + j);
    if (gap <= 0)
        throw std::invalid_argument("bounded_distortion_ratio: supports overlap or touch");
    if (cylinder_measure(spec, cyl1) == 0.0 || cylinder_measure(spec, cyl2) == 0.0)
        throw std::invalid_argument("bounded_distortion_ratio: cylinder of measure zero");
    auto Pg = matrix_power(spec.k, spec.transition, gap);
    int a_end = cyl1.word.back();
    int b_start = cyl2.word.front();
    double bridge = Pg[static_cast<std::size_t>(a_end) * spec.k + b_start];
    if (bridge == 0.0) {
        if (empty_intersection) *empty_intersection = true;
        return 0.0;
    }
    return bridge / spec.stationary[b_start];
}

int SymbolicPoint::letter(std::int64_t n) const {
    if (n < lo() || n > hi())
        throw std::out_of_range("SymbolicPoint: index " + std::to_string(n) +
                                " outside materialized window [" + std::to_string(lo()) +
                                "," + std::to_string(hi()) + "]");
    return letters_[static_cast<std::size_t>(n - lo_)];
}

SymbolicPoint sample_path(const SubshiftSpec& spec, RngStream& rng, std::int64_t W) {
    if (W < 0) throw std::invalid_argument("sample_path: W >= 0");
    std::vector<int> letters(static_cast<std::size_t>(2 * W + 1));
    auto at = [&](std::int64_t n) -> int& { return letters[static_cast<std::size_t>(n + W)]; };
    at(0) = rng.discrete(spec.stationary);
    std::vector<double> row(spec.k);
    for (std::int64_t n = 1; n <= W; ++n) {
        int prev = at(n - 1);
        for (int j = 0; j < spec.k; ++j) row[j] = spec.P(prev, j);
        at(n) = rng.discrete(row);
    }
    // reversed chain Phat_ij = p_j P_ji / p_i
    for (std::int64_t n = -1; n >= -W; --n) {
        int next = at(n + 1);
        for (int j = 0; j < spec.k; ++j)
            row[j] = spec.stationary[j] * spec.P(j, next) / spec.stationary[next];
        at(n) = rng.discrete(row);
    }
    return SymbolicPoint(std::move(letters), -W);
}

double shift_metric(const SymbolicPoint& a, const SymbolicPoint& b,
                    std::int64_t min_radius) {
    std::int64_t lo = std::max(a.lo(), b.lo());
    std::int64_t hi = std::min(a.hi(), b.hi());
    if (lo > 0 || hi < 0)
        throw std::invalid_argument("shift_metric: windows do not overlap around 0");
    std::int64_t radius = std::min(-lo, hi);
    for (std::int64_t r = 0; r <= radius; ++r) {
        if (a.letter(r) != b.letter(r) || a.letter(-r) != b.letter(-r)) {
            // first disagreement at |n| = r, so N = r - 1 (N = -1 gives e)
            return std::exp(static_cast<double>(-(r - 1)));
        }
    }
    if (radius < min_radius)
        throw std::runtime_error("shift_metric: no disagreement within radius " +
                                 std::to_string(radius) + "; materialize at least " +
                                 std::to_string(min_radius));
    return 0.0;
}

std::vector<int> default_successor(const SubshiftSpec& spec) {
    std::vector<int> q(spec.k, -1);
    for (int i = 0; i < spec.k; ++i) {
        for (int j = 0; j < spec.k; ++j)
            if (spec.A(i, j)) {
                q[i] = j;
                break;
            }
        if (q[i] < 0)
            throw std::invalid_argument("default_successor: adjacency row " +
                                        std::to_string(i) + " is all zeros");
    }
    return q;
}

SymbolicPoint truncate_environment(const SymbolicPoint& omega, std::int64_t n,
                                   std::span<const int> successor) {
    if (n < 0) throw std::invalid_argument("truncate_environment: n >= 0");
    if (!omega.covers(-n, n))
        throw std::invalid_argument("truncate_environment: window smaller than cutoff");
    std::int64_t lo = omega.lo(), hi = omega.hi();
    std::vector<int> letters(static_cast<std::size_t>(hi - lo + 1));
    auto at = [&](std::int64_t m) -> int& { return letters[static_cast<std::size_t>(m - lo)]; };
    for (std::int64_t m = -n; m <= n; ++m) at(m) = omega.letter(m);
    for (std::int64_t m = n + 1; m <= hi; ++m) at(m) = successor[at(m - 1)];
    for (std::int64_t m = -n - 1; m >= lo; --m) at(m) = successor[at(m + 1)];
    return SymbolicPoint(std::move(letters), lo);
}

} // namespace ergotrope::subshift
