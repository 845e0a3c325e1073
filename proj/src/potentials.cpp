#include "ergotrope/potentials.hpp"

#include <cmath>

#include "ergotrope/arithmetic.hpp"

namespace ergotrope::pot {

namespace {

constexpr double kSingularityGuard = 1e-8;
const double kPi = std::acos(-1.0);

bool quasi_periodic(Family f) {
    return f == Family::Maryland || f == Family::AlmostMathieu ||
           f == Family::MonotoneSawtooth;
}

double qp_phase_at(const PotentialSpec& spec, const TorusPhase& ph,
                   std::span<const std::int64_t> site) {
    return arith::torus_phase(ph.omega, spec.alpha, site);
}

} // namespace

void PotentialSpec::validate() const {
    if (dimension < 1) throw std::invalid_argument("PotentialSpec: dimension >= 1");
    if (quasi_periodic(family)) {
        if (static_cast<int>(alpha.size()) != dimension)
            throw std::invalid_argument("PotentialSpec: alpha must have one entry per axis");
        for (long double a : alpha)
            if (!(a > 0.0L && a < 1.0L))
                throw std::invalid_argument("PotentialSpec: frequencies must lie in (0,1)");
    }
    if (family == Family::Maryland && g == 0.0)
        throw std::invalid_argument("PotentialSpec: Maryland coupling g != 0");
    if (family == Family::MonotoneSawtooth) {
        if (xi < 1.0) throw std::invalid_argument("PotentialSpec: sawtooth xi >= 1");
        if (!(a_minus > 0.0) || a_plus < a_minus)
            throw std::invalid_argument("PotentialSpec: sawtooth slopes 0 < a- <= a+");
    }
    if (family == Family::Subshift && dimension != 1)
        throw std::invalid_argument("PotentialSpec: subshift potentials are 1-d");
    if (family == Family::Subshift && driver.kind == SubshiftDriver::Kind::Markov) {
        if (driver.markov.k < 2)
            throw std::invalid_argument("PotentialSpec: markov driver lacks a spec");
        if (static_cast<int>(driver.letter_values.size()) != driver.markov.k)
            throw std::invalid_argument("PotentialSpec: one letter value per letter");
    }
}

double default_sawtooth(double x, double xi) {
    if (!(x >= 0.0 && x < 1.0))
        throw std::invalid_argument("default_sawtooth: x must lie in [0,1)");
    return std::pow(x, xi);
}

Phase sample_phase(const PotentialSpec& spec, RngStream& rng, std::int64_t radius) {
    spec.validate();
    switch (spec.family) {
        case Family::Free:
            return std::monostate{};
        case Family::Maryland:
        case Family::AlmostMathieu:
        case Family::MonotoneSawtooth:
            return TorusPhase{static_cast<long double>(rng.uniform01())};
        case Family::Subshift:
            break;
    }
    switch (spec.driver.kind) {
        case SubshiftDriver::Kind::Markov:
            return subshift::sample_path(spec.driver.markov, rng, radius);
        case SubshiftDriver::Kind::Doubling:
            return torus::BitstreamPoint::sample(rng, -radius, radius + 64);
        case SubshiftDriver::Kind::Cat: {
            // uniform dyadic point, iterated exactly over the needed range
            constexpr std::int64_t den = std::int64_t{1} << 53;
            torus::Rational x(static_cast<std::int64_t>(rng.bits() >> 11), den);
            torus::Rational y(static_cast<std::int64_t>(rng.bits() >> 11), den);
            auto pts = torus::orbit(torus::MapKind::Cat, {x, y}, -radius, radius);
            CatPhase ph;
            ph.lo = -radius;
            ph.x_values.reserve(pts.size());
            for (const auto& p : pts)
                ph.x_values.push_back(static_cast<double>(p[0].value()));
            return ph;
        }
    }
    throw std::logic_error("sample_phase: unreachable");
}

Phase fixed_phase(const PotentialSpec& spec, long double omega) {
    spec.validate();
    if (spec.family == Family::Free) return std::monostate{};
    if (!quasi_periodic(spec.family))
        throw std::invalid_argument("fixed_phase: only quasi-periodic families take a scalar phase");
    return TorusPhase{omega - floorl(omega)};
}

Phase shifted_phase(const PotentialSpec& spec, const Phase& phase,
                    std::span<const std::int64_t> k) {
    if (std::holds_alternative<std::monostate>(phase)) return phase;
    if (const auto* tp = std::get_if<TorusPhase>(&phase)) {
        long double x = tp->omega;
        for (std::size_t j = 0; j < k.size(); ++j)
            x += static_cast<long double>(k[j]) * spec.alpha[j];
        x -= floorl(x);
        return TorusPhase{x};
    }
    if (k.size() != 1)
        throw std::invalid_argument("shifted_phase: dynamical phases are 1-d");
    if (const auto* sp = std::get_if<subshift::SymbolicPoint>(&phase))
        return sp->shifted(k[0]);
    throw std::invalid_argument("shifted_phase: unsupported phase kind");
}

double potential_value(const PotentialSpec& spec, const Phase& phase,
                       std::span<const std::int64_t> site) {
    switch (spec.family) {
        case Family::Free:
            return 0.0;
        case Family::Maryland: {
            double x = qp_phase_at(spec, std::get<TorusPhase>(phase), site);
            if (std::fabs(x - 0.5) < kSingularityGuard)
                throw MarylandSingularPhase(site.empty() ? 0 : site[0]);
            return spec.g * std::tan(kPi * x);
        }
        case Family::AlmostMathieu: {
            double x = qp_phase_at(spec, std::get<TorusPhase>(phase), site);
            double amp = spec.dimension == 1 ? 2.0 * spec.g : spec.g;
            return amp * std::cos(2.0 * kPi * x);
        }
        case Family::MonotoneSawtooth: {
            double x = qp_phase_at(spec, std::get<TorusPhase>(phase), site);
            return spec.g * default_sawtooth(x, spec.xi);
        }
        case Family::Subshift:
            break;
    }
    std::int64_t n = site[0];
    switch (spec.driver.kind) {
        case SubshiftDriver::Kind::Markov: {
            const auto& sp = std::get<subshift::SymbolicPoint>(phase);
            return spec.g * spec.driver.letter_values[static_cast<std::size_t>(sp.letter(n))];
        }
        case SubshiftDriver::Kind::Doubling: {
            const auto& bp = std::get<torus::BitstreamPoint>(phase);
            return spec.g * std::cos(2.0 * kPi * bp.x(n));
        }
        case SubshiftDriver::Kind::Cat: {
            const auto& cp = std::get<CatPhase>(phase);
            return spec.g * std::cos(2.0 * kPi * cp.x(n));
        }
    }
    throw std::logic_error("potential_value: unreachable");
}

std::vector<double> sample_potential(const PotentialSpec& spec, const Phase& phase,
                                     const lattice::LatticeBox& box) {
    spec.validate();
    if (box.dim() != spec.dimension)
        throw std::invalid_argument("sample_potential: box dimension mismatch");
    std::int64_t size = box.size();
    std::vector<double> v(static_cast<std::size_t>(size));
    std::vector<std::int64_t> site(box.dim());
    for (std::int64_t i = 0; i < size; ++i) {
        site = box.site_of(i);
        v[static_cast<std::size_t>(i)] = potential_value(spec, phase, site);
    }
    return v;
}

std::vector<double> potential_sequence(const PotentialSpec& spec, const Phase& phase,
                                       std::int64_t k, std::int64_t l) {
    if (spec.dimension != 1)
        throw std::invalid_argument("potential_sequence: d = 1 only");
    if (k > l) throw std::invalid_argument("potential_sequence: k <= l required");
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(l - k + 1));
    std::int64_t site[1];
    for (std::int64_t n = k; n <= l; ++n) {
        site[0] = n;
        v.push_back(potential_value(spec, phase, site));
    }
    return v;
}

} // namespace ergotrope::pot
