#include "ergotrope/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ergotrope/arithmetic.hpp"

namespace ergotrope::harness {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    auto b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

struct RawEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

// accessor over the parsed key/value lines; collects typed errors
class Reader {
public:
    Reader(std::map<std::string, RawEntry>& kv, std::vector<std::string>& errors)
        : kv_(kv), errors_(errors) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::optional<std::string> str(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    std::optional<double> real(const std::string& key) {
        auto v = str(key);
        if (!v) return std::nullopt;
        try {
            std::size_t pos = 0;
            double x = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing characters");
            return x;
        } catch (const std::exception&) {
            fail(key, "expected a real number, got '" + *v + "'");
            return std::nullopt;
        }
    }

    std::optional<std::int64_t> integer(const std::string& key) {
        auto v = str(key);
        if (!v) return std::nullopt;
        std::int64_t x = 0;
        auto res = std::from_chars(v->data(), v->data() + v->size(), x);
        if (res.ec != std::errc{} || res.ptr != v->data() + v->size()) {
            fail(key, "expected an integer, got '" + *v + "'");
            return std::nullopt;
        }
        return x;
    }

    std::optional<std::vector<std::int64_t>> int_list(const std::string& key) {
        auto v = str(key);
        if (!v) return std::nullopt;
        // "a:b" expands to the inclusive range
        if (v->find(':') != std::string::npos) {
            auto parts = split(*v, ':');
            if (parts.size() == 2) {
                try {
                    std::int64_t a = std::stoll(parts[0]), b = std::stoll(parts[1]);
                    if (a > b) throw std::invalid_argument("empty range");
                    std::vector<std::int64_t> out;
                    for (std::int64_t x = a; x <= b; ++x) out.push_back(x);
                    return out;
                } catch (const std::exception&) {
                }
            }
            fail(key, "expected 'lo:hi' or a comma list, got '" + *v + "'");
            return std::nullopt;
        }
        std::vector<std::int64_t> out;
        for (const auto& item : split(*v, ',')) {
            try {
                out.push_back(std::stoll(item));
            } catch (const std::exception&) {
                fail(key, "expected integers, got '" + item + "'");
                return std::nullopt;
            }
        }
        return out;
    }

    void fail(const std::string& key, const std::string& msg) {
        int line = kv_.count(key) ? kv_[key].line : 0;
        errors_.push_back("line " + std::to_string(line) + ": " + key + ": " + msg);
    }

    void require(const std::string& key, const char* why) {
        if (!has(key)) errors_.push_back("missing required key '" + key + "' (" + why + ")");
    }

private:
    std::map<std::string, RawEntry>& kv_;
    std::vector<std::string>& errors_;
};

std::optional<long double> named_frequency(const std::string& s) {
    if (s == "golden") return arith::Frequency::golden().value();
    if (s == "sqrt2-1") return arith::Frequency::sqrt2_minus_1().value();
    if (s == "e-2") return arith::Frequency::e_minus_2().value();
    try {
        std::size_t pos = 0;
        long double x = std::stold(s, &pos);
        if (pos != s.size()) return std::nullopt;
        return x;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

} // namespace

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::EntropyScaling: return "entropy-scaling";
        case Experiment::ProjectionDecay: return "projection-decay";
        case Experiment::LyapunovScan: return "lyapunov-scan";
        case Experiment::LargeDeviation: return "large-deviation";
        case Experiment::MarylandVerify: return "maryland-verify";
        case Experiment::SubshiftStats: return "subshift-stats";
    }
    return "?";
}

ConfigError::ConfigError(std::vector<std::string> errs)
    : std::runtime_error([&] {
          std::string all = "config invalid:";
          for (const auto& e : errs) all += "\n  " + e;
          return all;
      }()),
      errors(std::move(errs)) {}

ExperimentConfig validate_config(const std::string& text) {
    std::vector<std::string> errors;
    std::map<std::string, RawEntry> kv;
    {
        std::istringstream is(text);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) {
                errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
                continue;
            }
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (kv.count(key))
                errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
            kv[key] = {value, lineno, false};
        }
    }
    Reader rd(kv, errors);
    ExperimentConfig cfg;

    // experiment
    rd.require("experiment", "selects the runner");
    if (auto e = rd.str("experiment")) {
        bool found = false;
        for (auto exp : {Experiment::EntropyScaling, Experiment::ProjectionDecay,
                         Experiment::LyapunovScan, Experiment::LargeDeviation,
                         Experiment::MarylandVerify, Experiment::SubshiftStats})
            if (*e == to_string(exp)) {
                cfg.experiment = exp;
                found = true;
            }
        if (!found) rd.fail("experiment", "unknown experiment '" + *e + "'");
    }

    // potential family
    if (auto p = rd.str("potential")) {
        if (*p == "free") {
            cfg.potential.family = pot::Family::Free;
        } else if (*p == "maryland") {
            cfg.potential.family = pot::Family::Maryland;
        } else if (*p == "amo") {
            cfg.potential.family = pot::Family::AlmostMathieu;
        } else if (*p == "sawtooth") {
            cfg.potential.family = pot::Family::MonotoneSawtooth;
        } else if (*p == "subshift-markov") {
            cfg.potential.family = pot::Family::Subshift;
            cfg.potential.driver.kind = pot::SubshiftDriver::Kind::Markov;
        } else if (*p == "doubling") {
            cfg.potential.family = pot::Family::Subshift;
            cfg.potential.driver.kind = pot::SubshiftDriver::Kind::Doubling;
        } else if (*p == "cat") {
            cfg.potential.family = pot::Family::Subshift;
            cfg.potential.driver.kind = pot::SubshiftDriver::Kind::Cat;
        } else {
            rd.fail("potential", "unknown family '" + *p + "'");
        }
    } else if (cfg.experiment != Experiment::SubshiftStats) {
        rd.require("potential", "potential family");
    }

    if (auto d = rd.integer("dimension")) {
        if (*d < 1)
            rd.fail("dimension", "must be >= 1");
        else
            cfg.potential.dimension = static_cast<int>(*d);
    }
    if (auto g = rd.real("g")) cfg.potential.g = *g;
    if (auto a = rd.str("alpha")) {
        for (const auto& item : split(*a, ',')) {
            auto f = named_frequency(item);
            if (!f) {
                rd.fail("alpha", "expected golden | sqrt2-1 | e-2 | real, got '" + item + "'");
                break;
            }
            cfg.potential.alpha.push_back(*f);
        }
        if (!cfg.potential.alpha.empty() &&
            static_cast<int>(cfg.potential.alpha.size()) != cfg.potential.dimension)
            rd.fail("alpha", "needs one frequency per axis");
    }
    if (auto x = rd.real("xi")) cfg.potential.xi = *x;
    if (auto x = rd.real("a_minus")) cfg.potential.a_minus = *x;
    if (auto x = rd.real("a_plus")) cfg.potential.a_plus = *x;

    if (auto P = rd.str("markov_P")) {
        auto rows = split(*P, ';');
        int k = static_cast<int>(rows.size());
        std::vector<double> flat;
        bool ok = true;
        for (const auto& row : rows) {
            auto cells = split(row, ',');
            if (static_cast<int>(cells.size()) != k) {
                rd.fail("markov_P", "matrix must be square (rows ';', entries ',')");
                ok = false;
                break;
            }
            for (const auto& c : cells) {
                try {
                    flat.push_back(std::stod(c));
                } catch (const std::exception&) {
                    rd.fail("markov_P", "bad entry '" + c + "'");
                    ok = false;
                }
            }
        }
        if (ok) {
            try {
                cfg.potential.driver.markov = subshift::SubshiftSpec::from_transition(k, flat);
            } catch (const std::exception& ex) {
                rd.fail("markov_P", ex.what());
            }
        }
    }
    if (auto lv = rd.str("letter_values")) {
        for (const auto& c : split(*lv, ',')) {
            try {
                cfg.potential.driver.letter_values.push_back(std::stod(c));
            } catch (const std::exception&) {
                rd.fail("letter_values", "bad entry '" + c + "'");
            }
        }
    } else if (cfg.potential.driver.kind == pot::SubshiftDriver::Kind::Markov &&
               cfg.potential.driver.markov.k > 0) {
        // default observable: letter index scaled into [0, 1]
        for (int i = 0; i < cfg.potential.driver.markov.k; ++i)
            cfg.potential.driver.letter_values.push_back(
                static_cast<double>(i) / std::max(1, cfg.potential.driver.markov.k - 1));
    }

    if (auto k = rd.str("kernel")) {
        if (*k == "laplacian")
            cfg.kernel.kind = lattice::KernelSpec::Kind::Laplacian;
        else if (*k == "expdecay")
            cfg.kernel.kind = lattice::KernelSpec::Kind::ExpDecay;
        else
            rd.fail("kernel", "expected laplacian | expdecay");
    }
    if (auto v = rd.real("kernel_amplitude")) cfg.kernel.amplitude = *v;
    if (auto v = rd.real("kernel_rate")) {
        if (*v <= 0)
            rd.fail("kernel_rate", "must be positive");
        else
            cfg.kernel.rate = *v;
    }

    if (auto v = rd.real("fermi_energy")) {
        cfg.fermi_energy = *v;
        cfg.has_fermi = true;
    }
    {
        auto wl = rd.real("window_lo");
        auto wh = rd.real("window_hi");
        if (wl.has_value() != wh.has_value())
            errors.push_back("window_lo and window_hi must be given together");
        else if (wl && wh) {
            if (*wl > *wh)
                rd.fail("window_lo", "window_lo must be <= window_hi");
            else
                cfg.window = spectral::EnergyWindow{*wl, *wh, true, true};
        }
    }

    if (auto l = rd.int_list("L_list")) cfg.L_list = *l;
    if (auto l = rd.int_list("distances")) cfg.distances = *l;
    if (auto l = rd.int_list("n_list")) cfg.n_list = *l;
    if (auto m = rd.str("host_margin")) {
        if (!m->empty() && m->back() == 'L') {
            try {
                cfg.host_margin.multiplier = std::stod(m->substr(0, m->size() - 1));
                cfg.host_margin.sites = 0;
            } catch (const std::exception&) {
                rd.fail("host_margin", "expected '<count>' sites or '<mult>L'");
            }
        } else {
            try {
                cfg.host_margin.sites = std::stoll(*m);
                if (cfg.host_margin.sites <= 0) rd.fail("host_margin", "must be positive");
            } catch (const std::exception&) {
                rd.fail("host_margin", "expected '<count>' sites or '<mult>L'");
            }
        }
    }

    if (auto v = rd.real("lambda_min")) cfg.lambda_min = *v;
    if (auto v = rd.real("lambda_max")) cfg.lambda_max = *v;
    if (auto v = rd.integer("lambda_points")) cfg.lambda_points = static_cast<int>(*v);
    if (auto v = rd.real("lambda")) cfg.lambda = *v;
    if (auto v = rd.real("gamma_ref")) cfg.gamma_ref = *v;
    if (auto v = rd.real("epsilon")) {
        if (*v <= 0)
            rd.fail("epsilon", "must be positive");
        else
            cfg.epsilon = *v;
    }
    if (auto v = rd.real("gamma_min")) cfg.gamma_min = *v;
    if (auto v = rd.integer("steps")) {
        if (*v < 1)
            rd.fail("steps", "must be >= 1");
        else
            cfg.steps = *v;
    }
    if (auto v = rd.integer("samples")) {
        if (*v < 1)
            rd.fail("samples", "must be >= 1");
        else
            cfg.samples = *v;
    }
    if (auto v = rd.real("omega")) cfg.omega = *v;
    if (auto v = rd.integer("labels")) cfg.labels = *v;
    if (auto v = rd.integer("host_radius")) cfg.host_radius = *v;
    if (auto v = rd.integer("quadrature_order")) cfg.quadrature_order = static_cast<int>(*v);
    if (auto v = rd.real("area_slope_tol")) cfg.thresholds.area_slope_tol = *v;
    if (auto v = rd.real("enhanced_r2_min")) cfg.thresholds.enhanced_r2_min = *v;
    if (auto v = rd.real("volume_rel_tol")) cfg.thresholds.volume_rel_tol = *v;
    if (auto v = rd.integer("seed")) cfg.seed = static_cast<std::uint64_t>(*v);
    if (auto v = rd.integer("jobs")) cfg.jobs = static_cast<int>(*v);
    if (auto v = rd.str("out_dir")) cfg.out_dir = *v;

    // per-experiment requirements
    switch (cfg.experiment) {
        case Experiment::EntropyScaling:
            rd.require("fermi_energy", "entropy-scaling needs the Fermi energy");
            rd.require("L_list", "entropy-scaling needs block sides");
            break;
        case Experiment::ProjectionDecay:
            rd.require("fermi_energy", "projection-decay needs the Fermi energy");
            rd.require("distances", "projection-decay needs distances");
            break;
        case Experiment::LyapunovScan:
            rd.require("lambda_min", "scan grid");
            rd.require("lambda_max", "scan grid");
            rd.require("lambda_points", "scan grid");
            break;
        case Experiment::LargeDeviation:
            rd.require("lambda", "reference energy");
            rd.require("n_list", "cocycle lengths");
            break;
        case Experiment::MarylandVerify:
            rd.require("alpha", "frequency");
            rd.require("g", "coupling");
            if (cfg.potential.family != pot::Family::Maryland && rd.has("potential"))
                rd.fail("potential", "maryland-verify runs the maryland family");
            cfg.potential.family = pot::Family::Maryland;
            break;
        case Experiment::SubshiftStats:
            rd.require("markov_P", "transition matrix");
            break;
    }

    // quasi-periodic families need a frequency
    bool qp = cfg.potential.family == pot::Family::Maryland ||
              cfg.potential.family == pot::Family::AlmostMathieu ||
              cfg.potential.family == pot::Family::MonotoneSawtooth;
    if (qp && cfg.potential.alpha.empty()) rd.require("alpha", "quasi-periodic frequency");

    for (const auto& [key, entry] : kv)
        if (!entry.used) errors.push_back("line " + std::to_string(entry.line) +
                                          ": unknown key '" + key + "'");

    if (!errors.empty()) throw ConfigError(std::move(errors));

    // echo the resolved configuration
    auto& echo = cfg.echo;
    echo["experiment"] = to_string(cfg.experiment);
    switch (cfg.potential.family) {
        case pot::Family::Free: echo["potential"] = "free"; break;
        case pot::Family::Maryland: echo["potential"] = "maryland"; break;
        case pot::Family::AlmostMathieu: echo["potential"] = "amo"; break;
        case pot::Family::MonotoneSawtooth: echo["potential"] = "sawtooth"; break;
        case pot::Family::Subshift:
            echo["potential"] = cfg.potential.driver.kind == pot::SubshiftDriver::Kind::Markov
                                    ? "subshift-markov"
                                    : (cfg.potential.driver.kind == pot::SubshiftDriver::Kind::Doubling
                                           ? "doubling"
                                           : "cat");
            break;
    }
    echo["dimension"] = std::to_string(cfg.potential.dimension);
    echo["g"] = std::to_string(cfg.potential.g);
    if (!cfg.potential.alpha.empty()) {
        std::string a;
        for (std::size_t i = 0; i < cfg.potential.alpha.size(); ++i)
            a += (i ? "," : "") + std::to_string(static_cast<double>(cfg.potential.alpha[i]));
        echo["alpha"] = a;
    }
    echo["kernel"] = cfg.kernel.kind == lattice::KernelSpec::Kind::Laplacian ? "laplacian" : "expdecay";
    echo["samples"] = std::to_string(cfg.samples);
    echo["steps"] = std::to_string(cfg.steps);
    echo["seed"] = std::to_string(cfg.seed);
    echo["host_margin"] = cfg.host_margin.sites > 0
                              ? std::to_string(cfg.host_margin.sites)
                              : std::to_string(cfg.host_margin.multiplier) + "L";
    echo["out_dir"] = cfg.out_dir;
    if (cfg.has_fermi) echo["fermi_energy"] = std::to_string(cfg.fermi_energy);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError({"cannot open config file '" + path + "'"});
    std::stringstream ss;
    ss << is.rdbuf();
    return validate_config(ss.str());
}

} // namespace ergotrope::harness
