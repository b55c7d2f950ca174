#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <stirap/adiabatic.hpp>
#include <stirap/dynamics.hpp>
#include <stirap/longpulse.hpp>

namespace stirap {

enum class Axis { omega_p0, omega_s0, both_locked, gamma };

template <typename S>
struct SweepSpec {
    std::string label;
    PulseConfig<S> base;
    Axis axis = Axis::both_locked;
    std::vector<S> values;
    std::vector<std::string> methods;
};

template <typename S>
struct MethodResult {
    bool ok = false;
    S n3 = S(0);
    std::string error;
};

template <typename S>
struct SweepRow {
    PulseConfig<S> cfg;
    S epsilon = S(0);
    std::map<std::string, MethodResult<S>> results;
};

template <typename S>
struct SweepTable {
    SweepSpec<S> spec;
    std::vector<SweepRow<S>> rows;
};

namespace detail {

inline bool known_method(const std::string& m) {
    return m == "ode" || m == "analytic1" || m == "analytic2" || m == "long" ||
           m == "long-closed" || m == "long-closed-no-transient";
}

inline bool uses_closed_long(const std::vector<std::string>& methods) {
    for (const auto& m : methods)
        if (m == "long-closed" || m == "long-closed-no-transient") return true;
    return false;
}

template <typename S>
PulseConfig<S> apply_axis(const SweepSpec<S>& spec, S v) {
    PulseConfig<S> cfg = spec.base;
    switch (spec.axis) {
        case Axis::omega_p0:
            cfg.omega_p0 = v;
            break;
        case Axis::omega_s0:
            cfg.omega_s0 = v;
            break;
        case Axis::both_locked: {
            const S ratio = spec.base.omega_s0 / spec.base.omega_p0;
            cfg.omega_p0 = v;
            cfg.omega_s0 = v * ratio;
            break;
        }
        case Axis::gamma:
            cfg.gamma = v;
            break;
    }
    return cfg;
}

}  // namespace detail

template <typename S>
void validate(const SweepSpec<S>& spec) {
    if (spec.methods.empty()) throw ValidationError("a sweep needs at least one method");
    for (const auto& m : spec.methods)
        if (!detail::known_method(m))
            throw ValidationError("unknown method '" + m +
                                  "'; known methods are ode, analytic1, analytic2, long, "
                                  "long-closed, long-closed-no-transient");
    for (const auto& m : spec.methods)
        if (m == "analytic2" && spec.base.n < 2)
            throw ValidationError("the curvature formula needs envelope power n >= 2");
    if (detail::uses_closed_long(spec.methods)) {
        if (spec.base.n != 1)
            throw ValidationError("the closed long-pulse form is derived for n = 1 envelopes");
        if (spec.base.omega_p0 != spec.base.omega_s0)
            throw ValidationError("the closed long-pulse form assumes matched peak amplitudes");
        if (spec.axis == Axis::omega_p0 || spec.axis == Axis::omega_s0)
            throw ValidationError(
                "sweeping one amplitude alone breaks the matched-amplitude assumption of the "
                "closed long-pulse form");
    }
    if (spec.values.empty()) throw ValidationError("a sweep needs at least one value");
    for (std::size_t i = 1; i < spec.values.size(); ++i)
        if (!(spec.values[i] > spec.values[i - 1]))
            throw ValidationError("sweep values must be strictly increasing");
    for (const S v : spec.values) validate(detail::apply_axis(spec, v));
}

namespace detail {

template <typename S>
MethodResult<S> eval_method(const std::string& m, const PulseConfig<S>& cfg) {
    MethodResult<S> out;
    try {
        if (m == "ode") {
            out.n3 = n3_ode(cfg).n3;
        } else if (m == "analytic1") {
            out.n3 = n3_first_order(cfg).n3;
        } else if (m == "analytic2") {
            out.n3 = n3_second_order(cfg).n3;
        } else if (m == "long") {
            out.n3 = n3_long(cfg).n3;
        } else {
            const S v = n3_long_closed(cfg.omega_p0, cfg.tau, cfg.gamma, m == "long-closed");
            if (v > S(1))
                throw PreconditionViolated(
                    "outside the validity range: the predicted transfer exceeds one");
            out.n3 = v;
        }
        out.ok = true;
    } catch (const Error& e) {
        out.ok = false;
        out.n3 = S(0);
        out.error = e.what();
    }
    return out;
}

}  // namespace detail

template <typename S>
SweepTable<S> run_sweep(const SweepSpec<S>& spec, int threads = 1) {
    validate(spec);
    SweepTable<S> table;
    table.spec = spec;
    const int nrows = static_cast<int>(spec.values.size());
    table.rows.resize(nrows);

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i; (i = next.fetch_add(1)) < nrows;) {
            SweepRow<S> row;
            row.cfg = detail::apply_axis(spec, spec.values[i]);
            row.epsilon = S(1) / (row.cfg.omega_p0 * row.cfg.tau);
            for (const auto& m : spec.methods) row.results.emplace(m, detail::eval_method(m, row.cfg));
            table.rows[i] = std::move(row);
        }
    };

    const int nt = std::clamp(threads, 1, nrows);
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (int k = 0; k < nt; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return table;
}

// Canned sweep families used throughout the study.
template <typename S>
std::vector<SweepSpec<S>> preset(const std::string& name) {
    auto grid = [](S a, S step, int count) {
        std::vector<S> v(count);
        for (int i = 0; i < count; ++i) v[i] = a + step * S(i);
        return v;
    };

    std::vector<SweepSpec<S>> out;
    if (name == "fig2" || name == "fig3") {
        const int n = name == "fig2" ? 1 : 2;
        const char* method = name == "fig2" ? "analytic1" : "analytic2";
        for (const int ratio : {1, 2, 5}) {
            SweepSpec<S> s;
            s.label = name + "-ratio" + std::to_string(ratio);
            s.base = PulseConfig<S>{n, S(1), S(0.5), S(1), S(ratio), S(0)};
            s.axis = Axis::both_locked;
            s.values = grid(S(2), S(0.5), 97);
            s.methods = {"ode", method};
            out.push_back(std::move(s));
        }
    } else if (name == "fig4") {
        for (const int g : {10, 20, 40, 100}) {
            SweepSpec<S> s;
            s.label = "fig4-gamma" + std::to_string(g);
            s.base = PulseConfig<S>{1, S(1), S(0.5), S(1), S(1), S(g)};
            s.axis = Axis::both_locked;
            s.values = grid(S(5), S(0.5), 111);
            s.methods = {"ode", "long-closed", "long-closed-no-transient"};
            out.push_back(std::move(s));
        }
    } else {
        throw ValidationError("unknown preset '" + name +
                              "'; known presets are fig2, fig3 and fig4");
    }
    return out;
}

namespace detail {

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// One line per (row, method), methods in spec order; failed cells stay empty.
template <typename S>
void write_sweep_csv(const std::vector<SweepTable<S>>& tables, std::ostream& os) {
    os << "preset,n,tau,td,omega_p0,omega_s0,gamma,epsilon,method,n3,abs_err_vs_ode\n";
    for (const auto& t : tables) {
        for (const auto& row : t.rows) {
            const auto ode = row.results.find("ode");
            const bool ode_ok = ode != row.results.end() && ode->second.ok;
            for (const auto& m : t.spec.methods) {
                const auto& res = row.results.at(m);
                os << detail::csv_quote(t.spec.label) << ',' << row.cfg.n << ','
                   << detail::g17(double(row.cfg.tau)) << ',' << detail::g17(double(row.cfg.t_d))
                   << ',' << detail::g17(double(row.cfg.omega_p0)) << ','
                   << detail::g17(double(row.cfg.omega_s0)) << ','
                   << detail::g17(double(row.cfg.gamma)) << ','
                   << detail::g17(double(row.epsilon)) << ',' << detail::csv_quote(m) << ',';
                if (res.ok) os << detail::g17(double(res.n3));
                os << ',';
                if (res.ok && ode_ok && m != "ode")
                    os << detail::g17(double(std::abs(res.n3 - ode->second.n3)));
                os << '\n';
            }
        }
    }
}

template <typename S>
struct CsvRecord {
    std::string label;
    int n = 0;
    S tau = S(0);
    S t_d = S(0);
    S omega_p0 = S(0);
    S omega_s0 = S(0);
    S gamma = S(0);
    S epsilon = S(0);
    std::string method;
    bool has_n3 = false;
    S n3 = S(0);
    bool has_err = false;
    S abs_err = S(0);
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace detail

template <typename S>
std::vector<CsvRecord<S>> read_sweep_csv(std::istream& is) {
    std::vector<CsvRecord<S>> out;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first) {
            first = false;  // header
            continue;
        }
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 11) throw ValidationError("malformed sweep CSV line: " + line);
        CsvRecord<S> r;
        r.label = f[0];
        r.n = std::atoi(f[1].c_str());
        r.tau = S(std::strtod(f[2].c_str(), nullptr));
        r.t_d = S(std::strtod(f[3].c_str(), nullptr));
        r.omega_p0 = S(std::strtod(f[4].c_str(), nullptr));
        r.omega_s0 = S(std::strtod(f[5].c_str(), nullptr));
        r.gamma = S(std::strtod(f[6].c_str(), nullptr));
        r.epsilon = S(std::strtod(f[7].c_str(), nullptr));
        r.method = f[8];
        r.has_n3 = !f[9].empty();
        if (r.has_n3) r.n3 = S(std::strtod(f[9].c_str(), nullptr));
        r.has_err = !f[10].empty();
        if (r.has_err) r.abs_err = S(std::strtod(f[10].c_str(), nullptr));
        out.push_back(std::move(r));
    }
    return out;
}

// gnuplot-style column indices matching write_sweep_csv.
inline void write_column_map(std::ostream& os) {
    os << "# 1-based column indices for the sweep CSV\n"
          "col_preset = 1\n"
          "col_n = 2\n"
          "col_tau = 3\n"
          "col_td = 4\n"
          "col_omega_p0 = 5\n"
          "col_omega_s0 = 6\n"
          "col_gamma = 7\n"
          "col_epsilon = 8\n"
          "col_method = 9\n"
          "col_n3 = 10\n"
          "col_abs_err_vs_ode = 11\n";
}

// (epsilon, 1 - n3) for every row where the method produced a value.
template <typename S>
std::vector<std::pair<S, S>> deficit_points(const SweepTable<S>& table,
                                            const std::string& method) {
    std::vector<std::pair<S, S>> pts;
    for (const auto& row : table.rows) {
        const auto it = row.results.find(method);
        if (it != row.results.end() && it->second.ok)
            pts.push_back({row.epsilon, S(1) - it->second.n3});
    }
    return pts;
}

template <typename S>
struct ScalingFit {
    S slope = S(0);
    S stderr_ = S(0);
    int points_used = 0;
    bool used_envelope = false;
};

// Log-log slope of the deficit.  Oscillating deficits are fit through the
// upper envelope (strict interior maxima of the sequence); clean ones through
// every point above the noise floor.
template <typename S>
ScalingFit<S> fit_scaling(std::vector<std::pair<S, S>> pts) {
    std::erase_if(pts, [](const std::pair<S, S>& p) { return !(p.second > S(1e-14)); });
    std::sort(pts.begin(), pts.end());
    if (pts.size() < 4)
        throw InsufficientData("need at least four deficit points above the noise floor");

    std::vector<std::pair<S, S>> env;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i)
        if (pts[i].second > pts[i - 1].second && pts[i].second > pts[i + 1].second)
            env.push_back(pts[i]);

    const bool use_env = env.size() >= 4;
    const auto& use = use_env ? env : pts;
    const int m = static_cast<int>(use.size());

    S xb = S(0), yb = S(0);
    for (const auto& p : use) {
        xb += std::log(p.first);
        yb += std::log(p.second);
    }
    xb /= S(m);
    yb /= S(m);

    S sxx = S(0), sxy = S(0);
    for (const auto& p : use) {
        const S dx = std::log(p.first) - xb;
        const S dy = std::log(p.second) - yb;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    const S slope = sxy / sxx;

    S srr = S(0);
    for (const auto& p : use) {
        const S r = (std::log(p.second) - yb) - slope * (std::log(p.first) - xb);
        srr += r * r;
    }

    ScalingFit<S> fit;
    fit.slope = slope;
    fit.stderr_ = std::sqrt(srr / S(m - 2) / sxx);
    fit.points_used = m;
    fit.used_envelope = use_env;
    return fit;
}

}  // namespace stirap
