// Command line front end: integrate the three-level dynamics, evaluate the
// closed-form transfer estimates, run parameter sweeps and fit scaling laws.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <stirap/adiabatic.hpp>
#include <stirap/dynamics.hpp>
#include <stirap/longpulse.hpp>
#include <stirap/manifest.hpp>
#include <stirap/sweep.hpp>

using Cfg = stirap::PulseConfig<double>;

namespace {

int run_cli(const std::vector<std::string>& args);

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

void add_pulse_flags(CLI::App* cmd, Cfg& cfg) {
    cmd->add_option("--n", cfg.n, "envelope power of the cos^n pulse shape");
    cmd->add_option("--tau", cfg.tau, "pulse width");
    cmd->add_option("--td", cfg.t_d, "delay between the two pulse centers");
    cmd->add_option("--omega-p0", cfg.omega_p0, "pump peak amplitude")->required();
    cmd->add_option("--omega-s0", cfg.omega_s0, "Stokes peak amplitude")->required();
    cmd->add_option("--gamma", cfg.gamma, "loss rate of the intermediate state");
}

void print_notes(const std::vector<std::string>& notes) {
    for (const auto& n : notes) std::printf("note: %s\n", n.c_str());
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw stirap::ValidationError("cannot write output file '" + path + "'");
    return f;
}

int cmd_simulate(const Cfg& cfg, int samples, const std::string& out, double rel_tol,
                 double abs_tol, const std::vector<std::string>& raw_args) {
    stirap::validate(cfg);
    stirap::IntegratorSettings<double> set;
    set.rel_tol = rel_tol;
    set.abs_tol = abs_tol;
    set.sample_count = samples;

    stirap::State<double> psi0;
    psi0 << 1.0, 0.0, 0.0;
    const auto span = stirap::field_span(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const auto traj = stirap::propagate(cfg, span.first, span.second, psi0, set);
    const double elapsed = ms_since(t0);

    const auto pops = stirap::populations(traj.states.back());
    std::printf("populations at t = %g\n", traj.times.back());
    std::printf("n1 = %.6f\nn2 = %.6f\nn3 = %.6f\n", pops[0], pops[1], pops[2]);
    std::printf("lost = %.6f\n", 1.0 - pops[0] - pops[1] - pops[2]);
    std::printf("adiabaticity epsilon = %.6f\n", stirap::adiabaticity(cfg));

    if (!out.empty()) {
        auto f = open_output(out);
        stirap::write_trajectory_csv(traj, f);
        stirap::RunManifest man;
        man.command = "simulate";
        man.args = raw_args;
        man.outputs = {out};
        man.duration_ms = elapsed;
        stirap::write_manifest(man, out + ".manifest.json");
        std::printf("wrote %s (%d samples)\n", out.c_str(), samples);
    }
    return 0;
}

int cmd_analytic(const Cfg& cfg, const std::string& order, bool no_transient, bool force) {
    stirap::validate(cfg);
    if (order == "long-closed") {
        if (cfg.n != 1)
            throw stirap::ValidationError("the closed long-pulse form is derived for n = 1 envelopes");
        if (cfg.omega_p0 != cfg.omega_s0)
            throw stirap::ValidationError("the closed long-pulse form assumes matched peak amplitudes");
        const double v =
            stirap::n3_long_closed(cfg.omega_p0, cfg.tau, cfg.gamma, !no_transient);
        std::printf("method = long-closed%s\n", no_transient ? " (transient dropped)" : "");
        std::printf("n3 = %.6f\n", v);
        return 0;
    }

    stirap::TransferResult<double> r;
    if (order == "first") {
        r = stirap::n3_first_order(cfg);
    } else if (order == "second") {
        r = stirap::n3_second_order(cfg);
    } else if (order == "long") {
        r = stirap::n3_long(cfg, force);
    } else {
        throw stirap::ValidationError("unknown order '" + order +
                                      "'; use first, second, long or long-closed");
    }

    std::printf("method = %s\n", r.method.c_str());
    if (r.epsilon > 0) std::printf("adiabaticity epsilon = %.6f\n", r.epsilon);
    if (order == "first" || order == "second") std::printf("phase = %.6f\n", r.phase);
    if (r.has_exponent) {
        std::printf("exponent transient = %.6f\n", r.exp_transient);
        std::printf("exponent quasistationary order 1 = %.6f\n", r.exp_first);
        std::printf("exponent quasistationary order 2 = %.6f\n", r.exp_second);
    }
    std::printf("n3 = %.6f\n", r.n3);
    print_notes(r.notes);
    return 0;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw stirap::ValidationError("could not parse number '" + s + "' in sweep spec");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : s) {
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

// "a:step:b" inclusive range, or a comma separated list
std::vector<double> parse_values(const std::string& s) {
    const auto colon = split(s, ':');
    if (colon.size() == 3) {
        const double a = parse_number(colon[0]);
        const double step = parse_number(colon[1]);
        const double b = parse_number(colon[2]);
        if (step <= 0) throw stirap::ValidationError("sweep range step must be positive");
        if (b < a) throw stirap::ValidationError("sweep range end must not precede its start");
        const int count = static_cast<int>(std::floor((b - a) / step + 1e-9)) + 1;
        std::vector<double> v(count);
        for (int i = 0; i < count; ++i) v[i] = a + step * i;
        return v;
    }
    if (colon.size() != 1)
        throw stirap::ValidationError("sweep values must be 'start:step:stop' or a comma list");
    std::vector<double> v;
    for (const auto& tok : split(s, ',')) v.push_back(parse_number(tok));
    return v;
}

stirap::Axis parse_axis(const std::string& s) {
    if (s == "both_locked") return stirap::Axis::both_locked;
    if (s == "omega_p0") return stirap::Axis::omega_p0;
    if (s == "omega_s0") return stirap::Axis::omega_s0;
    if (s == "gamma") return stirap::Axis::gamma;
    throw stirap::ValidationError("unknown axis '" + s +
                                  "'; use both_locked, omega_p0, omega_s0 or gamma");
}

stirap::SweepSpec<double> parse_spec_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw stirap::ValidationError("cannot read sweep spec file '" + path + "'");
    stirap::SweepSpec<double> s;
    s.base = Cfg{1, 1.0, 0.5, 0.0, 0.0, 0.0};
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw stirap::ValidationError("expected 'key = value' on line " +
                                          std::to_string(lineno) + " of " + path);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "label") {
            s.label = val;
        } else if (key == "n") {
            s.base.n = static_cast<int>(parse_number(val));
        } else if (key == "tau") {
            s.base.tau = parse_number(val);
        } else if (key == "td") {
            s.base.t_d = parse_number(val);
        } else if (key == "omega_p0") {
            s.base.omega_p0 = parse_number(val);
        } else if (key == "omega_s0") {
            s.base.omega_s0 = parse_number(val);
        } else if (key == "gamma") {
            s.base.gamma = parse_number(val);
        } else if (key == "axis") {
            s.axis = parse_axis(val);
        } else if (key == "values") {
            s.values = parse_values(val);
        } else if (key == "methods") {
            s.methods = split(val, ',');
        } else {
            throw stirap::ValidationError("unknown key '" + key + "' on line " +
                                          std::to_string(lineno) + " of " + path);
        }
    }
    if (s.label.empty()) s.label = "sweep";
    return s;
}

int cmd_sweep(const std::string& preset_name, const std::string& spec_path,
              const std::string& out, int threads, const std::vector<std::string>& raw_args) {
    if (!preset_name.empty() && !spec_path.empty())
        throw stirap::ValidationError("give either --preset or --spec, not both");
    if (preset_name.empty() && spec_path.empty())
        throw stirap::ValidationError("a sweep needs --preset or --spec");

    std::vector<stirap::SweepSpec<double>> specs;
    if (!preset_name.empty())
        specs = stirap::preset<double>(preset_name);
    else
        specs.push_back(parse_spec_file(spec_path));

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<stirap::SweepTable<double>> tables;
    tables.reserve(specs.size());
    for (const auto& s : specs) tables.push_back(stirap::run_sweep(s, threads));

    {
        auto f = open_output(out);
        stirap::write_sweep_csv(tables, f);
    }
    {
        auto f = open_output(out + ".gp");
        stirap::write_column_map(f);
    }
    stirap::RunManifest man;
    man.command = "sweep";
    man.args = raw_args;
    man.outputs = {out, out + ".gp"};
    man.duration_ms = ms_since(t0);
    stirap::write_manifest(man, out + ".manifest.json");

    for (const auto& t : tables) {
        int failed = 0;
        for (const auto& row : t.rows)
            for (const auto& [_, res] : row.results) failed += !res.ok;
        std::printf("%s: %zu rows x %zu methods, %d cells out of range\n", t.spec.label.c_str(),
                    t.rows.size(), t.spec.methods.size(), failed);
    }
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

int cmd_fit(const std::string& input, const std::string& family, const std::string& method) {
    std::ifstream f(input, std::ios::binary);
    if (!f) throw stirap::ValidationError("cannot read sweep CSV '" + input + "'");
    const auto recs = stirap::read_sweep_csv<double>(f);

    auto squeeze = [](const std::string& s) {
        std::string out;
        for (const char c : s)
            if (c != '=' && c != ' ') out += c;
        return out;
    };
    const std::string want = squeeze(family);

    std::vector<std::pair<double, double>> pts;
    for (const auto& r : recs) {
        if (!r.has_n3 || r.method != method) continue;
        if (!want.empty() && squeeze(r.label).find(want) == std::string::npos) continue;
        pts.push_back({r.epsilon, 1.0 - r.n3});
    }
    const auto fit = stirap::fit_scaling(pts);
    std::printf("family '%s', method %s: fit through %d %s points\n", family.c_str(),
                method.c_str(), fit.points_used,
                fit.used_envelope ? "envelope" : "deficit");
    std::printf("slope = %.4f +/- %.4f\n", fit.slope, fit.stderr_);
    return 0;
}

int cmd_rerun(const std::string& manifest_path) {
    const auto man = stirap::read_manifest(manifest_path);
    if (man.args.empty())
        throw stirap::ValidationError("manifest '" + manifest_path + "' records no arguments");
    return run_cli(man.args);
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"three-level stimulated Raman transfer toolkit"};
    app.require_subcommand(0, 1);

    Cfg sim_cfg;
    int sim_samples = 201;
    std::string sim_out;
    double sim_rel = 1e-11, sim_abs = 1e-13;
    auto* sim = app.add_subcommand("simulate", "integrate the dynamics across the pulse pair");
    add_pulse_flags(sim, sim_cfg);
    sim->add_option("--samples", sim_samples, "trajectory sample count")
        ->check(CLI::Range(2, 1000000));
    sim->add_option("--out", sim_out, "trajectory CSV path");
    sim->add_option("--rel-tol", sim_rel, "integrator relative tolerance");
    sim->add_option("--abs-tol", sim_abs, "integrator absolute tolerance");

    Cfg ana_cfg;
    std::string ana_order;
    bool ana_no_transient = false, ana_force = false;
    auto* ana = app.add_subcommand("analytic", "evaluate a closed-form transfer estimate");
    add_pulse_flags(ana, ana_cfg);
    ana->add_option("--order", ana_order, "first | second | long | long-closed")->required();
    ana->add_flag("--no-transient", ana_no_transient, "drop the turn-on transient term");
    ana->add_flag("--force", ana_force, "evaluate outside the strong-decay regime");

    std::string swp_preset, swp_spec, swp_out;
    int swp_threads = 1;
    auto* swp = app.add_subcommand("sweep", "tabulate transfer across an amplitude or loss grid");
    swp->add_option("--preset", swp_preset, "canned sweep family: fig2, fig3 or fig4");
    swp->add_option("--spec", swp_spec, "key = value sweep description file");
    swp->add_option("--out", swp_out, "sweep CSV path")->required();
    swp->add_option("--threads", swp_threads, "worker thread count")->check(CLI::Range(1, 256));

    std::string fit_input, fit_family, fit_method = "ode";
    auto* fit = app.add_subcommand("fit", "fit the deficit scaling exponent from a sweep CSV");
    fit->add_option("--input", fit_input, "sweep CSV path")->required();
    fit->add_option("--family", fit_family, "label filter, e.g. ratio=1");
    fit->add_option("--method", fit_method, "method column to fit");

    std::string rr_path;
    auto* rr = app.add_subcommand("rerun", "replay a recorded run from its manifest");
    rr->add_option("manifest", rr_path, "manifest JSON path")->required();

    std::vector<const char*> ptrs;
    ptrs.reserve(args.size() + 1);
    ptrs.push_back("stirap");
    for (const auto& a : args) ptrs.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(sim_cfg, sim_samples, sim_out, sim_rel, sim_abs, args);
        if (ana->parsed()) return cmd_analytic(ana_cfg, ana_order, ana_no_transient, ana_force);
        if (swp->parsed()) return cmd_sweep(swp_preset, swp_spec, swp_out, swp_threads, args);
        if (fit->parsed()) return cmd_fit(fit_input, fit_family, fit_method);
        if (rr->parsed()) return cmd_rerun(rr_path);
        std::fputs(app.help().c_str(), stdout);
        return 2;
    } catch (const stirap::StepFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const stirap::QuadratureFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const stirap::InsufficientData& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const stirap::DarkDepleted& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const stirap::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    return run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
