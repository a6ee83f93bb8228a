// wavephase: command-line driver.
//
// Exit codes: 0 success (and all checks passed for reproduce), 1 numerical
// failure or failed check, 2 usage or configuration error.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "wavephase/charroots.hpp"
#include "wavephase/core/error.hpp"
#include "wavephase/dde.hpp"
#include "wavephase/domain.hpp"
#include "wavephase/pde.hpp"
#include "wavephase/phase.hpp"
#include "wavephase/profile.hpp"
#include "wavephase/scenario.hpp"
#include "wavephase/scenarios.hpp"

namespace fs = std::filesystem;
using namespace wavephase;

namespace {

// Flags shared by every subcommand that needs a model.
struct ModelFlags {
    std::string config;
    std::string model;
    std::optional<double> p, h, c, c_star_plus, c_sharp_plus;
    std::optional<double> T, dx;
    std::string alpha0;

    void attach(CLI::App* app, bool with_run) {
        app->add_option("--config", config, "scenario file (JSON)");
        app->add_option("--model", model, "nicholson | kpp_fisher");
        app->add_option("--p", p, "Nicholson birth rate");
        app->add_option("--h", h, "delay");
        app->add_option("--c", c, "wave speed");
        app->add_option("--c-star-plus", c_star_plus, "speed = minimal speed + offset");
        app->add_option("--c-sharp-plus", c_sharp_plus, "speed = c_sharp(h) + offset");
        if (with_run) {
            app->add_option("--T", T, "final time");
            app->add_option("--dx", dx, "space step");
            app->add_option("--alpha0", alpha0, "constant:V | linear:A:B | sin:AMP | table:S=V,...");
        }
    }

    ScenarioConfig resolve() const {
        ScenarioConfig cfg = config.empty() ? ScenarioConfig{} : load_scenario(config);
        if (!model.empty() && model != cfg.model.name) {
            cfg.model.name = model;
            cfg.model.params.clear();
        }
        if (p) cfg.model.params["p"] = *p;
        if (h) cfg.model.params["h"] = *h;
        if (cfg.model.name == "nicholson" && config.empty()) cfg.model.params.try_emplace("p", 2.0);
        if (!cfg.model.params.count("h")) cfg.model.params["h"] = 1.0;
        if (c || c_star_plus || c_sharp_plus) cfg.wave = {};
        if (c) cfg.wave.c = *c;
        if (c_star_plus) cfg.wave.c_star_plus = *c_star_plus;
        if (c_sharp_plus) cfg.wave.c_sharp_plus = *c_sharp_plus;
        if (T) cfg.run.T = *T;
        if (dx) cfg.grid.dx = *dx;
        if (!alpha0.empty()) cfg.phase.alpha0 = parse_alpha0(alpha0);
        return cfg;
    }
};

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string complex_num(std::complex<double> z) {
    return num(z.real()) + (std::signbit(z.imag()) ? " - " : " + ") + num(std::abs(z.imag())) + "i";
}

void write_report(const Report& r, const fs::path& dir) {
    std::cout << r.text();
    open_out(dir / (r.name + "_summary.txt")) << r.text();
}

int cmd_roots(const ModelFlags& mf, int K) {
    const ScenarioConfig cfg = mf.resolve();
    const double c = resolve_speed(cfg);
    const ModelSpec m = resolve_model(cfg, c);
    const RootSet rs = compute_root_set(m, c, K);
    std::cout << "# model=" << m.name << " c=" << num(c) << " q=" << num(rs.q) << " d=" << num(rs.d_rate) << "\n";
    std::cout << "kind,index,re,im,residual,winding\n";
    std::cout << "real,1," << num(rs.lambda1) << ",0," << num(std::abs(chi0(m, c, rs.lambda1))) << ",\n";
    std::cout << "real,2," << num(rs.lambda2) << ",0," << num(std::abs(chi0(m, c, rs.lambda2))) << ",\n";
    for (const auto& r : rs.complex_roots)
        std::cout << "complex," << r.strip << "," << num(r.z.real()) << "," << num(r.z.imag()) << "," << num(r.residual)
                  << "," << r.winding << "\n";
    return 0;
}

int cmd_dde_run(const ModelFlags& mf, std::optional<double> q_flag, std::optional<double> lambda1_flag,
                const std::string& A0_text, double dt, const std::string& out_path) {
    ScenarioConfig cfg = mf.resolve();
    double q = 0.0, lambda1 = lambda1_flag.value_or(1.0), h = cfg.model.params.at("h");
    if (q_flag) {
        q = *q_flag;
    } else {
        const double c = resolve_speed(cfg);
        const RootSet rs = compute_root_set(resolve_model(cfg, c), c, 1);
        q = rs.q;
        if (!lambda1_flag) lambda1 = rs.lambda1;
    }
    const bool amplitude = !A0_text.empty();
    const auto desc = amplitude ? parse_alpha0(A0_text) : cfg.phase.alpha0;
    const auto init = amplitude ? PhaseInitial::from_amplitude(h, desc.function(h))
                                : PhaseInitial::from_phase(h, lambda1, desc.function(h));
    const PhaseSeries s = solve_phase(q, h, init, cfg.run.T, dt);
    const PhasePrediction pred = predict_phase(q, h, lambda1, init);
    const EnvelopeFit env = check_exponential_bound(s, pred.A_inf, pred.d_rate);

    auto out = open_out(out_path);
    out << "t,A,alpha,envelope\n";
    for (std::size_t k = 0; k < s.t.size(); ++k) {
        const double A = s.A[k];
        const double alpha = A > 0.0 ? std::log(A) / lambda1 : std::numeric_limits<double>::quiet_NaN();
        const double t = s.t[k];
        const double envelope = t >= 0.0 && std::isfinite(pred.d_rate) ? env.C * std::exp(pred.d_rate * t) : 0.0;
        out << num(t) << "," << num(A) << "," << num(alpha) << "," << num(envelope) << "\n";
    }
    std::cout << "q = " << num(q) << "\nA_inf = " << num(pred.A_inf) << "\na_star = " << num(pred.a_star) << "\n";
    if (pred.delta_a) std::cout << "delta_a = " << num(*pred.delta_a) << "\n";
    if (pred.z1) std::cout << "z1 = " << complex_num(*pred.z1) << "\n";
    std::cout << "A1 = " << complex_num(pred.A1) << "\n";
    std::cout << "A(T) = " << num(s.final_value()) << "\nenvelope C = " << num(env.C) << ", fitted slope "
              << num(env.slope) << (env.ok ? " (within d + 0.05)" : " (exceeds d + 0.05)") << "\n";
    return 0;
}

int cmd_profile(const ModelFlags& mf, std::optional<double> xi_min, double xi_max, double dxi,
                const std::string& out_path) {
    const ScenarioConfig cfg = mf.resolve();
    const double c = resolve_speed(cfg);
    const ModelSpec m = resolve_model(cfg, c);
    const RealRoots rr = real_roots(m, c);
    const WaveProfile p = compute_profile(m, c, xi_min.value_or(default_xi_min(rr.lambda1, rr.lambda2)), xi_max, dxi);
    const auto res = profile_residuals(p, m);
    auto out = open_out(out_path);
    out << "xi,phi,dphi,residual\n";
    for (std::size_t i = 0; i < p.size(); ++i)
        out << num(p.xi(i)) << "," << num(p.phi[i]) << "," << num(p.dphi[i]) << "," << num(res[i]) << "\n";
    std::cout << "c = " << num(c) << "\nlambda1 = " << num(rr.lambda1) << "\nlambda2 = " << num(rr.lambda2)
              << "\nxi_min = " << num(p.xi_min) << "\ndxi = " << num(p.dxi) << "\nresidual_max = " << num(p.residual_max)
              << "\ntail_sigma_est = " << num(p.tail_sigma_est)
              << "\nright_plateau_ok = " << (p.right_plateau_ok ? "true" : "false") << "\n";
    return 0;
}

int cmd_simulate(const ModelFlags& mf, const std::string& out_dir, int x_stride) {
    if (x_stride < 1) throw ConfigError("--x-stride must be >= 1");
    const ScenarioConfig cfg = mf.resolve();
    const ScenarioRun run = run_scenario(cfg);
    const fs::path dir = out_dir.empty() ? fs::path(cfg.run.output_dir) : fs::path(out_dir);
    auto out = open_out(dir / "frames.csv");
    out << "t,x,v\n";
    for (std::size_t k = 0; k < run.sim.frames.size(); ++k) {
        const auto& f = run.sim.frames[k];
        for (std::size_t i = 0; i < f.values.size(); i += static_cast<std::size_t>(x_stride))
            out << num(run.sim.times[k]) << "," << num(f.grid.x(i)) << "," << num(f.values[i]) << "\n";
    }
    auto meta = open_out(dir / "simulate_summary.txt");
    meta << "model = " << run.model.name << "\nc = " << num(run.c) << "\nlambda1 = " << num(run.roots.lambda1)
         << "\nframes = " << run.sim.frames.size() << "\nT = " << num(run.sim.times.back())
         << "\nalpha_meas(T) = " << num(run.trace.alpha_meas.back()) << "\n";
    meta << "config = " << to_json(cfg).dump() << "\n";
    std::cout << "wrote " << (dir / "frames.csv").string() << " (" << run.sim.frames.size() << " frames)\n";
    return 0;
}

int cmd_phase_report(const ModelFlags& mf, const std::string& out_dir) {
    const ScenarioConfig cfg = mf.resolve();
    const ScenarioRun run = run_scenario(cfg);
    const fs::path dir = out_dir.empty() ? fs::path(cfg.run.output_dir) : fs::path(out_dir);
    const PhaseTrace& tr = run.trace;
    auto out = open_out(dir / "phase.csv");
    out << "t,alpha_meas,weighted_error\n";
    for (std::size_t k = 0; k < tr.times.size(); ++k)
        out << num(tr.times[k]) << "," << num(tr.alpha_meas[k]) << "," << num(tr.weighted_errors[k]) << "\n";

    const double h = run.model.h;
    std::ostringstream s;
    s << "model = " << run.model.name << "\nc = " << num(run.c) << "\nlambda1 = " << num(run.roots.lambda1)
      << "\nq = " << num(run.roots.q) << "\na_star_pred = " << num(tr.a_star_pred)
      << "\nalpha_meas(T) = " << num(tr.alpha_meas.back()) << "\nlambda_weight = " << num(run.lambda_weight)
      << "\ninitial_weighted_error = " << num(run.initial_error);
    const double t_start = h > 0.0 ? h : 1.0;
    try {
        const DecayFit fit = decay_fit(tr.times, tr.weighted_errors, t_start);
        s << "\ngamma_fit = " << num(fit.gamma) << (fit.plateau ? " (plateau)" : "");
    } catch (const std::invalid_argument& e) {
        s << "\ngamma_fit = unavailable (" << e.what() << ")";
    }
    if (h > 0.0) {
        try {
            const auto counts = crossing_count(tr.times, tr.alpha_meas, tr.a_star_pred, h, 0.0, cfg.verify.band);
            s << "\ncrossings_per_window =";
            for (int n : counts) s << " " << n;
        } catch (const std::invalid_argument& e) {
            s << "\ncrossings_per_window = unavailable (" << e.what() << ")";
        }
    }
    s << "\n";
    open_out(dir / "phase_summary.txt") << s.str();
    std::cout << s.str();
    return 0;
}

int cmd_domain_curve(double h_lo, double h_hi, int n, const std::string& out_path) {
    const auto rows = emit_curve(h_lo, h_hi, n);
    std::ofstream file;
    if (!out_path.empty()) file = open_out(out_path);
    std::ostream& out = out_path.empty() ? std::cout : file;
    out << "h,c_sharp\n";
    for (const auto& [h, c] : rows) out << num(h) << "," << num(c) << "\n";
    return 0;
}

int cmd_domain_check(double h, double c, const std::string& mode, const ModelFlags& mf) {
    bool inside = false;
    if (mode == "theorem2") {
        inside = in_domain(h, c);
        const auto r = feasible_pair(c, h, std::exp(c * h), -1.0, {0.0, c}, -std::numeric_limits<double>::infinity());
        std::cout << (inside ? "inside 𝒟" : "outside 𝒟") << "\n";
        std::cout << "c_sharp(h) = " << num(c_sharp(h)) << "\nmargin = " << num(r.margin) << " at lambda = "
                  << num(r.lambda) << ", gamma = " << num(r.gamma) << "\n";
    } else if (mode == "theorem1") {
        ModelFlags local = mf;
        local.h = h;
        local.c = c;
        local.c_star_plus.reset();
        local.c_sharp_plus.reset();
        const ScenarioConfig cfg = local.resolve();
        const ModelSpec m = resolve_model(cfg, c);
        const RootSet rs = compute_root_set(m, c, 1);
        const double hi = std::min(2.0 * rs.lambda1, rs.lambda2);
        const auto r = feasible_pair(c, h, m.L2, m.D, {rs.lambda1, hi}, rs.d_rate);
        inside = r.feasible;
        std::cout << (inside ? "inside 𝒟" : "outside 𝒟") << "\n";
        std::cout << "margin = " << num(r.margin) << " at lambda = " << num(r.lambda) << ", gamma = " << num(r.gamma)
                  << "\nd = " << num(rs.d_rate) << "\n";
    } else {
        throw ConfigError("--model-mode must be theorem1 or theorem2");
    }
    return 0;
}

int cmd_reproduce(const std::string& which, const ModelFlags& mf, const std::string& out_dir, double T,
                  double dt) {
    const fs::path dir = out_dir.empty() ? fs::path("out") : fs::path(out_dir);
    if (which == "fig1-left") {
        const Fig1Left r = run_fig1_left(T, dt);
        auto out = open_out(dir / "fig1_left.csv");
        out << "t,A,A_inf\n";
        for (std::size_t k = 0; k < r.series.t.size(); ++k)
            out << num(r.series.t[k]) << "," << num(r.series.A[k]) << "," << num(r.A_inf) << "\n";
        write_report(r.report, dir);
        return r.report.passed() ? 0 : 1;
    }
    if (which == "fig1-right") {
        const Fig1Right r = run_fig1_right();
        auto out = open_out(dir / "fig1_right.csv");
        out << "h,c_sharp\n";
        for (const auto& [h, c] : r.curve) out << num(h) << "," << num(c) << "\n";
        write_report(r.report, dir);
        return r.report.passed() ? 0 : 1;
    }
    if (which == "corollary1" || which == "corollary2") {
        const bool first = which == "corollary1";
        ScenarioConfig cfg = mf.config.empty() ? (first ? corollary1_config() : corollary2_config()) : load_scenario(mf.config);
        if (mf.T) cfg.run.T = *mf.T;
        if (mf.dx) cfg.grid.dx = *mf.dx;
        const EndToEnd r = first ? run_corollary1(cfg) : run_corollary2(cfg);
        const PhaseTrace& tr = r.run.trace;
        auto out = open_out(dir / (which + ".csv"));
        out << "t,alpha_meas,weighted_error\n";
        for (std::size_t k = 0; k < tr.times.size(); ++k)
            out << num(tr.times[k]) << "," << num(tr.alpha_meas[k]) << "," << num(tr.weighted_errors[k]) << "\n";
        write_report(r.report, dir);
        return r.report.passed() ? 0 : 1;
    }
    throw ConfigError("unknown scenario '" + which + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase and stability tools for delayed monostable wavefronts"};
    app.set_help_flag("--help", "print help");  // -h would collide with --h
    app.require_subcommand(1);

    ModelFlags mf;
    int K = 5;
    auto* roots = app.add_subcommand("roots", "real and complex characteristic roots");
    mf.attach(roots, false);
    roots->add_option("--complex", K, "number of complex roots")->check(CLI::Range(0, 200));

    std::optional<double> q_flag, lambda1_flag;
    std::string A0_text, out_path;
    double dt = 1.0 / 256.0;
    auto* dde = app.add_subcommand("dde-run", "solve the phase equation");
    mf.attach(dde, true);
    dde->add_option("--q", q_flag, "phase coefficient (otherwise from the model)");
    dde->add_option("--lambda1", lambda1_flag, "tail exponent used for alpha = ln A / lambda1");
    dde->add_option("--A0", A0_text, "amplitude initial data (same shorthands as --alpha0)");
    dde->add_option("--dt", dt, "step, must divide h");
    dde->add_option("--out", out_path, "CSV path")->default_val("dde.csv");

    std::optional<double> xi_min;
    double xi_max = 40.0, dxi = 0.01;
    auto* prof = app.add_subcommand("profile", "compute the wavefront");
    mf.attach(prof, false);
    prof->add_option("--xi-min", xi_min, "left end (default from the root gap)");
    prof->add_option("--xi-max", xi_max, "right end");
    prof->add_option("--dxi", dxi, "step");
    prof->add_option("--out", out_path, "CSV path")->default_val("profile.csv");

    std::string out_dir;
    int x_stride = 1;
    auto* sim = app.add_subcommand("simulate", "run the PDE in the moving frame");
    mf.attach(sim, true);
    sim->add_option("--out", out_dir, "output directory (default run.output_dir)");
    sim->add_option("--x-stride", x_stride, "write every n-th node");

    auto* report = app.add_subcommand("phase-report", "measured phase and weighted error over time");
    mf.attach(report, true);
    report->add_option("--out", out_dir, "output directory (default run.output_dir)");

    double h_lo = 0.0, h_hi = 5.0;
    int n = 50;
    auto* curve = app.add_subcommand("domain-curve", "sample c_sharp(h)");
    curve->add_option("--h-min", h_lo);
    curve->add_option("--h-max", h_hi);
    curve->add_option("--n", n, "intervals (n + 1 rows)");
    curve->add_option("--out", out_path, "CSV path (default stdout)");

    double check_h = 0.0, check_c = 0.0;
    std::string mode = "theorem2";
    ModelFlags check_mf;
    auto* check = app.add_subcommand("domain-check", "membership in the stability domain");
    check->add_option("--h", check_h)->required();
    check->add_option("--c", check_c)->required();
    check->add_option("--model-mode", mode)->check(CLI::IsMember({"theorem1", "theorem2"}));
    check->add_option("--model", check_mf.model, "model for theorem1 (default nicholson)");
    check->add_option("--p", check_mf.p, "Nicholson birth rate");

    std::string which;
    double rT = 10.0, rdt = 1.0 / 256.0;
    ModelFlags rmf;
    auto* repro = app.add_subcommand("reproduce", "reference scenarios with PASS/FAIL checks");
    repro->add_option("scenario", which, "fig1-left | fig1-right | corollary1 | corollary2")
        ->required()
        ->check(CLI::IsMember({"fig1-left", "fig1-right", "corollary1", "corollary2"}));
    repro->add_option("--out", out_dir, "output directory")->default_val("out");
    repro->add_option("--config", rmf.config, "scenario file replacing the corollary preset");
    repro->add_option("--T", rmf.T, "final time (fig1-left: default 10)");
    repro->add_option("--dx", rmf.dx, "space step for the corollaries");
    repro->add_option("--dt", rdt, "fig1-left step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*roots) return cmd_roots(mf, K);
        if (*dde) return cmd_dde_run(mf, q_flag, lambda1_flag, A0_text, dt, out_path);
        if (*prof) return cmd_profile(mf, xi_min, xi_max, dxi, out_path);
        if (*sim) return cmd_simulate(mf, out_dir, x_stride);
        if (*report) return cmd_phase_report(mf, out_dir);
        if (*curve) return cmd_domain_curve(h_lo, h_hi, n, out_path);
        if (*check) return cmd_domain_check(check_h, check_c, mode, check_mf);
        if (*repro) {
            if (which == "fig1-left" && rmf.T) rT = *rmf.T;
            return cmd_reproduce(which, rmf, out_dir, rT, rdt);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
