#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "biphoton/config.hpp"
#include "biphoton/error.hpp"
#include "biphoton/schmidt.hpp"
#include "biphoton/spectral.hpp"
#include "biphoton/temporal.hpp"
#include "emit.hpp"

#ifndef BIPHOTON_VERSION
#define BIPHOTON_VERSION "dev"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace biphoton;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kNumeric = 3, kRegime = 4, kIo = 5 };

struct Globals {
    std::string config;
    std::string out = ".";
    int grid = 0;
    double tol = 0.0;
    std::string tau;
    bool timing = false;
};

// Outputs are staged and only written once every computation has succeeded,
// so a failing run leaves no partial files behind.
struct Run {
    std::string command;
    PhysicalConfig cfg;
    json overrides = json::object();
    std::vector<std::pair<std::string, std::function<void(const std::string&)>>> files;

    void add(const std::string& name, std::function<void(const std::string&)> writer) {
        files.emplace_back(name, std::move(writer));
    }
};

std::string stage = "startup";

PhysicalConfig resolve_config(const Globals& g, Run& run) {
    stage = "config";
    PhysicalConfig cfg = g.config.empty() ? PhysicalConfig{} : load_config(g.config);
    if (!g.tau.empty()) {
        cfg.tau = parse_quantity(g.tau, Dimension::Time);
        run.overrides["tau"] = cfg.tau;
    }
    if (g.grid != 0) {
        if (g.grid < 16) throw ValidationError("--grid must be at least 16");
        run.overrides["grid"] = g.grid;
    }
    if (g.tol != 0.0) {
        if (!(g.tol > 0.0)) throw ValidationError("--tol must be positive");
        run.overrides["tol"] = g.tol;
    }
    cfg.validate();
    return cfg;
}

json config_json(const PhysicalConfig& c) {
    return json{{"A", c.A}, {"B", c.B}, {"L_m", c.L}, {"lambda0_m", c.lambda0}, {"tau_s", c.tau}, {"c_m_per_s", c.c}};
}

json manifest(const Run& run, const Globals& g, double seconds) {
    json m;
    m["command"] = run.command;
    m["tool_version"] = BIPHOTON_VERSION;
    m["config_path"] = g.config;
    m["config"] = config_json(run.cfg);
    m["overrides"] = run.overrides;
    json outs = json::array();
    for (const auto& f : run.files) outs.push_back(f.first);
    m["outputs"] = outs;
    if (g.timing) m["wall_clock_s"] = seconds;
    return m;
}

io::Meta base_meta(const Run& run) {
    return {{"command", run.command},         {"A", io::format_double(run.cfg.A)},
            {"B", io::format_double(run.cfg.B)}, {"L_m", io::format_double(run.cfg.L)},
            {"lambda0_m", io::format_double(run.cfg.lambda0)}, {"tau_s", io::format_double(run.cfg.tau)},
            {"tool_version", BIPHOTON_VERSION}};
}

void add_curve(Run& run, const std::string& name, const Curve& c, io::Meta extra = {}) {
    io::Meta meta = base_meta(run);
    for (auto& [k, v] : extra) meta[k] = v;
    run.add(name, [c, meta](const std::string& p) { io::write_curve_csv(p, c, meta); });
}

json width_json(const FwhmResult& w) {
    return json{{"fwhm", w.width}, {"x_left", w.x_left}, {"x_right", w.x_right}, {"peak_x", w.peak_x}};
}

// ---- spectrum ------------------------------------------------------------

struct SpectrumOpts {
    std::string lambda2 = "800nm";
    double nu2 = std::nan("");
    std::string axis = "wavelength";
};

json cmd_spectrum(Run& run, const Globals& g, const SpectrumOpts& o) {
    const auto& cfg = run.cfg;
    stage = "spectrum: window";
    const double nu2 = std::isnan(o.nu2) ? lambda_to_nu(parse_quantity(o.lambda2, Dimension::Length), cfg) : o.nu2;
    if (o.axis != "wavelength" && o.axis != "frequency") throw ValidationError("--axis must be wavelength or frequency");
    const Axis axis = o.axis == "wavelength" ? Axis::Wavelength : Axis::Frequency;
    Window w;
    if (g.grid) w.points = g.grid;

    stage = "spectrum: coincidence";
    auto coin = coincidence_spectrum(nu2, w, cfg, axis);
    auto coin_f = coincidence_spectrum(nu2, w, cfg, Axis::Frequency);
    stage = "spectrum: pump";
    auto pump = pump_spectrum(nu2, w, cfg, axis);
    auto pump_f = pump_spectrum(nu2, w, cfg, Axis::Frequency);
    stage = "spectrum: single-particle";
    auto single = single_particle_spectrum(w, cfg, SingleMethod::Numeric, axis);
    auto single_f = single_particle_spectrum(w, cfg, SingleMethod::Numeric, Axis::Frequency);
    const double eta = derive(cfg).eta;

    json j;
    j["eta"] = eta;
    j["nu2_rad_per_s"] = nu2;
    j["lambda2_m"] = nu_to_lambda(nu2, cfg);
    j["axis"] = o.axis;
    j["coincidence"] = width_json(coin.width);
    j["coincidence_fwhm_rad_per_s"] = coin_f.width.width;
    j["pump"] = width_json(pump.width);
    j["pump_fwhm_rad_per_s"] = pump_f.width.width;
    j["single_numeric"] = width_json(single.width);
    j["single_numeric_fwhm_rad_per_s"] = single_f.width.width;
    if (axis == Axis::Wavelength) {
        j["coincidence_fwhm_nm"] = coin.width.width * 1e9;
        j["pump_fwhm_nm"] = pump.width.width * 1e9;
        j["single_numeric_fwhm_nm"] = single.width.width * 1e9;
    }
    j["pump_to_coincidence_ratio"] = pump.width.width / coin.width.width;
    j["R_measured"] = single_f.width.width / coin_f.width.width;
    add_curve(run, "coincidence.csv", coin.curve);
    add_curve(run, "pump.csv", pump.curve);
    add_curve(run, "single_numeric.csv", single.curve);
    if (eta <= 0.3) {
        auto sa = single_particle_spectrum(w, cfg, SingleMethod::Analytic, axis);
        j["single_analytic"] = width_json(sa.width);
        add_curve(run, "single_analytic.csv", sa.curve);
    } else {
        auto sl = single_particle_spectrum(w, cfg, SingleMethod::AnalyticLong, axis);
        j["single_analytic_long"] = width_json(sl.width);
        add_curve(run, "single_analytic_long.csv", sl.curve);
    }
    return j;
}

// ---- scan ------------------------------------------------------------------

struct ScanOpts {
    double eta_min = 0.1, eta_max = 10.0;
    int count = 50;
    bool ksvd = false;
};

json cmd_scan(Run& run, const Globals&, const ScanOpts& o) {
    stage = "scan: range";
    if (!(o.eta_min > 0.0) || !(o.eta_max > o.eta_min) || o.count < 2)
        throw ValidationError("scan needs 0 < eta-min < eta-max and count >= 2");
    std::vector<std::string> cols{"eta", "tau", "R_short", "R_long", "R_interp", "K_short", "K_long", "K_interp", "KR_ratio"};
    if (o.ksvd) cols.push_back("K_svd");
    std::vector<std::vector<double>> rows;
    double best_eta = 0.0, best_R = INFINITY;
    for (int i = 0; i < o.count; ++i) {
        const double eta = o.eta_min * std::pow(o.eta_max / o.eta_min, double(i) / (o.count - 1));
        PhysicalConfig c = run.cfg;
        c.tau = tau_for_eta(c, eta);
        stage = "scan: analytic";
        auto rep = entanglement_report(c);
        std::vector<double> row{eta, c.tau, rep.R_short, rep.R_long, rep.R_interp, rep.K_short, rep.K_long, rep.K_interp, rep.KR_ratio};
        if (o.ksvd) {
            stage = "scan: K_svd";
            row.push_back(schmidt_svd(c).K);
        }
        if (rep.R_interp < best_R) {
            best_R = rep.R_interp;
            best_eta = eta;
        }
        rows.push_back(std::move(row));
    }
    auto rm = r_min(run.cfg);
    json j;
    j["eta_min"] = o.eta_min;
    j["eta_max"] = o.eta_max;
    j["count"] = o.count;
    j["R_min_grid_eta"] = best_eta;
    j["R_min_grid"] = best_R;
    j["R_min_eta"] = rm.eta;
    j["R_min_tau_s"] = rm.tau;
    j["R_min"] = rm.R;
    io::Meta meta = base_meta(run);
    run.add("scan.csv", [cols, rows, meta](const std::string& p) { io::write_table_csv(p, cols, rows, meta); });
    return j;
}

// ---- schmidt -------------------------------------------------------------

struct SchmidtOpts {
    bool no_refine = false;
    double step = 0.0;
    double half_width = 0.0;
};

json cmd_schmidt(Run& run, const Globals&, const SchmidtOpts& o) {
    SchmidtGridSpec spec;
    spec.refine = !o.no_refine;
    spec.step = o.step;
    spec.half_width = o.half_width;
    stage = "schmidt: svd";
    auto svd = schmidt_svd(run.cfg, spec);
    stage = "schmidt: integral4d";
    auto i4 = schmidt_integral4d(run.cfg, svd.final_grid);
    auto ka = k_analytic(run.cfg);
    const double eta = derive(run.cfg).eta;
    json j;
    j["eta"] = eta;
    j["K_svd"] = svd.K;
    j["K_integral4d"] = i4.K;
    j["K_svd_vs_integral4d_rel"] = std::abs(svd.K - i4.K) / svd.K;
    j["K_short"] = ka.K_short;
    j["K_long"] = ka.K_long;
    j["K_interp"] = ka.K_interp;
    j["KR_ratio"] = kr_ratio(eta);
    json trace = json::array();
    for (const auto& s : svd.trace) trace.push_back(json{{"n", s.n}, {"band", s.w}, {"step_rad_per_s", s.h}, {"K", s.K}});
    j["refinement"] = trace;
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < svd.coeffs.size(); ++k) rows.push_back({double(k), svd.coeffs[k]});
    io::Meta meta = base_meta(run);
    run.add("schmidt_coefficients.csv",
            [rows, meta](const std::string& p) { io::write_table_csv(p, {"n", "lambda_n"}, rows, meta); });
    return j;
}

// ---- temporal ------------------------------------------------------------

struct TemporalOpts {
    std::vector<std::string> t2;
    bool rt = false;
    bool no_packet = false;
    int localization_points = 61;
};

json cmd_temporal(Run& run, const Globals& g, const TemporalOpts& o) {
    const auto& cfg = run.cfg;
    const auto d = derive(cfg);
    const double tw = walkoff_time(cfg);
    PsiOptions popt;
    if (g.tol > 0) popt.tol = g.tol;
    json j;
    j["eta"] = d.eta;
    j["tau0_s"] = d.tau0;
    j["walkoff_time_s"] = tw;

    // R_t is always reported for long pulses; --rt makes it mandatory.
    if (o.rt || d.eta >= 1.0) {
        stage = "temporal: R_t";
        auto rt = rt_parameter(cfg);
        j["R_t"] = rt.R_t;
        j["R_long"] = rt.R_long;
        j["K_long"] = rt.K_long;
        j["R_long_x0.75"] = rt.R_long_scaled;
        j["K_long_x0.94"] = rt.K_long_scaled;
        j["R_t_over_R_long"] = rt.R_t / rt.R_long;
        j["R_t_over_K_long"] = rt.R_t / rt.K_long;
    }

    TimeWindow tw_default = default_time_window(cfg, g.grid ? g.grid : 1024);
    if (!o.no_packet) {
        stage = "temporal: packet";
        auto pk = temporal_packet(cfg, tw_default, PsiMethod::Exact, popt);
        Eigen::MatrixXd inten = pk.values.cwiseAbs2();
        inten /= inten.maxCoeff();
        io::Meta meta = base_meta(run);
        meta["rows"] = "t1_s";
        meta["cols"] = "t2_s";
        meta["values"] = "|psi|^2 peak-normalized";
        run.add("packet.csv", [pk, inten, meta](const std::string& p) { io::write_matrix_csv(p, pk.t1s, pk.t2s, inten, meta); });
    }

    stage = "temporal: diagonal";
    TimeWindow cw;
    if (g.grid) cw.points = g.grid;
    auto diag = diagonal_profile(cfg, cw, popt);
    j["diagonal_peak_time_s"] = diag.width.peak_x;
    add_curve(run, "diagonal.csv", diag.curve);

    stage = "temporal: coincidence";
    std::vector<double> t2s;
    for (const auto& s : o.t2) t2s.push_back(parse_quantity(s, Dimension::Time));
    if (t2s.empty()) {
        const double tc = long_pulse_center(cfg);
        t2s = d.eta < 1.0 ? std::vector<double>{0.0, 1.5e-12, 2.8525e-12}
                          : std::vector<double>{tc - 0.25 * cfg.tau, tc, tc + 0.25 * cfg.tau};
    }
    json coin = json::array();
    for (std::size_t k = 0; k < t2s.size(); ++k) {
        auto c = coincidence_signal(t2s[k], cfg, cw, popt);
        coin.push_back(json{{"t2_s", t2s[k]}, {"fwhm_s", c.width.width}, {"peak_t1_s", c.width.peak_x}});
        add_curve(run, "coincidence_" + std::to_string(k) + ".csv", c.curve, {{"t2_s", io::format_double(t2s[k])}});
    }
    j["coincidence"] = coin;

    stage = "temporal: single-particle";
    // Each sample is a full row integral; the width itself is bisected on
    // the exact function, so a coarse sample grid is enough.
    TimeWindow sw;
    sw.points = g.grid ? g.grid : 401;
    auto single = single_particle_signal(cfg, sw, popt);
    j["plateau_span_s"] = single.width.width;
    j["single_left_s"] = single.width.x_left;
    j["single_right_s"] = single.width.x_right;
    j["single_duration_analytic_s"] = single_duration_analytic(cfg);
    add_curve(run, "single.csv", single.curve);

    if (d.eta < 1.0) {
        stage = "temporal: localization";
        const ExitFaceAmplitude psi(cfg, popt);
        j["front_wing_s"] = 2.0 * localization_half_width(psi, 0.0);
        j["front_wing_analytic_s"] = 2.0 * region_I_half_width(cfg, 0.0);
        j["region_I_II_crossing_s"] = region_I_II_crossing(cfg);
        auto tps = linspace(-0.1 * tw, 1.1 * tw, std::max(3, o.localization_points));
        auto lb = localization_boundaries(cfg, tps, popt);
        std::vector<std::vector<double>> rows;
        for (std::size_t k = 0; k < tps.size(); ++k)
            rows.push_back({lb.t_plus[k], lb.t_minus_lower[k], lb.t_minus_upper[k],
                            double(static_cast<int>(lb.region_tags[k]) + 1), lb.line_I[k], lb.line_II[k], lb.est_III[k]});
        io::Meta meta = base_meta(run);
        meta["region_codes"] = "1=I,2=II,3=III";
        run.add("localization.csv", [rows, meta](const std::string& p) {
            io::write_table_csv(p, {"t_plus", "t_minus_lower", "t_minus_upper", "region", "line_I", "line_II", "estimate_III"},
                                rows, meta);
        });
    }

    stage = "temporal: long-pulse factor";
    {
        const int n = g.grid ? g.grid : 1201;
        auto xs = linspace(-3.0, 3.0, n);
        auto m = measure_function(xs, [&](double x) { return std::norm(long_pulse_factor(x * d.tau0, cfg)); });
        m.curve.meta = {{"kind", "long_pulse_factor"}, {"x_label", "t_minus/tau0"}, {"x_unit", "1"}, {"y_label", "|F|^2"}};
        j["F_fwhm_tau0"] = m.width.width;
        add_curve(run, "long_pulse_factor.csv", m.curve);
    }
    return j;
}

// ---- angular -------------------------------------------------------------

struct AngularOpts {
    double np = 0.0, np_prime = 0.0, alpha0 = 0.0;
};

json cmd_angular(Run& run, const Globals&, const AngularOpts& o) {
    stage = "angular";
    auto a = angular_parameters(run.cfg, o.np, o.np_prime, o.alpha0);
    json j;
    j["np"] = o.np;
    j["np_prime"] = o.np_prime;
    j["alpha0_rad"] = o.alpha0;
    j["A_tilde"] = a.A_tilde;
    j["B_tilde"] = a.B_tilde;
    j["eta_tilde"] = a.eta_tilde;
    j["R_min_angular"] = a.R_min_angular;
    return j;
}

int finish(Run& run, const Globals& g, json summary, const std::string& summary_name, double seconds) {
    stage = "output";
    std::error_code ec;
    fs::create_directories(g.out, ec);
    if (ec) throw IoError("cannot create output directory '" + g.out + "': " + ec.message());
    run.files.insert(run.files.begin(), {summary_name, {}});
    summary["manifest"] = manifest(run, g, seconds);
    for (auto& [name, writer] : run.files) {
        const std::string path = (fs::path(g.out) / name).string();
        if (writer)
            writer(path);
        else
            io::write_json(path, summary);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pulsed-pump type-I SPDC biphoton model"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "Config file (key = value lines)");
    app.add_option("--out", g.out, "Output directory");
    app.add_option("--grid", g.grid, "Points per sampled axis");
    app.add_option("--tol", g.tol, "Quadrature tolerance");
    app.add_option("--tau", g.tau, "Override pump duration, e.g. 50fs");
    app.add_flag("--timing", g.timing, "Record wall-clock time in the manifest (breaks byte-identical output)");

    SpectrumOpts so;
    auto* sp = app.add_subcommand("spectrum", "Coincidence, single-particle and pump spectra");
    sp->add_option("--lambda2", so.lambda2, "Second-photon wavelength, e.g. 800nm");
    sp->add_option("--nu2", so.nu2, "Second-photon detuning [rad/s] (overrides --lambda2)");
    sp->add_option("--axis", so.axis, "wavelength or frequency");

    ScanOpts sc;
    auto* scp = app.add_subcommand("scan", "R and K versus eta");
    scp->add_option("--eta-min", sc.eta_min);
    scp->add_option("--eta-max", sc.eta_max);
    scp->add_option("--count", sc.count);
    scp->add_flag("--ksvd", sc.ksvd, "Also compute K by SVD at every point (slow)");

    SchmidtOpts sh;
    auto* shp = app.add_subcommand("schmidt", "Schmidt number by SVD, 4D integral and analytic forms");
    shp->add_flag("--no-refine", sh.no_refine);
    shp->add_option("--step", sh.step, "Grid step [rad/s]");
    shp->add_option("--half-width", sh.half_width, "Grid half-width [rad/s]");

    TemporalOpts to;
    auto* tp = app.add_subcommand("temporal", "Two-time wave packet and temporal signals");
    tp->add_option("--t2", to.t2, "Fixed t2 values for coincidence slices, e.g. 0 1.5ps")->delimiter(',');
    tp->add_flag("--rt", to.rt, "Require the temporal R_t; refused (exit 4) for short pulses");
    tp->add_flag("--no-packet", to.no_packet, "Skip the two-time grid");
    tp->add_option("--localization-points", to.localization_points);

    AngularOpts an;
    auto* ap = app.add_subcommand("angular", "Angular-entanglement parameters");
    ap->add_option("--np", an.np)->required();
    ap->add_option("--np-prime", an.np_prime)->required();
    ap->add_option("--alpha0", an.alpha0, "Pump angular divergence [rad]")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    const auto t0 = std::chrono::steady_clock::now();
    Run run;
    try {
        run.cfg = resolve_config(g, run);
        json summary;
        std::string name;
        if (sp->parsed()) {
            run.command = "spectrum";
            summary = cmd_spectrum(run, g, so);
        } else if (scp->parsed()) {
            run.command = "scan";
            summary = cmd_scan(run, g, sc);
        } else if (shp->parsed()) {
            run.command = "schmidt";
            summary = cmd_schmidt(run, g, sh);
        } else if (tp->parsed()) {
            run.command = "temporal";
            summary = cmd_temporal(run, g, to);
        } else {
            run.command = "angular";
            summary = cmd_angular(run, g, an);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return finish(run, g, std::move(summary), run.command + ".json", secs);
    } catch (const ValidationError& e) {
        std::cerr << "error [" << stage << "]: " << e.what() << '\n';
        return kConfig;
    } catch (const NumericError& e) {
        std::cerr << "error [" << stage << "]: " << e.what() << '\n';
        return kNumeric;
    } catch (const RegimeError& e) {
        std::cerr << "error [" << stage << "]: " << e.what() << '\n';
        return kRegime;
    } catch (const IoError& e) {
        std::cerr << "error [" << stage << "]: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error [" << stage << "]: " << e.what() << '\n';
        return kNumeric;
    }
}
