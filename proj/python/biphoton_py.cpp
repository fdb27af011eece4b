#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "biphoton/config.hpp"
#include "biphoton/error.hpp"
#include "biphoton/params.hpp"
#include "biphoton/schmidt.hpp"
#include "biphoton/special.hpp"
#include "biphoton/spectral.hpp"
#include "biphoton/temporal.hpp"

namespace py = pybind11;
using namespace biphoton;
using namespace pybind11::literals;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

std::string repr(const PhysicalConfig& c) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "Config(A=%.6g, B=%.6g, L=%.6g, lambda0=%.6g, tau=%.6g)", c.A, c.B, c.L, c.lambda0,
                  c.tau);
    return buf;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pulsed-pump type-I SPDC biphoton model";

    auto err = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", err.ptr());
    auto nerr = py::register_exception<NumericError>(m, "NumericError", err.ptr());
    auto rerr = py::register_exception<RegimeError>(m, "RegimeError", err.ptr());
    py::register_exception<IoError>(m, "IoError", err.ptr());
    py::register_exception<NonConvergence>(m, "NonConvergence", nerr.ptr());
    py::register_exception<NoHalfCrossing>(m, "NoHalfCrossing", nerr.ptr());
    py::register_exception<ZeroKernel>(m, "ZeroKernel", nerr.ptr());
    py::register_exception<DomainOverflow>(m, "DomainOverflow", nerr.ptr());
    py::register_exception<ShortPulseRegime>(m, "ShortPulseRegime", rerr.ptr());
    py::register_exception<AnalyticOutOfRegime>(m, "AnalyticOutOfRegime", rerr.ptr());
    py::register_exception<ApproxOutOfDomain>(m, "ApproxOutOfDomain", rerr.ptr());
    py::register_exception<RegionMismatch>(m, "RegionMismatch", rerr.ptr());
    py::register_exception<OutOfBranch>(m, "OutOfBranch", rerr.ptr());

    // configuration

    py::class_<PhysicalConfig>(m, "Config")
        .def(py::init([](double A, double B, double L, double lambda0, double tau, double c) {
                 PhysicalConfig cfg{A, B, L, lambda0, tau, c};
                 cfg.validate();
                 return cfg;
             }),
             py::kw_only(), "A"_a = 0.17, "B"_a = 0.069, "L"_a = 0.5e-2, "lambda0"_a = 400e-9, "tau"_a = 50e-15,
             "c"_a = kSpeedOfLight)
        .def_readwrite("A", &PhysicalConfig::A)
        .def_readwrite("B", &PhysicalConfig::B)
        .def_readwrite("L", &PhysicalConfig::L)
        .def_readwrite("lambda0", &PhysicalConfig::lambda0)
        .def_readwrite("tau", &PhysicalConfig::tau)
        .def_readwrite("c", &PhysicalConfig::c)
        .def("validate", &PhysicalConfig::validate)
        .def("with_tau",
             [](PhysicalConfig c, double tau) {
                 c.tau = tau;
                 c.validate();
                 return c;
             })
        .def(py::self == py::self)
        .def("__repr__", &repr);

    m.def("parse_config", [](const std::string& s) { return parse_config(s); }, "text"_a);
    m.def("load_config", &load_config, "path"_a);
    m.def("format_config", &format_config, "cfg"_a);
    m.def("parse_quantity", [](const std::string& s, const std::string& dim) {
        if (dim == "time") return parse_quantity(s, Dimension::Time);
        if (dim == "length") return parse_quantity(s, Dimension::Length);
        if (dim == "none") return parse_quantity(s, Dimension::Dimensionless);
        throw ValidationError("parse_quantity: dimension must be 'time', 'length' or 'none'");
    }, "text"_a, "dimension"_a);

    py::class_<DerivedConstants>(m, "DerivedConstants")
        .def_readonly("omega0", &DerivedConstants::omega0)
        .def_readonly("eta", &DerivedConstants::eta)
        .def_readonly("a_const", &DerivedConstants::a_const)
        .def_readonly("tau0", &DerivedConstants::tau0);
    m.def("derive", &derive, "cfg"_a);
    m.def("tau_for_eta", &tau_for_eta, "cfg"_a, "eta"_a);
    m.def("walkoff_time", &walkoff_time, "cfg"_a);

    py::class_<AngularParameters>(m, "AngularParameters")
        .def_readonly("A_tilde", &AngularParameters::A_tilde)
        .def_readonly("B_tilde", &AngularParameters::B_tilde)
        .def_readonly("eta_tilde", &AngularParameters::eta_tilde)
        .def_readonly("R_min_angular", &AngularParameters::R_min_angular);
    m.def("angular_parameters", &angular_parameters, "cfg"_a, "n_p"_a, "n_p_prime"_a, "alpha0"_a);

    // curves

    py::class_<FwhmResult>(m, "Fwhm")
        .def_readonly("width", &FwhmResult::width)
        .def_readonly("x_left", &FwhmResult::x_left)
        .def_readonly("x_right", &FwhmResult::x_right)
        .def_readonly("peak_x", &FwhmResult::peak_x)
        .def_readonly("peak_y", &FwhmResult::peak_y);
    py::class_<MeasuredCurve>(m, "MeasuredCurve")
        .def_property_readonly("x", [](const MeasuredCurve& c) { return to_array(c.curve.xs); })
        .def_property_readonly("y", [](const MeasuredCurve& c) { return to_array(c.curve.ys); })
        .def_property_readonly("meta", [](const MeasuredCurve& c) { return c.curve.meta; })
        .def_readonly("fwhm", &MeasuredCurve::width);
    m.def("fwhm", [](std::vector<double> x, std::vector<double> y) { return fwhm(Curve(std::move(x), std::move(y))); },
          "x"_a, "y"_a);

    // special functions

    m.def("erf_complex", py::vectorize(&erf_complex), "z"_a);
    m.def("faddeeva", py::vectorize(&faddeeva), "z"_a);
    m.def("sinc", py::vectorize(&sinc), "x"_a);

    // spectral

    py::enum_<Axis>(m, "Axis").value("frequency", Axis::Frequency).value("wavelength", Axis::Wavelength);
    py::enum_<SingleMethod>(m, "SingleMethod")
        .value("numeric", SingleMethod::Numeric)
        .value("analytic", SingleMethod::Analytic)
        .value("analytic_long", SingleMethod::AnalyticLong);
    py::class_<Window>(m, "Window")
        .def(py::init([](double lo, double hi, int points) { return Window{lo, hi, points}; }), "lo"_a = 0.0,
             "hi"_a = 0.0, "points"_a = 2001)
        .def_readwrite("lo", &Window::lo)
        .def_readwrite("hi", &Window::hi)
        .def_readwrite("points", &Window::points);

    m.def("nu_to_lambda", &nu_to_lambda, "nu"_a, "cfg"_a);
    m.def("lambda_to_nu", &lambda_to_nu, "wavelength"_a, "cfg"_a);
    m.def("mismatch", &mismatch, "nu1"_a, "nu2"_a, "cfg"_a);
    m.def("phase_match_curve", &phase_match_curve, "nu2"_a, "cfg"_a);
    m.def(
        "jsa",
        [](py::array_t<double, py::array::forcecast> nu1, py::array_t<double, py::array::forcecast> nu2,
           const PhysicalConfig& cfg) {
            return py::vectorize([&cfg](double a, double b) { return jsa(a, b, cfg); })(nu1, nu2);
        },
        "nu1"_a, "nu2"_a, "cfg"_a, "Joint spectral amplitude; broadcasts over numpy arrays.");
    m.def("coincidence_spectrum", &coincidence_spectrum, "nu2"_a, "window"_a = Window{}, "cfg"_a = PhysicalConfig{},
          "axis"_a = Axis::Frequency);
    m.def("pump_spectrum", &pump_spectrum, "nu2"_a, "window"_a = Window{}, "cfg"_a = PhysicalConfig{},
          "axis"_a = Axis::Frequency);
    m.def("single_particle_spectrum", &single_particle_spectrum, "window"_a = Window{}, "cfg"_a = PhysicalConfig{},
          "method"_a = SingleMethod::Numeric, "axis"_a = Axis::Frequency);
    m.def("coincidence_width_estimate", &coincidence_width_estimate, "cfg"_a);
    m.def("pump_width", &pump_width, "cfg"_a);
    m.def("single_width_short", &single_width_short, "cfg"_a);
    m.def("single_width_long", &single_width_long, "cfg"_a);

    py::class_<RParameters>(m, "RParameters")
        .def_readonly("R_short", &RParameters::R_short)
        .def_readonly("R_long", &RParameters::R_long)
        .def_readonly("R_interp", &RParameters::R_interp);
    m.def("r_parameter", &r_parameter, "cfg"_a);
    py::class_<RMinimum>(m, "RMinimum")
        .def_readonly("eta", &RMinimum::eta)
        .def_readonly("tau", &RMinimum::tau)
        .def_readonly("R", &RMinimum::R);
    m.def("r_min", &r_min, "cfg"_a);
    py::class_<RMeasured>(m, "RMeasured")
        .def_readonly("R", &RMeasured::R)
        .def_readonly("single_width", &RMeasured::single_width)
        .def_readonly("coincidence_width", &RMeasured::coincidence_width);
    m.def("r_measured", &r_measured, "cfg"_a);

    // schmidt

    py::class_<SchmidtGridSpec>(m, "SchmidtGrid")
        .def(py::init([](double half_width, double step, double band, bool dense, bool refine, double rel_change) {
                 SchmidtGridSpec g;
                 g.half_width = half_width;
                 g.step = step;
                 g.band = band;
                 g.dense = dense;
                 g.refine = refine;
                 g.rel_change = rel_change;
                 return g;
             }),
             py::kw_only(), "half_width"_a = 0.0, "step"_a = 0.0, "band"_a = 0.0, "dense"_a = false,
             "refine"_a = true, "rel_change"_a = 5e-3)
        .def_readwrite("half_width", &SchmidtGridSpec::half_width)
        .def_readwrite("step", &SchmidtGridSpec::step)
        .def_readwrite("band", &SchmidtGridSpec::band)
        .def_readwrite("dense", &SchmidtGridSpec::dense)
        .def_readwrite("refine", &SchmidtGridSpec::refine)
        .def_readwrite("rel_change", &SchmidtGridSpec::rel_change)
        .def_readwrite("max_samples", &SchmidtGridSpec::max_samples);
    py::class_<RefinementStep>(m, "RefinementStep")
        .def_readonly("n", &RefinementStep::n)
        .def_readonly("w", &RefinementStep::w)
        .def_readonly("h", &RefinementStep::h)
        .def_readonly("K", &RefinementStep::K);
    py::class_<SchmidtResult>(m, "SchmidtResult")
        .def_readonly("K", &SchmidtResult::K)
        .def_property_readonly("coefficients", [](const SchmidtResult& r) { return to_array(r.coeffs); })
        .def_readonly("method", &SchmidtResult::method)
        .def_readonly("trace", &SchmidtResult::trace)
        .def_readonly("final_grid", &SchmidtResult::final_grid);
    // Python kernels are accepted but slow; the built-in JSA is used when none is given.
    m.def("schmidt_svd", &schmidt_svd, "cfg"_a = PhysicalConfig{}, "grid"_a = SchmidtGridSpec{}, "kernel"_a = Kernel{});
    m.def("schmidt_integral4d", &schmidt_integral4d, "cfg"_a = PhysicalConfig{}, "grid"_a = SchmidtGridSpec{},
          "kernel"_a = Kernel{});
    m.def("auto_grid", [](const PhysicalConfig& c) { return auto_grid(c); }, "cfg"_a);

    py::class_<AnalyticK>(m, "AnalyticK")
        .def_readonly("K_short", &AnalyticK::K_short)
        .def_readonly("K_long", &AnalyticK::K_long)
        .def_readonly("K_interp", &AnalyticK::K_interp);
    m.def("k_analytic", &k_analytic, "cfg"_a);
    m.def("kr_ratio", &kr_ratio, "eta"_a);
    py::class_<EntanglementReport>(m, "EntanglementReport")
        .def_readonly("eta", &EntanglementReport::eta)
        .def_readonly("R_short", &EntanglementReport::R_short)
        .def_readonly("R_long", &EntanglementReport::R_long)
        .def_readonly("R_interp", &EntanglementReport::R_interp)
        .def_readonly("K_short", &EntanglementReport::K_short)
        .def_readonly("K_long", &EntanglementReport::K_long)
        .def_readonly("K_interp", &EntanglementReport::K_interp)
        .def_readonly("K_numeric", &EntanglementReport::K_numeric)
        .def_readonly("KR_ratio", &EntanglementReport::KR_ratio);
    m.def("entanglement_report", &entanglement_report, "cfg"_a, "K_numeric"_a = py::none());

    // temporal

    py::class_<PsiOptions>(m, "PsiOptions")
        .def(py::init([](double tol) { return PsiOptions{tol}; }), "tol"_a = 1e-10)
        .def_readwrite("tol", &PsiOptions::tol);
    py::enum_<PsiMethod>(m, "PsiMethod")
        .value("exact", PsiMethod::Exact)
        .value("erf", PsiMethod::Erf)
        .value("exp", PsiMethod::Exp);
    py::enum_<Region>(m, "Region").value("I", Region::I).value("II", Region::II).value("III", Region::III);
    py::class_<TimeWindow>(m, "TimeWindow")
        .def(py::init([](double lo, double hi, int points) { return TimeWindow{lo, hi, points}; }), "lo"_a = 0.0,
             "hi"_a = 0.0, "points"_a = 1024)
        .def_readwrite("lo", &TimeWindow::lo)
        .def_readwrite("hi", &TimeWindow::hi)
        .def_readwrite("points", &TimeWindow::points);
    m.def("default_time_window", &default_time_window, "cfg"_a, "points"_a = 1024);

    m.def(
        "psi",
        [](py::array_t<double, py::array::forcecast> t1, py::array_t<double, py::array::forcecast> t2,
           const PhysicalConfig& cfg, PsiMethod method) {
            const ExitFaceAmplitude a(cfg);
            return py::vectorize([&](double x, double y) { return a(x, y, method); })(t1, t2);
        },
        "t1"_a, "t2"_a, "cfg"_a = PhysicalConfig{}, "method"_a = PsiMethod::Exact,
        "Exit-face two-time amplitude; broadcasts over numpy arrays.");

    py::class_<TemporalPacket>(m, "TemporalPacket")
        .def_property_readonly("t1", [](const TemporalPacket& p) { return to_array(p.t1s); })
        .def_property_readonly("t2", [](const TemporalPacket& p) { return to_array(p.t2s); })
        .def_readonly("values", &TemporalPacket::values);
    m.def("temporal_packet", &temporal_packet, "cfg"_a = PhysicalConfig{}, "window"_a = TimeWindow{},
          "method"_a = PsiMethod::Exact, "opt"_a = PsiOptions{});

    m.def("diagonal_profile", &diagonal_profile, "cfg"_a = PhysicalConfig{}, "window"_a = TimeWindow{},
          "opt"_a = PsiOptions{});
    m.def("coincidence_signal", &coincidence_signal, "t2"_a, "cfg"_a = PhysicalConfig{}, "window"_a = TimeWindow{},
          "opt"_a = PsiOptions{});
    m.def("single_particle_signal", &single_particle_signal, "cfg"_a = PhysicalConfig{}, "window"_a = TimeWindow{},
          "opt"_a = PsiOptions{});
    m.def("coincidence_width_analytic", &coincidence_width_analytic, "t2"_a, "cfg"_a);
    m.def("single_duration_analytic", &single_duration_analytic, "cfg"_a);
    m.def("region_I_II_crossing", &region_I_II_crossing, "cfg"_a);
    m.def("classify_region", &classify_region, "cfg"_a, "t_plus"_a);
    m.def("localization_half_width",
          [](const PhysicalConfig& c, double tp) { return localization_half_width(ExitFaceAmplitude(c), tp); },
          "cfg"_a, "t_plus"_a);
    m.def(
        "long_pulse_factor",
        [](py::array_t<double, py::array::forcecast> tm, const PhysicalConfig& cfg) {
            return py::vectorize([&cfg](double x) { return long_pulse_factor(x, cfg); })(tm);
        },
        "t_minus"_a, "cfg"_a);
    m.def("long_pulse_center", &long_pulse_center, "cfg"_a);

    py::class_<RtReport>(m, "RtReport")
        .def_readonly("R_t", &RtReport::R_t)
        .def_readonly("R_long", &RtReport::R_long)
        .def_readonly("K_long", &RtReport::K_long)
        .def_readonly("R_long_scaled", &RtReport::R_long_scaled)
        .def_readonly("K_long_scaled", &RtReport::K_long_scaled);
    m.def("rt_parameter", &rt_parameter, "cfg"_a);

    py::class_<FactorizationCheck>(m, "FactorizationCheck")
        .def_readonly("rms", &FactorizationCheck::rms)
        .def_readonly("samples", &FactorizationCheck::samples)
        .def_readonly("center", &FactorizationCheck::center);
    m.def("long_pulse_factorization", &long_pulse_factorization, "cfg"_a, "center"_a = std::nan(""), "n"_a = 41,
          "opt"_a = PsiOptions{});
}
