#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "smslab/config.hpp"
#include "smslab/norms.hpp"
#include "smslab/runner.hpp"

namespace py = pybind11;
using namespace smslab;

namespace {

ComplexField complex_field_from(const Grid& g, py::array_t<Complex, py::array::c_style | py::array::forcecast> a)
{
    if (static_cast<std::size_t>(a.size()) != g.size())
        throw std::invalid_argument("array size does not match the grid");
    ComplexField f(g);
    std::copy(a.data(), a.data() + a.size(), f.values.begin());
    return f;
}

RealField real_field_from(const Grid& g, py::array_t<double, py::array::c_style | py::array::forcecast> a)
{
    if (static_cast<std::size_t>(a.size()) != g.size())
        throw std::invalid_argument("array size does not match the grid");
    RealField f(g);
    std::copy(a.data(), a.data() + a.size(), f.values.begin());
    return f;
}

// explicit shape vectors: the scalar-count array_t ctor builds a stride-0
// (broadcast) array on pybind11 2.9
py::array to_numpy(const ComplexField& f)
{
    py::array_t<Complex> a(std::vector<py::ssize_t>{static_cast<py::ssize_t>(f.size())});
    std::copy(f.values.begin(), f.values.end(), a.mutable_data());
    if (f.grid.d == 2) return a.reshape({f.grid.n, f.grid.n});
    return a;
}

py::array to_numpy(const RealField& f)
{
    py::array_t<double> a(std::vector<py::ssize_t>{static_cast<py::ssize_t>(f.size())});
    std::copy(f.values.begin(), f.values.end(), a.mutable_data());
    if (f.grid.d == 2) return a.reshape({f.grid.n, f.grid.n});
    return a;
}

SourceTerm wrap_source(const Grid& g, const py::function& f)
{
    return [g, f](double t) {
        py::gil_scoped_acquire gil;
        auto arr = f(t).cast<py::array_t<Complex, py::array::c_style | py::array::forcecast>>();
        return complex_field_from(g, arr);
    };
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Grid, mollifier, evolution and rate-experiment kernels";

    py::class_<Grid>(m, "Grid")
        .def_readonly("d", &Grid::d)
        .def_readonly("half_width", &Grid::half_width)
        .def_readonly("n", &Grid::n)
        .def_readonly("h", &Grid::h)
        .def("size", &Grid::size)
        .def("nodes",
             [](const Grid& g) {
                 py::array_t<double> a({static_cast<py::ssize_t>(g.size()), static_cast<py::ssize_t>(g.d)});
                 auto r = a.mutable_unchecked<2>();
                 for (std::size_t k = 0; k < g.size(); ++k) {
                     const auto x = g.node(k);
                     for (int ax = 0; ax < g.d; ++ax) r(static_cast<py::ssize_t>(k), ax) = x[ax];
                 }
                 return a;
             })
        .def("__repr__", [](const Grid& g) {
            std::ostringstream os;
            os << "Grid(d=" << g.d << ", half_width=" << g.half_width << ", n=" << g.n << ")";
            return os.str();
        });
    m.def("build_grid", &build_grid, py::arg("d"), py::arg("half_width"), py::arg("n"));

    py::class_<ComplexField>(m, "ComplexField")
        .def(py::init(&complex_field_from), py::arg("grid"), py::arg("values"))
        .def_readonly("grid", &ComplexField::grid)
        .def_property_readonly("values", [](const ComplexField& f) { return to_numpy(f); });

    py::class_<RealField>(m, "RealField")
        .def(py::init(&real_field_from), py::arg("grid"), py::arg("values"))
        .def_readonly("grid", &RealField::grid)
        .def_property_readonly("values", [](const RealField& f) { return to_numpy(f); });

    m.def("l2_norm", py::overload_cast<const ComplexField&>(&l2_norm));
    m.def("h2_norm", &h2_norm);
    m.def("w1inf_norm", &w1inf_norm);
    m.def("inner_product", &inner_product);
    m.def("gradient", py::overload_cast<const ComplexField&>(&gradient));
    m.def("laplacian", &laplacian);

    py::class_<Mollifier>(m, "Mollifier")
        .def_static("make", &Mollifier::make, py::arg("variant"), py::arg("dim") = 1)
        .def_property_readonly("tag", &Mollifier::tag)
        .def_property_readonly("support_radius", &Mollifier::support_radius)
        .def("value", [](const Mollifier& p, double x) { return p.value(x); })
        .def("scaled", [](const Mollifier& p, double x, double eps) { return p.scaled(x, eps); })
        .def("primitive", &Mollifier::primitive)
        .def("second_moment", &Mollifier::second_moment);

    py::class_<CoefficientSpec>(m, "CoefficientSpec")
        .def_readonly("background", &CoefficientSpec::background)
        .def("is_regular", &CoefficientSpec::is_regular)
        .def("__str__", &format_coefficient);
    m.def("parse_coefficient", &parse_coefficient);
    m.def("evaluate_coefficient", &evaluate_coefficient);

    // DataSpec is a variant; register the alternatives so the caster works
    py::class_<GaussianData>(m, "GaussianData")
        .def_readonly("center", &GaussianData::center)
        .def_readonly("a", &GaussianData::a)
        .def_readonly("k0", &GaussianData::k0)
        .def("__str__", [](const GaussianData& d) { return format_data(DataSpec{d}); });
    py::class_<DeltaData>(m, "DeltaData")
        .def_readonly("center", &DeltaData::center)
        .def_readonly("weight", &DeltaData::weight)
        .def("__str__", [](const DeltaData& d) { return format_data(DataSpec{d}); });
    py::class_<SampledData>(m, "SampledData")
        .def_readonly("field", &SampledData::field)
        .def("__str__", [](const SampledData& d) { return format_data(DataSpec{d}); });
    m.def("parse_data", &parse_data);
    m.def("evaluate_data", &evaluate_data);
    m.def("format_data", &format_data);

    py::class_<RegularizedCoefficient>(m, "RegularizedCoefficient")
        .def_readonly("field", &RegularizedCoefficient::field)
        .def_readonly("epsilon", &RegularizedCoefficient::epsilon)
        .def_readonly("c0", &RegularizedCoefficient::c0)
        .def_readonly("w1inf", &RegularizedCoefficient::w1inf);
    m.def("regularize", &regularize, py::arg("spec"), py::arg("psi"), py::arg("eps"), py::arg("grid"),
          py::arg("quiet") = false);
    m.def("regularize_data", &regularize_data, py::arg("spec"), py::arg("psi"), py::arg("eps"), py::arg("grid"),
          py::arg("quiet") = false);

    py::class_<EpsilonLadder>(m, "EpsilonLadder").def_readonly("values", &EpsilonLadder::values);
    m.def("make_ladder", &make_ladder, py::arg("eps0") = 0.5, py::arg("ratio") = 0.5, py::arg("count") = 5);
    m.def("moderateness_ladder", &moderateness_ladder);

    py::enum_<StaggerMean>(m, "StaggerMean")
        .value("Arithmetic", StaggerMean::Arithmetic)
        .value("Harmonic", StaggerMean::Harmonic);

    py::class_<SpatialOperator>(m, "SpatialOperator")
        .def("apply", &SpatialOperator::apply)
        .def("energy_form", &SpatialOperator::energy_form)
        .def_property_readonly("max_coefficient", &SpatialOperator::max_coefficient);
    m.def("assemble_operator", &assemble_operator, py::arg("g"), py::arg("mean") = StaggerMean::Arithmetic);

    py::class_<StepperConfig>(m, "StepperConfig")
        .def(py::init([](std::optional<double> dt, double T, double tol, int stride) {
                 StepperConfig c;
                 c.dt = dt;
                 c.T = T;
                 c.tolerance = tol;
                 c.snapshot_stride = stride;
                 return c;
             }),
             py::arg("dt") = std::nullopt, py::arg("T") = 1.0, py::arg("tolerance") = 1e-10,
             py::arg("snapshot_stride") = 0)
        .def_readwrite("T", &StepperConfig::T)
        .def_readwrite("tolerance", &StepperConfig::tolerance)
        .def_readwrite("snapshot_stride", &StepperConfig::snapshot_stride);

    py::class_<SolutionTrace>(m, "SolutionTrace")
        .def_readonly("times", &SolutionTrace::times)
        .def_readonly("l2", &SolutionTrace::l2)
        .def_readonly("h2", &SolutionTrace::h2)
        .def_readonly("energy_form", &SolutionTrace::energy_form)
        .def_readonly("drift", &SolutionTrace::drift)
        .def_readonly("final_field", &SolutionTrace::final_field)
        .def("max_drift", &SolutionTrace::max_drift)
        .def("max_energy_drift", &SolutionTrace::max_energy_drift);

    m.def("auto_dt", &auto_dt);
    m.def("step_cn", &step_cn, py::arg("L"), py::arg("u"), py::arg("dt"), py::arg("tol") = 1e-10,
          py::arg("stats") = nullptr);
    m.def("solve_homogeneous", &solve_homogeneous);
    m.def(
        "solve_forced",
        [](const SpatialOperator& L, const ComplexField& u0, const py::function& f, const StepperConfig& cfg) {
            return solve_forced(L, u0, wrap_source(L.grid(), f), cfg);
        },
        py::arg("L"), py::arg("u0"), py::arg("f"), py::arg("cfg"));
    m.def(
        "duhamel_compose",
        [](const SpatialOperator& L, const ComplexField& v0, const py::function& f, const StepperConfig& cfg) {
            return duhamel_compose(L, v0, wrap_source(L.grid(), f), cfg);
        },
        py::arg("L"), py::arg("v0"), py::arg("f"), py::arg("cfg"));
    m.def("time_derivative_data", &time_derivative_data, py::arg("g"), py::arg("u0"),
          py::arg("mean") = StaggerMean::Arithmetic);

    py::class_<OracleResult>(m, "OracleResult")
        .def_readonly("field", &OracleResult::field)
        .def_readonly("error_estimate", &OracleResult::error_estimate);
    m.def("fourier_constant_solution", &fourier_constant_solution);
    m.def("dense_reference_step", &dense_reference_step);

    m.def("fit_rate", [](const std::vector<std::pair<double, double>>& pairs) {
        const FitResult f = fit_rate(pairs);
        return py::make_tuple(f.exponent, f.residual);
    });

    py::class_<Problem>(m, "Problem")
        .def(py::init<>())
        .def_readwrite("coefficient_text", &Problem::coefficient_text)
        .def_readwrite("data_text", &Problem::data_text)
        .def_readwrite("mollifier", &Problem::mollifier)
        .def_readwrite("mollifier_alt", &Problem::mollifier_alt)
        .def_readwrite("grid", &Problem::grid)
        .def_readwrite("stepper", &Problem::stepper)
        .def_readwrite("ladder", &Problem::ladder)
        .def_readwrite("mollify_data", &Problem::mollify_data)
        .def_readwrite("jobs", &Problem::jobs);

    py::class_<EnergyLedger>(m, "EnergyLedger")
        .def_readonly("times", &EnergyLedger::times)
        .def_readonly("drift", &EnergyLedger::drift)
        .def_readonly("energy_form", &EnergyLedger::energy_form)
        .def_readonly("max_drift", &EnergyLedger::max_drift)
        .def_readonly("max_energy_drift", &EnergyLedger::max_energy_drift)
        .def_readonly("hermitian_ok", &EnergyLedger::hermitian_ok);
    m.def("run_energy", &run_energy, py::call_guard<py::gil_scoped_release>());

    py::class_<RateReport>(m, "RateReport")
        .def_readonly("pairs", &RateReport::pairs)
        .def_property_readonly("exponent", [](const RateReport& r) { return r.fit.exponent; })
        .def_property_readonly("residual", [](const RateReport& r) { return r.fit.residual; })
        .def_readonly("direction", &RateReport::direction);
    m.def("run_moderateness", &run_moderateness, py::arg("problem"), py::arg("fit_solution_h2") = false,
          py::call_guard<py::gil_scoped_release>());

    py::class_<UniquenessReport>(m, "UniquenessReport")
        .def_readonly("epsilons", &UniquenessReport::epsilons)
        .def_readonly("solution_diff", &UniquenessReport::solution_diff)
        .def_readonly("coeff_diff", &UniquenessReport::coeff_diff)
        .def_readonly("decay_exponent", &UniquenessReport::decay_exponent)
        .def_readonly("live", &UniquenessReport::live);
    m.def("run_uniqueness", &run_uniqueness, py::call_guard<py::gil_scoped_release>());

    py::class_<ConsistencyReport>(m, "ConsistencyReport")
        .def_readonly("epsilons", &ConsistencyReport::epsilons)
        .def_readonly("solution_err", &ConsistencyReport::solution_err)
        .def_readonly("coeff_err", &ConsistencyReport::coeff_err)
        .def_readonly("data_err", &ConsistencyReport::data_err)
        .def_readonly("live", &ConsistencyReport::live)
        .def_readonly("scheme_error_estimate", &ConsistencyReport::scheme_error_estimate)
        .def_property_readonly("solution_slope",
                               [](const ConsistencyReport& r) { return -r.solution_fit.exponent; })
        .def_property_readonly("coeff_slope", [](const ConsistencyReport& r) { return -r.coeff_fit.exponent; });
    m.def("run_consistency", &run_consistency, py::arg("problem"), py::arg("refinement") = 2,
          py::call_guard<py::gil_scoped_release>());

    py::class_<DuhamelReport>(m, "DuhamelReport")
        .def_readonly("dts", &DuhamelReport::dts)
        .def_readonly("discrepancy", &DuhamelReport::discrepancy)
        .def_readonly("refinement_slope", &DuhamelReport::refinement_slope)
        .def_readonly("discrepancy_at_default", &DuhamelReport::discrepancy_at_default);
    m.def("run_duhamel_check", &run_duhamel_check, py::arg("problem"), py::arg("eps"), py::arg("halvings") = 3,
          py::call_guard<py::gil_scoped_release>());

    m.def(
        "run_config",
        [](const std::string& path, std::optional<std::string> out_dir, int jobs) {
            ExperimentConfig cfg = parse_config(path);
            RunOptions opt;
            opt.output_dir_override = std::move(out_dir);
            opt.jobs = jobs;
            std::ostringstream log;
            int rc;
            {
                py::gil_scoped_release release;
                rc = run(cfg, opt, log);
            }
            return py::make_tuple(rc, log.str());
        },
        py::arg("path"), py::arg("out_dir") = std::nullopt, py::arg("jobs") = 0,
        "Parse a TOML experiment config and run its campaigns; returns (exit_code, summary_text)");
}
