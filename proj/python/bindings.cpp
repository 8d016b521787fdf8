#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "hcma/error.hpp"
#include "hcma/geodesic_envelope.hpp"
#include "hcma/grid_io.hpp"
#include "hcma/obstruction.hpp"
#include "hcma/regularity_probe.hpp"
#include "hcma/sharp_family.hpp"
#include "hcma/strip_harmonic.hpp"
#include "hcma/version.hpp"

namespace py = pybind11;
using namespace hcma;

namespace {

py::array_t<double> to_array(const GridFunction& f) {
    py::array_t<double> a({f.grid.nt, f.grid.nx, f.grid.ny});
    std::copy(f.values.begin(), f.values.end(), a.mutable_data());
    return a;
}

void from_array(GridFunction& f, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 3 || a.shape(0) != f.grid.nt || a.shape(1) != f.grid.nx || a.shape(2) != f.grid.ny)
        throw ValidationError("array shape must be (nt, nx, ny) of the grid");
    std::copy(a.data(), a.data() + a.size(), f.values.begin());
}

}  // namespace

PYBIND11_MODULE(_hcma, m) {
    m.doc() = "Weak geodesic toolkit: strip estimates, Hessian obstruction, envelope solver";
    m.attr("__version__") = version;

    auto base = py::register_exception<Error>(m, "HcmaError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<InsufficientResolution>(m, "InsufficientResolution", base.ptr());
    py::register_exception<InvalidPotential>(m, "InvalidPotential", base.ptr());
    py::register_exception<QuadratureFailure>(m, "QuadratureFailure", base.ptr());
    py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());
    py::register_exception<ConsistencyError>(m, "ConsistencyError", base.ptr());
    py::register_exception<ConstructiveFailure>(m, "ConstructiveFailure", base.ptr());

    // strip
    py::class_<QuadratureSpec>(m, "QuadratureSpec")
        .def(py::init<>())
        .def_readwrite("tolerance", &QuadratureSpec::tolerance)
        .def_readwrite("max_subdivisions", &QuadratureSpec::max_subdivisions)
        .def_readwrite("truncation", &QuadratureSpec::truncation);

    py::class_<IJKValues>(m, "IJKValues")
        .def_readonly("I", &IJKValues::I)
        .def_readonly("J", &IJKValues::J)
        .def_readonly("K", &IJKValues::K)
        .def_readonly("lam", &IJKValues::lambda)
        .def_readonly("err_I", &IJKValues::err_I)
        .def_readonly("err_J", &IJKValues::err_J)
        .def_readonly("err_K", &IJKValues::err_K);

    py::class_<CombinationValue>(m, "CombinationValue")
        .def_readonly("value", &CombinationValue::value)
        .def_readonly("psi1", &CombinationValue::psi1)
        .def_readonly("psi2", &CombinationValue::psi2)
        .def_readonly("psi3", &CombinationValue::psi3)
        .def_readonly("ijk", &CombinationValue::ijk);

    m.def("poisson_kernel", &poisson_kernel, py::arg("xi"), py::arg("eta"));
    m.def(
        "harmonic_extend",
        [](std::function<double(double)> lower, std::function<double(double)> upper, double xi, double eta,
           double sup_bound, double decay_hint, const QuadratureSpec& quad) {
            StripBoundaryData d{std::move(lower), std::move(upper), decay_hint, sup_bound};
            const QuadResult r = harmonic_extend_with_error(d, StripPoint{xi, eta}, quad);
            return py::make_tuple(r.value, r.abserr);
        },
        py::arg("lower"), py::arg("upper"), py::arg("xi"), py::arg("eta"), py::arg("sup_bound") = 1.0,
        py::arg("decay_hint") = 0.0, py::arg("quad") = QuadratureSpec{},
        "Bounded harmonic extension into the strip; returns (value, error estimate).");
    m.def("test_function", &test_function, py::arg("s"), py::arg("lam"));
    m.def("ijk_functionals", &ijk_functionals, py::arg("lam"), py::arg("quad") = QuadratureSpec{});
    m.def("obstruction_combination", &obstruction_combination, py::arg("p"), py::arg("q_abs"), py::arg("r"),
          py::arg("lam"), py::arg("quad") = QuadratureSpec{});

    // obstruction
    py::class_<ObstructionVerdict>(m, "ObstructionVerdict")
        .def_readonly("satisfied", &ObstructionVerdict::satisfied)
        .def_readonly("margin", &ObstructionVerdict::margin)
        .def_readonly("witness", &ObstructionVerdict::witness)
        .def_readonly("sigma_max", &ObstructionVerdict::sigma_max);

    auto make_instance = [](const Eigen::MatrixXcd& omega, const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& q) {
        return ObstructionInstance{omega, p, q};
    };
    m.def(
        "check_obstruction",
        [make_instance](const Eigen::MatrixXcd& omega, const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& q) {
            return check_obstruction(make_instance(omega, p, q));
        },
        py::arg("omega"), py::arg("p"), py::arg("q"));
    m.def(
        "check_obstruction_sampled",
        [make_instance](const Eigen::MatrixXcd& omega, const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& q,
                        std::int64_t samples, std::uint64_t seed) {
            return check_obstruction_sampled(make_instance(omega, p, q), samples, seed);
        },
        py::arg("omega"), py::arg("p"), py::arg("q"), py::arg("samples") = 10000, py::arg("seed") = 0);

    // grids
    py::enum_<Topology>(m, "Topology").value("Torus", Topology::Torus).value("Patch", Topology::Patch);

    py::class_<GridSpec>(m, "GridSpec")
        .def_static("torus", &GridSpec::torus, py::arg("n"), py::arg("nt"))
        .def_static("centred_patch", &GridSpec::centred_patch, py::arg("n"), py::arg("nt"), py::arg("half"))
        .def_readonly("topology", &GridSpec::topology)
        .def_readonly("n", &GridSpec::n)
        .def_readwrite("nt", &GridSpec::nt)
        .def_readonly("nx", &GridSpec::nx)
        .def_readonly("ny", &GridSpec::ny)
        .def_property_readonly("h", &GridSpec::h)
        .def("t", &GridSpec::t)
        .def("x", &GridSpec::x)
        .def("y", &GridSpec::y)
        .def("__repr__", [](const GridSpec& g) {
            return "GridSpec(" + to_string(g.topology) + ", n=" + std::to_string(g.n) +
                   ", nt=" + std::to_string(g.nt) + ")";
        });

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init<const GridSpec&, double, double>(), py::arg("grid"), py::arg("omega11") = 1.0,
             py::arg("fill") = 0.0)
        .def_readonly("grid", &GridFunction::grid)
        .def_readwrite("omega11", &GridFunction::omega11)
        .def_readwrite("symmetric", &GridFunction::symmetric)
        .def_property("values", &to_array, &from_array, "Copy of the values, shape (nt, nx, ny)")
        .def("slice", &GridFunction::slice)
        .def("symmetry_residual", &GridFunction::symmetry_residual)
        .def("to_json", &grid_to_json)
        .def_static("from_json", &grid_from_json);

    m.def("save_grid_csv", &save_grid_csv);
    m.def("load_grid_csv", &load_grid_csv);

    // symmetric potentials
    py::class_<CutoffSpec>(m, "CutoffSpec")
        .def(py::init<>())
        .def_readwrite("rho", &CutoffSpec::rho)
        .def_readwrite("slope", &CutoffSpec::slope)
        .def_readwrite("mollify", &CutoffSpec::mollify)
        .def_readwrite("search", &CutoffSpec::search)
        .def_readwrite("psh_tol", &CutoffSpec::psh_tol);

    py::class_<BuiltPotential>(m, "BuiltPotential")
        .def_readonly("v", &BuiltPotential::v)
        .def_readonly("profile", &BuiltPotential::profile)
        .def_readonly("min_c", &BuiltPotential::min_c)
        .def_readonly("vzzbar0", &BuiltPotential::vzzbar0)
        .def_readonly("vzz0", &BuiltPotential::vzz0)
        .def_readonly("inner_radius", &BuiltPotential::inner_radius);

    m.def("build_symmetric_potential", &build_symmetric_potential, py::arg("grid"), py::arg("omega11"),
          py::arg("p"), py::arg("q"), py::arg("profile") = CutoffSpec{});

    // sharp family
    py::class_<FamilyCheck>(m, "FamilyCheck")
        .def_readonly("n", &FamilyCheck::n)
        .def_readonly("h", &FamilyCheck::h)
        .def_readonly("max_abs_det", &FamilyCheck::max_abs_det)
        .def_readonly("max_abs_det_interior", &FamilyCheck::max_abs_det_interior)
        .def_readonly("min_c", &FamilyCheck::min_c)
        .def_readonly("expected_min_c", &FamilyCheck::expected_min_c)
        .def_readonly("max_hessian_error", &FamilyCheck::max_hessian_error)
        .def_readonly("boundary_t0", &FamilyCheck::boundary_t0)
        .def_readonly("boundary_axis", &FamilyCheck::boundary_axis)
        .def_readonly("min_eig", &FamilyCheck::min_eig);

    py::class_<SharpnessRow>(m, "SharpnessRow")
        .def_readonly("epsilon", &SharpnessRow::epsilon)
        .def_readonly("two_plus_vzzbar", &SharpnessRow::two_plus_vzzbar)
        .def_readonly("abs_vzz", &SharpnessRow::abs_vzz)
        .def_readonly("margin", &SharpnessRow::margin);

    m.def("eval_family", [](double eps, double t, std::complex<double> z) {
        return eval_family(SharpFamilyParams{eps}, t, z);
    }, py::arg("epsilon"), py::arg("t"), py::arg("z"));
    m.def("verify_family", [](double eps, int n) { return verify_family(SharpFamilyParams{eps}, n); },
          py::arg("epsilon"), py::arg("n"));
    m.def("sharpness_limit", &sharpness_limit, py::arg("epsilons"));
    m.def("family_patch", &family_patch, py::arg("n"));
    m.def("sample_family", [](double eps, const GridSpec& g) { return sample_family(SharpFamilyParams{eps}, g); },
          py::arg("epsilon"), py::arg("grid"));

    // envelope
    py::class_<LatticeDirection>(m, "LatticeDirection")
        .def(py::init([](int a, int b, int c, int d) { return LatticeDirection{a, b, c, d}; }))
        .def_readonly("s_re", &LatticeDirection::s_re)
        .def_readonly("s_im", &LatticeDirection::s_im)
        .def_readonly("z_re", &LatticeDirection::z_re)
        .def_readonly("z_im", &LatticeDirection::z_im)
        .def("__eq__", &LatticeDirection::operator==);
    m.def("default_directions", &default_directions);

    py::enum_<SweepMode>(m, "SweepMode")
        .value("GaussSeidel", SweepMode::GaussSeidel)
        .value("Jacobi", SweepMode::Jacobi);

    py::class_<EnvelopeProblem>(m, "EnvelopeProblem")
        .def(py::init<>())
        .def_readwrite("grid", &EnvelopeProblem::grid)
        .def_readwrite("omega11", &EnvelopeProblem::omega11)
        .def_readwrite("v", &EnvelopeProblem::v)
        .def_readwrite("boundary", &EnvelopeProblem::boundary)
        .def_readwrite("directions", &EnvelopeProblem::directions)
        .def_readwrite("tol_sweep", &EnvelopeProblem::tol_sweep)
        .def_readwrite("max_sweeps", &EnvelopeProblem::max_sweeps)
        .def_readwrite("max_multiple", &EnvelopeProblem::max_multiple)
        .def_readwrite("phases", &EnvelopeProblem::phases)
        .def_readwrite("max_denominator", &EnvelopeProblem::max_denominator)
        .def_readwrite("kernel_candidates", &EnvelopeProblem::kernel_candidates)
        .def_readwrite("mode", &EnvelopeProblem::mode)
        .def_readwrite("threads", &EnvelopeProblem::threads)
        .def_readwrite("consistency_factor", &EnvelopeProblem::consistency_factor)
        .def("resolved_tol", &EnvelopeProblem::resolved_tol)
        .def("validate", &EnvelopeProblem::validate);

    py::class_<EnvelopeResult>(m, "EnvelopeResult")
        .def(py::init<>())
        .def_readwrite("u", &EnvelopeResult::u)
        .def_readonly("sweeps_used", &EnvelopeResult::sweeps_used)
        .def_readonly("final_update", &EnvelopeResult::final_update)
        .def_readonly("barrier_violation", &EnvelopeResult::barrier_violation)
        .def_readonly("hessian_min_eig", &EnvelopeResult::hessian_min_eig)
        .def_readonly("max_abs_det", &EnvelopeResult::max_abs_det)
        .def_readonly("lower_constant", &EnvelopeResult::lower_constant)
        .def_readonly("phase_sweeps", &EnvelopeResult::phase_sweeps)
        .def_readonly("direction_table", &EnvelopeResult::direction_table);

    py::class_<UniquenessProbe>(m, "UniquenessProbe")
        .def_readonly("max_difference", &UniquenessProbe::max_difference)
        .def_readonly("bump", &UniquenessProbe::bump)
        .def_readonly("from_upper", &UniquenessProbe::from_upper)
        .def_readonly("from_lower", &UniquenessProbe::from_lower);

    m.def("upper_barrier", &upper_barrier);
    m.def("solve_envelope", py::overload_cast<const EnvelopeProblem&>(&solve_envelope),
          py::call_guard<py::gil_scoped_release>());
    m.def("symmetrize_check", &symmetrize_check);
    m.def("uniqueness_probe", &uniqueness_probe, py::arg("problem"), py::arg("bump") = 1e-6,
          py::arg("tighten") = 1e-3, py::call_guard<py::gil_scoped_release>());

    // probes
    py::class_<TraceDiagnostics>(m, "TraceDiagnostics")
        .def_readonly("a_fit", &TraceDiagnostics::a_fit)
        .def_readonly("linear_residual", &TraceDiagnostics::linear_residual)
        .def_readonly("chord_slope", &TraceDiagnostics::chord_slope)
        .def_readonly("chord_residual", &TraceDiagnostics::chord_residual)
        .def_readonly("trace", &TraceDiagnostics::trace);

    py::class_<LambdaProbe>(m, "LambdaProbe")
        .def_readonly("lam", &LambdaProbe::lambda)
        .def_readonly("second_diff", &LambdaProbe::second_diff)
        .def_readonly("min_second_diff", &LambdaProbe::min_second_diff)
        .def_readonly("flagged", &LambdaProbe::flagged);

    py::class_<BlowupRow>(m, "BlowupRow")
        .def_readonly("n", &BlowupRow::n)
        .def_readonly("h", &BlowupRow::h)
        .def_readonly("radius", &BlowupRow::radius)
        .def_readonly("max_abs", &BlowupRow::max_abs)
        .def_readonly("oscillation", &BlowupRow::oscillation)
        .def_readonly("ok", &BlowupRow::ok)
        .def_readonly("note", &BlowupRow::note);

    m.def("linear_trace_test", &linear_trace_test, py::arg("result"), py::arg("i0") = -1, py::arg("j0") = -1);
    m.def("lambda_subharmonicity_probe", &lambda_subharmonicity_probe, py::arg("result"), py::arg("i0") = -1,
          py::arg("j0") = -1);
    m.def("blowup_rows", &blowup_rows, py::arg("u"), py::arg("radii"), py::arg("i0") = -1, py::arg("j0") = -1);
}
