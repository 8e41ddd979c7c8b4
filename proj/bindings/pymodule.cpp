#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rvsm/analysis.hpp"
#include "rvsm/certify.hpp"
#include "rvsm/empirical.hpp"
#include "rvsm/optimize.hpp"

namespace py = pybind11;
using namespace rvsm;

PYBIND11_MODULE(_rvsm, m) {
    m.doc() = "RVSM sparse training on the no-overlap ReLU network: closed-form "
              "population loss, thresholding operators, optimizers, and convergence checkers";

    py::register_exception<DegenerateVector>(m, "DegenerateVectorError", PyExc_ValueError);
    py::register_exception<ShapeMismatch>(m, "ShapeMismatchError", PyExc_ValueError);
    py::register_exception<NotConverged>(m, "NotConvergedError", PyExc_RuntimeError);
    py::register_exception<AnnulusViolation>(m, "AnnulusViolationError", PyExc_RuntimeError);

    // core
    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("uniform", &Rng::uniform)
        .def("gaussian", &Rng::gaussian)
        .def_property_readonly("seed", &Rng::seed)
        .def_static("child_seed", &Rng::child_seed, py::arg("seed"), py::arg("stream"));
    m.def("angle", &angle, py::arg("u"), py::arg("v"));
    m.def("sample_unit_sphere", &sample_unit_sphere, py::arg("d"), py::arg("rng"));
    m.def("sample_gaussian", &sample_gaussian, py::arg("n"), py::arg("rng"));

    // population loss
    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def(py::init<Vec, int, bool>(), py::arg("w_star"), py::arg("k"),
             py::arg("normalize") = true)
        .def_static("random", &ProblemSpec::random, py::arg("d"), py::arg("k"), py::arg("seed"))
        .def_property_readonly("w_star", &ProblemSpec::w_star)
        .def_property_readonly("k", &ProblemSpec::k)
        .def_property_readonly("dim", &ProblemSpec::dim)
        .def_property_readonly("a", &ProblemSpec::a)
        .def_property_readonly("b", &ProblemSpec::b);
    m.def("g_closed", &g_closed, py::arg("u"), py::arg("v"));
    m.def("loss", &loss, py::arg("w"), py::arg("spec"));
    m.def("grad", &grad, py::arg("w"), py::arg("spec"));
    m.def("finite_diff_grad", &finite_diff_grad, py::arg("w"), py::arg("spec"), py::arg("h"));
    py::enum_<CriticalKind>(m, "CriticalKind")
        .value("LOCAL_MAX", CriticalKind::LocalMax)
        .value("GLOBAL_MIN", CriticalKind::GlobalMin)
        .value("SADDLE", CriticalKind::Saddle);
    m.def("critical_points", &critical_points, py::arg("spec"));
    m.def("lipschitz_bound", &lipschitz_bound, py::arg("M"), py::arg("spec"));
    m.def("measure_lipschitz", &measure_lipschitz, py::arg("spec"), py::arg("M"),
          py::arg("n_pairs"), py::arg("rng"));

    // penalties
    py::enum_<PenaltyKind>(m, "PenaltyKind")
        .value("L1", PenaltyKind::L1)
        .value("L0", PenaltyKind::L0)
        .value("TL1", PenaltyKind::TL1);
    py::class_<Penalty>(m, "Penalty")
        .def(py::init<PenaltyKind, double, double>(), py::arg("kind"), py::arg("lambda_"),
             py::arg("a") = 1.0)
        .def_readonly("kind", &Penalty::kind)
        .def_readonly("lambda_", &Penalty::lambda)
        .def_readonly("a", &Penalty::a);
    m.def("penalty_value", &penalty_value, py::arg("penalty"), py::arg("u"));
    m.def("prox", &prox, py::arg("penalty"), py::arg("w"), py::arg("beta"));
    m.def("prox_scalar", &prox_scalar, py::arg("penalty"), py::arg("w"), py::arg("beta"));
    m.def("prox_grid_oracle", &prox_grid_oracle, py::arg("penalty"), py::arg("w"), py::arg("beta"),
          py::arg("lo"), py::arg("hi"), py::arg("step"));

    // empirical
    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("mean", &McEstimate::mean)
        .def_readonly("std_error", &McEstimate::std_error)
        .def_readonly("n_samples", &McEstimate::n_samples)
        .def_readonly("seed", &McEstimate::seed);
    m.def("net_output", &net_output, py::arg("x"), py::arg("w"), py::arg("k"));
    m.def("empirical_g", &empirical_g, py::arg("u"), py::arg("v"), py::arg("n"), py::arg("rng"));
    m.def("empirical_loss", &empirical_loss, py::arg("w"), py::arg("spec"), py::arg("n"),
          py::arg("rng"));

    // optimizers
    py::enum_<UpdateSource>(m, "UpdateSource")
        .value("PREVIOUS_W", UpdateSource::PreviousW)
        .value("CURRENT_W", UpdateSource::CurrentW);
    py::enum_<StopReason>(m, "StopReason")
        .value("STEP_TOLERANCE", StopReason::StepTolerance)
        .value("MAX_ITERS", StopReason::MaxIters);
    py::class_<Init>(m, "Init")
        .def_static("explicit_vector", &Init::explicit_vector, py::arg("w0"))
        .def_static("random_sphere", &Init::random_sphere, py::arg("seed"),
                    py::arg("scale") = 1.0)
        .def("make", &Init::make, py::arg("d"));
    py::class_<RvsmConfig>(m, "RvsmConfig")
        .def(py::init<double, double, Penalty, int, double, Init, UpdateSource>(), py::arg("eta"),
             py::arg("beta"), py::arg("penalty"), py::arg("max_iters"), py::arg("stop_tol"),
             py::arg("init"), py::arg("u_update_source") = UpdateSource::PreviousW)
        .def_readwrite("eta", &RvsmConfig::eta)
        .def_readwrite("beta", &RvsmConfig::beta)
        .def_readwrite("penalty", &RvsmConfig::penalty)
        .def_readwrite("max_iters", &RvsmConfig::max_iters)
        .def_readwrite("stop_tol", &RvsmConfig::stop_tol)
        .def_readwrite("u_update_source", &RvsmConfig::u_update_source);
    py::class_<AdmmConfig>(m, "AdmmConfig")
        .def(py::init<double, double, Penalty, int, double, Init>(), py::arg("eta"),
             py::arg("beta"), py::arg("penalty"), py::arg("max_iters"), py::arg("stop_tol"),
             py::arg("init"))
        .def_readwrite("eta", &AdmmConfig::eta)
        .def_readwrite("beta", &AdmmConfig::beta)
        .def_readwrite("max_iters", &AdmmConfig::max_iters)
        .def_readwrite("stop_tol", &AdmmConfig::stop_tol);
    py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
        .def_readonly("t", &TrajectoryRecord::t)
        .def_readonly("w", &TrajectoryRecord::w)
        .def_readonly("u", &TrajectoryRecord::u)
        .def_readonly("f", &TrajectoryRecord::f)
        .def_readonly("penalty", &TrajectoryRecord::penalty)
        .def_readonly("lagrangian", &TrajectoryRecord::lagrangian)
        .def_readonly("theta", &TrajectoryRecord::theta)
        .def_readonly("norm_w", &TrajectoryRecord::norm_w)
        .def_readonly("gap_wu", &TrajectoryRecord::gap_wu)
        .def_readonly("grad_norm", &TrajectoryRecord::grad_norm)
        .def_readonly("nnz_u", &TrajectoryRecord::nnz_u)
        .def_readonly("z_norm", &TrajectoryRecord::z_norm);
    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("records", &Trajectory::records)
        .def_readonly("reason", &Trajectory::reason)
        .def_readonly("final_step_norm", &Trajectory::final_step_norm)
        .def("iterations", &Trajectory::iterations);
    m.def("lagrangian", &lagrangian, py::arg("w"), py::arg("u"), py::arg("penalty"),
          py::arg("beta"), py::arg("spec"));
    m.def("rvsm_step", &rvsm_step, py::arg("w"), py::arg("u"), py::arg("cfg"), py::arg("spec"));
    m.def("run_rvsm", &run_rvsm, py::arg("cfg"), py::arg("spec"),
          py::call_guard<py::gil_scoped_release>());
    m.def("run_admm", &run_admm, py::arg("cfg"), py::arg("spec"),
          py::call_guard<py::gil_scoped_release>());
    m.def("run_gd", &run_gd, py::arg("eta"), py::arg("init"), py::arg("spec"),
          py::arg("max_iters"), py::arg("stop_tol"), py::call_guard<py::gil_scoped_release>());
    m.def("auto_step_size", &auto_step_size, py::arg("beta"), py::arg("L"));

    // analysis
    py::class_<PreconditionReport>(m, "PreconditionReport")
        .def_readonly("eta_ok", &PreconditionReport::eta_ok)
        .def_readonly("angle_ok", &PreconditionReport::angle_ok)
        .def_readonly("k_ok", &PreconditionReport::k_ok)
        .def_readonly("beta_ok", &PreconditionReport::beta_ok)
        .def_readonly("lambda_ratio_ok", &PreconditionReport::lambda_ratio_ok)
        .def_readonly("delta", &PreconditionReport::delta)
        .def_readonly("L_used", &PreconditionReport::L_used)
        .def_readonly("theta0", &PreconditionReport::theta0)
        .def_readonly("eta_bound", &PreconditionReport::eta_bound)
        .def_readonly("beta_bound", &PreconditionReport::beta_bound)
        .def_readonly("lambda_ratio", &PreconditionReport::lambda_ratio)
        .def_readonly("lambda_ratio_bound", &PreconditionReport::lambda_ratio_bound)
        .def("all_ok", &PreconditionReport::all_ok);
    m.def("check_preconditions", &check_preconditions, py::arg("cfg"), py::arg("spec"),
          py::arg("w0"), py::arg("L"));
    py::enum_<TrajField>(m, "TrajField")
        .value("LAGRANGIAN", TrajField::Lagrangian)
        .value("ANGLE", TrajField::Angle);
    py::class_<MonotoneReport>(m, "MonotoneReport")
        .def_readonly("ok", &MonotoneReport::ok)
        .def_readonly("first_violation", &MonotoneReport::first_violation)
        .def_readonly("max_increase", &MonotoneReport::max_increase);
    m.def("check_monotone", &check_monotone, py::arg("traj"), py::arg("field"));
    py::class_<AnnulusReport>(m, "AnnulusReport")
        .def_readonly("T_measured", &AnnulusReport::T_measured)
        .def_readonly("M_measured", &AnnulusReport::M_measured);
    m.def("check_annulus", &check_annulus, py::arg("traj"), py::arg("spec"));
    py::class_<LimitReport>(m, "LimitReport")
        .def_readonly("w_bar", &LimitReport::w_bar)
        .def_readonly("u_bar", &LimitReport::u_bar)
        .def_readonly("theta_bar", &LimitReport::theta_bar)
        .def_readonly("C", &LimitReport::C)
        .def_readonly("residual", &LimitReport::residual)
        .def_readonly("grad_norm_at_limit", &LimitReport::grad_norm_at_limit)
        .def_readonly("error_to_truth", &LimitReport::error_to_truth);
    m.def("limit_residual", &limit_residual, py::arg("traj"), py::arg("spec"), py::arg("penalty"),
          py::arg("beta"));
    py::class_<ScalingReport>(m, "ScalingReport")
        .def_readonly("slope", &ScalingReport::slope)
        .def_readonly("betas", &ScalingReport::betas)
        .def_readonly("errors", &ScalingReport::errors);
    m.def("beta_error_scaling", &beta_error_scaling, py::arg("base_cfg"), py::arg("spec"),
          py::arg("betas"), py::call_guard<py::gil_scoped_release>());
    py::class_<RateReport>(m, "RateReport")
        .def_readonly("c_fit", &RateReport::c_fit)
        .def_readonly("ok", &RateReport::ok)
        .def_readonly("prefixes", &RateReport::prefixes)
        .def_readonly("prefix_min", &RateReport::prefix_min);
    m.def("grad_norm_rate", &grad_norm_rate, py::arg("traj"));

    // certification suites
    py::class_<SuiteResult>(m, "SuiteResult")
        .def_readonly("name", &SuiteResult::name)
        .def_readonly("pass_", &SuiteResult::pass)
        .def_readonly("n_checked", &SuiteResult::n_checked)
        .def_readonly("n_failed", &SuiteResult::n_failed)
        .def_readonly("worst", &SuiteResult::worst);
    m.def("certify_prox", &certify_prox, py::arg("kind"), py::arg("n_scalars"), py::arg("seed"),
          py::arg("tol"));
    m.def("certify_grad", &certify_grad, py::arg("dims"), py::arg("ks"), py::arg("points_per_cell"),
          py::arg("h"), py::arg("rel_tol"), py::arg("seed"));
}
