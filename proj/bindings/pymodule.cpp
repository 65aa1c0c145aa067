#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "matdist/classify.hpp"
#include "matdist/distribution.hpp"
#include "matdist/foliation.hpp"
#include "matdist/isomorphism.hpp"
#include "matdist/remodel.hpp"
#include "matdist/report_io.hpp"

namespace py = pybind11;
using namespace matdist;

namespace {

std::vector<std::string> registry_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : builtin_registry()) names.push_back(name);
  return names;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "material evolution toolkit core";

  py::register_exception<DomainError>(m, "DomainError");
  py::register_exception<NonFiniteError>(m, "NonFiniteError");
  py::register_exception<NotFoundError>(m, "LawNotFoundError");
  py::register_exception<RankUnstableError>(m, "RankUnstableError");
  py::register_exception<IncompleteSweepError>(m, "IncompleteSweepError");
  py::register_exception<MissingDensityError>(m, "MissingDensityError");
  py::register_exception<SingularMatrixError>(m, "SingularMatrixError");
  py::register_exception<FoliationError>(m, "FoliationError");

  py::class_<GridPoint>(m, "GridPoint")
      .def(py::init([](double t, const Vec3& x) { return GridPoint{t, x}; }),
           py::arg("t"), py::arg("x"))
      .def_readonly("t", &GridPoint::t)
      .def_readonly("x", &GridPoint::x)
      .def("__repr__", [](const GridPoint& p) {
        return "GridPoint(t=" + std::to_string(p.t) + ", x=[" + std::to_string(p.x[0]) +
               ", " + std::to_string(p.x[1]) + ", " + std::to_string(p.x[2]) + "])";
      });

  py::class_<ConstitutiveLaw>(m, "ConstitutiveLaw")
      .def_property_readonly("name", &ConstitutiveLaw::name)
      .def_property_readonly("output_dim", &ConstitutiveLaw::output_dim)
      .def("eval", &ConstitutiveLaw::eval, py::arg("t"), py::arg("x"), py::arg("F"));

  m.def("make_builtin", &make_builtin, py::arg("name"), py::arg("params") = LawParams{});
  m.def("registry_names", &registry_names);

  py::enum_<JetMode>(m, "JetMode")
      .value("Dual", JetMode::Dual)
      .value("FiniteDifference", JetMode::FiniteDifference);

  py::class_<LawJet>(m, "LawJet")
      .def_readonly("value", &LawJet::value)
      .def_readonly("d_t", &LawJet::d_t)
      .def_readonly("d_x", &LawJet::d_x)
      .def_readonly("d_F", &LawJet::d_F)
      .def_readonly("mode", &LawJet::mode);

  m.def("jet", &jet, py::arg("law"), py::arg("t"), py::arg("x"), py::arg("F"),
        py::arg("mode") = JetMode::Dual);

  py::class_<SamplingConfig>(m, "SamplingConfig")
      .def(py::init<>())
      .def_readwrite("n_f", &SamplingConfig::n_f)
      .def_readwrite("seed", &SamplingConfig::seed)
      .def_readwrite("spread", &SamplingConfig::spread)
      .def_readwrite("tau_rank", &SamplingConfig::tau_rank)
      .def_readwrite("tau_accept", &SamplingConfig::tau_accept)
      .def_readwrite("n_validation", &SamplingConfig::n_validation);

  py::enum_<KernelVariant>(m, "KernelVariant")
      .value("Full", KernelVariant::Full)
      .value("StateT", KernelVariant::StateT)
      .value("ParticleX", KernelVariant::ParticleX)
      .value("Isotropy", KernelVariant::Isotropy);

  py::class_<NullspaceResult>(m, "NullspaceResult")
      .def_readonly("basis", &NullspaceResult::basis)
      .def_readonly("dim", &NullspaceResult::dim)
      .def_readonly("singular_values", &NullspaceResult::singular_values)
      .def_readonly("validation_residual", &NullspaceResult::validation_residual)
      .def_readonly("validated", &NullspaceResult::validated);

  m.def("sample_gl3", &sample_gl3, py::arg("n"), py::arg("seed"), py::arg("spread") = 0.75);
  m.def(
      "nullspace",
      [](const MatX& a, double tau_rank) { return nullspace(a, tau_rank); },
      py::arg("a"), py::arg("tau_rank") = 1e-8);
  m.def(
      "solve_kernel",
      [](const ConstitutiveLaw& law, KernelVariant variant, double t, const Vec3& x,
         const SamplingConfig& cfg) {
        return solve_kernel(law, make_problem(variant, GridPoint{t, x}, cfg), cfg);
      },
      py::arg("law"), py::arg("variant"), py::arg("t"), py::arg("x"),
      py::arg("cfg") = SamplingConfig{});

  py::class_<FiberReport>(m, "FiberReport")
      .def_readonly("point", &FiberReport::point)
      .def_readonly("dim_full", &FiberReport::dim_full)
      .def_readonly("dim_base", &FiberReport::dim_base)
      .def_readonly("proj_kernel_dim", &FiberReport::proj_kernel_dim)
      .def_readonly("dim_state_t", &FiberReport::dim_state_t)
      .def_readonly("dim_state_t_base", &FiberReport::dim_state_t_base)
      .def_readonly("dim_particle_x", &FiberReport::dim_particle_x)
      .def_readonly("dim_particle_x_base", &FiberReport::dim_particle_x_base)
      .def_readonly("dim_isotropy", &FiberReport::dim_isotropy)
      .def_readonly("full", &FiberReport::full)
      .def_readonly("state_t", &FiberReport::state_t)
      .def_readonly("particle_x", &FiberReport::particle_x)
      .def_readonly("isotropy", &FiberReport::isotropy);

  m.def(
      "fiber_report",
      [](const ConstitutiveLaw& law, double t, const Vec3& x, const SamplingConfig& cfg) {
        return fiber_report(law, t, x, cfg);
      },
      py::arg("law"), py::arg("t"), py::arg("x"), py::arg("cfg") = SamplingConfig{});

  py::class_<Grid>(m, "Grid")
      .def(py::init([](std::vector<double> t, std::vector<double> x1, std::vector<double> x2,
                       std::vector<double> x3) {
             Grid g;
             g.t_values = std::move(t);
             g.x1_values = std::move(x1);
             if (!x2.empty()) g.x2_values = std::move(x2);
             if (!x3.empty()) g.x3_values = std::move(x3);
             return g;
           }),
           py::arg("t"), py::arg("x1"), py::arg("x2") = std::vector<double>{},
           py::arg("x3") = std::vector<double>{})
      .def_static("linspace", &Grid::linspace, py::arg("lo"), py::arg("hi"), py::arg("count"))
      .def("size", &Grid::size)
      .def("point", &Grid::point);

  py::class_<PointOutcome>(m, "PointOutcome")
      .def_readonly("point", &PointOutcome::point)
      .def_readonly("error", &PointOutcome::error)
      .def_property_readonly("report",
                             [](const PointOutcome& p) {
                               return p.report ? py::cast(*p.report) : py::none().cast<py::object>();
                             })
      .def("ok", &PointOutcome::ok);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("points", &SweepResult::points)
      .def("complete", &SweepResult::complete)
      .def("to_json", [](const SweepResult& s) { return sweep_to_json(s, false).dump(2); });

  m.def("grid_sweep", &grid_sweep, py::arg("law"), py::arg("grid"),
        py::arg("cfg") = SamplingConfig{}, py::arg("jobs") = 1);

  py::class_<Verdict>(m, "Verdict")
      .def_readonly("value", &Verdict::value)
      .def_readonly("witness", &Verdict::witness)
      .def_readonly("counterexample", &Verdict::counterexample)
      .def_readonly("criterion", &Verdict::criterion)
      .def("__bool__", [](const Verdict& v) { return v.value; });

  py::class_<ClassificationReport>(m, "ClassificationReport")
      .def_readonly("smooth_uniform_remodeling", &ClassificationReport::smooth_uniform_remodeling)
      .def_readonly("smooth_remodeling", &ClassificationReport::smooth_remodeling)
      .def_readonly("smooth_aging", &ClassificationReport::smooth_aging)
      .def_readonly("uniform_aging", &ClassificationReport::uniform_aging)
      .def_readonly("dims_constant", &ClassificationReport::dims_constant)
      .def_readonly("complete", &ClassificationReport::complete)
      .def_readonly("caveats", &ClassificationReport::caveats)
      .def("to_json",
           [](const ClassificationReport& r) { return classification_to_json(r).dump(2); });

  m.def("classify", &classify, py::arg("sweep"), py::arg("cfg") = SamplingConfig{},
        py::arg("allow_incomplete") = false);

  py::class_<IsoConfig>(m, "IsoConfig")
      .def(py::init<>())
      .def_readwrite("tau_iso", &IsoConfig::tau_iso)
      .def_readwrite("n_starts", &IsoConfig::n_starts)
      .def_readwrite("max_iters", &IsoConfig::max_iters)
      .def_readwrite("n_f", &IsoConfig::n_f)
      .def_readwrite("n_validation", &IsoConfig::n_validation)
      .def_readwrite("spread", &IsoConfig::spread)
      .def_readwrite("start_sigma", &IsoConfig::start_sigma)
      .def_readwrite("seed", &IsoConfig::seed);

  py::enum_<IsoStatus>(m, "IsoStatus")
      .value("Found", IsoStatus::Found)
      .value("NotFound", IsoStatus::NotFound)
      .value("NonConverged", IsoStatus::NonConverged);

  py::class_<MaterialIsomorphism>(m, "MaterialIsomorphism")
      .def(py::init([](const GridPoint& from, const GridPoint& to, const Mat3& p) {
             MaterialIsomorphism mi;
             mi.from = from;
             mi.to = to;
             mi.P = p;
             return mi;
           }),
           py::arg("from_point"), py::arg("to_point"), py::arg("P"))
      .def_readonly("from_point", &MaterialIsomorphism::from)
      .def_readonly("to_point", &MaterialIsomorphism::to)
      .def_readonly("P", &MaterialIsomorphism::P)
      .def_readonly("residual", &MaterialIsomorphism::residual)
      .def_readonly("inverse_residual", &MaterialIsomorphism::inverse_residual)
      .def_readonly("converged", &MaterialIsomorphism::converged);

  py::class_<IsoSearchResult>(m, "IsoSearchResult")
      .def_readonly("status", &IsoSearchResult::status)
      .def_readonly("best", &IsoSearchResult::best);

  m.def("find_isomorphism", &find_isomorphism, py::arg("law"), py::arg("from_point"),
        py::arg("to_point"), py::arg("cfg") = IsoConfig{});
  m.def("membership_test", &membership_test, py::arg("law"), py::arg("candidate"),
        py::arg("n_validation") = 40, py::arg("seed") = 1001, py::arg("spread") = 0.75);

  py::class_<ExpCheck>(m, "ExpCheck")
      .def_readonly("residual_eps2", &ExpCheck::residual_eps2)
      .def_readonly("residual_eps3", &ExpCheck::residual_eps3);

  py::class_<SymmetryAlgebra>(m, "SymmetryAlgebra")
      .def_readonly("at", &SymmetryAlgebra::at)
      .def_readonly("algebra", &SymmetryAlgebra::algebra)
      .def_readonly("checks", &SymmetryAlgebra::checks);

  m.def(
      "symmetry_algebra",
      [](const ConstitutiveLaw& law, double t, const Vec3& x, const SamplingConfig& cfg) {
        return symmetry_algebra(law, GridPoint{t, x}, cfg);
      },
      py::arg("law"), py::arg("t"), py::arg("x"), py::arg("cfg") = SamplingConfig{});

  py::class_<PairProbe>(m, "PairProbe")
      .def_readonly("index", &PairProbe::index)
      .def_readonly("to_point", &PairProbe::to)
      .def_readonly("status", &PairProbe::status)
      .def_readonly("residual", &PairProbe::residual);

  py::class_<TransitivityEvidence>(m, "TransitivityEvidence")
      .def_readonly("anchor", &TransitivityEvidence::anchor)
      .def_readonly("pairs", &TransitivityEvidence::pairs)
      .def_readonly("uniform_remodeling_evidence",
                    &TransitivityEvidence::uniform_remodeling_evidence)
      .def_readonly("criterion", &TransitivityEvidence::criterion);

  m.def("transitivity_probe", &transitivity_probe, py::arg("law"), py::arg("grid"),
        py::arg("cfg") = IsoConfig{});

  py::enum_<LeafVariant>(m, "LeafVariant")
      .value("BodyMaterial", LeafVariant::BodyMaterial)
      .value("StateT", LeafVariant::StateT);

  py::enum_<TraceAbort>(m, "TraceAbort")
      .value("none", TraceAbort::None)
      .value("SingularCrossing", TraceAbort::SingularCrossing)
      .value("DomainExit", TraceAbort::DomainExit)
      .value("DirectionLost", TraceAbort::DirectionLost);

  py::class_<TraceBranch>(m, "TraceBranch")
      .def_readonly("direction", &TraceBranch::direction)
      .def_readonly("points", &TraceBranch::points)
      .def_readonly("dims", &TraceBranch::dims)
      .def_readonly("abort", &TraceBranch::abort)
      .def_readonly("abort_detail", &TraceBranch::abort_detail);

  py::class_<LeafTrace>(m, "LeafTrace")
      .def_readonly("seed", &LeafTrace::seed)
      .def_readonly("variant", &LeafTrace::variant)
      .def_readonly("step_size", &LeafTrace::step_size)
      .def_readonly("steps", &LeafTrace::steps)
      .def_readonly("branches", &LeafTrace::branches)
      .def("to_csv", [](const LeafTrace& t) { return trace_to_csv(t); });

  m.def(
      "trace_leaf",
      [](const ConstitutiveLaw& law, double t, const Vec3& x, LeafVariant variant, int steps,
         double step_size, const SamplingConfig& cfg) {
        return trace_leaf(law, GridPoint{t, x}, variant, steps, step_size, cfg);
      },
      py::arg("law"), py::arg("t"), py::arg("x"), py::arg("variant"), py::arg("steps") = 100,
      py::arg("step_size") = 0.01, py::arg("cfg") = SamplingConfig{});

  py::class_<FreezeTimeReport>(m, "FreezeTimeReport")
      .def_readonly("seed", &FreezeTimeReport::seed)
      .def_readonly("hausdorff", &FreezeTimeReport::hausdorff)
      .def_readonly("n_body_slice", &FreezeTimeReport::n_body_slice)
      .def_readonly("n_state", &FreezeTimeReport::n_state)
      .def_readonly("body_dim", &FreezeTimeReport::body_dim)
      .def_readonly("state_dim", &FreezeTimeReport::state_dim);

  m.def(
      "freeze_time_check",
      [](const ConstitutiveLaw& law, double t, const Vec3& x, int steps, double step_size,
         const SamplingConfig& cfg) {
        return freeze_time_check(law, GridPoint{t, x}, steps, step_size, cfg);
      },
      py::arg("law"), py::arg("t"), py::arg("x"), py::arg("steps") = 60,
      py::arg("step_size") = 0.01, py::arg("cfg") = SamplingConfig{});

  py::class_<RemodelingProcess>(m, "RemodelingProcess")
      .def(py::init([](const Vec3& particle, std::vector<double> times, std::vector<Mat3> P,
                       double rho0, std::optional<std::vector<double>> rho) {
             RemodelingProcess proc;
             proc.particle = particle;
             proc.times = std::move(times);
             proc.P = std::move(P);
             proc.rho0 = rho0;
             proc.rho = std::move(rho);
             proc.validate();
             return proc;
           }),
           py::arg("particle"), py::arg("times"), py::arg("P"), py::arg("rho0") = 1.0,
           py::arg("rho") = std::nullopt)
      .def_readonly("times", &RemodelingProcess::times)
      .def_readonly("P", &RemodelingProcess::P)
      .def_readonly("rho0", &RemodelingProcess::rho0)
      .def_readonly("rho", &RemodelingProcess::rho);

  py::enum_<GrowthClass>(m, "GrowthClass")
      .value("Growth", GrowthClass::Growth)
      .value("Resorption", GrowthClass::Resorption)
      .value("Neutral", GrowthClass::Neutral);

  py::class_<MembershipReport>(m, "MembershipReport")
      .def_readonly("residuals", &MembershipReport::residuals)
      .def_readonly("pass_", &MembershipReport::pass);

  py::class_<MassConsistencyEntry>(m, "MassConsistencyEntry")
      .def_readonly("time", &MassConsistencyEntry::time)
      .def_readonly("rho_measured", &MassConsistencyEntry::rho_measured)
      .def_readonly("rho_predicted", &MassConsistencyEntry::rho_predicted)
      .def_readonly("pass_", &MassConsistencyEntry::pass);

  py::class_<MassConsistencyReport>(m, "MassConsistencyReport")
      .def_readonly("entries", &MassConsistencyReport::entries)
      .def_readonly("pass_", &MassConsistencyReport::pass);

  py::class_<GrowthEntry>(m, "GrowthEntry")
      .def_readonly("time", &GrowthEntry::time)
      .def_readonly("trace_L", &GrowthEntry::trace_L)
      .def_readonly("verdict", &GrowthEntry::verdict)
      .def_readonly("rho_rate_gap", &GrowthEntry::rho_rate_gap);

  py::class_<GrowthReport>(m, "GrowthReport")
      .def_readonly("entries", &GrowthReport::entries)
      .def_readonly("criterion", &GrowthReport::criterion);

  m.def("check_membership", &check_membership, py::arg("law"), py::arg("process"),
        py::arg("cfg") = IsoConfig{});
  m.def("mass_consistency", &mass_consistency, py::arg("process"));
  m.def("velocity_gradient", &velocity_gradient, py::arg("process"));
  m.def("classify_growth", &classify_growth, py::arg("process"));
}
