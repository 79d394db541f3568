// Python face of the toolkit. Bindings stay thin: structs are exposed with
// read-only fields, Eigen vectors are converted to plain tuples so the
// module does not require numpy.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sandglass/constants.hpp>
#include <sandglass/design.hpp>
#include <sandglass/develop.hpp>
#include <sandglass/energy.hpp>
#include <sandglass/error.hpp>
#include <sandglass/mesh.hpp>
#include <sandglass/objio.hpp>
#include <sandglass/rigidity.hpp>
#include <sandglass/shake.hpp>
#include <sandglass/solver.hpp>
#include <sandglass/sweep.hpp>

#include <sstream>

namespace py = pybind11;
using namespace sandglass;

namespace {

py::tuple vec3(const Eigen::Vector3d &v) { return py::make_tuple(v.x(), v.y(), v.z()); }

} // namespace

PYBIND11_MODULE(_sandglass, m) {
    m.doc() = "construction and analysis of snapping and shaky sandglass structures";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "SandglassError");

    py::class_<DesignSpec>(m, "DesignSpec")
        .def_readonly("n", &DesignSpec::n)
        .def_readonly("q1", &DesignSpec::q1)
        .def_readonly("q2", &DesignSpec::q2)
        .def_readonly("q3", &DesignSpec::q3)
        .def_readonly("q4", &DesignSpec::q4)
        .def_readonly("c", &DesignSpec::c)
        .def_readonly("s", &DesignSpec::s)
        .def_readonly("R", &DesignSpec::R)
        .def_readonly("W", &DesignSpec::W)
        .def_readonly("sandglass", &DesignSpec::sandglass)
        .def_readonly("origami", &DesignSpec::origami)
        .def_static("general", &DesignSpec::general, py::arg("n"), py::arg("q1"), py::arg("q2"),
                    py::arg("q3"), py::arg("q4"))
        .def_static("sandglass_spec", &DesignSpec::sandglass_spec, py::arg("n"), py::arg("q1"),
                    py::arg("q2"), py::arg("q3"))
        .def_static("sandglass_origami", &DesignSpec::sandglass_origami, py::arg("n"),
                    py::arg("q1"), py::arg("q2"))
        .def("__repr__", [](const DesignSpec &d) {
            std::ostringstream s;
            s << "DesignSpec(n=" << d.n << ", q1=" << d.q1 << ", q2=" << d.q2 << ", q3=" << d.q3
              << ", q4=" << d.q4 << ")";
            return s.str();
        });

    m.def("dof_count", &dof_count, py::arg("n"));

    py::class_<Realization>(m, "Realization")
        .def_readonly("H", &Realization::H)
        .def_readonly("h", &Realization::h)
        .def_readonly("r", &Realization::r)
        .def_readonly("spec", &Realization::spec)
        .def("mirrored", &Realization::mirrored)
        .def("canonical", &Realization::canonical)
        .def("__repr__", [](const Realization &x) {
            std::ostringstream s;
            s << "Realization(H=" << x.H << ", h=" << x.h << ", r=" << x.r << ")";
            return s.str();
        });

    py::class_<RealizedItem>(m, "RealizedItem")
        .def_readonly("real", &RealizedItem::real)
        .def_readonly("double_root", &RealizedItem::double_root)
        .def_readonly("degenerate", &RealizedItem::degenerate)
        .def_readonly("residual", &RealizedItem::residual);

    py::class_<RealizationSet>(m, "RealizationSet")
        .def_readonly("items", &RealizationSet::items)
        .def_readonly("discriminant", &RealizationSet::discriminant);

    m.def("realize", &realize, py::arg("spec"));
    m.def("constraint_residuals", &constraint_residuals, py::arg("spec"), py::arg("H"),
          py::arg("h"), py::arg("r"));
    m.def("r_quartic_coefficients", &r_quartic_coefficients, py::arg("spec"));
    m.def("squared_edge_lengths", &squared_edge_lengths, py::arg("spec"), py::arg("H"),
          py::arg("h"), py::arg("r"));

    m.def("origami_q3", &origami_q3, py::arg("q1"), py::arg("q2"));
    m.def("general_origami_residual", &general_origami_residual, py::arg("spec"));
    m.def("angle_defect", &angle_defect, py::arg("spec"));
    m.def("crease_pattern_svg", &crease_pattern_svg, py::arg("reference"));

    py::class_<Mesh>(m, "Mesh")
        .def_property_readonly("vertices",
                               [](const Mesh &mesh) {
                                   py::list out;
                                   for (const auto &v : mesh.V)
                                       out.append(vec3(v));
                                   return out;
                               })
        .def_property_readonly("faces",
                               [](const Mesh &mesh) {
                                   py::list out;
                                   for (const auto &f : mesh.F)
                                       out.append(py::make_tuple(f[0], f[1], f[2]));
                                   return out;
                               })
        .def("__len__", [](const Mesh &mesh) { return mesh.V.size(); });

    m.def("build_mesh", &build_mesh, py::arg("realization"));
    m.def("volume", &volume, py::arg("mesh"));
    m.def("obj_text", &obj_text, py::arg("mesh"), py::arg("header") = "");
    m.def("parse_obj", &parse_obj, py::arg("text"));

    m.def("shakiness_residual", &shakiness_residual, py::arg("n"), py::arg("q1"), py::arg("q2"));
    m.def(
        "solve_shaky_q2", [](int n, double q1) { return solve_shaky_q2(n, q1); }, py::arg("n"),
        py::arg("q1"));
    m.def("reduced_rigidity_sigma_min", &reduced_rigidity_sigma_min, py::arg("realization"));
    m.def("full_rigidity_kernel_dim", &full_rigidity_kernel_dim, py::arg("realization"));

    py::class_<InfinitesimalFlex>(m, "InfinitesimalFlex")
        .def_readonly("u", &InfinitesimalFlex::u)
        .def_readonly("v", &InfinitesimalFlex::v)
        .def_readonly("z", &InfinitesimalFlex::z);
    m.def("infinitesimal_flex", &infinitesimal_flex, py::arg("realization"), py::arg("z") = 1.0);

    py::enum_<FlexNormalization>(m, "FlexNormalization")
        .value("MeanRelativeRate", FlexNormalization::MeanRelativeRate)
        .value("UnitCapSpeed", FlexNormalization::UnitCapSpeed);

    py::class_<NormalizedFlex>(m, "NormalizedFlex")
        .def_readonly("flex", &NormalizedFlex::flex)
        .def_readonly("d", &NormalizedFlex::d)
        .def_readonly("normalization", &NormalizedFlex::normalization);

    py::class_<ShakeResult>(m, "ShakeResult")
        .def_readonly("spec", &ShakeResult::spec)
        .def_readonly("real", &ShakeResult::real)
        .def_readonly("flex", &ShakeResult::flex)
        .def_readonly("kappa", &ShakeResult::kappa)
        .def_readonly("alternate_q2", &ShakeResult::alternate_q2);
    m.def("shake_design", &shake_design, py::arg("n"), py::arg("q1"),
          py::arg("normalization") = FlexNormalization::MeanRelativeRate);
    m.def("shakeability", &shakeability, py::arg("spec"), py::arg("flex"));

    m.def("extremal_q2", &extremal_q2, py::arg("n"), py::arg("q1"));
    m.def("extremal_q2_candidates", &extremal_q2_candidates, py::arg("n"), py::arg("q1"));

    py::class_<SaddleInfo>(m, "SaddleInfo")
        .def_property_readonly("x", [](const SaddleInfo &s) { return vec3(s.x); })
        .def_readonly("S", &SaddleInfo::S)
        .def_readonly("sigma", &SaddleInfo::sigma)
        .def_readonly("grad_norm", &SaddleInfo::grad_norm)
        .def_property_readonly("eigenvalues",
                               [](const SaddleInfo &s) { return vec3(s.eigenvalues); })
        .def_readonly("everted", &SaddleInfo::everted);

    py::class_<SnapResult>(m, "SnapResult")
        .def_readonly("spec", &SnapResult::spec)
        .def_readonly("open", &SnapResult::open)
        .def_readonly("closed", &SnapResult::closed)
        .def_readonly("saddle", &SnapResult::saddle)
        .def_readonly("v_open", &SnapResult::v_open)
        .def_readonly("v_closed", &SnapResult::v_closed)
        .def_readonly("open_intersection_free", &SnapResult::open_intersection_free)
        .def_readonly("closed_coplanar", &SnapResult::closed_coplanar)
        .def_readonly("saddle_shaky", &SnapResult::saddle_shaky);
    m.def("snap_pair", &snap_pair, py::arg("n"), py::arg("q1"));

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("n", &SweepRow::n)
        .def_readonly("q1", &SweepRow::q1)
        .def_readonly("q2", &SweepRow::q2)
        .def_readonly("q3", &SweepRow::q3)
        .def_readonly("sigma", &SweepRow::sigma)
        .def_readonly("rel_dvol", &SweepRow::rel_dvol)
        .def_readonly("rel_dheight", &SweepRow::rel_dheight)
        .def_readonly("rel_dwaist", &SweepRow::rel_dwaist)
        .def_readonly("failure", &SweepRow::failure);
    py::class_<ShakeRow>(m, "ShakeRow")
        .def_readonly("n", &ShakeRow::n)
        .def_readonly("q1", &ShakeRow::q1)
        .def_readonly("q2", &ShakeRow::q2)
        .def_readonly("kappa", &ShakeRow::kappa)
        .def_readonly("failure", &ShakeRow::failure);
    m.def("sweep_snap", &sweep_snap, py::arg("n"), py::arg("q1_min") = 0.25,
          py::arg("q1_max") = 5.0, py::arg("step") = 0.01);
    m.def("sweep_shake", &sweep_shake, py::arg("n"), py::arg("q1_min") = 0.25,
          py::arg("q1_max") = 0.31, py::arg("step") = 0.001,
          py::arg("normalization") = FlexNormalization::MeanRelativeRate);
    m.def("snap_table_csv", &snap_table_csv, py::arg("rows"));
    m.def("shake_table_csv", &shake_table_csv, py::arg("rows"));
}
