#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "appdo/cms.hpp"
#include "appdo/error.hpp"
#include "appdo/gladyshev.hpp"
#include "appdo/parallel.hpp"
#include "appdo/spectral.hpp"
#include "appdo/symbol_file.hpp"
#include "appdo/verify.hpp"

namespace py = pybind11;
using namespace appdo;

namespace {

FrequencyWindow window(const APSymbol& a, const std::string& radius, std::int64_t denom) {
    return window_enumerate(a.generators(), Rational::parse(radius), denom);
}

std::vector<std::string> labels(const FrequencyWindow& w) {
    std::vector<std::string> out;
    for (const auto& f : w) out.push_back(f.str());
    return out;
}

TPFunction tp_from_dict(const APSymbol& a, const std::map<std::string, Complex>& coeffs) {
    TPFunction::Coeffs c;
    for (const auto& [k, v] : coeffs) c[Frequency::parse(k)] = v;
    return TPFunction(a.generators(), std::move(c));
}

std::map<std::string, Complex> tp_to_dict(const TPFunction& f) {
    std::map<std::string, Complex> out;
    for (const auto& [k, v] : f.coeffs()) out[k.str()] = v;
    return out;
}

std::vector<RealVector> points(const std::vector<double>& v) {
    std::vector<RealVector> out;
    for (double x : v) out.push_back({x});
    return out;
}

}  // namespace

PYBIND11_MODULE(_appdo, m) {
    m.doc() = "Almost-periodic pseudodifferential operators";

    static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    static py::exception<InputError> input_error(m, "InputError", error.ptr());
    static py::exception<DomainError> domain_error(m, "DomainError", error.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InputError& e) {
            input_error(e.what());
        } catch (const DomainError& e) {
            domain_error(e.what());
        } catch (const Error& e) {
            error(e.what());
        }
    });

    m.def("set_threads", &set_threads, py::arg("n"));

    py::class_<APSymbol>(m, "Symbol")
        .def_static("parse", &parse_symbol_string, py::arg("text"), "Symbol from symbol-file text.")
        .def_static("load", &parse_symbol_file, py::arg("path"))
        .def("serialize", &serialize_symbol)
        .def("frequencies",
             [](const APSymbol& a) {
                 std::vector<std::string> out;
                 for (const auto& f : a.frequencies()) out.push_back(f.str());
                 return out;
             })
        .def("coefficient", [](const APSymbol& a, const std::string& f) { return bohr_fourier(a, Frequency::parse(f)).str(); })
        .def_property_readonly("order", [](const APSymbol& a) { return a.cls().m; })
        .def("__call__",
             [](const APSymbol& a, double x, double xi) {
                 return evaluate_symbol(a, std::span<const double>(&x, 1), std::span<const double>(&xi, 1));
             },
             py::arg("x"), py::arg("xi"))
        .def("compose", &compose_symbols, py::arg("other"))
        .def("adjoint", &adjoint_symbol)
        .def("translate", [](const APSymbol& a, double xi0) { return translate_symbol(a, {xi0}); }, py::arg("xi0"))
        .def("__add__", [](const APSymbol& a, const APSymbol& b) { return a + b; })
        .def("__sub__", [](const APSymbol& a, const APSymbol& b) { return a - b; })
        .def("scaled", &APSymbol::scaled)
        .def("__eq__", [](const APSymbol& a, const APSymbol& b) { return a == b; })
        .def("__repr__", [](const APSymbol& a) { return "<Symbol with " + std::to_string(a.terms().size()) + " terms>"; });

    m.def("apply", [](const APSymbol& a, const std::map<std::string, Complex>& f) {
        return tp_to_dict(apply_to_tp(a, tp_from_dict(a, f)));
    }, py::arg("symbol"), py::arg("coeffs"), "Exact action on a trigonometric polynomial {freq: coeff}.");

    m.def("kernel", [](const APSymbol& a, double xi, const std::string& radius, std::int64_t denom) {
        const auto w = window(a, radius, denom);
        const auto K = build_kernel(a, {xi}, w);
        return py::make_tuple(K.entries, labels(w));
    }, py::arg("symbol"), py::arg("xi"), py::arg("radius"), py::arg("denom") = 1,
          "(matrix, frequency labels) of U(a)(xi) on the window.");

    m.def("weighted_norm", [](const APSymbol& a, double xi, const std::string& radius, double s, double order,
                              std::int64_t denom) {
        return weighted_norm(build_kernel(a, {xi}, window(a, radius, denom)), s, order);
    }, py::arg("symbol"), py::arg("xi"), py::arg("radius"), py::arg("s"), py::arg("m"), py::arg("denom") = 1);

    m.def("positivity", [](const APSymbol& a, double xi, const std::string& radius, double tol) {
        const auto r = positivity_check(build_kernel(a, {xi}, window(a, radius, 1)), tol);
        py::dict d;
        d["hermitian"] = r.hermitian;
        d["psd"] = r.psd;
        d["min_eig"] = r.min_eig;
        return d;
    }, py::arg("symbol"), py::arg("xi"), py::arg("radius"), py::arg("tol") = kDefaultPositivityTol);

    m.def("finite_section_spectrum", [](const APSymbol& a, double xi, const std::string& radius) {
        return kernel_eigenvalues(build_kernel(a, {xi}, window(a, radius, 1)));
    }, py::arg("symbol"), py::arg("xi"), py::arg("radius"));

    m.def("resolvent", [](const APSymbol& a, Complex z, double xi, const std::string& radius) {
        const auto r = resolvent_window(a, z, window(a, radius, 1), {xi});
        py::dict d;
        d["solvable"] = r.solvable;
        d["sigma_min"] = r.sigma_min;
        d["inv_norm"] = r.inv_norm;
        return d;
    }, py::arg("symbol"), py::arg("z"), py::arg("xi"), py::arg("radius"));

    m.def("weyl_residual", [](const APSymbol& a, double xi0, const std::vector<double>& seq) {
        const auto r = weyl_residual(a, {xi0}, points(seq));
        std::vector<double> res;
        for (const auto& p : r.residuals) res.push_back(p.second);
        return py::make_tuple(r.s, res);
    }, py::arg("symbol"), py::arg("xi0"), py::arg("xi_seq"), "(s, residuals) along the sequence.");

    m.def("multiplier_spectrum", [](const APSymbol& a, const std::vector<double>& grid) {
        std::vector<std::pair<Complex, std::string>> out;
        for (const auto& v : multiplier_spectrum(a, points(grid)).values) out.emplace_back(v.approx, to_string(v.kind));
        return out;
    }, py::arg("symbol"), py::arg("grid"));

    m.def("equivalence_residual", [](const APSymbol& a, const std::string& mu, std::size_t n, double L, std::size_t N,
                                     std::size_t modes) {
        const HermiteBasis B(std::max(modes, n + 1), GridSpec{L, N, a.dim()});
        return equivalence_residual(a, Frequency::parse(mu), n, B);
    }, py::arg("symbol"), py::arg("mu"), py::arg("n"), py::arg("L") = 16.0, py::arg("N") = 256, py::arg("modes") = 12);

    m.def("invariance", [](const APSymbol& a, const std::string& radius, const std::vector<double>& grid,
                           std::size_t modes) {
        const HermiteBasis B(modes, GridSpec{16.0, 256, a.dim()});
        const auto r = invariance_check(a, window(a, radius, 1), points(grid), B);
        return py::make_tuple(r.hausdorff_Ul2_vs_UxiD, r.hausdorff_Ul2_vs_A);
    }, py::arg("symbol"), py::arg("radius"), py::arg("xi_grid"), py::arg("modes") = 12);

    m.def("verify", [](const std::string& suite, std::uint64_t seed) {
        const auto r = run_verify(suite, seed);
        return py::make_tuple(r.all_pass(), r.text());
    }, py::arg("suite") = "all", py::arg("seed") = 0, "(all_pass, report text)");
}
