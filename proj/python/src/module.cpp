#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "prism/cli.hpp"
#include "prism/qcalc.hpp"
#include "prism/qpd.hpp"
#include "prism/witt.hpp"

namespace py = pybind11;
using namespace prism;

namespace {

py::int_ to_py(const Int& v) { return py::int_(py::str(v.get_str())); }

Int from_py(const py::int_& v) { return Int(py::str(v).cast<std::string>()); }

py::list coeffs(const UPoly& f) {
  py::list out;
  for (const auto& c : f.coeffs()) out.append(to_py(c));
  return out;
}

WittVec<IntegerRing> witt_vec(unsigned long p, const std::vector<py::int_>& a) {
  static const auto Z = std::make_shared<const IntegerRing>();
  std::vector<Int> c;
  for (const auto& v : a) c.push_back(from_py(v));
  return WittVec<IntegerRing>(Z, p, std::move(c));
}

py::list witt_list(const WittVec<IntegerRing>& a) {
  py::list out;
  for (const auto& c : a.coords()) out.append(to_py(c));
  return out;
}

py::dict invariants(const InvariantFactors& h) {
  py::dict d;
  d["free"] = h.free_rank;
  d["torsion"] = h.torsion;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "prismcheck core bindings";

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line tool in-process: (exit code, stdout, stderr).");

  m.def("q_int", [](unsigned long n) { return coeffs(q_int(n)); }, py::arg("n"), "[n]_q, coefficients low first.");
  m.def("q_factorial", [](unsigned long n) { return coeffs(q_factorial(n)); }, py::arg("n"));
  m.def("q_binomial", [](unsigned long a, unsigned long b) { return coeffs(q_binomial(a, b)); }, py::arg("a"),
        py::arg("b"));

  m.def(
      "frobenius_factorial",
      [](unsigned long p, unsigned long mm) {
        UnitCertificate c = verify_frobenius_factorial(p, mm);
        py::dict d;
        d["cofactor"] = coeffs(c.cofactor);
        d["value_at_one"] = to_py(c.value_at_one);
        d["unit"] = c.unit;
        return d;
      },
      py::arg("p"), py::arg("m"), "u with [mp]_q! = u phi([m]_q!) [p]_q^m.");

  m.def(
      "witt_add",
      [](unsigned long p, const std::vector<py::int_>& a, const std::vector<py::int_>& b) {
        return witt_list(witt_add(witt_vec(p, a), witt_vec(p, b)));
      },
      py::arg("p"), py::arg("a"), py::arg("b"), "Sum in W_m(Z), m = len(a).");
  m.def(
      "witt_mul",
      [](unsigned long p, const std::vector<py::int_>& a, const std::vector<py::int_>& b) {
        return witt_list(witt_mul(witt_vec(p, a), witt_vec(p, b)));
      },
      py::arg("p"), py::arg("a"), py::arg("b"));

  m.def(
      "tate_twist",
      [](unsigned long q, unsigned mm, unsigned n) {
        TateTwistResult t = tate_twist_invariants(q, mm, n);
        py::dict d;
        d["length"] = t.length;
        d["h0"] = invariants(t.h0);
        d["h1"] = invariants(t.h1);
        return d;
      },
      py::arg("q"), py::arg("m"), py::arg("n"), "H^0, H^1 of F - p^n on W_(m-n)(F_q).");

  m.def(
      "nygaard",
      [](unsigned long p, unsigned K, unsigned long degree, unsigned n, unsigned vars) {
        if (degree == 0) degree = p * p + p;
        auto B = base_ring_create(p, 3, 4, K);
        auto mod = QPDModule::create(B, 1, degree);
        if (vars == 2) mod = kunneth_product(mod, mod);
        NygaardReport r = nygaard_verify(mod, n);
        py::dict d;
        d["ok"] = r.ok();
        d["divisible"] = r.divisible;
        d["image"] = r.image;
        d["minimal"] = r.minimal;
        d["gr_rank"] = r.gr_rank;
        d["image_degrees"] = r.image_degrees;
        d["denominator"] = mod->denominator();
        return d;
      },
      py::arg("p"), py::arg("K") = 2, py::arg("degree") = 0, py::arg("n") = 1, py::arg("vars") = 1,
      "Nygaard checks on the q-PD envelope model; image degrees are numerators over p^K.");

  py::register_exception<Error>(m, "PrismError");
}
