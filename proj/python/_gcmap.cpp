#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "gcm/error.hpp"
#include "gcm/mto1.hpp"
#include "gcm/search.hpp"
#include "gcm/unitary.hpp"

namespace py = pybind11;
using namespace gcm;

namespace {

// FieldPtr holds a const Field, which pybind11 holders do not take directly
struct PyField {
  FieldPtr f;
};

PyField make(const std::string& id, std::optional<std::vector<std::uint64_t>> modulus,
             std::optional<std::uint64_t> generator_power) {
  auto base = make_field(id);
  if (!modulus && !generator_power) return {base};
  std::optional<GeneratorChoice> g;
  if (generator_power) g = GeneratorChoice{{}, generator_power};
  return {Field::make(base->p(), base->n(), modulus, g)};
}

Symbols symbols(const FieldPtr& F) {
  return F->n() % 2 == 0 ? unit_symbols(F) : Symbols{{"g", F->generator()}};
}

py::dict report(const Mto1Report& r) {
  py::dict d;
  d["domain"] = r.domain;
  d["size"] = r.domain_size;
  d["histogram"] = r.histogram;
  d["valid_m"] = r.valid_ms;
  py::dict ex;
  for (const auto& [m, xs] : r.exceptional) {
    py::list l;
    for (auto x : xs) l.append(x.code());
    ex[py::int_(m)] = l;
  }
  d["exceptional"] = ex;
  return d;
}

BranchMap branches(const PyField& F, const std::string& text) {
  auto br = parse_branches(text, F.f, symbols(F.f));
  return BranchMap(CosetDecomposition(CyclicGroup::multiplicative(F.f), br.size()), br);
}

py::dict verdict(const CriterionVerdict& v) {
  py::dict d;
  d["applicable"] = v.applicable;
  d["holds"] = v.holds;
  d["witness"] = v.witness;
  return d;
}

DomainKind domain_kind(const std::string& s) {
  if (s == "fq") return DomainKind::Fq;
  if (s == "fqstar") return DomainKind::FqStar;
  if (s == "unit") return DomainKind::UnitCircle;
  throw Error(ErrorKind::InvalidArgument, "domain must be fq, fqstar or unit");
}

}  // namespace

PYBIND11_MODULE(_gcmap, m) {
  m.doc() = "Generalized cyclotomic mappings over finite fields";

  py::register_exception<Error>(m, "GcmError", PyExc_ValueError);

  py::class_<PyField>(m, "Field")
      .def(py::init(&make), py::arg("id"), py::arg("modulus") = py::none(), py::arg("generator_power") = py::none())
      .def_property_readonly("p", [](const PyField& F) { return F.f->p(); })
      .def_property_readonly("n", [](const PyField& F) { return F.f->n(); })
      .def_property_readonly("q", [](const PyField& F) { return F.f->q(); })
      .def_property_readonly("id", [](const PyField& F) { return F.f->id(); })
      .def_property_readonly("modulus", [](const PyField& F) { return F.f->modulus(); })
      .def_property_readonly("generator", [](const PyField& F) { return F.f->coeffs(F.f->generator()); })
      .def(
          "classify",
          [](const PyField& F, const std::string& poly, const std::string& domain) {
            return report(classify(parse_polynomial(poly, F.f, symbols(F.f)), domain_kind(domain)));
          },
          py::arg("poly"), py::arg("domain") = "fqstar")
      .def(
          "classify_branches", [](const PyField& F, const std::string& text) { return report(classify(branches(F, text))); },
          py::arg("branches"))
      .def(
          "expand",
          [](const PyField& F, const std::string& text, bool scaled) {
            return format_polynomial(expand(branches(F, text), scaled));
          },
          py::arg("branches"), py::arg("scaled") = true)
      .def(
          "criterion",
          [](const PyField& F, const std::string& theorem, const std::string& text, std::uint64_t mm) {
            auto map = branches(F, text);
            if (theorem == "l2") return verdict(criterion_l2(map, mm));
            if (theorem == "l3") return verdict(criterion_l3(map, mm));
            if (theorem == "equal_d") return verdict(criterion_equal_d(map, mm));
            if (theorem == "2to1") return verdict(criterion_2to1_any_l(map));
            throw Error(ErrorKind::InvalidArgument, "unknown theorem " + theorem);
          },
          py::arg("theorem"), py::arg("branches"), py::arg("m") = 2);

  m.def(
      "verify",
      [](const std::string& sweep) {
        std::string out;
        {
          py::gil_scoped_release release;
          out = to_json(differential_verify(parse_sweep(sweep))).dump();
        }
        return out;
      },
      py::arg("sweep"), "Runs a key = value sweep; returns the report as JSON text.");

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one gcm command line; returns (exit code, stdout, stderr).");
}
