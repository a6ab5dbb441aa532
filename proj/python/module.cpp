#include "tlg/crepant.hpp"
#include "tlg/io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

tlg::StackyFan fan_from(std::size_t rank, const std::vector<std::vector<long>> &rays,
                        const std::vector<std::vector<std::size_t>> &cones) {
  std::vector<tlg::IntVec> r;
  for (const auto &v : rays)
    r.emplace_back(v.begin(), v.end());
  std::vector<tlg::IndexSet> c;
  for (auto s : cones) {
    for (auto &i : s) {
      if (i == 0)
        throw tlg::Error(tlg::ErrorKind::Validation, "cone indices are 1-based");
      --i;
    }
    std::sort(s.begin(), s.end());
    c.push_back(s);
  }
  return tlg::StackyFan(rank, std::move(r), std::move(c));
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact toric orbifold cohomology, GKZ operators and I-functions";

  py::register_exception<tlg::Error>(m, "TlgError");

  m.def("commands", &tlg::io::commands);

  m.def(
      "run",
      [](const std::string &command, const std::string &fan_text, std::optional<std::string> resolution,
         std::optional<std::string> basis, int order, bool emit_certificates) {
        tlg::io::Options o;
        o.command = command;
        o.fan_text = fan_text;
        o.resolution_text = std::move(resolution);
        o.basis_text = std::move(basis);
        o.order = order;
        o.emit_certificates = emit_certificates;
        tlg::io::Outcome out;
        {
          py::gil_scoped_release release;
          out = tlg::io::run(o);
        }
        std::string report = out.report.is_null() ? "" : out.report.dump();
        std::string err = out.error ? out.error->dump() : "";
        return py::make_tuple(out.exit_code, report, err);
      },
      py::arg("command"), py::arg("fan_text"), py::arg("resolution_text") = py::none(),
      py::arg("basis_text") = py::none(), py::arg("order") = 3, py::arg("emit_certificates") = false,
      "Run a CLI command in-process; returns (exit_code, report_json, error_json).");

  m.def(
      "normalize_fan",
      [](const std::string &fan_text) { return tlg::io::to_json(tlg::io::parse_fan_text(fan_text)).dump(); },
      "Parse and re-serialize a fan document.");

  m.def(
      "box_elements",
      [](std::size_t rank, const std::vector<std::vector<long>> &rays,
         const std::vector<std::vector<std::size_t>> &cones) {
        tlg::StackyFan f = fan_from(rank, rays, cones);
        tlg::require_valid(f);
        std::vector<std::pair<std::vector<long>, std::string>> out;
        for (const tlg::BoxElement &b : tlg::box_elements(f)) {
          std::vector<long> v;
          for (const tlg::Int &x : b.v)
            v.push_back(x.get_si());
          out.emplace_back(v, tlg::rat_str(b.age));
        }
        return out;
      },
      "Box elements as (vector, age) pairs.");

  m.def(
      "check_sl",
      [](std::size_t rank, const std::vector<std::vector<long>> &rays,
         const std::vector<std::vector<std::size_t>> &cones) {
        tlg::StackyFan f = fan_from(rank, rays, cones);
        tlg::require_valid(f);
        return tlg::check_SL(f);
      });

  m.def("digest", [](const std::string &bytes) { return tlg::io::digest_string(bytes); });
}
