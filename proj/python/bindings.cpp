#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>
#include <string>
#include <vector>

#include "chowforge/error.hpp"
#include "chowforge/io.hpp"
#include "chowforge/matroid.hpp"
#include "chowforge/version.hpp"

namespace py = pybind11;
using namespace chowforge;

namespace {

io::JobSpec spec_from_string(const std::string& text) {
  io::Json j = io::Json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("matroid") ||
      !j.contains("command") || !j["command"].is_string()) {
    throw Error(ErrorCode::Parse,
                "job spec must be an object with matroid and command");
  }
  io::JobSpec job;
  job.matroid = j["matroid"];
  job.command = j["command"].get<std::string>();
  if (j.contains("params")) job.params = j["params"];
  return job;
}

std::vector<int> elements_out(Subset s) {
  std::vector<int> out;
  for (int e : subset_elements(s)) out.push_back(e + 1);
  return out;
}

}  // namespace

PYBIND11_MODULE(_chowforge, m) {
  m.doc() = "Exact Chow-ring, K-class and divisor-positivity computations "
            "for loopless matroids";
  m.attr("__version__") = CHOWFORGE_VERSION;

  static py::handle exc = py::exception<Error>(m, "ChowforgeError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(exc.ptr(),
                      (std::string(e.code_name()) + ": " + e.what()).c_str());
    }
  });

  py::class_<Matroid>(m, "Matroid")
      .def_static("uniform", &Matroid::uniform, py::arg("r"), py::arg("n"))
      .def_static("boolean", &Matroid::boolean, py::arg("n"))
      .def_static(
          "from_bases",
          [](int n, const std::vector<std::vector<int>>& bases) {
            std::vector<Subset> masks;
            for (const auto& b : bases) {
              masks.push_back(subset_from_elements(b, n));
            }
            return Matroid::from_bases(n, masks);
          },
          py::arg("n"), py::arg("bases"),
          "Bases as lists of 1-based elements.")
      .def_property_readonly("n", &Matroid::n)
      .def_property_readonly("rank", &Matroid::rank)
      .def_property_readonly("is_uniform", &Matroid::is_uniform)
      .def("bases",
           [](const Matroid& m) {
             std::vector<std::vector<int>> out;
             for (Subset s = 0; s <= full_set(m.n()); s++) {
               if (popcount(s) == m.rank() && m.rank_of(s) == m.rank()) {
                 out.push_back(elements_out(s));
               }
             }
             return out;
           },
           "All bases as sorted lists of 1-based elements.")
      .def("rank_of",
           [](const Matroid& m, const std::vector<int>& elems) {
             return m.rank_of(subset_from_elements(elems, m.n()));
           },
           py::arg("elements"))
      .def("closure",
           [](const Matroid& m, const std::vector<int>& elems) {
             return elements_out(m.closure(subset_from_elements(elems, m.n())));
           },
           py::arg("elements"))
      .def("is_flat",
           [](const Matroid& m, const std::vector<int>& elems) {
             return m.is_flat(subset_from_elements(elems, m.n()));
           },
           py::arg("elements"))
      .def("proper_flats",
           [](const Matroid& m) {
             std::vector<std::pair<int, std::vector<int>>> out;
             for (const FlatInfo& f : m.proper_flats()) {
               out.push_back({f.rank, elements_out(f.mask)});
             }
             return out;
           },
           "(rank, elements) pairs for every proper nonempty flat, in the "
           "canonical flat-id order.")
      .def("dragon_hall_rado",
           [](const Matroid& m, const std::vector<std::vector<int>>& sets) {
             std::vector<Subset> masks;
             for (const auto& s : sets) {
               masks.push_back(subset_from_elements(s, m.n()));
             }
             return m.dragon_hall_rado(masks);
           },
           py::arg("sets"))
      .def("__eq__",
           [](const Matroid& a, const Matroid& b) { return a == b; },
           py::is_operator())
      .def("__repr__", [](const Matroid& m) {
        return "Matroid(n=" + std::to_string(m.n()) +
               ", rank=" + std::to_string(m.rank()) + ")";
      });

  m.def(
      "run_json",
      [](const std::string& spec) {
        return io::run(spec_from_string(spec)).to_string();
      },
      py::arg("spec"),
      "Run one job spec (JSON string with matroid, command, params) and "
      "return the report as a JSON string.");
  m.def(
      "run_csv",
      [](const std::string& spec) {
        return io::run(spec_from_string(spec)).to_csv();
      },
      py::arg("spec"),
      "Like run_json but renders row-shaped results as CSV.");
}
