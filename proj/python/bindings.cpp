#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <variant>

#include "gramdist/box_dp.hpp"
#include "gramdist/error.hpp"
#include "gramdist/io.hpp"
#include "gramdist/multi_edit.hpp"
#include "gramdist/product.hpp"
#include "gramdist/shift.hpp"
#include "gramdist/slp.hpp"

namespace py = pybind11;
using namespace gramdist;

namespace {

using Input = std::variant<Slp, std::string>;

Text decode(const std::string& s) { return utf8_decode(s); }

Slp grammar(const Input& in) {
  if (const auto* g = std::get_if<Slp>(&in)) return *g;
  return slp_from_text(decode(std::get<std::string>(in)));
}

std::vector<Slp> grammars(const std::vector<Input>& ins) {
  std::vector<Slp> out;
  out.reserve(ins.size());
  for (const auto& in : ins) out.push_back(grammar(in));
  return out;
}

std::vector<Text> texts(const std::vector<Input>& ins) {
  std::vector<Text> out;
  out.reserve(ins.size());
  for (const auto& in : ins) {
    if (const auto* g = std::get_if<Slp>(&in)) out.push_back(expand(*g));
    else out.push_back(decode(std::get<std::string>(in)));
  }
  return out;
}

py::str to_py(std::span<const Char> t) {
  const std::string bytes = utf8_encode(t);
  PyObject* s = PyUnicode_DecodeUTF8(bytes.data(), static_cast<Py_ssize_t>(bytes.size()), "surrogateescape");
  if (!s) throw py::error_already_set();
  return py::reinterpret_steal<py::str>(s);
}

HammingMode hamming_mode(const std::string& name) {
  if (name == "all_equal") return HammingMode::all_equal;
  if (name == "median") return HammingMode::median;
  throw Error(Errc::invalid_params, "mode must be 'all_equal' or 'median'");
}

}  // namespace

PYBIND11_MODULE(_gramdist, m) {
  m.doc() = "String distances on straight-line programs";

  static py::exception<Error> error(m, "GramdistError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<Slp>(m, "Slp")
      .def_static("from_text", [](const std::string& s) { return slp_from_text(decode(s)); }, py::arg("text"))
      .def_static("from_slpv1", [](const std::string& s) {
        std::istringstream in(s);
        return to_cnf(read_slp(in));
      }, py::arg("source"))
      .def("to_slpv1", [](const Slp& g) {
        std::ostringstream out;
        write_slp(out, g);
        return out.str();
      })
      .def("expand", [](const Slp& g) { return to_py(expand(g)); })
      // 0-based here, as Python indexing
      .def("char_at", [](const Slp& g, std::uint64_t i) {
        if (i >= g.length()) throw py::index_error("index out of range");
        const Char c = char_at(g, i + 1);
        return to_py(std::span<const Char>(&c, 1));
      }, py::arg("index"))
      .def("__len__", [](const Slp& g) { return g.length(); })
      .def_property_readonly("symbol_count", &Slp::symbol_count)
      .def_property_readonly("depth", &Slp::depth)
      .def("__repr__", [](const Slp& g) {
        return "<Slp length=" + std::to_string(g.length()) + " symbols=" + std::to_string(g.symbol_count()) + ">";
      });

  m.def("compress", [](const std::string& s) { return slp_from_text(decode(s)); }, py::arg("text"));

  m.def("hamming", [](const Input& x, const Input& y) { return hamming(grammar(x), grammar(y)); },
        py::arg("x"), py::arg("y"));
  m.def("hamming_multi", [](const std::vector<Input>& ins, const std::string& mode) {
    return hamming_multi(grammars(ins), hamming_mode(mode));
  }, py::arg("strings"), py::arg("mode") = "all_equal");

  m.def("edit_distance", [](const Input& x, const Input& y) {
    const Slp gx = grammar(x), gy = grammar(y);
    py::gil_scoped_release nogil;
    return edit_distance_exact(gx, gy);
  }, py::arg("x"), py::arg("y"));
  m.def("deletion_distance_bounded", [](const Input& x, const Input& y, std::uint64_t cap) {
    const Slp gx = grammar(x), gy = grammar(y);
    py::gil_scoped_release nogil;
    return deletion_distance_bounded(gx, gy, cap);
  }, py::arg("x"), py::arg("y"), py::arg("cap"));
  m.def("edit_distance_approx", [](const Input& x, const Input& y, double eps) {
    const Slp gx = grammar(x), gy = grammar(y);
    py::gil_scoped_release nogil;
    return edit_distance_approx(gx, gy, eps);
  }, py::arg("x"), py::arg("y"), py::arg("epsilon") = 0.5);
  m.def("lcs_approx", [](const Input& x, const Input& y, double eps) {
    const Slp gx = grammar(x), gy = grammar(y);
    py::gil_scoped_release nogil;
    return lcs_approx(gx, gy, eps);
  }, py::arg("x"), py::arg("y"), py::arg("epsilon") = 0.5);

  m.def("median_edit_approx", [](const std::vector<Input>& ins, double eps) {
    const auto gs = grammars(ins);
    py::gil_scoped_release nogil;
    return median_edit_approx(gs, eps);
  }, py::arg("strings"), py::arg("epsilon") = 0.5);
  m.def("center_edit_approx", [](const std::vector<Input>& ins, double eps) {
    const auto gs = grammars(ins);
    py::gil_scoped_release nogil;
    return center_edit_approx(gs, eps);
  }, py::arg("strings"), py::arg("epsilon") = 0.5);
  m.def("bounded_k_edit", [](const std::vector<Input>& ins, std::uint64_t cap) {
    return bounded_k_edit(texts(ins), cap);
  }, py::arg("strings"), py::arg("cap"));

  m.def("shift_match", [](const std::vector<Input>& ins, unsigned threads) {
    const auto ts = texts(ins);
    ShiftResult r;
    {
      py::gil_scoped_release nogil;
      r = shift_match_k(ts, threads);
    }
    return py::dict(py::arg("distance") = r.distance, py::arg("score") = r.score, py::arg("offsets") = r.offsets);
  }, py::arg("strings"), py::arg("threads") = 1);
  m.def("shift_bracket", [](const std::vector<Input>& ins, std::size_t groups) {
    const auto b = shift_distance_approx(texts(ins), groups);
    return py::make_tuple(b.lower, b.upper);
  }, py::arg("strings"), py::arg("groups"));
}
