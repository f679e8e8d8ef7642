#include <pybind11/gil_safe_call_once.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "bitext/embedding.hpp"
#include "bitext/error.hpp"
#include "bitext/evaluation.hpp"
#include "bitext/ivfpq_index.hpp"
#include "bitext/pipeline.hpp"
#include "bitext/segmenter.hpp"
#include "bitext/stats.hpp"

namespace py = pybind11;
using namespace bitext;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

// pybind11 turns nlohmann::json into Python objects through a JSON string
py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

std::span<const float> vector_arg(const FloatArray& a) {
  BITEXT_CHECK(a.ndim() == 1, InvalidArgument, "expected a 1-d array");
  return {a.data(), static_cast<std::size_t>(a.shape(0))};
}

FloatArray to_numpy(const EmbeddingMatrix& m) {
  FloatArray out({m.count(), m.dim()});
  std::copy(m.values().begin(), m.values().end(), out.mutable_data());
  return out;
}

EmbeddingMatrix from_numpy(const std::vector<std::string>& ids, const FloatArray& a) {
  BITEXT_CHECK(a.ndim() == 2, InvalidArgument, "expected a 2-d array");
  const auto n = static_cast<std::size_t>(a.shape(0));
  const auto d = static_cast<std::size_t>(a.shape(1));
  BITEXT_CHECK(ids.size() == n, LengthMismatch, "ids and rows differ in length");
  EmbeddingMatrix m(d);
  for (std::size_t i = 0; i < n; ++i) m.add(ids[i], std::span<const float>(a.data() + i * d, d));
  return m;
}

py::list hits_to_python(const std::vector<SearchHit>& hits) {
  py::list out;
  for (const auto& h : hits) out.append(py::make_tuple(h.sent_id, h.score));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Parallel sentence mining: segmentation, embeddings, IVF-PQ search, evaluation";

  // bitext::Error becomes bitextmine.Error with a `code` attribute naming the ErrorCode
  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result([&] { return py::exception<Error>(m, "Error"); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& cls = error_type.get_stored();
      py::object instance = cls(e.what());
      instance.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(cls.ptr(), instance.ptr());
    }
  });

  m.def(
      "segment_sentences",
      [](const std::string& text, const std::string& lang) { return segment_sentences(text, LanguageCode(lang)); },
      py::arg("text"), py::arg("lang"));
  m.def(
      "merge_page_fragments",
      [](const std::vector<std::string>& pages, const std::string& lang) {
        return merge_page_fragments(pages, LanguageCode(lang));
      },
      py::arg("pages"), py::arg("lang"));

  m.def(
      "normalize",
      [](const FloatArray& v) {
        const auto n = normalize(vector_arg(v));
        FloatArray out(static_cast<py::ssize_t>(n.size()));
        std::copy(n.begin(), n.end(), out.mutable_data());
        return out;
      },
      py::arg("v"));
  m.def(
      "cosine_similarity", [](const FloatArray& u, const FloatArray& v) { return cosine_similarity(vector_arg(u), vector_arg(v)); },
      py::arg("u"), py::arg("v"));

  m.def(
      "read_semb",
      [](const std::filesystem::path& path) {
        ImportReport report;
        const auto matrix = import_embeddings(path, &report);
        return py::make_tuple(matrix.ids(), to_numpy(matrix), report.renormalized);
      },
      py::arg("path"), "Returns (ids, float32 matrix, rows renormalized).");
  m.def(
      "write_semb",
      [](const std::filesystem::path& path, const std::vector<std::string>& ids, const FloatArray& vectors) {
        export_embeddings(from_numpy(ids, vectors), path);
      },
      py::arg("path"), py::arg("ids"), py::arg("vectors"),
      "Writes rows as given; import normalizes non-unit rows.");

  py::class_<IvfPqIndex>(m, "IvfPqIndex")
      .def(py::init([](std::size_t dim, std::size_t nlist, std::size_t m_sub, bool residual, std::uint64_t seed) {
             IvfPqOptions o;
             o.nlist = nlist;
             o.m = m_sub;
             o.residual = residual;
             o.kmeans.seed = seed;
             return IvfPqIndex(dim, o);
           }),
           py::arg("dim"), py::arg("nlist") = 0, py::arg("m") = 64, py::arg("residual") = true,
           py::arg("seed") = 1234)
      .def(
          "train", [](IvfPqIndex& self, const std::vector<std::string>& ids, const FloatArray& x) {
            self.train(from_numpy(ids, x));
          },
          py::arg("ids"), py::arg("vectors"))
      .def(
          "add", [](IvfPqIndex& self, const std::vector<std::string>& ids, const FloatArray& x) {
            self.add(from_numpy(ids, x));
          },
          py::arg("ids"), py::arg("vectors"))
      .def(
          "search",
          [](const IvfPqIndex& self, const FloatArray& q, std::size_t nprobe, std::size_t k) {
            return hits_to_python(self.search(vector_arg(q), nprobe, k));
          },
          py::arg("query"), py::arg("nprobe") = 1, py::arg("k") = 1)
      .def("save", &IvfPqIndex::save, py::arg("path"))
      .def_static("load", &IvfPqIndex::load, py::arg("path"))
      .def_static("default_nlist", &IvfPqIndex::default_nlist)
      .def_static("default_nprobe", &IvfPqIndex::default_nprobe)
      .def_property_readonly("dim", &IvfPqIndex::dim)
      .def_property_readonly("nlist", &IvfPqIndex::nlist)
      .def("__len__", &IvfPqIndex::size);

  m.def(
      "exact_search",
      [](const std::vector<std::string>& ids, const FloatArray& x, const FloatArray& q, std::size_t k) {
        return hits_to_python(exact_search(from_numpy(ids, x), vector_arg(q), k));
      },
      py::arg("ids"), py::arg("vectors"), py::arg("query"), py::arg("k") = 1);

  m.def("spearman", &spearman, py::arg("xs"), py::arg("ys"));
  m.def(
      "classify_band",
      [](double las, double threshold) -> std::optional<std::string> {
        const auto band = classify_band(las, threshold);
        if (!band) return std::nullopt;
        return std::string(to_string(*band));
      },
      py::arg("las"), py::arg("threshold"));

  m.def(
      "corpus_stats",
      [](const std::vector<std::tuple<std::string, std::uint64_t, std::uint64_t>>& rows) {
        std::vector<PairCount> counts;
        for (const auto& [pair, existing, mined] : rows) counts.push_back({pair, existing, mined});
        return to_python(compute_stats(counts).to_json());
      },
      py::arg("rows"), "rows: (pair, existing, mined) tuples.");

  m.def(
      "run_pipeline",
      [](const std::filesystem::path& config, std::optional<std::string> until, bool force) {
        const auto cfg = RunConfig::load(config);
        PipelineOptions options;
        if (until) options.until = parse_stage(*until);
        options.force = force;
        PipelineResult result;
        {
          py::gil_scoped_release release;
          result = run_pipeline(cfg, options);
        }
        return to_python(result.manifest);
      },
      py::arg("config"), py::arg("until") = py::none(), py::arg("force") = false,
      "Runs the pipeline and returns its manifest.");
}
