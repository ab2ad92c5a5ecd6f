// Python bindings. Structured results cross the boundary as JSON text; the
// package wrapper turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "relmap/engine.hpp"
#include "relmap/evaluation.hpp"
#include "relmap/serialize.hpp"
#include "relmap/similarity.hpp"
#include "relmap/source_config.hpp"
#include "relmap/suggestion.hpp"

namespace py = pybind11;
using namespace relmap;

namespace {

struct PyEngine {
  std::unique_ptr<Engine> engine;
  std::string snapshot_path;
};

std::shared_ptr<const Stoplist> stoplist_from(const std::string& path) {
  return std::make_shared<const Stoplist>(path.empty() ? Stoplist::load_default() : Stoplist::load(path));
}

PyEngine make_engine(const std::string& snapshot, const std::string& sources, const std::vector<std::string>& disable,
                     std::size_t beam, double sim_threshold, double cluster_threshold, std::size_t top_k,
                     std::size_t threads, const std::string& stoplist, bool live) {
  auto snap = std::make_shared<Snapshot>();
  if (!snapshot.empty() && std::filesystem::exists(snapshot)) snap = std::make_shared<Snapshot>(Snapshot::load(snapshot));
  SourceList list;
  if (!sources.empty()) list = load_sources(sources);
  add_replay_sources(list, *snap);
  list = without_sources(list, {disable.begin(), disable.end()});
  SearchConfig config;
  config.beam_width = beam;
  config.scoring = {sim_threshold, cluster_threshold, top_k};
  config.threads = std::max<std::size_t>(1, threads);
  AcquisitionOptions acq;
  acq.live = live;
  auto provider = std::make_shared<MemoEmbedder>(std::make_shared<HashedNgramEmbedder>());
  PyEngine e;
  e.engine = std::make_unique<Engine>(std::move(list), snap, provider, stoplist_from(stoplist), config, acq);
  e.snapshot_path = snapshot;
  return e;
}

std::string suggest_json(const PyEngine& e, const std::vector<std::string>& base, const std::vector<std::string>& target,
                         const std::string& entity) {
  const auto result = e.engine->map(base, target);
  json out = json::array();
  if (result.best().empty()) return out.dump();
  const auto s = suggest(*e.engine, result, result.best(), normalize_entity(entity).name());
  for (const auto& c : s.candidates) {
    out.push_back({{"entity", c.entity},
                   {"representative", c.representative},
                   {"members", c.cluster_members},
                   {"score", c.score},
                   {"mapping", mapping_to_json(c.best_mapping)}});
  }
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_relmap, m) {
  m.doc() = "Analogy mapping engine (native part)";

  auto base_error = py::register_exception<Error>(m, "RelmapError", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base_error);
  py::register_exception<InvalidEntityError>(m, "InvalidEntityError", base_error);
  py::register_exception<ConfigError>(m, "ConfigError", base_error);
  py::register_exception<ParseError>(m, "ParseError", base_error);
  py::register_exception<SourceUnavailableError>(m, "SourceUnavailableError", base_error);
  py::register_exception<EmbeddingUnavailableError>(m, "EmbeddingUnavailableError", base_error);

  m.def(
      "solution_space_size",
      [](std::uint64_t n, std::uint64_t k, bool include_singletons) {
        return solution_space_size(n, k, include_singletons ? CardinalityVariant::IncludeSingletons
                                                            : CardinalityVariant::ExcludeSingletons);
      },
      py::arg("n"), py::arg("m"), py::arg("include_singletons") = false);

  m.def("normalize_entity", [](const std::string& raw) { return normalize_entity(raw).name(); }, py::arg("raw"));

  m.def(
      "phrase_similarity",
      [](const std::string& a, const std::string& b, double threshold, const std::string& stoplist) {
        HashedNgramEmbedder provider;
        return phrase_similarity(a, b, provider, *stoplist_from(stoplist), threshold);
      },
      py::arg("a"), py::arg("b"), py::arg("threshold") = 0.2, py::arg("stoplist") = "");

  py::class_<PyEngine>(m, "Engine")
      .def(py::init(&make_engine), py::arg("snapshot") = "", py::arg("sources") = "",
           py::arg("disable") = std::vector<std::string>{}, py::arg("beam") = 20, py::arg("sim_threshold") = 0.2,
           py::arg("cluster_threshold") = 0.5, py::arg("top_k") = 3, py::arg("threads") = 1, py::arg("stoplist") = "",
           py::arg("live") = false)
      .def(
          "map_json",
          [](const PyEngine& e, const std::vector<std::string>& base, const std::vector<std::string>& target) {
            py::gil_scoped_release release;
            return map_result_to_json(e.engine->map(base, target)).dump();
          },
          py::arg("base"), py::arg("target"))
      .def(
          "explain_json",
          [](const PyEngine& e, const std::string& b1, const std::string& b2, const std::string& t1,
             const std::string& t2) { return explanation_to_json(e.engine->explain(b1, b2, t1, t2)).dump(); },
          py::arg("b1"), py::arg("b2"), py::arg("t1"), py::arg("t2"))
      .def("suggest_json", &suggest_json, py::arg("base"), py::arg("target"), py::arg("entity"))
      .def(
          "evaluate_json",
          [](const PyEngine& e, const std::string& problems, const std::string& ablate) {
            const auto ps = load_problems(problems);
            py::gil_scoped_release release;
            const auto report = ablate.empty() ? evaluate(ps, *e.engine) : evaluate_without(ps, *e.engine, ablate);
            return report_to_json(report).dump();
          },
          py::arg("problems"), py::arg("ablate") = "")
      .def("save_snapshot", [](const PyEngine& e, const std::string& path) { e.engine->snapshot().save(path); },
           py::arg("path"))
      .def_property_readonly("source_ids", [](const PyEngine& e) {
        std::vector<std::string> ids;
        for (const auto& s : e.engine->sources()) ids.push_back(s->id());
        return ids;
      });
}
