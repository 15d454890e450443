#include <fstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mf/config.h"
#include "mf/engine.h"
#include "mf/errors.h"
#include "mf/evidence.h"
#include "mf/generator.h"
#include "mf/normalize.h"
#include "mf/reports.h"

namespace py = pybind11;

namespace {

// nlohmann::json -> Python objects via the json module.
py::object ToPython(const nlohmann::json &j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json FromText(const std::string &text, mf::ErrorCode code) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw mf::Error(code, "not valid JSON");
  return j;
}

mf::Persona PersonaOrThrow(const std::string &name) {
  auto persona = mf::ParsePersona(name);
  if (!persona) throw mf::Error(mf::ErrorCode::kInvalidStrategy, "unknown persona " + name);
  return *persona;
}

py::dict SummaryDict(const mf::EffectSummary &s) {
  py::dict d;
  d["event_seq"] = s.event_seq;
  std::vector<std::string> fresh;
  for (const auto &id : s.new_things) fresh.push_back(id.str());
  d["new_things"] = fresh;
  d["mentions_found"] = s.mentions_found;
  d["context_decision"] = s.context_decision;
  d["context"] = s.context ? py::object(py::str(s.context->str())) : py::object(py::none());
  d["mb_updates"] = s.mb_updates.size();
  return d;
}

mf::Engine MakeEngine(const std::string &config_json) {
  if (config_json.empty()) return mf::Engine{};
  return mf::Engine(mf::ConfigFromJson(FromText(config_json, mf::ErrorCode::kInvalidConfig)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Managed-forgetting engine over a personal knowledge graph";

  static py::handle error_type =
      py::exception<mf::Error>(m, "Error", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const mf::Error &e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(mf::ErrorCodeName(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def("ds_combine", [](const std::vector<double> &values) { return mf::DsCombine(values); },
        py::arg("values"));
  m.def("normalize", &mf::Normalize, py::arg("text"));
  m.def("default_config", [] { return mf::ConfigToJson(mf::EngineConfig{}).dump(); });

  py::class_<mf::Engine>(m, "Engine")
      .def(py::init(&MakeEngine), py::arg("config_json") = "")
      .def("ingest",
           [](mf::Engine &e, const std::string &line) {
             return SummaryDict(e.Ingest(mf::ParseEventLine(line)));
           },
           py::arg("line"))
      .def("replay",
           [](mf::Engine &e, const std::string &path) {
             std::ifstream in(path, std::ios::binary);
             if (!in) throw mf::Error(mf::ErrorCode::kIoError, "cannot read " + path);
             mf::Replay(e, mf::ReadEventLog(in, e.config().reorder_window_s), nullptr);
           },
           py::arg("path"))
      .def("query",
           [](const mf::Engine &e, const std::string &terms,
              const std::vector<std::string> &concepts, double min_mb,
              std::optional<double> forgotten_threshold) {
             mf::SearchQuery q;
             q.terms = terms;
             for (const auto &c : concepts) q.concept_filter.emplace(c);
             q.min_mb = min_mb;
             q.forgotten_threshold =
                 forgotten_threshold.value_or(e.config().context.forgotten_threshold);
             return ToPython(mf::SearchResultJson(e.Query(q)));
           },
           py::arg("terms"), py::arg("concepts") = std::vector<std::string>{},
           py::arg("min_mb") = 0.0, py::arg("forgotten_threshold") = py::none())
      .def("assess",
           [](const mf::Engine &e, const std::string &persona, double threshold) {
             const mf::Persona p = PersonaOrThrow(persona);
             return ToPython(mf::PvReportJson(e.Assess(p, threshold), p, threshold));
           },
           py::arg("persona"), py::arg("threshold"))
      .def("current_mb",
           [](const mf::Engine &e, const std::string &id) { return e.CurrentMb(mf::EntityId(id)); },
           py::arg("id"))
      .def("injections",
           [](const mf::Engine &e, const std::string &ctx) {
             const mf::InjectionViews v = e.Injections(mf::EntityId(ctx));
             py::dict d;
             auto ids = [](const std::vector<mf::ScoredItem> &items) {
               std::vector<std::string> out;
               for (const auto &i : items) out.push_back(i.item.str());
               return out;
             };
             auto plain = [](const std::vector<mf::EntityId> &items) {
               std::vector<std::string> out;
               for (const auto &i : items) out.push_back(i.str());
               return out;
             };
             d["current"] = ids(v.current);
             d["forgotten"] = ids(v.forgotten);
             d["last_focus"] = plain(v.last_focus);
             d["cross_context_hot"] = plain(v.cross_context_hot);
             return d;
           },
           py::arg("context"))
      .def("contexts",
           [](const mf::Engine &e) {
             std::vector<std::string> out;
             for (const auto &[id, ctx] : e.contexts().contexts()) out.push_back(id.str());
             return out;
           })
      .def("timeline",
           [](const mf::Engine &e) {
             return ToPython(mf::TimelineJson(e.contexts().timeline()));
           })
      .def_property_readonly("current_context",
                             [](const mf::Engine &e) -> std::optional<std::string> {
                               if (!e.contexts().current()) return std::nullopt;
                               return e.contexts().current()->str();
                             })
      .def_property_readonly("now", &mf::Engine::now)
      .def_property_readonly("event_count", &mf::Engine::event_count)
      .def("save_snapshot", &mf::Engine::SaveSnapshot)
      .def_static(
          "load_snapshot",
          [](const std::string &text) { return mf::Engine::LoadSnapshot(text); },
          py::arg("text"));

  m.def(
      "generate_activity",
      [](const std::string &profile_json, uint64_t seed) {
        const mf::GeneratedActivity g = mf::GenerateActivity(
            mf::ParseActivityProfile(FromText(profile_json, mf::ErrorCode::kInvalidProfile)),
            seed);
        std::vector<std::string> lines;
        for (const auto &event : g.events) lines.push_back(mf::FormatEventLine(event));
        return py::make_tuple(lines, mf::LabelsCsv(g.labels));
      },
      py::arg("profile_json"), py::arg("seed"));
  m.def(
      "generate_photos",
      [](const std::string &profile_json, uint64_t seed) {
        mf::Engine engine;
        mf::GeneratePhotos(
            mf::ParsePhotoProfile(FromText(profile_json, mf::ErrorCode::kInvalidProfile)), seed,
            engine);
        return engine;
      },
      py::arg("profile_json"), py::arg("seed"));
}
