#include "mf/reports.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mf/errors.h"

namespace mf {
namespace {

using nlohmann::json;

json AssessmentJson(const PVAssessment &a) {
  json dims = json::object();
  for (int d = 0; d < kDimensionCount; ++d) {
    dims[std::string(DimensionName(static_cast<Dimension>(d)))] = a.dims.values[d];
  }
  return {{"item", a.item.str()},
          {"dims", dims},
          {"pv", a.pv},
          {"decision", a.preserve ? "preserve" : "other"},
          {"promoted", a.promoted}};
}

std::vector<const PVAssessment *> ById(const TimeCapsule &capsule) {
  std::vector<const PVAssessment *> all;
  for (const auto &a : capsule.preserve) all.push_back(&a);
  for (const auto &a : capsule.other) all.push_back(&a);
  std::sort(all.begin(), all.end(),
            [](const PVAssessment *a, const PVAssessment *b) { return a->item < b->item; });
  return all;
}

json ClustersJson(const std::vector<HitCluster> &clusters) {
  json out = json::array();
  for (const auto &c : clusters) {
    json hits = json::array();
    for (const auto &h : c.hits) hits.push_back(h.str());
    out.push_back({{"concept", c.concept_id ? json(c.concept_id->str()) : json("other")},
                   {"hits", hits}});
  }
  return out;
}

}  // namespace

std::string FormatReal(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", x);
  return buffer;
}

std::string CsvField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

ReplayRecorder::ReplayRecorder()
    : mb_trajectory_("node,event_seq,mb\n"),
      effects_("event_seq,new_things,mentions_found,context_decision,context,mb_updates\n") {}

void ReplayRecorder::Record(const EffectSummary &s) {
  const std::string seq = std::to_string(s.event_seq);
  for (const auto &[id, mb] : s.mb_updates) {
    mb_trajectory_ += CsvField(id.str()) + "," + seq + "," + FormatReal(mb) + "\n";
  }
  std::string fresh;
  for (const auto &id : s.new_things) {
    if (!fresh.empty()) fresh += ' ';
    fresh += id.str();
  }
  effects_ += seq + "," + CsvField(fresh) + "," + std::to_string(s.mentions_found) + "," +
              s.context_decision + "," + CsvField(s.context ? s.context->str() : "") + "," +
              std::to_string(s.mb_updates.size()) + "\n";
}

void Replay(Engine &engine, const std::vector<ActivityEvent> &events,
            ReplayRecorder *recorder) {
  for (const auto &event : events) {
    EffectSummary summary = engine.Ingest(event);
    if (recorder) recorder->Record(summary);
  }
}

std::string PvReportCsv(const TimeCapsule &capsule) {
  std::string out = "item";
  for (int d = 0; d < kDimensionCount; ++d) {
    out += ",";
    out += DimensionName(static_cast<Dimension>(d));
  }
  out += ",pv,decision,promoted\n";
  for (const PVAssessment *a : ById(capsule)) {
    out += CsvField(a->item.str());
    for (double v : a->dims.values) out += "," + FormatReal(v);
    out += "," + FormatReal(a->pv) + (a->preserve ? ",preserve," : ",other,") +
           (a->promoted ? "1" : "0") + "\n";
  }
  return out;
}

json PvReportJson(const TimeCapsule &capsule, Persona persona, double threshold) {
  json items = json::array();
  for (const PVAssessment *a : ById(capsule)) items.push_back(AssessmentJson(*a));
  json promotions = json::array();
  for (const auto &id : capsule.promotions) promotions.push_back(id.str());
  return {{"persona", std::string(PersonaName(persona))},
          {"threshold", threshold},
          {"preserve_count", capsule.preserve.size()},
          {"other_count", capsule.other.size()},
          {"promotions", promotions},
          {"items", items}};
}

std::string TimelineCsv(const std::vector<TimelineRecord> &timeline) {
  std::string out = "t,kind,context,detail,from,to\n";
  for (const auto &r : timeline) {
    out += FormatReal(r.t) + "," + r.kind + "," + CsvField(r.context.str()) + "," +
           CsvField(r.detail) + "," +
           (r.from ? std::string(ContextStateName(*r.from)) : "") + "," +
           (r.to ? std::string(ContextStateName(*r.to)) : "") + "\n";
  }
  return out;
}

json TimelineJson(const std::vector<TimelineRecord> &timeline) {
  json out = json::array();
  for (const auto &r : timeline) {
    out.push_back(
        {{"t", r.t},
         {"kind", r.kind},
         {"context", r.context.str()},
         {"detail", r.detail},
         {"from", r.from ? json(std::string(ContextStateName(*r.from))) : json(nullptr)},
         {"to", r.to ? json(std::string(ContextStateName(*r.to))) : json(nullptr)}});
  }
  return out;
}

json SearchResultJson(const SearchResult &result) {
  json hits = json::array();
  for (const auto &h : result.hits) {
    hits.push_back({{"item", h.item.str()},
                    {"score", h.score},
                    {"partition", std::string(SearchPartitionName(h.partition))},
                    {"mb", h.mb}});
  }
  return {{"hits", hits},
          {"coverage",
           {{"active_count", result.active_count},
            {"forgotten_count", result.forgotten_count}}},
          {"clusters",
           {{"active", ClustersJson(result.active_clusters)},
            {"forgotten", ClustersJson(result.forgotten_clusters)}}}};
}

void WriteReplayOutputs(const Engine &engine, const ReplayRecorder &recorder,
                        const std::string &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir + ": " + ec.message());
  const std::filesystem::path root(dir);
  WriteFile((root / "mb_trajectory.csv").string(), recorder.mb_trajectory_csv());
  WriteFile((root / "effects.csv").string(), recorder.effects_csv());
  const double threshold = engine.config().preservation.threshold;
  for (Persona persona : kAllPersonas) {
    const TimeCapsule capsule = engine.Assess(persona, threshold);
    const std::string stem = "pv_" + std::string(PersonaName(persona));
    WriteFile((root / (stem + ".csv")).string(), PvReportCsv(capsule));
    WriteFile((root / (stem + ".json")).string(),
              PvReportJson(capsule, persona, threshold).dump(1) + "\n");
  }
  WriteFile((root / "timeline.csv").string(), TimelineCsv(engine.contexts().timeline()));
  WriteFile((root / "timeline.json").string(),
            TimelineJson(engine.contexts().timeline()).dump(1) + "\n");
  WriteFile((root / "snapshot.json").string(), engine.SaveSnapshot());
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string &path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path);
}

}  // namespace mf
