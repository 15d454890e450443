#ifndef MF_REPORTS_H_
#define MF_REPORTS_H_

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mf/activity.h"
#include "mf/context.h"
#include "mf/engine.h"
#include "mf/preservation.h"
#include "mf/search.h"

namespace mf {

// Fixed "%.12g" rendering used by every report.
std::string FormatReal(double x);
// Quotes a CSV field when it contains a comma, quote or line break.
std::string CsvField(std::string_view field);

// Collects the per-event reports of a replay.
class ReplayRecorder {
 public:
  ReplayRecorder();
  void Record(const EffectSummary &summary);

  const std::string &mb_trajectory_csv() const { return mb_trajectory_; }
  const std::string &effects_csv() const { return effects_; }

 private:
  std::string mb_trajectory_;
  std::string effects_;
};

// Ingests every event. `recorder` may be null.
void Replay(Engine &engine, const std::vector<ActivityEvent> &events,
            ReplayRecorder *recorder);

std::string PvReportCsv(const TimeCapsule &capsule);
nlohmann::json PvReportJson(const TimeCapsule &capsule, Persona persona, double threshold);

std::string TimelineCsv(const std::vector<TimelineRecord> &timeline);
nlohmann::json TimelineJson(const std::vector<TimelineRecord> &timeline);

nlohmann::json SearchResultJson(const SearchResult &result);

// Writes mb_trajectory.csv, effects.csv, pv_<persona>.{csv,json},
// timeline.{csv,json} and snapshot.json into `dir`, creating it if needed.
// Throws IoError.
void WriteReplayOutputs(const Engine &engine, const ReplayRecorder &recorder,
                        const std::string &dir);

// Whole-file helpers. Throw IoError.
std::string ReadFile(const std::string &path);
void WriteFile(const std::string &path, std::string_view content);

}  // namespace mf

#endif  // MF_REPORTS_H_
