// Command-line harness: replay logs, generate datasets, query and assess
// snapshots.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mf/config.h"
#include "mf/engine.h"
#include "mf/errors.h"
#include "mf/generator.h"
#include "mf/reports.h"

namespace {

constexpr int kInputError = 1;
constexpr int kInternalError = 2;

nlohmann::json ReadJsonFile(const std::string &path, mf::ErrorCode code) {
  nlohmann::json j = nlohmann::json::parse(mf::ReadFile(path), nullptr, false);
  if (j.is_discarded()) throw mf::Error(code, path + " is not valid JSON");
  return j;
}

mf::EngineConfig ConfigOrDefaults(const std::string &path) {
  return path.empty() ? mf::EngineConfig{} : mf::LoadConfigFile(path);
}

mf::Engine LoadEngine(const std::string &path) {
  return mf::Engine::LoadSnapshot(mf::ReadFile(path));
}

std::vector<mf::ActivityEvent> ReadLog(const std::string &path, const mf::EngineConfig &config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mf::Error(mf::ErrorCode::kIoError, "cannot read " + path);
  return mf::ReadEventLog(in, config.reorder_window_s);
}

mf::Engine StartEngine(const std::string &resume, const std::string &config_path) {
  if (!resume.empty()) {
    if (!config_path.empty()) {
      throw mf::Error(mf::ErrorCode::kInvalidConfig,
                      "a resumed snapshot carries its own config; drop --config");
    }
    return LoadEngine(resume);
  }
  return mf::Engine(ConfigOrDefaults(config_path));
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Managed-forgetting engine harness"};
  app.require_subcommand(1);

  std::string log_path, config_path, out_path, resume_path, profile_path, snapshot_path,
      labels_path, terms, persona_name, format = "csv";
  uint64_t seed = 42;
  int mixed_index = 0;
  double min_mb = 0.0, threshold = -1.0;
  std::vector<std::string> concepts;
  bool defaults = false;

  auto *replay = app.add_subcommand("replay", "replay an event log and write reports");
  replay->add_option("--log", log_path, "JSON-lines event log")->required();
  replay->add_option("--config", config_path, "engine config (JSON)");
  replay->add_option("--out", out_path, "output directory")->required();
  replay->add_option("--resume", resume_path, "continue from this snapshot");

  auto *generate = app.add_subcommand("generate", "generate synthetic datasets");
  generate->require_subcommand(1);
  auto *gen_activity = generate->add_subcommand("activity", "activity log with planted contexts");
  gen_activity->add_option("--profile", profile_path, "activity profile (JSON)")->required();
  gen_activity->add_option("--seed", seed, "RNG seed");
  gen_activity->add_option("--out", out_path, "log file")->required();
  gen_activity->add_option("--labels", labels_path,
                           "ground-truth sidecar (default: <out>.labels.csv)");
  auto *gen_photos = generate->add_subcommand("photos", "photo metadata snapshot");
  gen_photos->add_option("--profile", profile_path, "photo profile (JSON)")->required();
  gen_photos->add_option("--seed", seed, "RNG seed");
  gen_photos->add_option("--out", out_path, "snapshot file")->required();
  gen_photos->add_option("--config", config_path, "engine config stored in the snapshot");
  auto *gen_mixed = generate->add_subcommand("mixed-profile", "write a mixed photo profile");
  gen_mixed->add_option("--index", mixed_index, "profile index")->required();
  gen_mixed->add_option("--seed", seed, "RNG seed");
  gen_mixed->add_option("--out", out_path, "profile file")->required();

  auto *query = app.add_subcommand("query", "forgetting-aware search over a snapshot");
  query->add_option("--snapshot", snapshot_path)->required();
  query->add_option("--terms", terms, "query text");
  query->add_option("--concept", concepts, "required concept id (repeatable)");
  query->add_option("--min-mb", min_mb, "hide hits below this buoyancy");
  query->add_option("--forgotten-threshold", threshold,
                    "active/forgotten boundary (default: from the snapshot config)");

  auto *assess = app.add_subcommand("assess", "preservation report over a snapshot");
  assess->add_option("--snapshot", snapshot_path)->required();
  assess->add_option("--persona", persona_name,
                     "safe_curator, safe_filer, ff_curator or ff_filer")
      ->required();
  assess->add_option("--threshold", threshold, "preserve threshold")->required();
  assess->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto *snapshot = app.add_subcommand("snapshot", "write or verify snapshots");
  snapshot->require_subcommand(1);
  auto *snap_save = snapshot->add_subcommand("save", "replay a log into a snapshot");
  snap_save->add_option("--log", log_path, "JSON-lines event log")->required();
  snap_save->add_option("--config", config_path, "engine config (JSON)");
  snap_save->add_option("--resume", resume_path, "continue from this snapshot");
  snap_save->add_option("--out", out_path, "snapshot file")->required();
  auto *snap_load = snapshot->add_subcommand("load", "verify a snapshot and summarize it");
  snap_load->add_option("--snapshot", snapshot_path)->required();
  snap_load->add_option("--out", out_path, "re-save the loaded state here");

  auto *config = app.add_subcommand("config", "engine configuration");
  config->add_flag("--defaults", defaults, "print the default config");
  config->add_option("--check", config_path, "validate a config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (replay->parsed()) {
      mf::Engine engine = StartEngine(resume_path, config_path);
      mf::ReplayRecorder recorder;
      mf::Replay(engine, ReadLog(log_path, engine.config()), &recorder);
      mf::WriteReplayOutputs(engine, recorder, out_path);
    } else if (gen_activity->parsed()) {
      const mf::ActivityProfile profile =
          mf::ParseActivityProfile(ReadJsonFile(profile_path, mf::ErrorCode::kInvalidProfile));
      const mf::GeneratedActivity generated = mf::GenerateActivity(profile, seed);
      std::string log;
      for (const auto &event : generated.events) log += mf::FormatEventLine(event) + "\n";
      mf::WriteFile(out_path, log);
      mf::WriteFile(labels_path.empty() ? out_path + ".labels.csv" : labels_path,
                    mf::LabelsCsv(generated.labels));
    } else if (gen_photos->parsed()) {
      const mf::PhotoProfile profile =
          mf::ParsePhotoProfile(ReadJsonFile(profile_path, mf::ErrorCode::kInvalidProfile));
      mf::Engine engine(ConfigOrDefaults(config_path));
      mf::GeneratePhotos(profile, seed, engine);
      mf::WriteFile(out_path, engine.SaveSnapshot());
    } else if (gen_mixed->parsed()) {
      mf::WriteFile(out_path,
                    mf::ProfileToJson(mf::MixedPhotoProfile(mixed_index, seed)).dump(2) + "\n");
    } else if (query->parsed()) {
      const mf::Engine engine = LoadEngine(snapshot_path);
      mf::SearchQuery q;
      q.terms = terms;
      for (const auto &c : concepts) q.concept_filter.emplace(c);
      q.min_mb = min_mb;
      q.forgotten_threshold =
          threshold >= 0 ? threshold : engine.config().context.forgotten_threshold;
      std::cout << mf::SearchResultJson(engine.Query(q)).dump(1) << "\n";
    } else if (assess->parsed()) {
      const auto persona = mf::ParsePersona(persona_name);
      if (!persona) {
        throw mf::Error(mf::ErrorCode::kInvalidStrategy, "unknown persona " + persona_name);
      }
      if (!(threshold >= 0 && threshold <= 1)) {
        throw mf::Error(mf::ErrorCode::kOutOfRange, "threshold must be in [0,1]");
      }
      const mf::Engine engine = LoadEngine(snapshot_path);
      const mf::TimeCapsule capsule = engine.Assess(*persona, threshold);
      if (format == "json") {
        std::cout << mf::PvReportJson(capsule, *persona, threshold).dump(1) << "\n";
      } else {
        std::cout << mf::PvReportCsv(capsule);
      }
    } else if (snap_save->parsed()) {
      mf::Engine engine = StartEngine(resume_path, config_path);
      mf::Replay(engine, ReadLog(log_path, engine.config()), nullptr);
      mf::WriteFile(out_path, engine.SaveSnapshot());
    } else if (snap_load->parsed()) {
      const mf::Engine engine = LoadEngine(snapshot_path);
      if (!out_path.empty()) mf::WriteFile(out_path, engine.SaveSnapshot());
      nlohmann::json summary = {{"format_version", mf::kSnapshotFormatVersion},
                                {"events", engine.event_count()},
                                {"now", engine.now()},
                                {"things", engine.graph().things().size()},
                                {"edges", engine.graph().edge_count()},
                                {"contexts", engine.contexts().contexts().size()},
                                {"indexed_items", engine.index().items().size()}};
      std::cout << summary.dump(1) << "\n";
    } else if (config->parsed()) {
      if (!config_path.empty()) {
        std::cout << mf::ConfigToJson(mf::LoadConfigFile(config_path)).dump(2) << "\n";
      } else if (defaults) {
        std::cout << mf::ConfigToJson(mf::EngineConfig{}).dump(2) << "\n";
      } else {
        std::cerr << "config: pass --defaults or --check FILE\n";
        return kInputError;
      }
    }
  } catch (const mf::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return 0;
}
