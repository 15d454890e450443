#ifndef MF_GENERATOR_H_
#define MF_GENERATOR_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mf/activity.h"
#include "mf/engine.h"

namespace mf {

struct Distribution {
  enum class Shape { kUniform, kTriangular };
  Shape shape = Shape::kUniform;
  double min = 0;
  double max = 0;
  double mode = 0;  // triangular only

  static Distribution Constant(double x) { return {Shape::kUniform, x, x, x}; }
  double Draw(std::mt19937_64 &rng) const;
  // Rounded draw clamped to the integers inside [min, max].
  int64_t DrawCount(std::mt19937_64 &rng) const;
};

struct ActivityProfile {
  int contexts = 5;
  // Total number of log lines, setup included.
  int events = 500;
  double noise = 0.1;
  int topics_per_context = 3;
  int items_per_context = 8;
  // Block lengths are drawn uniformly from [block_min, block_max].
  int block_min = 15;
  int block_max = 40;
  double start_ts = 1700000000;
  double mean_gap_s = 90;
};

// Ground truth for one log line.
struct PlantedLabel {
  // Empty for setup lines that belong to no context.
  std::string label;
  // The calendar uri the planted context grows around.
  std::string nucleus;
  int block = -1;
  int offset = 0;
};

struct GeneratedActivity {
  std::vector<ActivityEvent> events;
  std::vector<PlantedLabel> labels;
};

struct PhotoProfile {
  int item_count = 1000;
  Distribution clicks;
  Distribution views;
  Distribution comment_chars;
  Distribution tags;
  double rating_probability = 0;
  Distribution rating{Distribution::Shape::kUniform, 1, 5, 3};
  Distribution revisit_days;
  Distribution quality;
  Distribution collection_size{Distribution::Shape::kUniform, 5, 30, 0};
  int important_persons = 5;
  int other_persons = 20;
  // Fraction of photos depicting an important person.
  double important_fraction = 0;
  // Chance that any other photo depicts an ordinary person.
  double person_link_probability = 0;
};

// Both throw InvalidProfile.
ActivityProfile ParseActivityProfile(const nlohmann::json &j);
PhotoProfile ParsePhotoProfile(const nlohmann::json &j);
void ValidateProfile(const ActivityProfile &p);
void ValidateProfile(const PhotoProfile &p);

nlohmann::json ProfileToJson(const ActivityProfile &p);
nlohmann::json ProfileToJson(const PhotoProfile &p);

GeneratedActivity GenerateActivity(const ActivityProfile &profile, uint64_t seed);

// Sidecar CSV: line,label,nucleus,block,offset.
std::string LabelsCsv(const std::vector<PlantedLabel> &labels);

// Adds photos, collections and persons to the engine's graph and records
// their usage statistics.
void GeneratePhotos(const PhotoProfile &profile, uint64_t seed, Engine &engine);

// The i-th of a family of heterogeneous photo profiles, from light to heavy
// curation effort.
PhotoProfile MixedPhotoProfile(int index, uint64_t seed);

}  // namespace mf

#endif  // MF_GENERATOR_H_
