#ifndef MF_PRESERVATION_H_
#define MF_PRESERVATION_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mf/graph.h"

namespace mf {

enum class Dimension { kInvestment, kGravity, kSocialGraph, kPopularity, kCoverage, kQuality };
inline constexpr int kDimensionCount = 6;

std::string_view DimensionName(Dimension d);

struct DimensionScores {
  std::array<double, kDimensionCount> values{};

  double &operator[](Dimension d) { return values[static_cast<std::size_t>(d)]; }
  double operator[](Dimension d) const { return values[static_cast<std::size_t>(d)]; }
};

enum class Persona { kSafeCurator, kSafeFiler, kFfCurator, kFfFiler };
inline constexpr std::array<Persona, 4> kAllPersonas = {
    Persona::kSafeCurator, Persona::kSafeFiler, Persona::kFfCurator,
    Persona::kFfFiler};

std::string_view PersonaName(Persona p);
std::optional<Persona> ParsePersona(std::string_view name);
bool IsCurator(Persona p);

struct PersonaStrategy {
  Persona persona = Persona::kSafeCurator;
  // Indexed by Dimension.
  std::array<double, kDimensionCount> weights{};

  static PersonaStrategy Default(Persona persona);
  // Throws InvalidStrategy: negative weights, weights not summing to 1, or
  // curator/filer emphasis inverted.
  void Validate() const;
};

struct UsageStats {
  int64_t clicks = 0;
  int64_t views = 0;
  int64_t comment_chars = 0;
  int64_t tags = 0;
  std::optional<int> rating;  // 1..5
  int64_t revisit_days = 0;
  std::optional<int64_t> last_access_day;
};

struct PreservationParams {
  double threshold = 0.35;
  double tags_k = 3;
  double comment_chars_k = 200;
  double revisit_days_k = 5;
  double degree_k = 6;
  double person_links_k = 3;
  double views_k = 20;
  double hot_mb = 0.7;
  double closeness_hop_decay = 0.5;
  std::array<PersonaStrategy, 4> personas = {
      PersonaStrategy::Default(Persona::kSafeCurator),
      PersonaStrategy::Default(Persona::kSafeFiler),
      PersonaStrategy::Default(Persona::kFfCurator),
      PersonaStrategy::Default(Persona::kFfFiler)};

  const PersonaStrategy &strategy(Persona p) const {
    return personas[static_cast<std::size_t>(p)];
  }
};

// x / (x + k): maps a non-negative count into [0,1).
double Saturate(double x, double k);

using MbLookup = std::function<double(const EntityId &)>;

// Throws UnknownEntity. `mb` supplies current buoyancy for the gravity
// closeness indicator.
DimensionScores ComputeDimensionScores(const Graph &graph, const EntityId &item,
                                       const UsageStats &stats,
                                       const MbLookup &mb,
                                       const PreservationParams &params);

struct PVAssessment {
  EntityId item;
  DimensionScores dims;
  double pv = 0;
  Persona persona = Persona::kSafeCurator;
  bool preserve = false;
  bool promoted = false;
};

// Weighted sum of the dimensions. Throws InvalidStrategy.
PVAssessment ComputePv(const EntityId &item, const DimensionScores &dims,
                       const PersonaStrategy &strategy, double threshold);

struct TimeCapsule {
  std::vector<PVAssessment> preserve;
  std::vector<PVAssessment> other;
  std::vector<EntityId> promotions;
};

// Splits by pv >= threshold, then promotes the best member of every
// collection (hasPart container) left without a preserved member. Promoted
// items get full coverage and their pv recomputed.
TimeCapsule PartitionTimeCapsule(const Graph &graph,
                                 std::vector<PVAssessment> assessments,
                                 const PersonaStrategy &strategy,
                                 double threshold);

// Threshold from {observed pvs} U {0, 1} minimizing disagreement with the
// (pv, preserve) labels; ties go to the larger threshold. Throws
// EmptyFeedback.
double CalibrateThreshold(std::span<const std::pair<double, bool>> labeled);

}  // namespace mf

#endif  // MF_PRESERVATION_H_
