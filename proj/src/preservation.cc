#include "mf/preservation.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mf/errors.h"
#include "mf/evidence.h"

namespace mf {
namespace {

constexpr std::array<std::string_view, kDimensionCount> kDimensionNames = {
    "investment", "gravity", "social_graph", "popularity", "coverage", "quality"};

constexpr std::array<std::string_view, 4> kPersonaNames = {
    "safe_curator", "safe_filer", "ff_curator", "ff_filer"};

double WeightOf(const PersonaStrategy &s, Dimension d) {
  return s.weights[static_cast<std::size_t>(d)];
}

bool IsImportant(const Thing &person) {
  auto it = person.attributes.find("important");
  return it != person.attributes.end() &&
         (it->second == "true" || it->second == "1");
}

}  // namespace

std::string_view DimensionName(Dimension d) {
  return kDimensionNames[static_cast<std::size_t>(d)];
}

std::string_view PersonaName(Persona p) {
  return kPersonaNames[static_cast<std::size_t>(p)];
}

std::optional<Persona> ParsePersona(std::string_view name) {
  for (std::size_t i = 0; i < kPersonaNames.size(); ++i) {
    if (kPersonaNames[i] == name) return static_cast<Persona>(i);
  }
  return std::nullopt;
}

bool IsCurator(Persona p) {
  return p == Persona::kSafeCurator || p == Persona::kFfCurator;
}

PersonaStrategy PersonaStrategy::Default(Persona persona) {
  switch (persona) {
    case Persona::kSafeCurator:
      return {persona, {0.25, 0.25, 0.15, 0.10, 0.15, 0.10}};
    case Persona::kSafeFiler:
      return {persona, {0.10, 0.15, 0.15, 0.25, 0.10, 0.25}};
    case Persona::kFfCurator:
      return {persona, {0.30, 0.25, 0.15, 0.05, 0.15, 0.10}};
    case Persona::kFfFiler:
      return {persona, {0.10, 0.10, 0.10, 0.30, 0.10, 0.30}};
  }
  throw InternalError("unhandled persona");
}

void PersonaStrategy::Validate() const {
  double sum = 0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidStrategy,
                  std::string(PersonaName(persona)) + ": negative weight");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidStrategy,
                std::string(PersonaName(persona)) + ": weights sum to " +
                    std::to_string(sum));
  }
  const double effort =
      WeightOf(*this, Dimension::kInvestment) + WeightOf(*this, Dimension::kGravity);
  const double appeal =
      WeightOf(*this, Dimension::kPopularity) + WeightOf(*this, Dimension::kQuality);
  if (IsCurator(persona) ? !(effort > appeal) : !(appeal > effort)) {
    throw Error(ErrorCode::kInvalidStrategy,
                std::string(PersonaName(persona)) +
                    ": investment+gravity vs popularity+quality ordering violated");
  }
}

double Saturate(double x, double k) {
  if (x <= 0) return 0.0;
  return x / (x + k);
}

DimensionScores ComputeDimensionScores(const Graph &graph, const EntityId &item,
                                       const UsageStats &stats,
                                       const MbLookup &mb,
                                       const PreservationParams &params) {
  const Thing &thing = graph.Get(item);
  DimensionScores dims;

  const std::array<double, 3> investment = {
      Saturate(static_cast<double>(stats.tags), params.tags_k),
      Saturate(static_cast<double>(stats.comment_chars), params.comment_chars_k),
      Saturate(static_cast<double>(stats.revisit_days), params.revisit_days_k)};
  dims[Dimension::kInvestment] = DsCombine(investment);

  // Closeness: best edge-weight product to a hot thing within two hops.
  double closeness = 0;
  const auto first_hop = graph.Neighbors(item);
  for (const Neighbor &n1 : first_hop) {
    if (n1.thing->deleted || n1.thing->id == item) continue;
    if (mb && mb(n1.thing->id) >= params.hot_mb) {
      closeness = std::max(closeness, n1.edge->weight);
    }
    for (const Neighbor &n2 : graph.Neighbors(n1.thing->id)) {
      if (n2.thing->deleted || n2.thing->id == item) continue;
      if (mb && mb(n2.thing->id) >= params.hot_mb) {
        closeness = std::max(closeness, n1.edge->weight * n2.edge->weight *
                                            params.closeness_hop_decay);
      }
    }
  }
  const std::array<double, 2> gravity = {
      Saturate(static_cast<double>(graph.Degree(item)), params.degree_k),
      closeness};
  dims[Dimension::kGravity] = DsCombine(gravity);

  std::set<EntityId> persons;
  std::vector<double> social;
  for (const Neighbor &n : first_hop) {
    if (n.thing->kind != ThingKind::kPerson || n.thing->deleted) continue;
    if (!persons.insert(n.thing->id).second) continue;
    if (IsImportant(*n.thing)) social.push_back(1.0);
  }
  if (social.empty()) {
    social.push_back(
        Saturate(static_cast<double>(persons.size()), params.person_links_k));
  }
  dims[Dimension::kSocialGraph] = DsCombine(social);

  std::vector<double> popularity = {
      Saturate(static_cast<double>(stats.views), params.views_k)};
  if (stats.rating) {
    popularity.push_back(std::clamp((*stats.rating - 1) / 4.0, 0.0, 1.0));
  }
  dims[Dimension::kPopularity] = DsCombine(popularity);

  dims[Dimension::kCoverage] = 0.0;
  dims[Dimension::kQuality] =
      std::clamp(thing.NumericAttribute("quality").value_or(0.0), 0.0, 1.0);
  return dims;
}

PVAssessment ComputePv(const EntityId &item, const DimensionScores &dims,
                       const PersonaStrategy &strategy, double threshold) {
  strategy.Validate();
  PVAssessment a;
  a.item = item;
  a.dims = dims;
  a.persona = strategy.persona;
  double pv = 0;
  for (int d = 0; d < kDimensionCount; ++d) {
    pv += strategy.weights[d] * dims.values[d];
  }
  a.pv = std::clamp(pv, 0.0, 1.0);
  a.preserve = a.pv >= threshold;
  return a;
}

TimeCapsule PartitionTimeCapsule(const Graph &graph,
                                 std::vector<PVAssessment> assessments,
                                 const PersonaStrategy &strategy,
                                 double threshold) {
  std::sort(assessments.begin(), assessments.end(),
            [](const PVAssessment &a, const PVAssessment &b) { return a.item < b.item; });
  std::map<EntityId, std::size_t> index;
  for (std::size_t i = 0; i < assessments.size(); ++i) {
    assessments[i].preserve = assessments[i].pv >= threshold;
    assessments[i].promoted = false;
    index.emplace(assessments[i].item, i);
  }

  // Collections touching any assessed item, in id order.
  std::map<EntityId, std::vector<std::size_t>> collections;
  for (std::size_t i = 0; i < assessments.size(); ++i) {
    if (!graph.Contains(assessments[i].item)) continue;
    for (const Neighbor &n : graph.Neighbors(assessments[i].item,
                                             PredicateSet{Predicate::kHasPart},
                                             Direction::kIn)) {
      collections[n.thing->id].push_back(i);
    }
  }

  TimeCapsule capsule;
  for (const auto &[collection, members] : collections) {
    bool covered = std::any_of(members.begin(), members.end(), [&](std::size_t i) {
      return assessments[i].preserve;
    });
    if (covered) continue;
    std::size_t best = members.front();
    for (std::size_t i : members) {
      if (assessments[i].pv > assessments[best].pv ||
          (assessments[i].pv == assessments[best].pv &&
           assessments[i].item < assessments[best].item)) {
        best = i;
      }
    }
    PVAssessment &a = assessments[best];
    a.dims[Dimension::kCoverage] = 1.0;
    a.pv = ComputePv(a.item, a.dims, strategy, threshold).pv;
    a.preserve = true;
    a.promoted = true;
    capsule.promotions.push_back(a.item);
  }

  for (auto &a : assessments) {
    (a.preserve ? capsule.preserve : capsule.other).push_back(std::move(a));
  }
  return capsule;
}

double CalibrateThreshold(std::span<const std::pair<double, bool>> labeled) {
  if (labeled.empty()) throw Error(ErrorCode::kEmptyFeedback, "no labeled items");
  std::set<double> candidates = {0.0, 1.0};
  for (const auto &[pv, preserve] : labeled) candidates.insert(pv);
  double best = 0.0;
  std::size_t best_errors = labeled.size() + 1;
  for (double threshold : candidates) {
    std::size_t errors = 0;
    for (const auto &[pv, preserve] : labeled) {
      if ((pv >= threshold) != preserve) ++errors;
    }
    // Ascending candidates: <= keeps the largest minimizer.
    if (errors <= best_errors) {
      best_errors = errors;
      best = threshold;
    }
  }
  return best;
}

}  // namespace mf
