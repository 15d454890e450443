#ifndef MF_BUOYANCY_H_
#define MF_BUOYANCY_H_

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "mf/graph.h"

namespace mf {

inline constexpr double kSecondsPerDay = 86400.0;

// Interaction types that carry a base stimulation strength.
enum class StimulusKind { kOpen, kRead, kWrite, kTag, kDragToContext, kClick, kCreate };
inline constexpr int kStimulusKindCount = 7;

std::string_view StimulusKindName(StimulusKind kind);
std::optional<StimulusKind> ParseStimulusKind(std::string_view name);

struct BuoyancyParams {
  // Indexed by StimulusKind.
  std::array<double, kStimulusKindCount> base_strength = {0.10, 0.10, 0.15, 0.20,
                                                          0.25, 0.08, 0.30};
  // Indexed by Predicate.
  std::array<double, kPredicateCount> spread_weight = {1.0, 0.4, 0.8, 0.7, 0.5,
                                                       0.5, 0.5, 0.5, 0.5};
  double hop_decay = 0.5;
  int hop_limit = 2;
  double cutoff = 0.01;

  double burst_window_s = 60.0;
  double burst_factor = 0.2;
  double daily_cap = 0.8;
  double first_access_cap = 0.5;

  // Two-phase decay on the active-day clock.
  double steep_half_life_days = 3.0;
  double steep_phase_days = 7.0;
  double tail_half_life_days = 60.0;
  double finished_rate_multiplier = 2.0;
  int active_day_min_events = 10;

  double anticipation_days = 3.0;
  double anticipation_strength = 0.3;

  double base(StimulusKind kind) const {
    return base_strength[static_cast<std::size_t>(kind)];
  }
  double weight(Predicate p) const {
    return spread_weight[static_cast<std::size_t>(p)];
  }
};

// mb0 * DecayFactor(tau) is the buoyancy after tau active days without
// stimulation. tau may be fractional.
double DecayFactor(double tau, bool finished, const BuoyancyParams &params);

// Counts ingested events per UTC day. Only days with enough overall activity
// advance the decay clock.
class ActiveDayClock {
 public:
  explicit ActiveDayClock(int min_events = 10) : min_events_(min_events) {}

  static int64_t DayOf(Timestamp t);

  void Record(Timestamp t);
  bool IsActive(int64_t day) const;
  // Active days d with DayOf(from) < d <= DayOf(to).
  int64_t ActiveDaysBetween(Timestamp from, Timestamp to) const;

  const std::map<int64_t, int64_t> &counts() const { return counts_; }
  void Restore(std::map<int64_t, int64_t> counts);

 private:
  int min_events_;
  std::map<int64_t, int64_t> counts_;
  std::vector<int64_t> active_days_;  // sorted
};

struct MBState {
  double mb = 0.0;  // value at last_stim, before decay
  Timestamp last_stim = 0;
  int64_t day = std::numeric_limits<int64_t>::min();
  double day_accum = 0.0;  // strength applied as origin on `day`
  std::optional<Timestamp> burst_last;
  bool finished = false;
  bool stimulated = false;
  std::optional<int64_t> anticipated_day;
};

struct Stimulus {
  EntityId node;
  double strength = 0;
  Timestamp t = 0;
};

using MbUpdates = std::vector<std::pair<EntityId, double>>;

// Memory Buoyancy: event-driven stimulation with spreading activation, burst
// dampening, daily saturation, and lazy two-phase decay.
class Buoyancy {
 public:
  explicit Buoyancy(BuoyancyParams params = {})
      : params_(params), clock_(params.active_day_min_events) {}

  const BuoyancyParams &params() const { return params_; }

  // Increment per reached node. The origin receives `strength`; a node k hops
  // away along a simple path receives strength * prod(w(e) * d / fanout) over
  // the path, summed across paths. Increments below the cutoff are dropped.
  std::map<EntityId, double> SpreadActivation(const Graph &graph,
                                              const EntityId &origin,
                                              double strength) const;

  MbUpdates Stimulate(const Graph &graph, const EntityId &node,
                      StimulusKind kind, Timestamp t);
  MbUpdates StimulateWithStrength(const Graph &graph, const EntityId &node,
                                  double strength, Timestamp t);

  double CurrentMb(const Graph &graph, const EntityId &node, Timestamp t) const;

  // Anticipatory stimuli for upcoming events, finished flags for past ones.
  std::vector<Stimulus> ApplyCalendarEffects(const Graph &graph, Timestamp t);

  void SetFinished(const EntityId &node, bool finished);
  bool IsFinished(const EntityId &node) const;

  ActiveDayClock &clock() { return clock_; }
  const ActiveDayClock &clock() const { return clock_; }
  const std::map<EntityId, MBState> &states() const { return states_; }
  void RestoreState(const EntityId &node, MBState state) {
    states_[node] = std::move(state);
  }

 private:
  double DecayedValue(const MBState &state, Timestamp t) const;

  BuoyancyParams params_;
  ActiveDayClock clock_;
  std::map<EntityId, MBState> states_;
};

}  // namespace mf

#endif  // MF_BUOYANCY_H_
