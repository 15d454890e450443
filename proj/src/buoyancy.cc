#include "mf/buoyancy.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "mf/errors.h"
#include "mf/evidence.h"

namespace mf {
namespace {

constexpr std::array<std::string_view, kStimulusKindCount> kStimulusNames = {
    "open", "read", "write", "tag", "drag_to_context", "click", "create"};

}  // namespace

std::string_view StimulusKindName(StimulusKind kind) {
  return kStimulusNames[static_cast<std::size_t>(kind)];
}

std::optional<StimulusKind> ParseStimulusKind(std::string_view name) {
  for (std::size_t i = 0; i < kStimulusNames.size(); ++i) {
    if (kStimulusNames[i] == name) return static_cast<StimulusKind>(i);
  }
  return std::nullopt;
}

double DecayFactor(double tau, bool finished, const BuoyancyParams &params) {
  if (tau <= 0) return 1.0;
  const double m = finished ? params.finished_rate_multiplier : 1.0;
  const double steep = std::numbers::ln2 / params.steep_half_life_days;
  const double tail = std::numbers::ln2 / params.tail_half_life_days;
  const double t1 = params.steep_phase_days;
  return std::exp(-m * steep * std::min(tau, t1)) *
         std::exp(-m * tail * std::max(tau - t1, 0.0));
}

int64_t ActiveDayClock::DayOf(Timestamp t) {
  return static_cast<int64_t>(std::floor(t / kSecondsPerDay));
}

void ActiveDayClock::Record(Timestamp t) {
  const int64_t day = DayOf(t);
  if (++counts_[day] == min_events_) {
    active_days_.insert(
        std::upper_bound(active_days_.begin(), active_days_.end(), day), day);
  }
}

bool ActiveDayClock::IsActive(int64_t day) const {
  return std::binary_search(active_days_.begin(), active_days_.end(), day);
}

int64_t ActiveDayClock::ActiveDaysBetween(Timestamp from, Timestamp to) const {
  const int64_t lo = DayOf(from);
  const int64_t hi = DayOf(to);
  if (hi <= lo) return 0;
  auto first = std::upper_bound(active_days_.begin(), active_days_.end(), lo);
  auto last = std::upper_bound(active_days_.begin(), active_days_.end(), hi);
  return last - first;
}

void ActiveDayClock::Restore(std::map<int64_t, int64_t> counts) {
  counts_ = std::move(counts);
  active_days_.clear();
  for (const auto &[day, count] : counts_) {
    if (count >= min_events_) active_days_.push_back(day);
  }
}

std::map<EntityId, double> Buoyancy::SpreadActivation(const Graph &graph,
                                                      const EntityId &origin,
                                                      double strength) const {
  if (!(strength > 0.0 && strength <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "stimulation strength must lie in (0,1]");
  }
  graph.Get(origin);  // UnknownEntity

  std::unordered_map<const Thing *, std::vector<Neighbor>> adjacency;
  auto traversable = [&](const Thing *node) -> const std::vector<Neighbor> & {
    auto [it, fresh] = adjacency.try_emplace(node);
    if (fresh) {
      for (const Neighbor &n : graph.Neighbors(node->id)) {
        if (!n.thing->deleted) it->second.push_back(n);
      }
    }
    return it->second;
  };

  std::unordered_map<const Thing *, double> reached_by;
  std::vector<const Thing *> order;
  std::vector<const Thing *> path{&graph.Get(origin)};
  // Depth-first over simple paths; `amount` is what the current node received.
  auto expand = [&](auto &&self, const Thing *node, double amount, int depth) -> void {
    if (depth >= params_.hop_limit) return;
    const std::vector<Neighbor> &next = traversable(node);
    if (next.empty()) return;
    const double share = amount * params_.hop_decay / static_cast<double>(next.size());
    for (const Neighbor &n : next) {
      const Thing *far = n.thing;
      if (std::find(path.begin(), path.end(), far) != path.end()) continue;
      const double reached =
          share * params_.weight(n.edge->predicate) * n.edge->weight;
      auto [slot, fresh] = reached_by.try_emplace(far, 0.0);
      if (fresh) order.push_back(far);
      slot->second += reached;
      path.push_back(far);
      self(self, far, reached, depth + 1);
      path.pop_back();
    }
  };
  expand(expand, path.front(), strength, 0);

  std::map<EntityId, double> sums;
  for (const Thing *thing : order) sums.emplace(thing->id, reached_by.at(thing));

  std::map<EntityId, double> result;
  for (const auto &[id, value] : sums) {
    if (value >= params_.cutoff) result.emplace(id, value);
  }
  result[origin] = strength;
  return result;
}

double Buoyancy::DecayedValue(const MBState &state, Timestamp t) const {
  const double tau =
      static_cast<double>(clock_.ActiveDaysBetween(state.last_stim, t));
  return state.mb * DecayFactor(tau, state.finished, params_);
}

double Buoyancy::CurrentMb(const Graph &graph, const EntityId &node,
                           Timestamp t) const {
  auto it = states_.find(node);
  if (it == states_.end()) {
    graph.Get(node);  // UnknownEntity
    return 0.0;
  }
  return DecayedValue(it->second, t);
}

MbUpdates Buoyancy::Stimulate(const Graph &graph, const EntityId &node,
                              StimulusKind kind, Timestamp t) {
  return StimulateWithStrength(graph, node, params_.base(kind), t);
}

MbUpdates Buoyancy::StimulateWithStrength(const Graph &graph,
                                          const EntityId &node, double strength,
                                          Timestamp t) {
  graph.Get(node);
  if (!(strength > 0.0 && strength <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "stimulation strength must lie in (0,1]");
  }
  MBState &origin = states_[node];
  double s = strength;
  if (origin.burst_last &&
      std::abs(t - *origin.burst_last) <= params_.burst_window_s) {
    s *= params_.burst_factor;
  }
  origin.burst_last = t;
  const int64_t day = ActiveDayClock::DayOf(t);
  if (origin.day != day) {
    origin.day = day;
    origin.day_accum = 0.0;
  }
  s = std::min(s, params_.daily_cap - origin.day_accum);
  if (s <= 0.0) return {};
  origin.day_accum += s;

  MbUpdates updates;
  for (const auto &[id, inc] : SpreadActivation(graph, node, s)) {
    MBState &state = states_[id];
    double mb = Oplus(DecayedValue(state, t), inc);
    if (!state.stimulated) mb = std::min(mb, params_.first_access_cap);
    state.mb = std::clamp(mb, 0.0, 1.0);
    state.last_stim = std::max(state.last_stim, t);
    state.stimulated = true;
    updates.emplace_back(id, state.mb);
  }
  return updates;
}

std::vector<Stimulus> Buoyancy::ApplyCalendarEffects(const Graph &graph,
                                                     Timestamp t) {
  std::vector<Stimulus> issued;
  const int64_t today = ActiveDayClock::DayOf(t);
  const double horizon = params_.anticipation_days * kSecondsPerDay;
  for (const auto &[id, thing] : graph.things()) {
    if (thing.kind != ThingKind::kEvent || thing.deleted) continue;
    if (auto start = thing.NumericAttribute("start");
        start && *start > t && *start - t <= horizon && clock_.IsActive(today)) {
      auto existing = states_.find(id);
      if (existing == states_.end() || existing->second.anticipated_day != today) {
        StimulateWithStrength(graph, id, params_.anticipation_strength, t);
        states_[id].anticipated_day = today;
        issued.push_back({id, params_.anticipation_strength, t});
      }
    }
    if (auto end = thing.NumericAttribute("end"); end && *end <= t) {
      if (!IsFinished(id)) SetFinished(id, true);
      for (const Neighbor &n : graph.Neighbors(id)) {
        if (n.thing->kind == ThingKind::kTask && !IsFinished(n.thing->id)) {
          SetFinished(n.thing->id, true);
        }
      }
    }
  }
  return issued;
}

void Buoyancy::SetFinished(const EntityId &node, bool finished) {
  MBState &state = states_[node];
  // The faster rate applies to the whole span since the last stimulation.
  state.finished = finished;
}

bool Buoyancy::IsFinished(const EntityId &node) const {
  auto it = states_.find(node);
  return it != states_.end() && it->second.finished;
}

}  // namespace mf
