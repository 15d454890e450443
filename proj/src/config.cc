#include "mf/config.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mf/errors.h"

namespace mf {
namespace {

using nlohmann::json;

json PersonaWeights(const PersonaStrategy &strategy) {
  json weights = json::object();
  for (int d = 0; d < kDimensionCount; ++d) {
    weights[std::string(DimensionName(static_cast<Dimension>(d)))] = strategy.weights[d];
  }
  return weights;
}

void Merge(json &base, const json &overrides, const std::string &path) {
  if (!overrides.is_object()) {
    throw Error(ErrorCode::kInvalidConfig,
                (path.empty() ? std::string("config") : path) + " must be an object");
  }
  for (const auto &[key, value] : overrides.items()) {
    const std::string where = path.empty() ? key : path + "." + key;
    auto it = base.find(key);
    if (it == base.end()) throw Error(ErrorCode::kInvalidConfig, "unknown key " + where);
    if (it->is_object()) {
      Merge(*it, value, where);
    } else if (it->is_number_unsigned()) {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<int64_t>() >= 0)) {
        throw Error(ErrorCode::kInvalidConfig, where + " must be a non-negative integer");
      }
      *it = value.get<uint64_t>();
    } else if (it->is_number_integer()) {
      if (!value.is_number_integer()) {
        throw Error(ErrorCode::kInvalidConfig, where + " must be an integer");
      }
      *it = value;
    } else if (it->is_number()) {
      if (!value.is_number()) throw Error(ErrorCode::kInvalidConfig, where + " must be a number");
      *it = value.get<double>();
    } else {
      throw InternalError("unexpected default type at " + where);
    }
  }
}

void Require(bool ok, const std::string &what) {
  if (!ok) throw Error(ErrorCode::kInvalidConfig, what);
}

bool Unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

json ConfigToJson(const EngineConfig &config) {
  const BuoyancyParams &b = config.buoyancy;
  json base_strength = json::object();
  for (int k = 0; k < kStimulusKindCount; ++k) {
    base_strength[std::string(StimulusKindName(static_cast<StimulusKind>(k)))] =
        b.base_strength[k];
  }
  json spread_weight = json::object();
  for (int p = 0; p < kPredicateCount; ++p) {
    spread_weight[std::string(PredicateName(static_cast<Predicate>(p)))] =
        b.spread_weight[p];
  }
  const ContextParams &c = config.context;
  const PreservationParams &p = config.preservation;
  json personas = json::object();
  for (Persona persona : kAllPersonas) {
    personas[std::string(PersonaName(persona))] = PersonaWeights(p.strategy(persona));
  }
  return json{
      {"seed", config.seed},
      {"reorder_window_s", config.reorder_window_s},
      {"buoyancy",
       {{"base_strength", base_strength},
        {"spread_weight", spread_weight},
        {"hop_decay", b.hop_decay},
        {"hop_limit", b.hop_limit},
        {"cutoff", b.cutoff},
        {"burst_window_s", b.burst_window_s},
        {"burst_factor", b.burst_factor},
        {"daily_cap", b.daily_cap},
        {"first_access_cap", b.first_access_cap},
        {"steep_half_life_days", b.steep_half_life_days},
        {"steep_phase_days", b.steep_phase_days},
        {"tail_half_life_days", b.tail_half_life_days},
        {"finished_rate_multiplier", b.finished_rate_multiplier},
        {"active_day_min_events", b.active_day_min_events},
        {"anticipation_days", b.anticipation_days},
        {"anticipation_strength", b.anticipation_strength}}},
      {"context",
       {{"jaccard_weight", c.jaccard_weight},
        {"cosine_weight", c.cosine_weight},
        {"recency_weight", c.recency_weight},
        {"recency_scale_days", c.recency_scale_days},
        {"switch_threshold", c.switch_threshold},
        {"new_threshold", c.new_threshold},
        {"margin", c.margin},
        {"forgotten_threshold", c.forgotten_threshold},
        {"focus_size", c.focus_size},
        {"hot_mb", c.hot_mb}}},
      {"preservation",
       {{"threshold", p.threshold},
        {"tags_k", p.tags_k},
        {"comment_chars_k", p.comment_chars_k},
        {"revisit_days_k", p.revisit_days_k},
        {"degree_k", p.degree_k},
        {"person_links_k", p.person_links_k},
        {"views_k", p.views_k},
        {"hot_mb", p.hot_mb},
        {"closeness_hop_decay", p.closeness_hop_decay},
        {"personas", personas}}},
      {"extraction",
       {{"max_strip", config.extraction.max_strip},
        {"min_stem", config.extraction.min_stem},
        {"inflected_score", config.extraction.inflected_score}}},
  };
}

EngineConfig ConfigFromJson(const json &overrides) {
  json merged = ConfigToJson(EngineConfig{});
  Merge(merged, overrides, "");

  EngineConfig config;
  config.seed = merged["seed"].get<uint64_t>();
  config.reorder_window_s = merged["reorder_window_s"].get<double>();

  const json &bj = merged["buoyancy"];
  BuoyancyParams &b = config.buoyancy;
  for (int k = 0; k < kStimulusKindCount; ++k) {
    b.base_strength[k] =
        bj["base_strength"][std::string(StimulusKindName(static_cast<StimulusKind>(k)))]
            .get<double>();
  }
  for (int p = 0; p < kPredicateCount; ++p) {
    b.spread_weight[p] =
        bj["spread_weight"][std::string(PredicateName(static_cast<Predicate>(p)))]
            .get<double>();
  }
  b.hop_decay = bj["hop_decay"];
  b.hop_limit = bj["hop_limit"];
  b.cutoff = bj["cutoff"];
  b.burst_window_s = bj["burst_window_s"];
  b.burst_factor = bj["burst_factor"];
  b.daily_cap = bj["daily_cap"];
  b.first_access_cap = bj["first_access_cap"];
  b.steep_half_life_days = bj["steep_half_life_days"];
  b.steep_phase_days = bj["steep_phase_days"];
  b.tail_half_life_days = bj["tail_half_life_days"];
  b.finished_rate_multiplier = bj["finished_rate_multiplier"];
  b.active_day_min_events = bj["active_day_min_events"];
  b.anticipation_days = bj["anticipation_days"];
  b.anticipation_strength = bj["anticipation_strength"];

  const json &cj = merged["context"];
  ContextParams &c = config.context;
  c.jaccard_weight = cj["jaccard_weight"];
  c.cosine_weight = cj["cosine_weight"];
  c.recency_weight = cj["recency_weight"];
  c.recency_scale_days = cj["recency_scale_days"];
  c.switch_threshold = cj["switch_threshold"];
  c.new_threshold = cj["new_threshold"];
  c.margin = cj["margin"];
  c.forgotten_threshold = cj["forgotten_threshold"];
  c.focus_size = cj["focus_size"];
  c.hot_mb = cj["hot_mb"];

  const json &pj = merged["preservation"];
  PreservationParams &p = config.preservation;
  p.threshold = pj["threshold"];
  p.tags_k = pj["tags_k"];
  p.comment_chars_k = pj["comment_chars_k"];
  p.revisit_days_k = pj["revisit_days_k"];
  p.degree_k = pj["degree_k"];
  p.person_links_k = pj["person_links_k"];
  p.views_k = pj["views_k"];
  p.hot_mb = pj["hot_mb"];
  p.closeness_hop_decay = pj["closeness_hop_decay"];
  for (std::size_t i = 0; i < kAllPersonas.size(); ++i) {
    const json &weights = pj["personas"][std::string(PersonaName(kAllPersonas[i]))];
    for (int d = 0; d < kDimensionCount; ++d) {
      p.personas[i].weights[d] =
          weights[std::string(DimensionName(static_cast<Dimension>(d)))].get<double>();
    }
  }

  const json &ej = merged["extraction"];
  config.extraction.max_strip = ej["max_strip"];
  config.extraction.min_stem = ej["min_stem"];
  config.extraction.inflected_score = ej["inflected_score"];

  ValidateConfig(config);
  return config;
}

void ValidateConfig(const EngineConfig &config) {
  const BuoyancyParams &b = config.buoyancy;
  for (int k = 0; k < kStimulusKindCount; ++k) {
    Require(Unit(b.base_strength[k]), "buoyancy.base_strength values must be in [0,1]");
  }
  for (int p = 0; p < kPredicateCount; ++p) {
    Require(Unit(b.spread_weight[p]), "buoyancy.spread_weight values must be in [0,1]");
  }
  Require(Unit(b.hop_decay), "buoyancy.hop_decay must be in [0,1]");
  Require(b.hop_limit >= 0 && b.hop_limit <= 8, "buoyancy.hop_limit must be in [0,8]");
  Require(Unit(b.cutoff), "buoyancy.cutoff must be in [0,1]");
  Require(std::isfinite(b.burst_window_s) && b.burst_window_s >= 0,
          "buoyancy.burst_window_s must be >= 0");
  Require(Unit(b.burst_factor), "buoyancy.burst_factor must be in [0,1]");
  Require(Unit(b.daily_cap) && b.daily_cap > 0, "buoyancy.daily_cap must be in (0,1]");
  Require(Unit(b.first_access_cap) && b.first_access_cap > 0,
          "buoyancy.first_access_cap must be in (0,1]");
  Require(std::isfinite(b.steep_half_life_days) && b.steep_half_life_days > 0,
          "buoyancy.steep_half_life_days must be > 0");
  Require(std::isfinite(b.steep_phase_days) && b.steep_phase_days >= 0,
          "buoyancy.steep_phase_days must be >= 0");
  Require(std::isfinite(b.tail_half_life_days) && b.tail_half_life_days > 0,
          "buoyancy.tail_half_life_days must be > 0");
  Require(std::isfinite(b.finished_rate_multiplier) && b.finished_rate_multiplier >= 1,
          "buoyancy.finished_rate_multiplier must be >= 1");
  Require(b.active_day_min_events >= 0, "buoyancy.active_day_min_events must be >= 0");
  Require(std::isfinite(b.anticipation_days) && b.anticipation_days >= 0,
          "buoyancy.anticipation_days must be >= 0");
  Require(Unit(b.anticipation_strength), "buoyancy.anticipation_strength must be in [0,1]");

  const ContextParams &c = config.context;
  Require(Unit(c.jaccard_weight) && Unit(c.cosine_weight) && Unit(c.recency_weight),
          "context weights must be in [0,1]");
  Require(c.jaccard_weight + c.cosine_weight + c.recency_weight <= 1.0 + 1e-9,
          "context weights must sum to at most 1");
  Require(std::isfinite(c.recency_scale_days) && c.recency_scale_days > 0,
          "context.recency_scale_days must be > 0");
  Require(Unit(c.switch_threshold) && Unit(c.new_threshold) && Unit(c.margin),
          "context thresholds must be in [0,1]");
  Require(Unit(c.forgotten_threshold), "context.forgotten_threshold must be in [0,1]");
  Require(c.focus_size >= 1, "context.focus_size must be >= 1");
  Require(Unit(c.hot_mb), "context.hot_mb must be in [0,1]");

  const PreservationParams &p = config.preservation;
  Require(Unit(p.threshold), "preservation.threshold must be in [0,1]");
  for (double k : {p.tags_k, p.comment_chars_k, p.revisit_days_k, p.degree_k,
                   p.person_links_k, p.views_k}) {
    Require(std::isfinite(k) && k > 0, "preservation saturation constants must be > 0");
  }
  Require(Unit(p.hot_mb), "preservation.hot_mb must be in [0,1]");
  Require(Unit(p.closeness_hop_decay), "preservation.closeness_hop_decay must be in [0,1]");
  for (const PersonaStrategy &s : p.personas) {
    try {
      s.Validate();
    } catch (const Error &e) {
      throw Error(ErrorCode::kInvalidConfig, e.what());
    }
  }

  const InflectionRule &r = config.extraction;
  Require(r.max_strip >= 0 && r.max_strip <= 16, "extraction.max_strip must be in [0,16]");
  Require(r.min_stem >= 1, "extraction.min_stem must be >= 1");
  Require(Unit(r.inflected_score) && r.inflected_score > 0,
          "extraction.inflected_score must be in (0,1]");

  Require(std::isfinite(config.reorder_window_s) && config.reorder_window_s >= 0,
          "reorder_window_s must be >= 0");
}

EngineConfig LoadConfigFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  json parsed = json::parse(buffer.str(), nullptr, false);
  if (parsed.is_discarded()) throw Error(ErrorCode::kInvalidConfig, path + " is not valid JSON");
  return ConfigFromJson(parsed);
}

}  // namespace mf
