#include "mf/generator.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mf/errors.h"

namespace mf {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 16> kSyllables = {
    "ba", "ko", "ri", "te", "mu", "sa", "lo", "vi",
    "de", "na", "fu", "ge", "pi", "zo", "hu", "ye"};

constexpr std::array<std::string_view, 12> kFillers = {
    "draft",   "review", "notes",   "summary",  "update",   "figures",
    "agenda",  "minutes", "outline", "comments", "followup", "sketch"};

constexpr std::array<ThingKind, 4> kItemKinds = {ThingKind::kFile, ThingKind::kNote,
                                                 ThingKind::kEmail, ThingKind::kWebpage};

std::string Pseudoword(int n) {
  std::string word;
  for (int i = 0; i < 3; ++i) {
    word += kSyllables[n % 16];
    n /= 16;
  }
  return word;
}

std::string Padded(const char *prefix, int n, int width) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%s%0*d", prefix, width, n);
  return buffer;
}

void RequireProfile(bool ok, const std::string &what) {
  if (!ok) throw Error(ErrorCode::kInvalidProfile, what);
}

bool Probability(double p) { return std::isfinite(p) && p >= 0 && p <= 1; }

void ValidateDistribution(const Distribution &d, const std::string &name) {
  RequireProfile(std::isfinite(d.min) && std::isfinite(d.max) && std::isfinite(d.mode),
                 name + " must be finite");
  RequireProfile(d.min >= 0, name + ".min must be >= 0");
  RequireProfile(d.min <= d.max, name + ".min must not exceed max");
  if (d.shape == Distribution::Shape::kTriangular) {
    RequireProfile(d.min <= d.mode && d.mode <= d.max, name + ".mode must lie in [min,max]");
  }
}

void ValidateCountDistribution(const Distribution &d, const std::string &name) {
  ValidateDistribution(d, name);
  RequireProfile(std::ceil(d.min) <= std::floor(d.max),
                 name + " must contain at least one integer");
}

Distribution ParseDistribution(const json &j, const std::string &name) {
  RequireProfile(j.is_object(), name + " must be an object");
  Distribution d;
  for (const auto &[key, value] : j.items()) {
    if (key != "shape" && key != "min" && key != "max" && key != "mode") {
      throw Error(ErrorCode::kInvalidProfile, "unknown key " + name + "." + key);
    }
    if (key != "shape") RequireProfile(value.is_number(), name + "." + key + " must be a number");
  }
  const std::string shape = j.value("shape", std::string("uniform"));
  if (shape == "uniform") {
    d.shape = Distribution::Shape::kUniform;
  } else if (shape == "triangular") {
    d.shape = Distribution::Shape::kTriangular;
  } else {
    throw Error(ErrorCode::kInvalidProfile, name + ".shape must be uniform or triangular");
  }
  RequireProfile(j.contains("min") && j.contains("max"), name + " needs min and max");
  d.min = j["min"].get<double>();
  d.max = j["max"].get<double>();
  d.mode = j.value("mode", (d.min + d.max) / 2);
  return d;
}

json DistributionJson(const Distribution &d) {
  json j = {{"shape", d.shape == Distribution::Shape::kUniform ? "uniform" : "triangular"},
            {"min", d.min},
            {"max", d.max}};
  if (d.shape == Distribution::Shape::kTriangular) j["mode"] = d.mode;
  return j;
}

template <typename T>
void ReadField(const json &j, const char *key, T &out, const char *what) {
  if (auto it = j.find(key); it != j.end()) {
    if constexpr (std::is_integral_v<T>) {
      RequireProfile(it->is_number_integer(), std::string(what) + "." + key + " must be an integer");
    } else {
      RequireProfile(it->is_number(), std::string(what) + "." + key + " must be a number");
    }
    out = it->get<T>();
  }
}

void RejectUnknown(const json &j, std::initializer_list<std::string_view> known,
                   const char *what) {
  RequireProfile(j.is_object(), std::string(what) + " profile must be an object");
  for (const auto &[key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorCode::kInvalidProfile, std::string("unknown key ") + what + "." + key);
    }
  }
}

}  // namespace

double Distribution::Draw(std::mt19937_64 &rng) const {
  if (min == max) return min;
  if (shape == Shape::kUniform) return std::uniform_real_distribution<double>(min, max)(rng);
  std::vector<double> points;
  std::vector<double> density;
  if (mode > min) {
    points.push_back(min);
    density.push_back(0);
  }
  points.push_back(mode);
  density.push_back(1);
  if (mode < max) {
    points.push_back(max);
    density.push_back(0);
  }
  std::piecewise_linear_distribution<double> tri(points.begin(), points.end(),
                                                 density.begin());
  return std::clamp(tri(rng), min, max);
}

int64_t Distribution::DrawCount(std::mt19937_64 &rng) const {
  const double x = std::round(Draw(rng));
  return static_cast<int64_t>(std::clamp(x, std::ceil(min), std::floor(max)));
}

void ValidateProfile(const ActivityProfile &p) {
  RequireProfile(p.contexts >= 1, "contexts must be >= 1");
  RequireProfile(p.topics_per_context >= 1, "topics_per_context must be >= 1");
  RequireProfile(p.items_per_context >= 1, "items_per_context must be >= 1");
  RequireProfile(static_cast<int64_t>(p.contexts) * p.topics_per_context <= 4096,
                 "at most 4096 topics");
  RequireProfile(Probability(p.noise), "noise must be in [0,1]");
  RequireProfile(p.block_min >= 1 && p.block_min <= p.block_max,
                 "need 1 <= block_min <= block_max");
  RequireProfile(std::isfinite(p.start_ts) && p.start_ts >= 0, "start_ts must be >= 0");
  RequireProfile(std::isfinite(p.mean_gap_s) && p.mean_gap_s > 0, "mean_gap_s must be > 0");
  const int setup = p.contexts * (p.topics_per_context + 1);
  RequireProfile(p.events >= setup,
                 "events must cover the setup lines (" + std::to_string(setup) + ")");
}

void ValidateProfile(const PhotoProfile &p) {
  RequireProfile(p.item_count >= 0, "item_count must be >= 0");
  ValidateCountDistribution(p.clicks, "clicks");
  ValidateCountDistribution(p.views, "views");
  ValidateCountDistribution(p.comment_chars, "comment_chars");
  ValidateCountDistribution(p.tags, "tags");
  ValidateCountDistribution(p.revisit_days, "revisit_days");
  ValidateCountDistribution(p.rating, "rating");
  RequireProfile(p.rating.min >= 1 && p.rating.max <= 5, "rating must lie in [1,5]");
  ValidateDistribution(p.quality, "quality");
  RequireProfile(p.quality.max <= 1, "quality must lie in [0,1]");
  ValidateCountDistribution(p.collection_size, "collection_size");
  RequireProfile(p.collection_size.min >= 1, "collection_size.min must be >= 1");
  RequireProfile(Probability(p.rating_probability), "rating_probability must be in [0,1]");
  RequireProfile(Probability(p.important_fraction), "important_fraction must be in [0,1]");
  RequireProfile(Probability(p.person_link_probability),
                 "person_link_probability must be in [0,1]");
  RequireProfile(p.important_persons >= 0 && p.other_persons >= 0,
                 "person counts must be >= 0");
  RequireProfile(p.important_fraction == 0 || p.important_persons > 0,
                 "important_fraction needs important persons");
  RequireProfile(p.person_link_probability == 0 || p.other_persons > 0,
                 "person_link_probability needs other persons");
}

ActivityProfile ParseActivityProfile(const json &j) {
  RejectUnknown(j,
                {"contexts", "events", "noise", "topics_per_context", "items_per_context",
                 "block_min", "block_max", "start_ts", "mean_gap_s"},
                "activity");
  ActivityProfile p;
  ReadField(j, "contexts", p.contexts, "activity");
  ReadField(j, "events", p.events, "activity");
  ReadField(j, "noise", p.noise, "activity");
  ReadField(j, "topics_per_context", p.topics_per_context, "activity");
  ReadField(j, "items_per_context", p.items_per_context, "activity");
  ReadField(j, "block_min", p.block_min, "activity");
  ReadField(j, "block_max", p.block_max, "activity");
  ReadField(j, "start_ts", p.start_ts, "activity");
  ReadField(j, "mean_gap_s", p.mean_gap_s, "activity");
  ValidateProfile(p);
  return p;
}

PhotoProfile ParsePhotoProfile(const json &j) {
  RejectUnknown(j,
                {"item_count", "clicks", "views", "comment_chars", "tags",
                 "rating_probability", "rating", "revisit_days", "quality",
                 "collection_size", "important_persons", "other_persons",
                 "important_fraction", "person_link_probability"},
                "photos");
  PhotoProfile p;
  ReadField(j, "item_count", p.item_count, "photos");
  ReadField(j, "rating_probability", p.rating_probability, "photos");
  ReadField(j, "important_persons", p.important_persons, "photos");
  ReadField(j, "other_persons", p.other_persons, "photos");
  ReadField(j, "important_fraction", p.important_fraction, "photos");
  ReadField(j, "person_link_probability", p.person_link_probability, "photos");
  const std::pair<const char *, Distribution *> dists[] = {
      {"clicks", &p.clicks},         {"views", &p.views},
      {"comment_chars", &p.comment_chars}, {"tags", &p.tags},
      {"rating", &p.rating},         {"revisit_days", &p.revisit_days},
      {"quality", &p.quality},       {"collection_size", &p.collection_size}};
  for (const auto &[key, dist] : dists) {
    if (auto it = j.find(key); it != j.end()) *dist = ParseDistribution(*it, key);
  }
  ValidateProfile(p);
  return p;
}

json ProfileToJson(const ActivityProfile &p) {
  return {{"contexts", p.contexts},
          {"events", p.events},
          {"noise", p.noise},
          {"topics_per_context", p.topics_per_context},
          {"items_per_context", p.items_per_context},
          {"block_min", p.block_min},
          {"block_max", p.block_max},
          {"start_ts", p.start_ts},
          {"mean_gap_s", p.mean_gap_s}};
}

json ProfileToJson(const PhotoProfile &p) {
  return {{"item_count", p.item_count},
          {"clicks", DistributionJson(p.clicks)},
          {"views", DistributionJson(p.views)},
          {"comment_chars", DistributionJson(p.comment_chars)},
          {"tags", DistributionJson(p.tags)},
          {"rating_probability", p.rating_probability},
          {"rating", DistributionJson(p.rating)},
          {"revisit_days", DistributionJson(p.revisit_days)},
          {"quality", DistributionJson(p.quality)},
          {"collection_size", DistributionJson(p.collection_size)},
          {"important_persons", p.important_persons},
          {"other_persons", p.other_persons},
          {"important_fraction", p.important_fraction},
          {"person_link_probability", p.person_link_probability}};
}

GeneratedActivity GenerateActivity(const ActivityProfile &profile, uint64_t seed) {
  ValidateProfile(profile);
  std::mt19937_64 rng(seed);
  const int k_count = profile.contexts;

  std::vector<int> word_ids(4096);
  for (int i = 0; i < 4096; ++i) word_ids[i] = i;
  std::shuffle(word_ids.begin(), word_ids.end(), rng);

  struct Planted {
    std::string label;
    std::string nucleus;
    std::vector<std::string> topics;
    std::vector<ItemDescriptor> items;
  };
  std::vector<Planted> planted(k_count);
  int next_word = 0;
  for (int k = 0; k < k_count; ++k) {
    Planted &p = planted[k];
    p.label = Padded("planted-", k, 2);
    p.nucleus = Padded("calendar:planted/", k, 2);
    for (int i = 0; i < profile.topics_per_context; ++i) {
      p.topics.push_back(Pseudoword(word_ids[next_word++]));
    }
    for (int i = 0; i < profile.items_per_context; ++i) {
      ItemDescriptor d;
      d.kind = kItemKinds[i % kItemKinds.size()];
      d.uri = "file:///planted/" + p.label + "/" + Padded("item", i, 3);
      d.title = p.topics[i % p.topics.size()] + " " +
                std::string(kFillers[(k + i) % kFillers.size()]) + " " + std::to_string(i + 1);
      p.items.push_back(std::move(d));
    }
  }

  GeneratedActivity out;
  Timestamp ts = profile.start_ts;
  std::exponential_distribution<double> gap(1.0 / profile.mean_gap_s);
  auto next_ts = [&] {
    ts += 1.0 + std::round(gap(rng));
    return ts;
  };

  for (int k = 0; k < k_count; ++k) {
    for (const auto &topic : planted[k].topics) {
      ActivityEvent e;
      e.ts = next_ts();
      e.type = EventType::kCreate;
      e.descriptor = ItemDescriptor{ThingKind::kTopic, "topic:" + topic, topic, {}, {}};
      e.app = "pimo";
      out.events.push_back(std::move(e));
      out.labels.push_back({});
    }
  }
  for (int k = 0; k < k_count; ++k) {
    const Planted &p = planted[k];
    ActivityEvent e;
    e.ts = next_ts();
    e.type = EventType::kCalendarCreate;
    ItemDescriptor d{ThingKind::kEvent, p.nucleus, "Kickoff " + p.topics[0], {}, {}};
    d.start = profile.start_ts + 30 * kSecondsPerDay + k * 3600;
    d.end = *d.start + 3600;
    e.descriptor = d;
    std::string text = "Session on";
    for (std::size_t i = 0; i < p.topics.size(); ++i) {
      text += (i == 0 ? " " : (i + 1 == p.topics.size() ? " and " : ", ")) + p.topics[i];
    }
    e.text = text;
    e.app = "calendar";
    out.events.push_back(std::move(e));
    out.labels.push_back({p.label, p.nucleus, -1, 0});
  }

  constexpr std::array<EventType, 5> kTypes = {EventType::kOpen, EventType::kRead,
                                               EventType::kWrite, EventType::kTag,
                                               EventType::kClick};
  std::discrete_distribution<int> pick_type({35, 20, 20, 10, 15});
  std::uniform_int_distribution<int> block_len(profile.block_min, profile.block_max);
  std::bernoulli_distribution noisy(profile.noise);

  int block = 0;
  int current = -1;
  while (static_cast<int>(out.events.size()) < profile.events) {
    int next = 0;
    if (k_count > 1) {
      next = std::uniform_int_distribution<int>(0, k_count - 2)(rng);
      if (current >= 0 && next >= current) ++next;
    }
    current = next;
    const int length = block_len(rng);
    for (int offset = 0;
         offset < length && static_cast<int>(out.events.size()) < profile.events; ++offset) {
      int source = current;
      if (k_count > 1 && noisy(rng)) {
        source = std::uniform_int_distribution<int>(0, k_count - 2)(rng);
        if (source >= current) ++source;
      }
      const Planted &p = planted[source];
      const ItemDescriptor &item =
          p.items[std::uniform_int_distribution<std::size_t>(0, p.items.size() - 1)(rng)];
      std::uniform_int_distribution<std::size_t> pick_topic(0, p.topics.size() - 1);
      std::uniform_int_distribution<std::size_t> pick_filler(0, kFillers.size() - 1);
      ActivityEvent e;
      e.ts = next_ts();
      e.type = kTypes[pick_type(rng)];
      e.descriptor = item;
      e.text = std::string(kFillers[pick_filler(rng)]) + " " + p.topics[pick_topic(rng)] +
               " " + std::string(kFillers[pick_filler(rng)]) + " " +
               p.topics[pick_topic(rng)];
      e.app = "desktop";
      out.events.push_back(std::move(e));
      out.labels.push_back({planted[current].label, planted[current].nucleus, block, offset});
    }
    ++block;
  }
  return out;
}

std::string LabelsCsv(const std::vector<PlantedLabel> &labels) {
  std::ostringstream out;
  out << "line,label,nucleus,block,offset\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const PlantedLabel &l = labels[i];
    out << (i + 1) << ',' << l.label << ',' << l.nucleus << ',' << l.block << ','
        << l.offset << '\n';
  }
  return out.str();
}

void GeneratePhotos(const PhotoProfile &profile, uint64_t seed, Engine &engine) {
  ValidateProfile(profile);
  std::mt19937_64 rng(seed);
  Graph &graph = engine.graph();

  std::vector<EntityId> important, others;
  for (int i = 0; i < profile.important_persons; ++i) {
    Thing person;
    person.id = EntityId(Padded("person:important/", i + 1, 3));
    person.kind = ThingKind::kPerson;
    person.primary_label = "Important person " + std::to_string(i + 1);
    person.attributes["important"] = "true";
    important.push_back(graph.AddThing(std::move(person)));
  }
  for (int i = 0; i < profile.other_persons; ++i) {
    Thing person;
    person.id = EntityId(Padded("person:other/", i + 1, 3));
    person.kind = ThingKind::kPerson;
    person.primary_label = "Person " + std::to_string(i + 1);
    others.push_back(graph.AddThing(std::move(person)));
  }

  std::bernoulli_distribution rated(profile.rating_probability);
  std::bernoulli_distribution depicts_important(profile.important_fraction);
  std::bernoulli_distribution depicts_other(profile.person_link_probability);
  int collection = 0;
  int64_t left_in_collection = 0;
  EntityId collection_id;
  for (int i = 0; i < profile.item_count; ++i) {
    if (left_in_collection == 0) {
      left_in_collection = std::max<int64_t>(1, profile.collection_size.DrawCount(rng));
      Thing album;
      album.id = EntityId(Padded("collection:", ++collection, 4));
      album.kind = ThingKind::kCollection;
      album.primary_label = "Album " + std::to_string(collection);
      collection_id = graph.AddThing(std::move(album));
    }
    --left_in_collection;

    Thing photo;
    photo.id = EntityId(Padded("photo:", i + 1, 5));
    photo.kind = ThingKind::kPhoto;
    photo.primary_label = "Photo " + std::to_string(i + 1);
    char quality[32];
    std::snprintf(quality, sizeof(quality), "%.6f", profile.quality.Draw(rng));
    photo.attributes["quality"] = quality;
    const EntityId id = graph.AddThing(std::move(photo));
    graph.AddEdge(collection_id, Predicate::kHasPart, id);

    UsageStats stats;
    stats.clicks = profile.clicks.DrawCount(rng);
    stats.views = profile.views.DrawCount(rng);
    stats.comment_chars = profile.comment_chars.DrawCount(rng);
    stats.tags = profile.tags.DrawCount(rng);
    stats.revisit_days = profile.revisit_days.DrawCount(rng);
    if (rated(rng)) stats.rating = static_cast<int>(profile.rating.DrawCount(rng));
    if (depicts_important(rng)) {
      graph.AddEdge(id, Predicate::kRelatedTo,
                    important[std::uniform_int_distribution<std::size_t>(
                        0, important.size() - 1)(rng)]);
    } else if (depicts_other(rng)) {
      graph.AddEdge(id, Predicate::kRelatedTo,
                    others[std::uniform_int_distribution<std::size_t>(
                        0, others.size() - 1)(rng)]);
    }
    engine.SetUsage(id, stats);
  }
  engine.Refresh();
}

PhotoProfile MixedPhotoProfile(int index, uint64_t seed) {
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(index + 1)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // The simulated user follows persona index % 4. Curators put more effort
  // into their collections than filers, file-and-forget users the least.
  static constexpr double kEffortLow[] = {0.65, 0.35, 0.6, 0.25};
  const double effort = kEffortLow[index % 4] + 0.3 * unit(rng);
  auto tri = [](double lo, double mode, double hi) {
    return Distribution{Distribution::Shape::kTriangular, lo, hi, mode};
  };
  PhotoProfile p;
  p.item_count = 1000;
  p.clicks = tri(0, std::round(4 * effort), std::round(20 * effort));
  p.views = tri(0, std::round(10 * effort), std::round(60 * effort));
  p.comment_chars = tri(0, 0, std::round(400 * effort));
  p.tags = tri(0, std::round(2 * effort), std::round(8 * effort));
  p.revisit_days = tri(0, std::round(2 * effort), std::round(12 * effort));
  p.rating_probability = 0.3 + 0.4 * unit(rng);
  p.rating = tri(1, 3, 5);
  p.quality = tri(0.1, 0.5 + 0.2 * unit(rng), 1.0);
  p.collection_size = Distribution{Distribution::Shape::kUniform, 5,
                                   std::round(15 + 20 * unit(rng)), 0};
  p.important_persons = 5;
  p.other_persons = 30;
  p.important_fraction = 0.1 + 0.15 * unit(rng);
  p.person_link_probability = 0.3 + 0.3 * unit(rng);
  return p;
}

}  // namespace mf
