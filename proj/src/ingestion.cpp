#include "blab/ingestion/ingestion.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "blab/selection/select.hpp"

namespace blab::ingestion {

using warehouse::Kind;
using warehouse::Observation;

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

UtcTime system_now() {
  return UtcTime{std::chrono::duration_cast<std::chrono::seconds>(
                     std::chrono::system_clock::now().time_since_epoch())
                     .count()};
}

}  // namespace

std::vector<SourceConfig> load_sources(const std::string& text) {
  std::vector<SourceConfig> configs;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string head;
    fields >> head;
    if (head != "source")
      throw ConfigError(lineno, "expected a 'source' line");
    SourceConfig cfg;
    fields >> cfg.source_id;
    if (cfg.source_id.empty())
      throw ConfigError(lineno, "missing source id");
    for (const SourceConfig& prev : configs)
      if (prev.source_id == cfg.source_id)
        throw ConfigError(lineno, "duplicate source id: " + cfg.source_id);
    bool have_kind = false, have_endpoint = false, have_parser = false;
    std::string tok;
    while (fields >> tok) {
      size_t eq = tok.find('=');
      if (eq == std::string::npos)
        throw ConfigError(lineno, "expected key=value, got: " + tok);
      std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
      if (key == "kind") {
        auto k = warehouse::kind_from_name(value);
        if (!k) throw ConfigError(lineno, "unknown kind: " + value);
        cfg.kind = *k;
        have_kind = true;
      } else if (key == "endpoint") {
        cfg.endpoint = value;
        have_endpoint = true;
      } else if (key == "interval") {
        cfg.fetch_interval_minutes = std::atoi(value.c_str());
        if (cfg.fetch_interval_minutes < 1)
          throw ConfigError(lineno, "interval must be ≥ 1 minute");
      } else if (key == "parser") {
        cfg.parser_id = value;
        have_parser = true;
      } else if (key == "enabled") {
        if (value != "true" && value != "false")
          throw ConfigError(lineno, "enabled must be true or false");
        cfg.enabled = value == "true";
      } else {
        throw ConfigError(lineno, "unknown source field: " + key);
      }
    }
    if (!have_kind || !have_endpoint || !have_parser)
      throw ConfigError(lineno, "source needs kind=, endpoint= and parser=");
    configs.push_back(std::move(cfg));
  }
  return configs;
}

void apply_endpoint_overrides(std::vector<SourceConfig>& configs) {
  for (SourceConfig& cfg : configs) {
    std::string var = "BLAB_SOURCE_";
    for (char c : cfg.source_id)
      var += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    var += "_ENDPOINT";
    if (const char* value = std::getenv(var.c_str()); value && *value)
      cfg.endpoint = value;
  }
}

std::vector<SourceConfig> load_sources_file(const std::string& path,
                                            bool apply_env_overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open source config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  auto configs = load_sources(buf.str());
  if (apply_env_overrides) apply_endpoint_overrides(configs);
  return configs;
}

std::string MapFetcher::fetch(const std::string& url) {
  if (auto it = failures_.find(url); it != failures_.end())
    throw FetchError(it->second);
  if (auto it = bodies_.find(url); it != bodies_.end()) return it->second;
  throw FetchError("no route to " + url);
}

namespace {

// ---- parsers ----------------------------------------------------------

using ParserFn = ParseResult (*)(const std::string&, const std::string&,
                                 UtcTime);

Observation wrap(Kind kind, warehouse::Payload payload,
                 const std::string& source_id, UtcTime ingested_at) {
  Observation obs;
  obs.kind = kind;
  obs.payload = std::move(payload);
  obs.source_id = source_id;
  obs.ingested_at = ingested_at;
  warehouse::validate(obs);
  return obs;
}

ParseResult parse_weather_csv(const std::string& raw,
                              const std::string& source_id, UtcTime now) {
  ParseResult result;
  std::istringstream in(raw);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, ';');
    try {
      if (fields.size() < 4 || fields.size() > 5)
        throw std::runtime_error("field count");
      warehouse::WeatherRecord rec;
      rec.city = trim(fields[0]);
      auto ts = parse_iso(trim(fields[1]));
      auto cond = warehouse::condition_from_name(trim(fields[2]));
      auto temp = Decimal::parse(trim(fields[3]));
      if (rec.city.empty() || !ts || !cond || !temp)
        throw std::runtime_error("bad field");
      rec.observed_at = *ts;
      rec.condition = *cond;
      rec.temperature_celsius = *temp;
      if (fields.size() == 5 && !trim(fields[4]).empty()) {
        auto wind = Decimal::parse(trim(fields[4]));
        if (!wind) throw std::runtime_error("bad wind");
        rec.wind_speed_kmh = *wind;
      }
      result.records.push_back(wrap(Kind::Weather, rec, source_id, now));
    } catch (const std::exception&) {
      ++result.skipped;
    }
  }
  return result;
}

ParseResult parse_tide_csv(const std::string& raw,
                           const std::string& source_id, UtcTime now) {
  ParseResult result;
  std::istringstream in(raw);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, ';');
    try {
      if (fields.size() != 4) throw std::runtime_error("field count");
      warehouse::TideRecord rec;
      rec.station = trim(fields[0]);
      auto ts = parse_iso(trim(fields[1]));
      auto height = Decimal::parse(trim(fields[2]));
      std::string peak = trim(fields[3]);
      if (rec.station.empty() || !ts || !height ||
          (peak != "0" && peak != "1" && peak != "true" && peak != "false"))
        throw std::runtime_error("bad field");
      rec.observed_at = *ts;
      rec.height_meters = *height;
      rec.is_peak = peak == "1" || peak == "true";
      result.records.push_back(wrap(Kind::Tide, rec, source_id, now));
    } catch (const std::exception&) {
      ++result.skipped;
    }
  }
  return result;
}

ParseResult parse_quake_kv(const std::string& raw,
                           const std::string& source_id, UtcTime now) {
  ParseResult result;
  std::vector<std::map<std::string, std::string>> blocks(1);
  std::istringstream in(raw);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) {
      if (!blocks.back().empty()) blocks.emplace_back();
      continue;
    }
    if (line[0] == '#') continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos) {
      blocks.back()["<malformed>"] = line;
      continue;
    }
    blocks.back()[trim(line.substr(0, colon))] = trim(line.substr(colon + 1));
  }
  for (const auto& block : blocks) {
    if (block.empty()) continue;
    try {
      if (block.contains("<malformed>")) throw std::runtime_error("line");
      warehouse::EarthquakeRecord rec;
      auto mag = Decimal::parse(block.at("magnitude"));
      auto depth = Decimal::parse(block.at("depth_km"));
      auto ts = parse_iso(block.at("occurred_at"));
      auto coords = split(block.at("epicenter"), ',');
      if (!mag || !depth || !ts || coords.size() != 2)
        throw std::runtime_error("bad field");
      auto lat = Decimal::parse(trim(coords[0]));
      auto lon = Decimal::parse(trim(coords[1]));
      if (!lat || !lon) throw std::runtime_error("bad coords");
      rec.magnitude = *mag;
      rec.depth_km = *depth;
      rec.occurred_at = *ts;
      rec.epicenter = {*lat, *lon};
      rec.institute = block.at("institute");
      result.records.push_back(wrap(Kind::Earthquake, rec, source_id, now));
    } catch (const std::exception&) {
      ++result.skipped;
    }
  }
  return result;
}

ParseResult parse_vessel_csv(const std::string& raw,
                             const std::string& source_id, UtcTime now) {
  ParseResult result;
  std::istringstream in(raw);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, ';');
    try {
      if (fields.size() != 5) throw std::runtime_error("field count");
      warehouse::VesselRecord rec;
      rec.vessel_id = trim(fields[0]);
      rec.vessel_type = trim(fields[1]);
      auto lat = Decimal::parse(trim(fields[2]));
      auto lon = Decimal::parse(trim(fields[3]));
      auto ts = parse_iso(trim(fields[4]));
      if (rec.vessel_id.empty() || !lat || !lon || !ts)
        throw std::runtime_error("bad field");
      rec.position = {*lat, *lon};
      rec.observed_at = *ts;
      result.records.push_back(wrap(Kind::Vessel, rec, source_id, now));
    } catch (const std::exception&) {
      ++result.skipped;
    }
  }
  return result;
}

ParseResult parse_news_text(const std::string& raw,
                            const std::string& source_id, UtcTime now) {
  ParseResult result;
  std::vector<std::string> articles;
  {
    std::istringstream in(raw);
    std::string line, current;
    while (std::getline(in, line)) {
      if (trim(line) == "===") {
        articles.push_back(current);
        current.clear();
      } else {
        current += line;
        current += "\n";
      }
    }
    articles.push_back(current);
  }
  for (const std::string& article : articles) {
    if (trim(article).empty()) continue;
    try {
      warehouse::NewsRecord rec;
      std::istringstream in(article);
      std::string line;
      bool in_headers = true;
      bool have_title = false;
      while (std::getline(in, line)) {
        if (in_headers) {
          std::string stripped = trim(line);
          if (stripped.empty()) {
            in_headers = false;
            continue;
          }
          if (stripped.rfind("url:", 0) == 0)
            rec.url = trim(stripped.substr(4));
          else if (stripped.rfind("source:", 0) == 0)
            rec.source_name = trim(stripped.substr(7));
          else if (stripped.rfind("published:", 0) == 0) {
            auto ts = parse_iso(trim(stripped.substr(10)));
            if (!ts) throw std::runtime_error("bad timestamp");
            rec.published_at = *ts;
          } else {
            throw std::runtime_error("bad header: " + stripped);
          }
          continue;
        }
        if (!have_title) {
          if (trim(line).empty()) continue;
          rec.title = trim(line);
          have_title = true;
          continue;
        }
        rec.body += line;
        rec.body += "\n";
      }
      rec.body = trim(rec.body);
      if (rec.url.empty() || !have_title || rec.body.empty())
        throw std::runtime_error("incomplete article");
      result.records.push_back(wrap(Kind::News, rec, source_id, now));
    } catch (const std::exception&) {
      ++result.skipped;
    }
  }
  return result;
}

const std::map<std::string, ParserFn>& parser_registry() {
  static const std::map<std::string, ParserFn> registry = {
      {"weather_csv", parse_weather_csv},
      {"tide_csv", parse_tide_csv},
      {"vessel_csv", parse_vessel_csv},
      {"quake_kv", parse_quake_kv},
      {"news_text", parse_news_text},
  };
  return registry;
}

}  // namespace

bool parser_registered(const std::string& parser_id) {
  return parser_registry().contains(parser_id);
}

ParseResult parse_source(const std::string& parser_id, const std::string& raw,
                         const std::string& source_id, UtcTime ingested_at) {
  auto it = parser_registry().find(parser_id);
  if (it == parser_registry().end()) throw UnknownParser(parser_id);
  if (trim(raw).empty())
    throw ParseError(ParseErrorKind::Empty, "empty source document");
  ParseResult result = it->second(raw, source_id, ingested_at);
  if (result.records.empty())
    throw ParseError(ParseErrorKind::Unrecoverable,
                     "no records recoverable (" +
                         std::to_string(result.skipped) +
                         " malformed entries)");
  return result;
}

const char* fetch_status_name(FetchStatus s) {
  switch (s) {
    case FetchStatus::Ok: return "ok";
    case FetchStatus::NetworkError: return "network_error";
    case FetchStatus::ParseError: return "parse_error";
    case FetchStatus::Empty: return "empty";
  }
  return "?";
}

CycleResult run_cycle(const std::vector<SourceConfig>& configs,
                      Fetcher& fetcher, warehouse::ObservationStore& store,
                      std::function<UtcTime()> clock) {
  if (!clock) clock = system_now;
  CycleResult result;
  for (const SourceConfig& cfg : configs) {
    if (!cfg.enabled) continue;
    FetchOutcome outcome;
    outcome.source_id = cfg.source_id;
    outcome.fetched_at = clock();
    std::string body;
    try {
      body = fetcher.fetch(cfg.endpoint);
    } catch (const FetchError& e) {
      outcome.status = FetchStatus::NetworkError;
      outcome.error_detail = e.what();
      result.outcomes.push_back(std::move(outcome));
      continue;
    }
    try {
      ParseResult parsed =
          parse_source(cfg.parser_id, body, cfg.source_id, outcome.fetched_at);
      if (parsed.skipped > 0)
        outcome.error_detail =
            std::to_string(parsed.skipped) + " malformed entries skipped";
      for (const Observation& obs : parsed.records) {
        if (store.put(obs) == warehouse::PutResult::Inserted) {
          ++outcome.inserted;
          result.inserted.push_back(obs);
        } else {
          ++outcome.duplicates;
        }
      }
      outcome.status = FetchStatus::Ok;
    } catch (const ParseError& e) {
      outcome.status = e.kind == ParseErrorKind::Empty
                           ? FetchStatus::Empty
                           : FetchStatus::ParseError;
      outcome.error_detail = e.what();
      outcome.inserted = 0;
      outcome.duplicates = 0;
    } catch (const std::exception& e) {
      outcome.status = FetchStatus::ParseError;
      outcome.error_detail = e.what();
      outcome.inserted = 0;
      outcome.duplicates = 0;
    }
    result.outcomes.push_back(std::move(outcome));
  }
  return result;
}

std::vector<Observation> detect_urgent(
    const std::vector<Observation>& new_records) {
  std::vector<Observation> urgent;
  const Decimal threshold = Decimal::from_cents(
      static_cast<std::int64_t>(selection::kUrgentMagnitude * 100));
  for (const Observation& obs : new_records) {
    const auto* quake = std::get_if<warehouse::EarthquakeRecord>(&obs.payload);
    if (quake && quake->magnitude >= threshold) urgent.push_back(obs);
  }
  return urgent;
}

}  // namespace blab::ingestion
