#include "blab/cli/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace blab::cli {

using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& path,
                  const std::string& what) {
  std::ifstream in(path);
  if (!in)
    throw CliConfigError("cannot open " + what + ": " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

CliConfig load_config(const std::filesystem::path& path) {
  json j = json::parse(slurp(path, "config file"), nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw CliConfigError("config is not a JSON object: " + path.string());

  CliConfig cfg;
  cfg.config_dir = path.has_parent_path() ? path.parent_path()
                                          : std::filesystem::path(".");

  auto want_path = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string())
      throw CliConfigError(std::string("config is missing \"") + key + "\"");
    return resolve(cfg.config_dir, j[key].get<std::string>());
  };
  cfg.grammar_path = want_path("grammar");
  cfg.entities_path = want_path("entities");
  cfg.catalog_path = want_path("catalog");
  cfg.blocklist_path = want_path("blocklist");
  cfg.stopwords_path = want_path("stopwords");
  cfg.abbreviations_path = want_path("abbreviations");
  cfg.facts_path = want_path("facts");
  cfg.sources_path = want_path("sources");
  cfg.store_dir = want_path("store_dir");
  cfg.journal_path = want_path("journal");

  if (j.contains("place")) cfg.place = j["place"].get<std::string>();
  if (j.contains("dry_run")) cfg.dry_run = j["dry_run"].get<bool>();
  if (j.contains("seed") && !j["seed"].is_null())
    cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("api_base_url"))
    cfg.api_base_url = j["api_base_url"].get<std::string>();
  if (j.contains("news_max_sentences"))
    cfg.news_max_sentences = j["news_max_sentences"].get<size_t>();

  if (!j.contains("greetings") || !j["greetings"].is_object())
    throw CliConfigError("config is missing \"greetings\"");
  for (const auto& [name, list] : j["greetings"].items()) {
    auto window = realization::window_from_name(name);
    if (!window) throw CliConfigError("unknown greeting window: " + name);
    for (const auto& g : list)
      cfg.polish.greeting_by_window[*window].push_back(g.get<std::string>());
  }
  for (auto window : {realization::Window::Morning,
                      realization::Window::Afternoon,
                      realization::Window::Evening})
    if (cfg.polish.greeting_by_window[window].empty())
      throw CliConfigError(std::string("no greetings for window: ") +
                           realization::window_name(window));

  if (j.contains("emoji")) {
    for (const auto& [name, emoji] : j["emoji"].items()) {
      auto predicate = selection::predicate_from_name(name);
      if (!predicate)
        throw CliConfigError("emoji map names unknown predicate: " + name);
      cfg.polish.emoji_map[*predicate] = emoji.get<std::string>();
    }
  }
  if (j.contains("enable_emoji"))
    cfg.polish.enable_emoji = j["enable_emoji"].get<bool>();

  cfg.policy = publisher::default_policy();
  if (j.contains("max_posts_per_day"))
    cfg.policy.max_posts_per_day = j["max_posts_per_day"].get<size_t>();

  return cfg;
}

pipeline::Artifacts load_artifacts(const CliConfig& config) {
  pipeline::Artifacts artifacts{
      lexicalization::load_grammar_file(config.grammar_path.string()),
      reg::load_entities_file(config.entities_path.string()),
      structuring::load_catalog_file(config.catalog_path.string()),
      config.polish,
      realization::load_blocklist_file(config.blocklist_path.string()),
      summarization::load_rules(
          slurp(config.stopwords_path, "stopword list"),
          slurp(config.abbreviations_path, "abbreviation list")),
      {}};
  std::istringstream facts(slurp(config.facts_path, "facts file"));
  std::string line;
  while (std::getline(facts, line)) {
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') continue;
    size_t b = line.find_last_not_of(" \t\r");
    artifacts.curious_facts.push_back(line.substr(a, b - a + 1));
  }
  return artifacts;
}

std::vector<ingestion::SourceConfig> load_sources(const CliConfig& config) {
  return ingestion::load_sources_file(config.sources_path.string(), true);
}

}  // namespace blab::cli
