#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "blab/ingestion/ingestion.hpp"
#include "blab/pipeline.hpp"
#include "blab/publisher/publisher.hpp"

namespace blab::cli {

class CliConfigError : public std::runtime_error {
 public:
  explicit CliConfigError(const std::string& what)
      : std::runtime_error(what) {}
};

// Main config file (JSON). Relative paths resolve against the config file's
// directory, so the tool runs from anywhere.
struct CliConfig {
  std::filesystem::path config_dir;
  std::filesystem::path grammar_path;
  std::filesystem::path entities_path;
  std::filesystem::path catalog_path;
  std::filesystem::path blocklist_path;
  std::filesystem::path stopwords_path;
  std::filesystem::path abbreviations_path;
  std::filesystem::path facts_path;
  std::filesystem::path sources_path;
  std::filesystem::path store_dir;
  std::filesystem::path journal_path;
  std::string place = "Santos";
  bool dry_run = true;
  std::optional<std::uint64_t> seed;
  std::string api_base_url = "https://api.twitter.com";
  size_t news_max_sentences = 3;
  realization::PolishConfig polish;
  publisher::SchedulePolicy policy;
};

CliConfig load_config(const std::filesystem::path& path);

// Loads every generation artifact the config points at; any loader error
// propagates (callers map them to exit code 2).
pipeline::Artifacts load_artifacts(const CliConfig& config);

std::vector<ingestion::SourceConfig> load_sources(const CliConfig& config);

}  // namespace blab::cli
