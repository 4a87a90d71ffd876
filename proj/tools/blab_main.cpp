#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "blab/cli/config.hpp"
#include "blab/publisher/loop.hpp"
#include "blab/selection/notation.hpp"

namespace {

// Exit codes: 0 ok, 1 partial source failure, 2 config, 3 validation
// violation, 4 generation failure, 5 grammar-check diagnostics.
constexpr int kExitOk = 0;
constexpr int kExitSourceFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitGeneration = 4;
constexpr int kExitGrammarCheck = 5;

using namespace blab;

struct CommonOptions {
  std::string config_path = "config/blab.json";
  std::optional<std::uint64_t> seed;
};

bool env_dry_run() {
  const char* v = std::getenv("BLAB_DRY_RUN");
  return v && std::string(v) == "1";
}

cli::CliConfig load_config_or_exit(const CommonOptions& options) {
  try {
    return cli::load_config(options.config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    std::exit(kExitConfig);
  }
}

pipeline::Artifacts load_artifacts_or_exit(const cli::CliConfig& config) {
  try {
    return cli::load_artifacts(config);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    std::exit(kExitConfig);
  }
}

int cmd_ingest(const CommonOptions& options, const std::string& only) {
  cli::CliConfig config = load_config_or_exit(options);
  std::vector<ingestion::SourceConfig> sources;
  try {
    sources = cli::load_sources(config);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (!only.empty()) {
    std::erase_if(sources, [&](const ingestion::SourceConfig& s) {
      return s.source_id != only;
    });
    if (sources.empty()) {
      std::cerr << "config error: no source named '" << only << "'\n";
      return kExitConfig;
    }
  }
  auto fetcher = ingestion::make_default_fetcher(
      config.sources_path.parent_path().string());
  std::unique_ptr<warehouse::ObservationStore> store;
  try {
    store = std::make_unique<warehouse::FileStore>(config.store_dir);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  ingestion::CycleResult cycle =
      ingestion::run_cycle(sources, *fetcher, *store);
  std::cout << std::left << std::setw(20) << "source_id" << std::setw(15)
            << "status" << std::setw(10) << "inserted" << std::setw(11)
            << "duplicates" << "detail" << "\n";
  bool failed = false;
  for (const auto& outcome : cycle.outcomes) {
    std::cout << std::left << std::setw(20) << outcome.source_id
              << std::setw(15) << ingestion::fetch_status_name(outcome.status)
              << std::setw(10) << outcome.inserted << std::setw(11)
              << outcome.duplicates
              << outcome.error_detail.value_or("") << "\n";
    if (outcome.status == ingestion::FetchStatus::NetworkError ||
        outcome.status == ingestion::FetchStatus::ParseError)
      failed = true;
  }
  return failed ? kExitSourceFailure : kExitOk;
}

int print_report(const pipeline::ReportResult& result) {
  if (result.violation) {
    std::cerr << "validation violation: term '" << result.violation->term
              << "' at code point " << result.violation->position
              << "; output withheld\n";
    return kExitValidation;
  }
  if (!result.has_content()) {
    std::cerr << "nothing to report\n";
    return kExitOk;
  }
  for (size_t i = 0; i < result.thread.parts.size(); ++i) {
    if (i > 0) std::cout << "---\n";
    std::cout << result.thread.parts[i].text << "\n";
  }
  return kExitOk;
}

int cmd_report(const CommonOptions& options, const std::string& place,
               const std::string& date_str) {
  cli::CliConfig config = load_config_or_exit(options);
  pipeline::Artifacts artifacts = load_artifacts_or_exit(config);
  auto date = parse_date(date_str);
  if (!date) {
    std::cerr << "config error: bad --date (want YYYY-MM-DD): " << date_str
              << "\n";
    return kExitConfig;
  }
  std::string report_place = place.empty() ? config.place : place;
  std::unique_ptr<warehouse::ObservationStore> store;
  try {
    store = std::make_unique<warehouse::FileStore>(config.store_dir);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::uint64_t seed = options.seed.value_or(
      config.seed.value_or(pipeline::derive_seed(*date, report_place)));
  try {
    pipeline::ReportResult result =
        pipeline::generate_report(*store, artifacts, report_place, *date,
                                  realization::Window::Morning, seed);
    return print_report(result);
  } catch (const structuring::NoApplicableOrdering& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return kExitGeneration;
  } catch (const lexicalization::MissingTemplate& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return kExitGeneration;
  }
}

int cmd_realize(const CommonOptions& options, const std::string& intents_path) {
  cli::CliConfig config = load_config_or_exit(options);
  pipeline::Artifacts artifacts = load_artifacts_or_exit(config);
  std::ifstream in(intents_path);
  if (!in) {
    std::cerr << "config error: cannot open " << intents_path << "\n";
    return kExitConfig;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    auto messages = selection::parse_intents(buf.str());
    std::uint64_t seed = options.seed.value_or(
        messages.empty() ? 0
                         : pipeline::derive_seed(messages[0].report_date,
                                                 "realize"));
    pipeline::ReportResult result = pipeline::realize_report(
        messages, artifacts, realization::Window::Morning, seed);
    return print_report(result);
  } catch (const selection::NotationError& e) {
    std::cerr << intents_path << ":" << e.what() << "\n";
    return kExitGeneration;
  } catch (const structuring::NoApplicableOrdering& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return kExitGeneration;
  } catch (const lexicalization::MissingTemplate& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return kExitGeneration;
  }
}

int cmd_check_grammar(const CommonOptions& options) {
  cli::CliConfig config = load_config_or_exit(options);
  std::vector<std::string> diagnostics;

  // Diagnostics print as file:line: message.
  auto diagnose = [&](const std::filesystem::path& file, int line,
                      std::string what) {
    std::string prefix = "line " + std::to_string(line) + ": ";
    if (what.rfind(prefix, 0) == 0) what = what.substr(prefix.size());
    diagnostics.push_back(file.string() + ":" + std::to_string(line) + ": " +
                          what);
  };

  std::optional<lexicalization::Grammar> grammar;
  try {
    grammar = lexicalization::load_grammar_file(config.grammar_path.string());
  } catch (const lexicalization::GrammarError& e) {
    diagnose(config.grammar_path, e.line, e.what());
  }
  try {
    reg::load_entities_file(config.entities_path.string());
  } catch (const reg::RegistryError& e) {
    diagnose(config.entities_path, e.line, e.what());
  }
  try {
    structuring::load_catalog_file(config.catalog_path.string());
  } catch (const structuring::CatalogError& e) {
    diagnose(config.catalog_path, e.line, e.what());
  }

  if (grammar) {
    // Lexicon entries and verbalize mappings must govern attributes that
    // exist in some predicate schema.
    auto known_attribute = [](const std::string& key) {
      for (selection::Predicate p : selection::kAllPredicates)
        for (const std::string& attr : selection::required_attributes(p))
          if (attr == key) return true;
      return false;
    };
    for (const auto& entry : grammar->lexicon())
      if (!known_attribute(entry.attribute_key))
        diagnose(config.grammar_path, 0,
                 "lexicon entry governs unknown attribute '" +
                     entry.attribute_key + "'");
  }

  for (const std::string& d : diagnostics) std::cerr << d << "\n";
  if (!diagnostics.empty()) return kExitGrammarCheck;
  std::cout << "grammar, entities and catalog are consistent\n";
  return kExitOk;
}

int cmd_serve(const CommonOptions& options, const std::string& simulate_path,
              bool dry_run_flag) {
  cli::CliConfig config = load_config_or_exit(options);
  pipeline::Artifacts artifacts = load_artifacts_or_exit(config);

  std::vector<ingestion::SourceConfig> sources;
  try {
    sources = cli::load_sources(config);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  const bool dry_run = dry_run_flag || config.dry_run || env_dry_run();
  std::unique_ptr<publisher::PublishClient> client;
  if (dry_run) {
    client = std::make_unique<publisher::DryRunClient>();
  } else {
    const char* token = std::getenv("BLAB_TWITTER_TOKEN");
    if (!token || !*token) {
      std::cerr << "config error: live publishing needs BLAB_TWITTER_TOKEN; "
                   "set it, or pass --dry-run (or BLAB_DRY_RUN=1) to run "
                   "without posting\n";
      return kExitConfig;
    }
    client = publisher::make_http_client(config.api_base_url);
  }

  std::unique_ptr<warehouse::ObservationStore> store;
  try {
    store = std::make_unique<warehouse::FileStore>(config.store_dir);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  publisher::Journal journal(config.journal_path);
  auto fetcher = ingestion::make_default_fetcher(
      config.sources_path.parent_path().string());

  const bool simulated = !simulate_path.empty();
  publisher::LoopContext ctx{*store,
                             artifacts,
                             sources,
                             *fetcher,
                             config.policy,
                             *client,
                             journal,
                             config.place,
                             simulated ? std::function<void(int)>([](int) {})
                                       : std::function<void(int)>([](int s) {
                                           std::this_thread::sleep_for(
                                               std::chrono::seconds(s));
                                         }),
                             [](const std::string& note) {
                               std::cerr << note << "\n";
                             },
                             config.news_max_sentences};

  if (simulated) {
    std::ifstream in(simulate_path);
    if (!in) {
      std::cerr << "config error: cannot open clock script: " << simulate_path
                << "\n";
      return kExitConfig;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      publisher::ScriptedTicks ticks(buf.str(), sources);
      publisher::run_loop(ticks, ctx);
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitConfig;
    }
    return kExitOk;
  }

  publisher::WallClockTicks ticks(60);
  publisher::run_loop(ticks, ctx);
  return kExitOk;  // unreachable: the wall clock never ends
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BLAB Reporter: data-to-text reports about the Blue Amazon"};
  app.require_subcommand(1);
  app.fallthrough();  // let --config/--seed appear after the subcommand

  CommonOptions options;
  app.add_option("--config", options.config_path,
                 "path to the main JSON config")
      ->envname("BLAB_CONFIG");
  std::uint64_t seed_value = 0;
  auto* seed_opt =
      app.add_option("--seed", seed_value, "random seed (reproducible runs)");

  std::string only;
  auto* ingest = app.add_subcommand("ingest", "run one ingestion cycle");
  ingest->add_option("--only", only, "run a single source");

  std::string place;
  std::string date_str;
  auto* report =
      app.add_subcommand("report", "generate the daily report for a place");
  report->add_option("--place", place, "city / station name");
  report->add_option("--date", date_str, "report date, YYYY-MM-DD")
      ->required();

  auto* check = app.add_subcommand("check-grammar",
                                   "validate grammar, entities and catalog");

  std::string intents_path;
  auto* realize = app.add_subcommand(
      "realize", "render a report from an intent-notation file");
  realize->add_option("--intents", intents_path, "intent notation file")
      ->required();

  std::string simulate_path;
  bool dry_run_flag = false;
  auto* serve = app.add_subcommand("serve", "run the reporter service loop");
  serve->add_option("--simulate", simulate_path,
                    "replay a clock script instead of the wall clock");
  serve->add_flag("--dry-run", dry_run_flag,
                  "journal posts instead of calling the live API");

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) options.seed = seed_value;

  if (app.got_subcommand(ingest)) return cmd_ingest(options, only);
  if (app.got_subcommand(report)) return cmd_report(options, place, date_str);
  if (app.got_subcommand(check)) return cmd_check_grammar(options);
  if (app.got_subcommand(realize)) return cmd_realize(options, intents_path);
  if (app.got_subcommand(serve))
    return cmd_serve(options, simulate_path, dry_run_flag);
  return kExitConfig;
}
