// Exercises the installed CLI binary end to end: exit codes, output
// formats and the corpus reference realizations.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kSource = fs::path(BLAB_SOURCE_DIR);
const fs::path kCli = fs::path(BLAB_CLI_PATH);

struct RunResult {
  int exit_code;
  std::string out;  // stdout and stderr interleaved
};

RunResult run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + kCli.string() + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = ::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch_dir(const std::string& tag) {
  auto dir = fs::temp_directory_path() /
             ("blab_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Shipped config with state redirected to scratch; optional overrides.
fs::path make_config(const fs::path& scratch,
                     const std::function<void(nlohmann::json&)>& patch = {}) {
  auto j = nlohmann::json::parse(slurp(kSource / "config/blab.json"));
  for (const char* key : {"grammar", "entities", "catalog", "blocklist",
                          "stopwords", "abbreviations", "facts", "sources"})
    j[key] = (kSource / "config" / j[key].get<std::string>())
                 .lexically_normal()
                 .string();
  j["store_dir"] = (scratch / "store").string();
  j["journal"] = (scratch / "publish.journal").string();
  if (patch) patch(j);
  fs::path path = scratch / "blab.json";
  std::ofstream out(path);
  out << j.dump(2) << "\n";
  return path;
}

}  // namespace

TEST_CASE("ingest prints an outcome table and honors --only") {
  auto scratch = scratch_dir("ingest");
  auto config = make_config(scratch);
  auto result = run("ingest --config " + config.string());
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("weather_santos") != std::string::npos);
  CHECK(result.out.find("tides_santos") != std::string::npos);

  auto only = run("ingest --config " + config.string() +
                  " --only weather_santos");
  CHECK(only.exit_code == 0);
  CHECK(only.out.find("weather_santos") != std::string::npos);
  CHECK(only.out.find("tides_santos") == std::string::npos);

  auto unknown = run("ingest --config " + config.string() + " --only nope");
  CHECK(unknown.exit_code == 2);
}

TEST_CASE("ingest reports partial source failure with exit one") {
  auto scratch = scratch_dir("ingest_fail");
  auto config = make_config(scratch, [&](nlohmann::json& j) {
    fs::path sources = scratch / "sources.conf";
    std::ofstream out(sources);
    out << "source good kind=weather endpoint=file:" +
               (kSource / "fixtures/weather_santos.csv").string() +
               " interval=60 parser=weather_csv enabled=true\n";
    out << "source bad kind=weather endpoint=file:/nonexistent/feed.csv "
           "interval=60 parser=weather_csv enabled=true\n";
    j["sources"] = sources.string();
  });
  auto result = run("ingest --config " + config.string());
  CHECK(result.exit_code == 1);
  CHECK(result.out.find("network_error") != std::string::npos);
}

TEST_CASE("report on an empty day notes nothing to report") {
  auto scratch = scratch_dir("empty_report");
  auto config = make_config(scratch);
  REQUIRE(run("ingest --config " + config.string()).exit_code == 0);
  auto result = run("report --config " + config.string() +
                    " --place Santos --date 2031-01-01 --seed 7");
  CHECK(result.exit_code == 0);
  CHECK(result.out == "nothing to report\n");
}

TEST_CASE("report fails with exit two on a broken config") {
  auto missing = run("report --config /nonexistent.json --date 2022-05-22");
  CHECK(missing.exit_code == 2);
  auto bad_date = run("report --config " +
                      (kSource / "config/blab.json").string() +
                      " --date 22/05/2022");
  CHECK(bad_date.exit_code == 2);
}

TEST_CASE("check-grammar approves the shipped artifacts") {
  auto result =
      run("check-grammar --config " + (kSource / "config/blab.json").string());
  CHECK(result.exit_code == 0);
}

TEST_CASE("check-grammar prints file line diagnostics and exits five") {
  auto scratch = scratch_dir("badgrammar");
  fs::path grammar = scratch / "broken.grammar";
  {
    std::ofstream out(grammar);
    out << slurp(kSource / "grammar/blab.grammar");
    out << "template FISHING_CONDITION weight=1\n";
    out << "  onda {wavelength}\n";
  }
  auto config = make_config(scratch, [&](nlohmann::json& j) {
    j["grammar"] = grammar.string();
  });
  auto result = run("check-grammar --config " + config.string());
  CHECK(result.exit_code == 5);
  // file:line: message
  std::string wanted = grammar.string() + ":";
  auto at = result.out.find(wanted);
  REQUIRE(at != std::string::npos);
  CHECK(result.out.find("wavelength") != std::string::npos);
  size_t line_start = at + wanted.size();
  CHECK(std::isdigit(static_cast<unsigned char>(result.out[line_start])));
}

TEST_CASE("realize reproduces the corpus reference realizations") {
  for (int i = 1; i <= 30; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "r%02d.txt", i);
    auto result = run("realize --config " +
                      (kSource / "config/blab.json").string() + " --intents " +
                      (kSource / "corpus/intents" / name).string() +
                      " --seed 1");
    CAPTURE(name);
    CHECK(result.exit_code == 0);
    CHECK(result.out == slurp(kSource / "corpus/refs" / name));
  }
}

TEST_CASE("serve without credentials or dry-run refuses to start") {
  auto scratch = scratch_dir("serve_live");
  auto config = make_config(
      scratch, [](nlohmann::json& j) { j["dry_run"] = false; });
  auto result = run("serve --config " + config.string() + " --simulate " +
                        (kSource / "fixtures/day.clock").string(),
                    "env -u BLAB_TWITTER_TOKEN -u BLAB_DRY_RUN");
  CHECK(result.exit_code == 2);
  CHECK(result.out.find("BLAB_TWITTER_TOKEN") != std::string::npos);

  // BLAB_DRY_RUN=1 forces the dry-run binding; no credentials needed.
  auto dry = run("serve --config " + config.string() + " --simulate " +
                     (kSource / "fixtures/day.clock").string(),
                 "env -u BLAB_TWITTER_TOKEN BLAB_DRY_RUN=1");
  CHECK(dry.exit_code == 0);
  CHECK(fs::exists(scratch / "publish.journal"));
}

TEST_CASE("seeded report runs are byte identical") {
  auto scratch = scratch_dir("seeded");
  auto config = make_config(scratch);
  REQUIRE(run("ingest --config " + config.string()).exit_code == 0);
  const std::string args = "report --config " + config.string() +
                           " --place Santos --date 2022-05-22 --seed 9";
  auto a = run(args);
  auto b = run(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}
