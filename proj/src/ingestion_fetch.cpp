#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "blab/ingestion/ingestion.hpp"

namespace blab::ingestion {

namespace {

// Scheme-dispatching transport: `file:` for local fixtures and feeds dumped
// by cron jobs, http(s) for live endpoints.
class DefaultFetcher : public Fetcher {
 public:
  explicit DefaultFetcher(std::string base_dir)
      : base_dir_(std::move(base_dir)) {}

  std::string fetch(const std::string& url) override {
    if (url.rfind("file:", 0) == 0) return fetch_file(url.substr(5));
    if (url.rfind("http://", 0) == 0 || url.rfind("https://", 0) == 0)
      return fetch_http(url);
    throw FetchError("unsupported url scheme: " + url);
  }

 private:
  std::string fetch_file(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative() && !base_dir_.empty())
      p = std::filesystem::path(base_dir_) / p;
    std::ifstream in(p, std::ios::binary);
    if (!in) throw FetchError("cannot read " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  std::string fetch_http(const std::string& url) {
    size_t scheme_end = url.find("://") + 3;
    size_t path_start = url.find('/', scheme_end);
    std::string origin = path_start == std::string::npos
                             ? url
                             : url.substr(0, path_start);
    std::string path =
        path_start == std::string::npos ? "/" : url.substr(path_start);
    httplib::Client http(origin);
    http.set_connection_timeout(10);
    http.set_read_timeout(30);
    http.set_follow_location(true);
    auto res = http.Get(path);
    if (!res) throw FetchError("no response from " + origin);
    if (res->status != 200)
      throw FetchError("status " + std::to_string(res->status) + " from " +
                       url);
    return res->body;
  }

  std::string base_dir_;
};

}  // namespace

std::unique_ptr<Fetcher> make_default_fetcher(const std::string& base_dir) {
  return std::make_unique<DefaultFetcher>(base_dir);
}

}  // namespace blab::ingestion
