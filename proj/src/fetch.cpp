// Metrics-server client. Kept out of ingest.cpp so the CSV path has no
// dependency on the HTTP stack.

#include <string>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "tdebt/error.hpp"
#include "tdebt/ingest.hpp"
#include "tdebt/text.hpp"

namespace tdebt {

namespace {

std::string url_encode(std::string_view s) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    bool plain = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                 c == '-' || c == '_' || c == '.' || c == '~' || c == ',' || c == ':';
    if (plain) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

void replace_all(std::string& s, std::string_view needle, std::string_view value) {
  std::size_t pos = 0;
  while ((pos = s.find(needle, pos)) != std::string::npos) {
    s.replace(pos, needle.size(), value);
    pos += value.size();
  }
}

double measure_as_double(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    if (auto d = parse_double(v.get<std::string>())) return *d;
  }
  throw Error(ErrorKind::Validation, "measure '" + key + "' is not numeric");
}

Distribution parse_distribution_text(const std::string& text, const std::string& key) {
  Distribution dist;
  for (auto pair : split(text, ';')) {
    std::size_t eq = pair.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw Error(ErrorKind::Validation,
                  "measure '" + key + "': bad distribution entry '" + std::string(pair) + "'");
    auto value = parse_double(pair.substr(eq + 1));
    if (!value)
      throw Error(ErrorKind::Validation,
                  "measure '" + key + "': non-numeric value in '" + std::string(pair) + "'");
    dist.emplace(std::string(pair.substr(0, eq)), *value);
  }
  return dist;
}

}  // namespace

std::vector<MetricSnapshot> fetch_snapshots(const std::string& server_url,
                                            const std::string& project_key,
                                            std::span<const std::string> metric_keys,
                                            const std::optional<std::string>& auth_token,
                                            const FetchOptions& options) {
  httplib::Client client(server_url);
  client.set_connection_timeout(options.timeout_seconds, 0);
  client.set_read_timeout(options.timeout_seconds, 0);

  httplib::Headers headers;
  if (auth_token) headers.emplace("Authorization", "Bearer " + *auth_token);

  std::vector<std::string> keys(metric_keys.begin(), metric_keys.end());
  const std::string joined_metrics = url_encode(join(keys, ","));
  const std::string encoded_project = url_encode(project_key);

  std::vector<MetricSnapshot> out;
  for (int page = 1;; ++page) {
    std::string path = options.url_template;
    replace_all(path, "{project}", encoded_project);
    replace_all(path, "{metrics}", joined_metrics);
    replace_all(path, "{page}", std::to_string(page));

    httplib::Result res;
    int attempts = 0;
    for (; attempts < options.max_attempts; ++attempts) {
      res = client.Get(path, headers);
      if (res) break;
    }
    if (!res)
      throw Error(ErrorKind::Transport, "GET " + server_url + path + " failed after " +
                                            std::to_string(attempts) + " attempts: " +
                                            httplib::to_string(res.error()));
    if (res->status == 401 || res->status == 403)
      throw Error(ErrorKind::Auth,
                  "server rejected credentials (HTTP " + std::to_string(res->status) + ")");
    if (res->status == 404)
      throw Error(ErrorKind::NotFound, "project '" + project_key + "' not found on server");
    if (res->status != 200)
      throw Error(ErrorKind::Transport, "unexpected HTTP " + std::to_string(res->status) +
                                            " from " + server_url + path);

    nlohmann::json body = nlohmann::json::parse(res->body, nullptr, false);
    if (body.is_discarded() || !body.contains("analyses") || !body["analyses"].is_array())
      throw Error(ErrorKind::Transport, "malformed response from " + server_url + path);

    const auto& analyses = body["analyses"];
    if (analyses.empty()) break;  // pagination exhausted

    for (const auto& analysis : analyses) {
      MetricSnapshot s;
      s.project_id = project_key;
      s.commit_sha = analysis.value("sha", std::string());
      s.timestamp = parse_instant(analysis.value("date", std::string()));
      if (analysis.contains("measures")) {
        for (const auto& [key, value] : analysis["measures"].items()) {
          if (auto didx = schema::distribution_index(key)) {
            if (!value.is_string())
              throw Error(ErrorKind::Validation,
                          "measure '" + key + "' must be a distribution string");
            s.distributions[*didx] = parse_distribution_text(value.get<std::string>(), key);
          } else if (schema::scalar_index(key)) {
            s.set_metric(key, measure_as_double(value, key));
          } else if (key == "sqale_index") {
            s.sqale_index = measure_as_double(value, key);
          } else if (key == "reliability_remediation_effort") {
            s.reliability_remediation_effort = measure_as_double(value, key);
          } else if (key == "security_remediation_effort") {
            s.security_remediation_effort = measure_as_double(value, key);
          } else {
            throw Error(ErrorKind::Schema, "server returned unknown metric key '" + key + "'");
          }
        }
      }
      validate_snapshot(s, "analysis " + s.commit_sha);
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace tdebt
