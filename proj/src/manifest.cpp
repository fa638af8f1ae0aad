#include "tdebt/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tdebt/error.hpp"

namespace tdebt {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001B3ull;
  }
  return hash;
}

std::string file_digest_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::NotFound, "cannot read '" + path.string() + "' for digest");
  std::ostringstream buf;
  buf << in.rdbuf();
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(buf.str())));
  return hex;
}

RunManifest::RunManifest(std::string_view command) {
  doc_["tool"] = std::string(kToolName) + " " + std::string(kToolVersion);
  doc_["command"] = command;
  doc_["config"] = nlohmann::ordered_json::object();
  doc_["inputs"] = nlohmann::ordered_json::array();
  doc_["outputs"] = nlohmann::ordered_json::array();
}

void RunManifest::add_input(const std::filesystem::path& path) {
  nlohmann::ordered_json entry;
  entry["path"] = path.string();
  entry["fnv1a64"] = file_digest_hex(path);
  doc_["inputs"].push_back(std::move(entry));
}

void RunManifest::add_output(const std::filesystem::path& path) {
  doc_["outputs"].push_back(path.string());
}

std::string RunManifest::to_string() const { return doc_.dump(2) + "\n"; }

void RunManifest::write_alongside(const std::filesystem::path& output_path) const {
  std::filesystem::path manifest_path = output_path;
  manifest_path += ".manifest.json";
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out)
    throw Error(ErrorKind::NotFound, "cannot write '" + manifest_path.string() + "'");
  out << to_string();
}

}  // namespace tdebt
