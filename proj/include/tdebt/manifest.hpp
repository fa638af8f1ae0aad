#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace tdebt {

inline constexpr std::string_view kToolName = "tdebt";
inline constexpr std::string_view kToolVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view bytes);

/// Digest of a file's bytes as fixed-width hex; throws Error{NotFound} when
/// the file cannot be read.
std::string file_digest_hex(const std::filesystem::path& path);

/// Reproducibility record written next to every CLI output. Two runs with
/// equal manifests produce byte-identical outputs, so nothing time- or
/// host-dependent may enter here.
class RunManifest {
 public:
  explicit RunManifest(std::string_view command);

  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  nlohmann::ordered_json& config() { return doc_["config"]; }

  std::string to_string() const;
  void write_alongside(const std::filesystem::path& output_path) const;

 private:
  nlohmann::ordered_json doc_;
};

}  // namespace tdebt
