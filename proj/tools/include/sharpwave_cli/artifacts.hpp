#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace sharpwave::cli {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t h);

/// "%.12g"; non-finite values print as nan / inf / -inf.
std::string format_number(double x);

/// Column-oriented CSV writer; every row must match the header width.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(std::initializer_list<double> values);
  void row(const std::vector<std::string>& cells);
  void close();

 private:
  std::filesystem::path path_;
  std::size_t width_;
  std::string buffer_;
};

/// out/<run-id>/, created on construction.
class ArtifactDir {
 public:
  ArtifactDir(const std::filesystem::path& root, const std::string& run_id);

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

  void write_json(const std::string& name, const nlohmann::json& j) const;

 private:
  std::filesystem::path path_;
};

/// Writes `text` to `path`, replacing any previous file.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace sharpwave::cli
