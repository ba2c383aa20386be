#include "sharpwave_cli/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "sharpwave/error.hpp"

namespace sharpwave::cli {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), width_(header.size()) {
  row(header);
}

void CsvWriter::row(std::initializer_list<double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw Error("csv row width mismatch in " + path_.string());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

void CsvWriter::close() { write_text(path_, buffer_); }

ArtifactDir::ArtifactDir(const std::filesystem::path& root, const std::string& run_id) : path_(root / run_id) {
  std::error_code ec;
  std::filesystem::create_directories(path_, ec);
  if (ec) throw ConfigError("cannot create output directory " + path_.string() + ": " + ec.message());
}

void ArtifactDir::write_json(const std::string& name, const nlohmann::json& j) const {
  write_text(file(name), j.dump(2) + "\n");
}

}  // namespace sharpwave::cli
