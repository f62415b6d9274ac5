#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ssns/field.hpp"

namespace ssns {

// SSNF field format: magic "SSNF", u32 version (=1), u32 d, u32 n, f64 L,
// f64 alpha, then d real component arrays, row-major, f64 little-endian.
// Write-then-read is bit-exact.
inline constexpr std::uint32_t kSsnfVersion = 1;

void ssnf_write(const std::filesystem::path& path, const VectorField& f);
/// Errors name the file and byte offset of the offending data.
VectorField ssnf_read(const std::filesystem::path& path, bool dealias = true);

/// CSV with a header row and fixed 17-significant-digit formatting; no
/// timestamps, so equal inputs give identical bytes.
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  void close();
  ~CsvWriter();

private:
  std::string path_;
  std::string buffer_;
  size_t columns_ = 0;
  bool open_ = true;
};

std::string format_g17(double v);

/// Flat key=value run configuration. Unknown keys are rejected; every run
/// writes the fully resolved config (defaults materialized) next to its
/// outputs.
class RunConfig {
public:
  RunConfig();  // defaults materialized

  static RunConfig parse_file(const std::filesystem::path& path);
  static RunConfig parse_text(const std::string& text);

  double get(const std::string& key) const;
  std::string get_str(const std::string& key) const;
  void set(const std::string& key, double v);
  void set_str(const std::string& key, const std::string& v);
  bool has(const std::string& key) const;

  void write_resolved(const std::filesystem::path& path) const;
  std::string resolved_text() const;

  static const std::map<std::string, std::string>& known_keys();

private:
  std::map<std::string, std::string> kv_;
};

}  // namespace ssns
