#include "ssns/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ssns {

namespace {

void put_u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& s, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

struct Reader {
  std::string data;
  size_t pos = 0;
  std::string file;

  void need(size_t n, const std::string& what) {
    if (pos + n > data.size())
      fail("ssnf: truncated payload file=" + file + " offset=" +
           std::to_string(pos) + " while reading " + what);
  }
  std::uint32_t u32(const std::string& what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  double f64(const std::string& what) {
    need(8, what);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    pos += 8;
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
};

}  // namespace

void ssnf_write(const std::filesystem::path& path, const VectorField& f) {
  const Grid& g = *f.grid();
  std::string out;
  out.reserve(28 + 8 * g.spec.d * static_cast<size_t>(g.size()));
  out += "SSNF";
  put_u32(out, kSsnfVersion);
  put_u32(out, static_cast<std::uint32_t>(g.spec.d));
  put_u32(out, static_cast<std::uint32_t>(g.spec.n));
  put_f64(out, g.spec.L);
  put_f64(out, g.spec.alpha);
  for (int c = 0; c < g.spec.d; ++c) {
    const Array& a = f.real(c);
    for (Eigen::Index j = 0; j < a.size(); ++j) put_f64(out, a[j]);
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(os.good(), "ssnf: cannot open for writing file=" + path.string());
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  require(os.good(), "ssnf: write failed file=" + path.string());
}

VectorField ssnf_read(const std::filesystem::path& path, bool dealias) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), "ssnf: cannot open file=" + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  Reader r{ss.str(), 0, path.string()};

  r.need(4, "magic");
  if (r.data.compare(0, 4, "SSNF") != 0)
    fail("ssnf: bad magic file=" + r.file + " offset=0");
  r.pos = 4;
  const std::uint32_t version = r.u32("version");
  if (version != kSsnfVersion)
    fail("ssnf: unsupported version=" + std::to_string(version) +
         " file=" + r.file + " offset=4");
  const std::uint32_t d = r.u32("d");
  const std::uint32_t n = r.u32("n");
  const double L = r.f64("L");
  const double alpha = r.f64("alpha");
  GridPtr grid = make_grid(static_cast<int>(d), static_cast<int>(n), L, alpha,
                           dealias);
  std::vector<Array> comps(d);
  for (std::uint32_t c = 0; c < d; ++c) {
    comps[c] = Array(grid->size());
    for (Eigen::Index j = 0; j < grid->size(); ++j)
      comps[c][j] = r.f64("component " + std::to_string(c));
  }
  if (r.pos != r.data.size())
    fail("ssnf: trailing bytes file=" + r.file + " offset=" +
         std::to_string(r.pos));
  return VectorField::from_real(grid, std::move(comps));
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : path_(path.string()), columns_(header.size()) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  require(values.size() == columns_, "csv: column count mismatch");
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += format_g17(values[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
  require(values.size() == columns_, "csv: column count mismatch");
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += values[i];
  }
  buffer_ += '\n';
}

void CsvWriter::close() {
  if (!open_) return;
  open_ = false;
  std::ofstream os(path_, std::ios::binary | std::ios::trunc);
  require(os.good(), "csv: cannot open file=" + path_);
  os.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  require(os.good(), "csv: write failed file=" + path_);
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
  }
}

const std::map<std::string, std::string>& RunConfig::known_keys() {
  static const std::map<std::string, std::string> keys = {
      {"d", "2"},
      {"n", "64"},
      {"L", "6.283185307179586"},
      {"alpha", "1.5"},
      {"dealias", "1"},
      {"nu", "1"},
      {"gamma", "0"},
      {"seed", "1"},
      {"out", "out"},
      {"quiet", "0"},
      {"exact_algebra", "0"},
      {"family.m", "2"},
      {"family.R", "0"},          // 0: L/4
      {"family.A0", "8"},
      {"family.amplitudes", "4,8,16"},
      {"tau_min", "-45"},
      {"T0", "0"},
      {"tau_steps", "2000"},
      {"pair.amplitude", "3e-7"},
      {"snapshot_stride", "100"},
      {"t0", "1"},
      {"krylov", "28"},
      {"dt", "0.004"},
      {"beta_points", "9"},
      {"A", "0.05"},
      {"picard.p0", "4.8"},
      {"picard.eps0", "0.5"},
      {"picard.delta", "1e-3"},
      {"picard.dtau", "0.1"},
      {"picard.tau_min", "0"},    // 0: derived from the tail rule
      {"picard.a0", "0.04"},
      {"mc.paths", "10000"},
      {"mc.horizon", "1.5"},
      {"mc.tmin", "1e-6"},
  };
  return keys;
}

RunConfig::RunConfig() {
  for (const auto& [k, v] : known_keys()) kv_[k] = v;
}

RunConfig RunConfig::parse_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    require(eq != std::string::npos,
            "config: missing '=' on line " + std::to_string(lineno));
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
    val.erase(val.begin(), std::find_if(val.begin(), val.end(), notspace));
    require(known_keys().count(key) > 0, "config: unknown key '" + key + "'");
    cfg.kv_[key] = val;
  }
  return cfg;
}

RunConfig RunConfig::parse_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  require(is.good(), "config: cannot open file=" + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_text(ss.str());
}

double RunConfig::get(const std::string& key) const {
  auto it = kv_.find(key);
  require(it != kv_.end(), "config: unknown key '" + key + "'");
  try {
    size_t used = 0;
    double v = std::stod(it->second, &used);
    require(used > 0, "config: non-numeric value for '" + key + "'");
    return v;
  } catch (const std::exception&) {
    fail("config: non-numeric value for '" + key + "'");
  }
}

std::string RunConfig::get_str(const std::string& key) const {
  auto it = kv_.find(key);
  require(it != kv_.end(), "config: unknown key '" + key + "'");
  return it->second;
}

void RunConfig::set(const std::string& key, double v) {
  require(known_keys().count(key) > 0, "config: unknown key '" + key + "'");
  kv_[key] = format_g17(v);
}

void RunConfig::set_str(const std::string& key, const std::string& v) {
  require(known_keys().count(key) > 0, "config: unknown key '" + key + "'");
  kv_[key] = v;
}

bool RunConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string RunConfig::resolved_text() const {
  std::string out;
  for (const auto& [k, v] : kv_) out += k + " = " + v + "\n";
  return out;
}

void RunConfig::write_resolved(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(os.good(), "config: cannot write file=" + path.string());
  os << resolved_text();
}

}  // namespace ssns
