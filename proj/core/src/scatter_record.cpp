#include "oceansrc/scatter_record.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "oceansrc/error.hpp"
#include "oceansrc/numeric_io.hpp"

namespace oceansrc {
namespace {

double truncated_normal(std::mt19937_64& rng, std::normal_distribution<double>& dist) {
  for (;;) {
    const double v = dist(rng);
    if (v >= -1.0 && v <= 1.0) return v;
  }
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double need_double(std::string_view s, int line) {
  const auto v = parse_double(s);
  if (!v) throw ConfigError(line, "expected a number, got '" + std::string(s) + "'");
  return *v;
}

}  // namespace

ScatterRecord add_noise(const ScatterRecord& rec, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw DomainError("noise level must be non-negative");
  ScatterRecord out = rec;
  out.noise = delta;
  out.seed = seed;
  if (delta == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (cplx& v : out.values) {
    const double r1 = truncated_normal(rng, dist);
    const double r2 = truncated_normal(rng, dist);
    v *= cplx(1.0 + delta * r1, delta * r2);
  }
  return out;
}

void write_record_csv(const ScatterRecord& rec, std::ostream& out) {
  out << "x,y,z,re,im,delta,seed\n";
  for (std::size_t m = 0; m < rec.receivers.size(); ++m) {
    const Point3& p = rec.receivers[m];
    for (double v : {p.x, p.y, p.z, rec.values[m].real(), rec.values[m].imag(), rec.noise}) {
      write_double(out, v);
      out << ',';
    }
    out << rec.seed << '\n';
  }
}

ScatterRecord read_record_csv(std::istream& in) {
  ScatterRecord rec;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (!header) {
      if (trim(line) != "x,y,z,re,im,delta,seed") throw ConfigError(lineno, "unexpected CSV header");
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 7) throw ConfigError(lineno, "expected 7 columns");
    rec.receivers.push_back({need_double(f[0], lineno), need_double(f[1], lineno),
                             need_double(f[2], lineno)});
    rec.values.emplace_back(need_double(f[3], lineno), need_double(f[4], lineno));
    rec.noise = need_double(f[5], lineno);
    const auto seed = parse_uint(f[6]);
    if (!seed) throw ConfigError(lineno, "invalid seed");
    rec.seed = *seed;
  }
  if (!header) throw ConfigError(0, "empty scatter record");
  return rec;
}

void write_record_text(const ScatterRecord& rec, std::ostream& out) {
  out << "scatter-record 1\nnoise ";
  write_double(out, rec.noise);
  out << "\nseed " << rec.seed << "\nreceivers " << rec.receivers.size() << '\n';
  for (std::size_t m = 0; m < rec.receivers.size(); ++m) {
    const Point3& p = rec.receivers[m];
    const double fields[] = {p.x, p.y, p.z, rec.values[m].real(), rec.values[m].imag()};
    for (int i = 0; i < 5; ++i) {
      if (i) out << ' ';
      write_double(out, fields[i]);
    }
    out << '\n';
  }
}

ScatterRecord read_record_text(std::istream& in) {
  ScatterRecord rec;
  std::string line;
  int lineno = 0;
  auto keyword_line = [&](std::string_view key) {
    if (!std::getline(in, line)) throw ConfigError(lineno + 1, "missing '" + std::string(key) + "'");
    ++lineno;
    const auto f = split_ws(line);
    if (f.size() != 2 || f[0] != key) throw ConfigError(lineno, "expected '" + std::string(key) + " <value>'");
    return f[1];
  };
  if (keyword_line("scatter-record") != "1") throw ConfigError(lineno, "unsupported record version");
  rec.noise = need_double(keyword_line("noise"), lineno);
  const auto seed = parse_uint(keyword_line("seed"));
  if (!seed) throw ConfigError(lineno, "invalid seed");
  rec.seed = *seed;
  const auto count = parse_uint(keyword_line("receivers"));
  if (!count) throw ConfigError(lineno, "invalid receiver count");
  for (std::uint64_t m = 0; m < *count; ++m) {
    if (!std::getline(in, line)) throw ConfigError(lineno + 1, "truncated receiver list");
    ++lineno;
    const auto f = split_ws(line);
    if (f.size() != 5) throw ConfigError(lineno, "expected 'x y z re im'");
    rec.receivers.push_back({need_double(f[0], lineno), need_double(f[1], lineno),
                             need_double(f[2], lineno)});
    rec.values.emplace_back(need_double(f[3], lineno), need_double(f[4], lineno));
  }
  return rec;
}

}  // namespace oceansrc
