#include "fmorrap/dataset.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "fmorrap/error.hpp"

namespace fmorrap {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void error(const std::string& message) const {
    fail(ErrorKind::parse, source_ + ":" + std::to_string(line_) + ": " + message);
  }

  void set_line(std::size_t line) { line_ = line; }

  double real(const std::string& tok, const char* field) const {
    double v = 0.0;
    const char* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc() || ptr != end) error(std::string("field '") + field + "': not a number: '" + tok + "'");
    return v;
  }

  long integer(const std::string& tok, const char* field) const {
    long v = 0;
    const char* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc() || ptr != end) error(std::string("field '") + field + "': not an integer: '" + tok + "'");
    return v;
  }

  void arity(const std::vector<std::string>& t, std::size_t n) const {
    if (t.size() != n) {
      error("'" + t[0] + "' expects " + std::to_string(n - 1) + " values, got " + std::to_string(t.size() - 1));
    }
  }

 private:
  std::string source_;
  std::size_t line_ = 0;
};

}  // namespace

const IdealBounds& Dataset::bounds_for(const WeightVector& weights) const {
  for (const BoundsEntry& e : bounds) {
    if (e.weights == weights) return e.bounds;
  }
  fail(ErrorKind::invalid_argument, "no ideal bounds for weight vector [" + format_double(weights.reliability) + "," +
                                        format_double(weights.cost) + "]");
}

Dataset parse_dataset(std::istream& in, const std::string& source) {
  Parser p(source);
  Dataset d;
  std::optional<long> declared_m;
  std::map<std::string, std::size_t> seen;  // key -> first line
  std::map<long, Subsystem> rows;
  bool header = false;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    p.set_line(lineno);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = tokenize(line);
    if (t.empty()) continue;

    if (!header) {
      if (t[0] != "fmorrap-dataset") p.error("expected header 'fmorrap-dataset <version>'");
      p.arity(t, 2);
      if (p.integer(t[1], "version") != kDatasetSchemaVersion) {
        p.error("unsupported schema version " + t[1] + " (expected " + std::to_string(kDatasetSchemaVersion) + ")");
      }
      header = true;
      continue;
    }

    const std::string& key = t[0];
    const bool repeatable = key == "subsystem" || key == "ideal";
    if (!repeatable) {
      if (auto it = seen.find(key); it != seen.end()) {
        p.error("duplicate key '" + key + "' (first on line " + std::to_string(it->second) + ")");
      }
      seen.emplace(key, lineno);
    }

    if (key == "topology") {
      p.arity(t, 2);
      try {
        d.spec.topology = parse_topology(t[1]);
      } catch (const Error& e) {
        p.error(e.what());
      }
    } else if (key == "subsystems") {
      p.arity(t, 2);
      declared_m = p.integer(t[1], "subsystems");
      if (*declared_m < 1) p.error("subsystems must be >= 1");
    } else if (key == "mission-time") {
      p.arity(t, 2);
      d.spec.mission_time = p.real(t[1], "mission-time");
    } else if (key == "limits") {
      p.arity(t, 7);
      std::map<std::string, double> lim;
      for (std::size_t i = 1; i < 7; i += 2) {
        const std::string& name = t[i];
        if (name != "weight" && name != "volume" && name != "cost") p.error("unknown limit '" + name + "'");
        if (lim.count(name)) p.error("duplicate limit '" + name + "'");
        lim[name] = p.real(t[i + 1], name.c_str());
      }
      d.spec.limits = {lim["weight"], lim["volume"], lim["cost"]};
    } else if (key == "r-range") {
      p.arity(t, 3);
      d.spec.r_range = {p.real(t[1], "r-range lo"), p.real(t[2], "r-range hi")};
    } else if (key == "n-range") {
      p.arity(t, 3);
      d.spec.n_range = {static_cast<int>(p.integer(t[1], "n-range lo")), static_cast<int>(p.integer(t[2], "n-range hi"))};
    } else if (key == "subsystem") {
      p.arity(t, 7);
      const long idx = p.integer(t[1], "index");
      if (idx < 1) p.error("subsystem index must be >= 1");
      if (rows.count(idx)) p.error("duplicate subsystem " + t[1]);
      rows[idx] = {p.real(t[2], "alpha"), p.real(t[3], "beta"), p.real(t[4], "weight"), p.real(t[5], "kappa"),
                   p.real(t[6], "wv2")};
    } else if (key == "ideal") {
      p.arity(t, 7);
      BoundsEntry e;
      e.weights = {p.real(t[1], "xi1"), p.real(t[2], "xi2")};
      e.bounds = {p.real(t[3], "r_left"), p.real(t[4], "r_right"), p.real(t[5], "c_left"), p.real(t[6], "c_right")};
      for (const BoundsEntry& prev : d.bounds) {
        if (prev.weights == e.weights) p.error("duplicate ideal row for weight vector " + t[1] + "," + t[2]);
      }
      try {
        e.bounds.validate();
      } catch (const Error& err) {
        p.error(err.what());
      }
      d.bounds.push_back(e);
    } else {
      p.error("unknown key '" + key + "'");
    }
  }

  p.set_line(lineno);
  if (!header) p.error("empty dataset (missing header)");
  for (const char* required : {"topology", "subsystems", "mission-time", "limits", "r-range", "n-range"}) {
    if (!seen.count(required)) p.error(std::string("missing required key '") + required + "'");
  }
  if (static_cast<long>(rows.size()) != *declared_m) {
    p.error("declared " + std::to_string(*declared_m) + " subsystems but found " + std::to_string(rows.size()) +
            " rows");
  }
  long expect = 1;
  for (const auto& [idx, row] : rows) {
    if (idx != expect) p.error("subsystem rows must be numbered 1.." + std::to_string(*declared_m));
    d.spec.subsystems.push_back(row);
    ++expect;
  }
  try {
    d.spec.validate();
  } catch (const Error& err) {
    p.error(err.what());
  }
  return d;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open dataset '" + path.string() + "'");
  return parse_dataset(in, path.string());
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) fail(ErrorKind::internal, "format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_dataset(std::ostream& out, const Dataset& d) {
  const SystemSpec& s = d.spec;
  out << "fmorrap-dataset " << kDatasetSchemaVersion << "\n";
  out << "topology " << to_string(s.topology) << "\n";
  out << "subsystems " << s.size() << "\n";
  out << "mission-time " << format_double(s.mission_time) << "\n";
  out << "limits weight " << format_double(s.limits.weight) << " volume " << format_double(s.limits.volume)
      << " cost " << format_double(s.limits.cost) << "\n";
  out << "r-range " << format_double(s.r_range.lo) << " " << format_double(s.r_range.hi) << "\n";
  out << "n-range " << s.n_range.lo << " " << s.n_range.hi << "\n";
  out << "# subsystem index alpha beta weight kappa wv2\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Subsystem& r = s.subsystems[i];
    out << "subsystem " << i + 1 << " " << format_double(r.alpha) << " " << format_double(r.beta) << " "
        << format_double(r.weight) << " " << format_double(r.kappa) << " " << format_double(r.wv2) << "\n";
  }
  if (!d.bounds.empty()) out << "# ideal xi1 xi2 r_left r_right c_left c_right\n";
  for (const BoundsEntry& e : d.bounds) {
    out << "ideal " << format_double(e.weights.reliability) << " " << format_double(e.weights.cost) << " "
        << format_double(e.bounds.r_left) << " " << format_double(e.bounds.r_right) << " "
        << format_double(e.bounds.c_left) << " " << format_double(e.bounds.c_right) << "\n";
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write dataset '" + path.string() + "'");
  write_dataset(out, dataset);
  if (!out) fail(ErrorKind::io, "write failed for '" + path.string() + "'");
}

}  // namespace fmorrap
