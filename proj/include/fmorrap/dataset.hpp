#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fmorrap/sysmodel.hpp"

namespace fmorrap {

inline constexpr int kDatasetSchemaVersion = 1;

struct BoundsEntry {
  WeightVector weights;
  IdealBounds bounds;

  friend bool operator==(const BoundsEntry&, const BoundsEntry&) = default;
};

struct Dataset {
  SystemSpec spec;
  std::vector<BoundsEntry> bounds;

  /// Bounds for an exact weight vector; throws Error(invalid_argument) when
  /// the dataset has no matching row.
  const IdealBounds& bounds_for(const WeightVector& weights) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Parses the line-oriented dataset format. Errors are Error(parse) with a
/// "<source>:<line>: " prefix; the loaded spec and bounds are validated.
Dataset parse_dataset(std::istream& in, const std::string& source = "<input>");
Dataset load_dataset(const std::filesystem::path& path);

/// Writes shortest round-trip representations, so parsing the output
/// reproduces the dataset exactly.
void write_dataset(std::ostream& out, const Dataset& dataset);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace fmorrap
