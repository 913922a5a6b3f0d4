#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cefr/catalog.hpp"
#include "cefr/level.hpp"

namespace cefr {

/// One construct instance found in a source file. `kind` always refers to
/// one of the static tokens in construct_kinds.hpp.
struct Occurrence {
  std::string_view kind;
  int line = 0;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
  friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

struct AnalysisResult {
  LevelVector vector;
  /// Every construct the analyzer found, cataloged or not, in pre-order.
  std::vector<Occurrence> occurrences;
  /// Occurrences whose kind the catalog does not classify.
  std::uint64_t unclassified_count = 0;
  bool parse_ok = true;
  /// Parse error message when parse_ok is false.
  std::string diagnostic;
};

/// Walks the full syntax tree of `source` and reports one occurrence per
/// node that matches a construct kind. Throws python::ParseError when the
/// source is not valid Python 3.
std::vector<Occurrence> count_constructs(std::string_view source);

/// Counts constructs and bins them by level. Never throws for bad input:
/// unparseable sources yield parse_ok = false and a zero vector.
AnalysisResult analyze_source(std::string_view source, const Catalog& catalog);

}  // namespace cefr
