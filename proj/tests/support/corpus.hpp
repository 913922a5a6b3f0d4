#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cefr::testing {

/// (kind, line) -> count.
using OccurrenceCounts = std::map<std::pair<std::string, int>, int>;

/// A corpus file and its hand labels, read from trailing comments of the
/// form "# expect <line>: kind, kind, ...".
struct LabeledSnippet {
  std::filesystem::path path;
  std::string source;
  OccurrenceCounts expected;
};

std::vector<LabeledSnippet> load_labeled_corpus(const std::filesystem::path& dir);

/// One line per (kind, line) whose analyzer count differs from the label.
std::vector<std::string> corpus_discrepancies(const LabeledSnippet& snippet);

}  // namespace cefr::testing
