#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cefr/level.hpp"

namespace cefr {

struct ConstructRule {
  std::string kind;
  Level level = Level::A1;
  std::string description;

  friend bool operator==(const ConstructRule&, const ConstructRule&) = default;
};

class CatalogError : public std::runtime_error {
 public:
  enum class Reason { Unreadable, Parse, Duplicate };

  CatalogError(Reason reason, const std::string& message)
      : std::runtime_error(message), reason_(reason) {}

  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

/// Immutable mapping from construct kind to proficiency level.
class Catalog {
 public:
  Catalog() = default;

  /// Throws CatalogError(Duplicate) when two rules share a kind with
  /// different levels. A repeated identical kind keeps the last rule.
  Catalog(std::string version, std::vector<ConstructRule> rules);

  const std::string& version() const noexcept { return version_; }

  /// Rules sorted by (level, kind).
  std::vector<ConstructRule> rules() const;

  std::size_t size() const noexcept { return rules_.size(); }

  std::optional<Level> classify(std::string_view kind) const;

  const ConstructRule* find(std::string_view kind) const;

  /// Returns a copy where every rule in `overrides` replaces the rule with
  /// the same kind (or is appended).
  Catalog merged_with(const Catalog& overrides) const;

  friend bool operator==(const Catalog&, const Catalog&) = default;

 private:
  std::string version_;
  std::map<std::string, ConstructRule, std::less<>> rules_;
};

/// The embedded default catalog text (same grammar as catalog files).
std::string_view default_catalog_text();

const Catalog& default_catalog();

/// Parses catalog text without merging. `origin` is used in error messages.
Catalog parse_catalog(std::string_view text, std::string_view origin = "<text>");

/// Serializes a catalog so that parse_catalog(to_catalog_text(c)) == c.
std::string to_catalog_text(const Catalog& catalog);

/// Default catalog, or the defaults overridden by the file at `path`.
Catalog load_catalog(const std::optional<std::filesystem::path>& path);

inline std::optional<Level> classify(const Catalog& catalog,
                                     std::string_view kind) {
  return catalog.classify(kind);
}

}  // namespace cefr
