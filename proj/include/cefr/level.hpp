#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace cefr {

/// The six proficiency bands, totally ordered A1 < A2 < B1 < B2 < C1 < C2.
enum class Level : std::uint8_t { A1 = 0, A2, B1, B2, C1, C2 };

inline constexpr std::size_t kLevelCount = 6;

inline constexpr std::array<Level, kLevelCount> kAllLevels = {
    Level::A1, Level::A2, Level::B1, Level::B2, Level::C1, Level::C2};

constexpr std::size_t ordinal(Level level) noexcept {
  return static_cast<std::size_t>(level);
}

constexpr std::string_view to_string(Level level) noexcept {
  constexpr std::array<std::string_view, kLevelCount> labels = {
      "A1", "A2", "B1", "B2", "C1", "C2"};
  return labels[ordinal(level)];
}

/// Parses an exact upper-case label ("A1".."C2").
constexpr std::optional<Level> parse_level(std::string_view label) noexcept {
  for (Level level : kAllLevels) {
    if (to_string(level) == label) return level;
  }
  return std::nullopt;
}

constexpr std::optional<Level> level_from_ordinal(std::size_t value) noexcept {
  if (value >= kLevelCount) return std::nullopt;
  return static_cast<Level>(value);
}

/// Non-negative occurrence counts per level.
class LevelVector {
 public:
  using Count = std::uint64_t;

  constexpr LevelVector() = default;
  constexpr explicit LevelVector(const std::array<Count, kLevelCount>& counts)
      : counts_(counts) {}

  constexpr Count operator[](Level level) const noexcept {
    return counts_[ordinal(level)];
  }
  constexpr Count& operator[](Level level) noexcept {
    return counts_[ordinal(level)];
  }

  constexpr const std::array<Count, kLevelCount>& counts() const noexcept {
    return counts_;
  }

  constexpr Count total() const noexcept {
    Count sum = 0;
    for (Count c : counts_) sum += c;
    return sum;
  }

  /// C1 + C2, the "most proficient code" measure.
  constexpr Count advanced() const noexcept {
    return counts_[ordinal(Level::C1)] + counts_[ordinal(Level::C2)];
  }

  constexpr bool is_zero() const noexcept { return total() == 0; }

  constexpr LevelVector& operator+=(const LevelVector& other) noexcept {
    for (std::size_t i = 0; i < kLevelCount; ++i) counts_[i] += other.counts_[i];
    return *this;
  }

  friend constexpr LevelVector operator+(LevelVector lhs,
                                         const LevelVector& rhs) noexcept {
    lhs += rhs;
    return lhs;
  }

  friend constexpr bool operator==(const LevelVector&,
                                   const LevelVector&) = default;

 private:
  std::array<Count, kLevelCount> counts_{};
};

}  // namespace cefr
