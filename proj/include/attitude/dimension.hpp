#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace attitude {

// The five attitude characteristics followed by the three action intentions.
// Declaration order is significant: it is the sweep order of collective
// inference and the column order of every table and file.
enum class Dimension : std::uint8_t {
    Favorability,
    Persistence,
    Confidence,
    Accessibility,
    Resistance,
    Buy,
    Recommend,
    Prohibit,
};

inline constexpr std::size_t kDimensionCount = 8;

inline constexpr std::array<Dimension, kDimensionCount> kAllDimensions = {
    Dimension::Favorability, Dimension::Persistence, Dimension::Confidence, Dimension::Accessibility,
    Dimension::Resistance,   Dimension::Buy,         Dimension::Recommend,  Dimension::Prohibit,
};

constexpr std::size_t index_of(Dimension d) noexcept { return static_cast<std::size_t>(d); }

constexpr bool is_attitude(Dimension d) noexcept { return d <= Dimension::Resistance; }
constexpr bool is_action(Dimension d) noexcept { return !is_attitude(d); }

// Lowercase identifier used in files, feature ids and URLs ("favorability").
std::string_view to_string(Dimension d) noexcept;

// Case-insensitive inverse of to_string.
std::optional<Dimension> parse_dimension(std::string_view name) noexcept;

// Per-dimension storage indexed by Dimension.
template <typename T>
using PerDimension = std::array<T, kDimensionCount>;

enum class Label : std::uint8_t { Negative = 0, Positive = 1 };

constexpr int to_int(Label l) noexcept { return static_cast<int>(l); }
constexpr Label label_from_bool(bool positive) noexcept { return positive ? Label::Positive : Label::Negative; }

}  // namespace attitude
