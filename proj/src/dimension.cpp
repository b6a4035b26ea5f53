#include "attitude/dimension.hpp"

#include <cctype>

namespace attitude {
namespace {

constexpr std::array<std::string_view, kDimensionCount> kNames = {
    "favorability", "persistence", "confidence", "accessibility",
    "resistance",   "buy",         "recommend",  "prohibit",
};

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) != b[i]) return false;
    }
    return true;
}

}  // namespace

std::string_view to_string(Dimension d) noexcept { return kNames[index_of(d)]; }

std::optional<Dimension> parse_dimension(std::string_view name) noexcept {
    for (Dimension d : kAllDimensions) {
        if (iequals(name, kNames[index_of(d)])) return d;
    }
    return std::nullopt;
}

}  // namespace attitude
