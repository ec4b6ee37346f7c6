#pragma once

#include <array>
#include <string>
#include <string_view>

namespace hoseeg {

/// Trial condition. The integer values double as class indices in the classifiers.
enum class Label : int { power = 0, precision = 1, none = 2 };

inline constexpr std::array<Label, 3> kAllLabels{Label::power, Label::precision, Label::none};

std::string_view to_string(Label label);

/// Throws ParseError for anything outside {power, precision, none}.
Label parse_label(std::string_view text);

}  // namespace hoseeg
