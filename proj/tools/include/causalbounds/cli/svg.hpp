#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "causalbounds/cli/report.hpp"

namespace causalbounds::cli {

struct SvgLayout {
  double width = 720.0;
  double label_width = 270.0;
  double right_margin = 30.0;
  double row_height = 36.0;
  double bar_height = 14.0;
  double top = 20.0;
  double axis_gap = 40.0;

  double plot_left() const noexcept { return label_width; }
  double plot_right() const noexcept { return width - right_margin; }
};

/// Horizontal interval diagram over `axis` with one row per result and a
/// single dashed null line at 0. Partial results draw a <rect class="bound">,
/// point results a zero-width <line class="point">; both carry data-lo and
/// data-hi. Throws DomainError for an empty list.
std::string render_svg_bounds(std::span<const LabeledResult> results, Interval axis,
                              const SvgLayout& layout = {});

void emit_svg_bounds(std::span<const LabeledResult> results, Interval axis,
                     const std::filesystem::path& path);

}  // namespace causalbounds::cli
