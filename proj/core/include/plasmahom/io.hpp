// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PLASMAHOM_IO_HPP
#define PLASMAHOM_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace plasmahom
{

inline constexpr const char *kVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

std::string xml_escape(std::string_view text);

// Shortest round-trip decimal representation.
std::string format_double(double value);

// Writes to a sibling temporary file, then renames over the target.
void atomic_write(const std::filesystem::path &path, std::string_view content);

// Minimal SVG line plot.
struct PlotSeries
{
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotBand
{
  double x0 = 0.0;
  double x1 = 0.0;
};

struct PlotSpec
{
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<PlotBand> bands;  // shaded vertical bands
  double y_clip = 0.0;          // clamp |y| to this value when > 0
  int width = 720;
  int height = 420;
};

std::string render_svg_plot(const PlotSpec &spec);

}  // namespace plasmahom

#endif  // PLASMAHOM_IO_HPP
