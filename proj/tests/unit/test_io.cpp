// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "plasmahom/io.hpp"

namespace ph = plasmahom;
namespace fs = std::filesystem;

TEST(Hash, Fnv1aReferenceValues)
{
  EXPECT_EQ(ph::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(ph::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(ph::fnv1a64_hex("foobar"), "85944171f73967e8");
}

TEST(FormatDouble, ShortestRoundTrip)
{
  EXPECT_EQ(ph::format_double(0.1), "0.1");
  EXPECT_EQ(ph::format_double(2.0), "2");
  for (double v : {1.0 / 3.0, 2.00014130774934, -1e-300, 6.02214076e23})
  {
    EXPECT_EQ(std::stod(ph::format_double(v)), v);
  }
  EXPECT_EQ(ph::format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
}

TEST(AtomicWrite, CreatesDirectoriesAndReplaces)
{
  const fs::path dir = fs::temp_directory_path() / "plasmahom_io_test";
  fs::remove_all(dir);
  const fs::path file = dir / "nested" / "out.txt";
  ph::atomic_write(file, "first");
  ph::atomic_write(file, "second");
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "second");
  int count = 0;
  for ([[maybe_unused]] const auto &e : fs::directory_iterator(dir / "nested"))
  {
    ++count;
  }
  EXPECT_EQ(count, 1);
  fs::remove_all(dir);
}

TEST(SvgPlot, ContainsSeriesAndBands)
{
  ph::PlotSpec spec;
  spec.title = "t & <x>";
  spec.series.push_back({"Re", "#1f77b4", {0.0, 1.0, 2.0}, {1.0, -1.0, 1.0}});
  spec.bands.push_back({0.5, 1.5});
  const auto svg = ph::render_svg_plot(spec);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("<rect"), std::string::npos);
  EXPECT_NE(svg.find("t &amp; &lt;x&gt;"), std::string::npos);
}
