// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#include "plasmahom/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "plasmahom/errors.hpp"

namespace plasmahom
{

std::uint64_t fnv1a64(std::string_view data)
{
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data)
  {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view data)
{
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  return buf;
}

std::string xml_escape(std::string_view text)
{
  std::string out;
  out.reserve(text.size());
  for (char c : text)
  {
    switch (c)
    {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string format_double(double value)
{
  if (!std::isfinite(value))
  {
    return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void atomic_write(const std::filesystem::path &path, std::string_view content)
{
  namespace fs = std::filesystem;
  if (path.has_parent_path())
  {
    fs::create_directories(path.parent_path());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      throw Error("cannot open " + tmp.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
    {
      throw Error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec)
  {
    fs::remove(tmp);
    throw Error("cannot rename " + tmp.string() + ": " + ec.message());
  }
}

namespace
{

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string render_svg_plot(const PlotSpec &spec)
{
  const double left = 70, right = 20, top = 40, bottom = 50;
  const double pw = spec.width - left - right;
  const double ph = spec.height - top - bottom;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  auto clip = [&](double y) {
    return spec.y_clip > 0.0 ? std::clamp(y, -spec.y_clip, spec.y_clip) : y;
  };
  for (const auto &s : spec.series)
  {
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k)
    {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k]))
      {
        continue;
      }
      xmin = std::min(xmin, s.x[k]);
      xmax = std::max(xmax, s.x[k]);
      ymin = std::min(ymin, clip(s.y[k]));
      ymax = std::max(ymax, clip(s.y[k]));
    }
  }
  if (!(xmin < xmax))
  {
    xmin = 0.0;
    xmax = 1.0;
  }
  if (!(ymin < ymax))
  {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + (ymax - clip(y)) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
     << "\" height=\"" << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto &b : spec.bands)
  {
    const double x0 = sx(std::max(b.x0, xmin));
    const double x1 = sx(std::min(b.x1, xmax));
    os << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(top) << "\" width=\""
       << fmt(std::max(x1 - x0, 0.0)) << "\" height=\"" << fmt(ph)
       << "\" fill=\"#dddddd\"/>\n";
  }
  os << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw)
     << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (ymin < 0.0 && ymax > 0.0)
  {
    os << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(sy(0.0)) << "\" x2=\""
       << fmt(left + pw) << "\" y2=\"" << fmt(sy(0.0))
       << "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (int k = 0; k <= 5; ++k)
  {
    const double xv = xmin + (xmax - xmin) * k / 5.0;
    const double yv = ymin + (ymax - ymin) * k / 5.0;
    os << "<text x=\"" << fmt(sx(xv)) << "\" y=\"" << fmt(top + ph + 18)
       << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
    os << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(sy(yv) + 4)
       << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
  }
  os << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(spec.height - 10.0)
     << "\" text-anchor=\"middle\">" << xml_escape(spec.x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << fmt(top + ph / 2) << "\" text-anchor=\"middle\" "
     << "transform=\"rotate(-90 16 " << fmt(top + ph / 2) << ")\">" << xml_escape(spec.y_label)
     << "</text>\n";
  os << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\">"
     << xml_escape(spec.title) << "</text>\n";
  double ly = top + 14;
  for (const auto &s : spec.series)
  {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k)
    {
      if (std::isfinite(s.x[k]) && std::isfinite(s.y[k]))
      {
        os << fmt(sx(s.x[k])) << "," << fmt(sy(s.y[k])) << " ";
      }
    }
    os << "\"/>\n";
    os << "<text x=\"" << fmt(left + pw - 8) << "\" y=\"" << fmt(ly)
       << "\" text-anchor=\"end\" fill=\"" << s.color << "\">" << xml_escape(s.label) << "</text>\n";
    ly += 16;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace plasmahom
