#include "netda/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "netda/errors.hpp"

namespace netda {

std::string format_double(double v) {
  char buf[40];
  // Try shortening precisions; fall back to %.17g which always round-trips.
  for (int prec = 1; prec <= 16; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_partition_csv(std::ostream& out, const Partition& p) {
  out << "node,community\n";
  for (std::size_t v = 0; v < p.assignment.size(); ++v)
    out << v << ',' << p.assignment[v] << '\n';
}

void write_curve_csv(std::ostream& out, const CurveSeries& s) {
  out << "step,mean,std\n";
  for (std::size_t t = 0; t < s.mean.size(); ++t)
    out << t << ',' << format_double(s.mean[t]) << ','
        << format_double(s.stddev[t]) << '\n';
}

CurveSeries read_curve_csv(std::istream& in, const std::string& name) {
  CurveSeries s;
  s.name = name;
  std::string line;
  if (!std::getline(in, line) || line.rfind("step,mean,std", 0) != 0)
    throw parse_error("curve csv: missing header");
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string step, mean, stddev;
    if (!std::getline(ss, step, ',') || !std::getline(ss, mean, ',') ||
        !std::getline(ss, stddev))
      throw parse_error("curve csv: malformed row '" + line + "'");
    if (static_cast<std::size_t>(std::stoll(step)) != expected++)
      throw parse_error("curve csv: steps out of order");
    s.mean.push_back(std::strtod(mean.c_str(), nullptr));
    s.stddev.push_back(std::strtod(stddev.c_str(), nullptr));
  }
  return s;
}

namespace {

const char* kPalette[] = {"#2166ac", "#b2182b", "#1a9850", "#d94801",
                          "#6a51a3", "#878787", "#c51b7d", "#01665e"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_curves_svg(std::ostream& out, const std::string& title,
                      const std::vector<CurveSeries>& series) {
  const double width = 860.0, height = 520.0;
  const double ml = 60.0, mr = 220.0, mt = 40.0, mb = 50.0;
  const double pw = width - ml - mr, ph = height - mt - mb;

  std::size_t steps = 0;
  double ymax = 1.0;
  for (const CurveSeries& s : series) {
    steps = std::max(steps, s.mean.size());
    for (std::size_t t = 0; t < s.mean.size(); ++t)
      ymax = std::max(ymax, s.mean[t] + s.stddev[t]);
  }
  ymax *= 1.05;
  const double xmax = steps > 1 ? static_cast<double>(steps - 1) : 1.0;

  auto px = [&](double x) { return ml + x / xmax * pw; };
  auto py = [&](double y) { return mt + ph - y / ymax * ph; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      << "width=\"" << width << "\" height=\"" << height << "\" "
      << "viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << xml_escape(title) << "</text>\n";

  // Axes.
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double y = ymax * k / 4.0;
    out << "<text x=\"" << ml - 8 << "\" y=\"" << py(y) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << format_double(std::round(y * 100.0) / 100.0) << "</text>\n";
    const double x = xmax * k / 4.0;
    out << "<text x=\"" << px(x) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << format_double(std::round(x)) << "</text>\n";
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const CurveSeries& s = series[si];
    if (s.mean.empty()) continue;
    const char* color = kPalette[si % (sizeof kPalette / sizeof *kPalette)];

    // +-1 std band: forward along mean+std, back along mean-std.
    out << "<path fill=\"" << color << "\" fill-opacity=\"0.15\" "
        << "stroke=\"none\" d=\"";
    for (std::size_t t = 0; t < s.mean.size(); ++t)
      out << (t == 0 ? 'M' : 'L') << px(static_cast<double>(t)) << ' '
          << py(std::min(std::max(s.mean[t] + s.stddev[t], 0.0), ymax)) << ' ';
    for (std::size_t t = s.mean.size(); t-- > 0;)
      out << 'L' << px(static_cast<double>(t)) << ' '
          << py(std::max(s.mean[t] - s.stddev[t], 0.0)) << ' ';
    out << "Z\"/>\n";

    out << "<path fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" d=\"";
    for (std::size_t t = 0; t < s.mean.size(); ++t)
      out << (t == 0 ? 'M' : 'L') << px(static_cast<double>(t)) << ' '
          << py(s.mean[t]) << ' ';
    out << "\"/>\n";

    // Legend entry.
    const double ly = mt + 16.0 + 18.0 * static_cast<double>(si);
    out << "<line x1=\"" << ml + pw + 12 << "\" y1=\"" << ly << "\" x2=\""
        << ml + pw + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << ml + pw + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << xml_escape(s.name) << "</text>\n";
  }
  out << "</svg>\n";
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open output file: " + path.string());
  return out;
}

}  // namespace netda
