#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "netda/community.hpp"

namespace netda {

// Round-trip-exact decimal formatting (shortest %.17g form that parses back
// to the same double). All CSV and SVG output goes through this, which is
// what makes byte-identical reruns possible.
std::string format_double(double v);

void write_partition_csv(std::ostream& out, const Partition& p);

struct CurveSeries {
  std::string name;
  std::vector<double> mean;
  std::vector<double> stddev;
};

// `step,mean,std` rows.
void write_curve_csv(std::ostream& out, const CurveSeries& s);
CurveSeries read_curve_csv(std::istream& in, const std::string& name);

// Line chart with one mean path and one +-1 std band path per series.
// Well-formed standalone SVG 1.1.
void write_curves_svg(std::ostream& out, const std::string& title,
                      const std::vector<CurveSeries>& series);

std::ofstream open_output(const std::filesystem::path& path);

}  // namespace netda
