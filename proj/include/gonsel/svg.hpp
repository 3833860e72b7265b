#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gonsel/stats.hpp"

namespace gonsel {

struct BoxplotSeries {
  std::string label;
  DistributionSummary summary;
};

/// Minimal boxplot: one box per series, whiskers at min/max, the mean drawn
/// as a red segment like the paper figures. Data identical to the CSVs.
void write_boxplot_svg(std::ostream& out, const std::string& title,
                       const std::vector<BoxplotSeries>& series,
                       double axis_min, double axis_max);

}  // namespace gonsel
