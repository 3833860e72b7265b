#include "gonsel/svg.hpp"

#include <algorithm>
#include <ostream>

#include "gonsel/io.hpp"

namespace gonsel {

namespace {
constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
}  // namespace

void write_boxplot_svg(std::ostream& out, const std::string& title,
                       const std::vector<BoxplotSeries>& series,
                       double axis_min, double axis_max) {
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double span = axis_max > axis_min ? axis_max - axis_min : 1.0;
  auto y_of = [&](double v) {
    return kTop + plot_h * (1.0 - (v - axis_min) / span);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << kLeft + plot_w << "\" y2=\"" << kTop + plot_h
      << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = axis_min + span * tick / 4.0;
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << y_of(v) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" << format_double(v) << "</text>\n";
    out << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << y_of(v) << "\" x2=\""
        << kLeft << "\" y2=\"" << y_of(v) << "\" stroke=\"black\"/>\n";
  }

  const double slot = plot_w / double(std::max<std::size_t>(series.size(), 1));
  for (std::size_t i = 0; i < series.size(); ++i) {
    const DistributionSummary& s = series[i].summary;
    const double cx = kLeft + slot * (double(i) + 0.5);
    const double half = std::min(slot * 0.3, 40.0);
    out << "<line x1=\"" << cx << "\" y1=\"" << y_of(s.min) << "\" x2=\"" << cx
        << "\" y2=\"" << y_of(s.max) << "\" stroke=\"black\"/>\n";
    for (const double w : {s.min, s.max})
      out << "<line x1=\"" << cx - half / 2 << "\" y1=\"" << y_of(w)
          << "\" x2=\"" << cx + half / 2 << "\" y2=\"" << y_of(w)
          << "\" stroke=\"black\"/>\n";
    out << "<rect x=\"" << cx - half << "\" y=\"" << y_of(s.q3) << "\" width=\""
        << 2 * half << "\" height=\"" << y_of(s.q1) - y_of(s.q3)
        << "\" fill=\"white\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << cx - half << "\" y1=\"" << y_of(s.median)
        << "\" x2=\"" << cx + half << "\" y2=\"" << y_of(s.median)
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    out << "<line x1=\"" << cx - half << "\" y1=\"" << y_of(s.mean)
        << "\" x2=\"" << cx + half << "\" y2=\"" << y_of(s.mean)
        << "\" stroke=\"red\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << cx << "\" y=\"" << kTop + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" << series[i].label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace gonsel
