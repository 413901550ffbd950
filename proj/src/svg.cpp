#include "fairseg/svg.hpp"

#include <sstream>

#include "fairseg/errors.hpp"

namespace fairseg {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 48.0;

double map_x(size_t t, size_t total) {
  const double span = kWidth - 2.0 * kMargin;
  if (total <= 1) return kMargin;
  return kMargin + span * static_cast<double>(t) / static_cast<double>(total - 1);
}

double map_y(double w) { return kMargin + (1.0 - w) * (kHeight - 2.0 * kMargin); }

std::string coord(double v) {
  std::ostringstream o;
  o.precision(2);
  o << std::fixed << v;
  return o.str();
}

void polyline(std::ostringstream& out, const std::vector<ScheduleWeights>& rows,
              double ScheduleWeights::* member, const char* color) {
  out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
  for (size_t t = 0; t < rows.size(); ++t) {
    if (t > 0) out << " ";
    out << coord(map_x(t, rows.size())) << "," << coord(map_y(rows[t].*member));
  }
  out << "\"/>\n";
}

}  // namespace

std::string schedule_svg(const std::vector<ScheduleWeights>& rows) {
  if (rows.empty()) throw ConfigError("schedule_svg needs at least one row");
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 400\">\n";
  // axes: x spans epochs 0..T-1, y spans weight 0..1
  out << "  <line x1=\"" << coord(kMargin) << "\" y1=\"" << coord(kHeight - kMargin)
      << "\" x2=\"" << coord(kWidth - kMargin) << "\" y2=\"" << coord(kHeight - kMargin)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "  <line x1=\"" << coord(kMargin) << "\" y1=\"" << coord(kMargin) << "\" x2=\""
      << coord(kMargin) << "\" y2=\"" << coord(kHeight - kMargin)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "  <text x=\"" << coord(kMargin - 30.0) << "\" y=\"" << coord(kMargin + 4.0)
      << "\" font-size=\"12\">1.0</text>\n";
  out << "  <text x=\"" << coord(kMargin - 30.0) << "\" y=\"" << coord(kHeight - kMargin + 4.0)
      << "\" font-size=\"12\">0.0</text>\n";
  out << "  <text x=\"" << coord(kMargin) << "\" y=\"" << coord(kHeight - kMargin + 18.0)
      << "\" font-size=\"12\">t=0</text>\n";
  out << "  <text x=\"" << coord(kWidth - kMargin - 40.0) << "\" y=\""
      << coord(kHeight - kMargin + 18.0) << "\" font-size=\"12\">t=" << rows.size() - 1
      << "</text>\n";
  polyline(out, rows, &ScheduleWeights::alpha, "#1f77b4");
  polyline(out, rows, &ScheduleWeights::beta, "#ff7f0e");
  polyline(out, rows, &ScheduleWeights::gamma, "#2ca02c");
  out << "  <text x=\"" << coord(kWidth - kMargin - 180.0) << "\" y=\"" << coord(kMargin)
      << "\" font-size=\"12\" fill=\"#1f77b4\">alpha (accuracy)</text>\n";
  out << "  <text x=\"" << coord(kWidth - kMargin - 180.0) << "\" y=\"" << coord(kMargin + 16.0)
      << "\" font-size=\"12\" fill=\"#ff7f0e\">beta (robustness)</text>\n";
  out << "  <text x=\"" << coord(kWidth - kMargin - 180.0) << "\" y=\"" << coord(kMargin + 32.0)
      << "\" font-size=\"12\" fill=\"#2ca02c\">gamma (fairness)</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace fairseg
