#pragma once

#include <string>
#include <vector>

#include "fairseg/homotopy.hpp"

namespace fairseg {

// 800x400 line chart of the three weight curves. Restricted to
// svg/polyline/line/text elements; exactly three polylines.
std::string schedule_svg(const std::vector<ScheduleWeights>& rows);

}  // namespace fairseg
