#pragma once

#include <string>
#include <vector>

#include "esmg/dataset.hpp"

namespace esmg {

/// Supported model calendars. Timestamps are seconds since a year boundary
/// of the declared calendar (attrs["calendar"] = "noleap" | "360_day").
enum class CalendarKind { noleap, day360 };

CalendarKind calendar_from_attrs(const Dataset& ds);
int days_per_year(CalendarKind cal);

struct CalendarDate {
  int year;         // 0-based count of whole years since the epoch
  int month;        // 1..12
  int day_of_year;  // 0-based
};

CalendarDate decode_time(double t_seconds, CalendarKind cal);

enum class Season { ANN, DJF, MAM, JJA, SON };

const char* season_name(Season s);
Season season_from_name(const std::string& name);

/// Time indices belonging to a season. Non-ANN seasons keep only samples in
/// complete season instances (all three months represented); DJF December
/// counts toward the following year's instance, so edge seasons drop.
std::vector<Eigen::Index> season_sample_indices(const Dataset& ds, Season season);

/// Calendar year of each timestep (for annual reductions).
std::vector<int> sample_years(const Dataset& ds);

}  // namespace esmg
