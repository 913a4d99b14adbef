#include "esmg/calendar.hpp"

#include <array>
#include <cmath>
#include <map>
#include <set>

namespace esmg {

CalendarKind calendar_from_attrs(const Dataset& ds) {
  auto it = ds.attrs.find("calendar");
  if (it == ds.attrs.end() || it->second == "noleap" || it->second == "365_day") {
    return CalendarKind::noleap;
  }
  if (it->second == "360_day") return CalendarKind::day360;
  raise(errc::config_error, "unsupported calendar '" + it->second + "'");
}

int days_per_year(CalendarKind cal) { return cal == CalendarKind::day360 ? 360 : 365; }

CalendarDate decode_time(double t_seconds, CalendarKind cal) {
  const int ylen = days_per_year(cal);
  const double day = std::floor(t_seconds / 86400.0);
  CalendarDate d;
  d.year = int(std::floor(day / ylen));
  d.day_of_year = int(day - double(d.year) * ylen);

  if (cal == CalendarKind::day360) {
    d.month = d.day_of_year / 30 + 1;
  } else {
    static constexpr std::array<int, 12> kMonthLen = {31, 28, 31, 30, 31, 30,
                                                      31, 31, 30, 31, 30, 31};
    int doy = d.day_of_year;
    d.month = 1;
    for (int m = 0; m < 12 && doy >= kMonthLen[m]; ++m) {
      doy -= kMonthLen[m];
      ++d.month;
    }
  }
  return d;
}

const char* season_name(Season s) {
  switch (s) {
    case Season::ANN: return "ANN";
    case Season::DJF: return "DJF";
    case Season::MAM: return "MAM";
    case Season::JJA: return "JJA";
    case Season::SON: return "SON";
  }
  return "?";
}

Season season_from_name(const std::string& name) {
  if (name == "ANN") return Season::ANN;
  if (name == "DJF") return Season::DJF;
  if (name == "MAM") return Season::MAM;
  if (name == "JJA") return Season::JJA;
  if (name == "SON") return Season::SON;
  raise(errc::invalid_argument, "unknown season '" + name + "'");
}

namespace {

bool month_in_season(int month, Season s) {
  switch (s) {
    case Season::ANN: return true;
    case Season::DJF: return month == 12 || month == 1 || month == 2;
    case Season::MAM: return month >= 3 && month <= 5;
    case Season::JJA: return month >= 6 && month <= 8;
    case Season::SON: return month >= 9 && month <= 11;
  }
  return false;
}

}  // namespace

std::vector<Eigen::Index> season_sample_indices(const Dataset& ds, Season season) {
  const CalendarKind cal = calendar_from_attrs(ds);
  std::vector<Eigen::Index> out;
  if (season == Season::ANN) {
    out.resize(size_t(ds.ntime()));
    for (Eigen::Index i = 0; i < ds.ntime(); ++i) out[size_t(i)] = i;
    return out;
  }

  // Group candidate samples into season instances keyed by instance year
  // (December belongs to the next year's DJF).
  std::map<int, std::vector<Eigen::Index>> instances;
  std::map<int, std::set<int>> months_seen;
  for (Eigen::Index i = 0; i < ds.ntime(); ++i) {
    const CalendarDate d = decode_time(ds.time_s()[i], cal);
    if (!month_in_season(d.month, season)) continue;
    int instance_year = d.year;
    if (season == Season::DJF && d.month == 12) instance_year += 1;
    instances[instance_year].push_back(i);
    months_seen[instance_year].insert(d.month);
  }
  for (const auto& [year, idx] : instances) {
    if (months_seen[year].size() < 3) continue;  // incomplete edge season
    out.insert(out.end(), idx.begin(), idx.end());
  }
  return out;
}

std::vector<int> sample_years(const Dataset& ds) {
  const CalendarKind cal = calendar_from_attrs(ds);
  std::vector<int> out(size_t(ds.ntime()));
  for (Eigen::Index i = 0; i < ds.ntime(); ++i) {
    out[size_t(i)] = decode_time(ds.time_s()[i], cal).year;
  }
  return out;
}

}  // namespace esmg
