#include "esmg/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "esmg/grid.hpp"

namespace esmg {

namespace {

struct Cell {
  int j, k;
};

/// 4-neighborhood with periodic longitude; latitude stops at the poles.
template <class Fn>
void for_each_neighbor4(int j, int k, int nlat, int nlon, Fn&& fn) {
  if (j > 0) fn(j - 1, k);
  if (j < nlat - 1) fn(j + 1, k);
  fn(j, (k + 1) % nlon);
  fn(j, (k + nlon - 1) % nlon);
}

/// Max-bottleneck escape height from a center cell: the smallest value B
/// such that a path from the center to any cell beyond max_radius_m exists
/// with msl <= B everywhere along it. The achieved closed-contour depth is
/// then B - msl(center). Dijkstra on the bottleneck metric.
double escape_bottleneck(const Eigen::Ref<const Eigen::ArrayXd>& msl, const GridSpec& grid,
                         int jc, int kc, double max_radius_m) {
  const int nlat = grid.nlat(), nlon = grid.nlon();
  const double clat = grid.lat_deg()[jc];
  const double clon = grid.lon_deg()[kc];

  using Node = std::pair<double, int>;  // (bottleneck, flat index)
  std::priority_queue<Node, std::vector<Node>, std::greater<>> pq;
  std::vector<char> done(size_t(nlat) * size_t(nlon), 0);

  const int start = jc * nlon + kc;
  pq.push({msl[start], start});
  while (!pq.empty()) {
    const auto [bottleneck, idx] = pq.top();
    pq.pop();
    if (done[size_t(idx)]) continue;
    done[size_t(idx)] = 1;
    const int j = idx / nlon, k = idx % nlon;

    const double d =
        great_circle_distance(clat, clon, grid.lat_deg()[j], grid.lon_deg()[k], grid.radius_m());
    if (d > max_radius_m) return bottleneck;  // escaped

    for_each_neighbor4(j, k, nlat, nlon, [&](int nj, int nk) {
      const int nidx = nj * nlon + nk;
      if (done[size_t(nidx)]) return;
      pq.push({std::max(bottleneck, msl[nidx]), nidx});
    });
  }
  // Whole sphere within radius: no escape is possible.
  return std::numeric_limits<double>::infinity();
}

/// Region of cells with msl < threshold reachable from the center, clipped
/// at max_radius_m. Used to suppress duplicate minima in one depression.
std::vector<int> fill_region(const Eigen::Ref<const Eigen::ArrayXd>& msl, const GridSpec& grid,
                             int jc, int kc, double threshold, double max_radius_m) {
  const int nlat = grid.nlat(), nlon = grid.nlon();
  const double clat = grid.lat_deg()[jc];
  const double clon = grid.lon_deg()[kc];

  std::vector<int> region;
  std::vector<char> seen(size_t(nlat) * size_t(nlon), 0);
  std::queue<int> frontier;
  const int start = jc * nlon + kc;
  frontier.push(start);
  seen[size_t(start)] = 1;
  while (!frontier.empty()) {
    const int idx = frontier.front();
    frontier.pop();
    const int j = idx / nlon, k = idx % nlon;
    if (msl[idx] >= threshold) continue;
    const double d =
        great_circle_distance(clat, clon, grid.lat_deg()[j], grid.lon_deg()[k], grid.radius_m());
    if (d > max_radius_m) continue;
    region.push_back(idx);
    for_each_neighbor4(j, k, nlat, nlon, [&](int nj, int nk) {
      const int nidx = nj * nlon + nk;
      if (!seen[size_t(nidx)]) {
        seen[size_t(nidx)] = 1;
        frontier.push(nidx);
      }
    });
  }
  return region;
}

}  // namespace

std::vector<FeatureCandidate> detect_pressure_minima(const Dataset& ds,
                                                     const std::string& msl_var, double delta_p,
                                                     double max_radius_m) {
  const Field& msl = ds[msl_var];
  const GridSpec& grid = ds.grid();
  require(delta_p > 0.0, errc::config_error, "delta_p must be positive");
  const double cell_scale = grid.radius_m() * deg2rad(grid.lat_deg()[1] - grid.lat_deg()[0]);
  require(max_radius_m > cell_scale, errc::config_error,
          "max radius must exceed the grid spacing");

  const int nlat = grid.nlat(), nlon = grid.nlon();
  const Eigen::Index nt = msl.size(Axis::time);
  std::vector<FeatureCandidate> out;

  for (Eigen::Index t = 0; t < nt; ++t) {
    const auto slice = msl.latlon_slice(t);

    // Strict local minima over the 8 existing neighbors.
    std::vector<Cell> minima;
    for (int j = 0; j < nlat; ++j) {
      for (int k = 0; k < nlon; ++k) {
        const double v = slice[Eigen::Index(j) * nlon + k];
        bool is_min = true;
        for (int dj = -1; dj <= 1 && is_min; ++dj) {
          const int nj = j + dj;
          if (nj < 0 || nj >= nlat) continue;
          for (int dk = -1; dk <= 1; ++dk) {
            if (dj == 0 && dk == 0) continue;
            const int nk = (k + dk + nlon) % nlon;
            if (slice[Eigen::Index(nj) * nlon + nk] <= v) {
              is_min = false;
              break;
            }
          }
        }
        if (is_min) minima.push_back({j, k});
      }
    }

    // Deepest-first so duplicate suppression keeps the right one.
    std::sort(minima.begin(), minima.end(), [&](const Cell& a, const Cell& b) {
      return slice[Eigen::Index(a.j) * nlon + a.k] < slice[Eigen::Index(b.j) * nlon + b.k];
    });

    std::vector<char> claimed(size_t(nlat) * size_t(nlon), 0);
    for (const Cell& c : minima) {
      const int idx = c.j * nlon + c.k;
      if (claimed[size_t(idx)]) continue;  // inside a deeper minimum's region

      FeatureCandidate cand;
      cand.time = t;
      cand.lat_deg = grid.lat_deg()[c.j];
      cand.lon_deg = grid.lon_deg()[c.k];
      cand.center_value = slice[idx];

      const double bottleneck = escape_bottleneck(slice, grid, c.j, c.k, max_radius_m);
      cand.contour_depth = bottleneck - cand.center_value;
      cand.closed = cand.contour_depth >= delta_p;

      if (cand.closed) {
        for (const int r :
             fill_region(slice, grid, c.j, c.k, cand.center_value + delta_p, max_radius_m)) {
          claimed[size_t(r)] = 1;
        }
        out.push_back(cand);
      }
    }
  }
  return out;
}

std::vector<double> radial_composite(const Dataset& ds, const std::string& variable,
                                     const std::vector<FeatureCandidate>& centers, int n_bins,
                                     double max_radius_m) {
  require(n_bins > 0, errc::config_error, "need at least one radial bin");
  require(!centers.empty(), errc::invalid_argument, "need at least one center");
  const Field& f = ds[variable];
  const GridSpec& grid = ds.grid();

  std::vector<double> sum(size_t(n_bins), 0.0);
  std::vector<long long> count(size_t(n_bins), 0);
  const double bin_width = max_radius_m / n_bins;

  for (const auto& c : centers) {
    const auto slice = f.latlon_slice(c.time);
    for (int j = 0; j < grid.nlat(); ++j) {
      for (int k = 0; k < grid.nlon(); ++k) {
        const double v = slice[Eigen::Index(j) * grid.nlon() + k];
        if (std::isnan(v)) continue;
        const double d = great_circle_distance(c.lat_deg, c.lon_deg, grid.lat_deg()[j],
                                               grid.lon_deg()[k], grid.radius_m());
        if (d >= max_radius_m) continue;
        const int bin = std::min(n_bins - 1, int(d / bin_width));
        sum[size_t(bin)] += v;
        count[size_t(bin)] += 1;
      }
    }
  }

  std::vector<double> out(size_t(n_bins), std::numeric_limits<double>::quiet_NaN());
  for (int b = 0; b < n_bins; ++b) {
    if (count[size_t(b)] > 0) out[size_t(b)] = sum[size_t(b)] / double(count[size_t(b)]);
  }
  return out;
}

}  // namespace esmg
