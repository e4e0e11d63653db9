#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "teamlens/core.hpp"

namespace teamlens {

struct PairedSeries {
  std::vector<std::pair<std::string, std::string>> labels;  // (team_id, sprint_label)
  std::vector<double> x;
  std::vector<double> y;
  std::size_t dropped = 0;

  // Appends a pair unless either side is undefined.
  void add(std::string team, std::string sprint, std::optional<double> xv, std::optional<double> yv) {
    if (!xv || !yv) {
      ++dropped;
      return;
    }
    labels.emplace_back(std::move(team), std::move(sprint));
    x.push_back(*xv);
    y.push_back(*yv);
  }
};

// 1-based ranks; ties share the mean of the ranks they span.
inline std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

namespace detail {

inline void check_series(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("paired series lengths differ");
  if (x.size() < 2) throw Error("correlation needs at least 2 pairs");
}

inline double product_moment(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
}

}  // namespace detail

inline double pearson(std::span<const double> x, std::span<const double> y) {
  detail::check_series(x, y);
  if (detail::constant(x) || detail::constant(y)) throw Error("zero variance");
  return detail::product_moment(x, y);
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  detail::check_series(x, y);
  if (detail::constant(x) || detail::constant(y)) throw Error("zero variance");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return detail::product_moment(rx, ry);
}

inline double pearson(const PairedSeries& s) { return pearson(s.x, s.y); }
inline double spearman(const PairedSeries& s) { return spearman(s.x, s.y); }

}  // namespace teamlens
