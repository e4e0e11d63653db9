#pragma once

// Socio-technical congruence: coordination requirements derived from file
// changes (CR = T_A · T_D · T_Aᵀ) compared against actual communication.

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "teamlens/core.hpp"
#include "teamlens/graph.hpp"
#include "teamlens/ingest.hpp"

namespace teamlens {

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = r + 1; c < cols_; ++c) {
        if ((*this)(r, c) != (*this)(c, r)) return false;
      }
    }
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <typename T, typename U>
auto multiply(const Matrix<T>& a, const Matrix<U>& b) {
  using R = std::common_type_t<T, U, std::int64_t>;
  if (a.cols() != b.rows()) {
    throw Error("matrix dimension mismatch: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " · " +
                std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  Matrix<R> out(a.rows(), b.cols(), R{0});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const R aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * static_cast<R>(b(k, j));
    }
  }
  return out;
}

template <typename T>
Matrix<T> transpose(const Matrix<T>& m) {
  Matrix<T> out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = m(r, c);
  }
  return out;
}

using BinaryMatrix = Matrix<std::uint8_t>;
using CountMatrix = Matrix<std::int64_t>;

enum class DependencyRule { SameFileOnly, CoCommit };

// Sorted, de-duplicated paths over all commit events.
inline std::vector<std::string> file_universe(std::span<const InteractionEvent> events) {
  std::set<std::string> paths;
  for (const auto& e : events) {
    if (e.kind != EventKind::Commit) continue;
    for (const auto& f : e.files) paths.insert(f.path);
  }
  return {paths.begin(), paths.end()};
}

namespace detail {

inline std::map<std::string_view, std::size_t> file_index(std::span<const std::string> files) {
  std::map<std::string_view, std::size_t> index;
  for (std::size_t k = 0; k < files.size(); ++k) index.emplace(files[k], k);
  return index;
}

}  // namespace detail

// T_A: member × file, 1 iff the member touched the file in some commit.
inline BinaryMatrix assignment_matrix(std::span<const InteractionEvent> events, const TeamRoster& roster,
                                      std::span<const std::string> files) {
  const auto index = detail::file_index(files);
  BinaryMatrix ta(roster.size(), files.size(), 0);
  for (const auto& e : events) {
    if (e.kind != EventKind::Commit) continue;
    const auto member = roster.index_of(e.actor);
    for (const auto& f : e.files) {
      auto it = index.find(f.path);
      if (it == index.end()) throw Error("file '" + f.path + "' missing from the file universe");
      ta(member, it->second) = 1;
    }
  }
  return ta;
}

// T_D: file × file with a unit diagonal. CoCommit links files that appear in
// the same commit.
inline BinaryMatrix dependency_matrix(std::span<const InteractionEvent> events, std::span<const std::string> files,
                                      DependencyRule rule) {
  const auto index = detail::file_index(files);
  BinaryMatrix td(files.size(), files.size(), 0);
  for (std::size_t k = 0; k < files.size(); ++k) td(k, k) = 1;
  if (rule == DependencyRule::SameFileOnly) return td;
  for (const auto& e : events) {
    if (e.kind != EventKind::Commit) continue;
    std::vector<std::size_t> in_commit;
    for (const auto& f : e.files) {
      auto it = index.find(f.path);
      if (it == index.end()) throw Error("file '" + f.path + "' missing from the file universe");
      in_commit.push_back(it->second);
    }
    for (auto k : in_commit) {
      for (auto l : in_commit) td(k, l) = 1;
    }
  }
  return td;
}

// CR = T_A · T_D · T_Aᵀ with the diagonal cleared.
inline CountMatrix coordination_requirements(const BinaryMatrix& ta, const BinaryMatrix& td) {
  if (td.rows() != td.cols()) throw Error("dependency matrix must be square");
  if (ta.cols() != td.rows()) {
    throw Error("assignment matrix has " + std::to_string(ta.cols()) + " files but dependency matrix has " +
                std::to_string(td.rows()));
  }
  CountMatrix cr = multiply(multiply(ta, td), transpose(ta));
  for (std::size_t i = 0; i < cr.rows(); ++i) cr(i, i) = 0;
  return cr;
}

// A: symmetric 0/1 matrix, 1 iff the symmetrized weight reaches min_weight.
inline BinaryMatrix actual_coordination(const SocialNetwork& net, const TeamRoster& roster, double min_weight) {
  if (!(min_weight > 0.0)) throw Error("coordination min_weight must be positive");
  if (net.roster().members() != roster.members()) {
    throw Error("communication network roster does not match team roster '" + roster.team_id() + "'");
  }
  const auto sym = symmetrize(net);
  BinaryMatrix a(roster.size(), roster.size(), 0);
  sym.for_each_edge([&](std::size_t i, std::size_t j, double w) {
    if (w >= min_weight) a(i, j) = a(j, i) = 1;
  });
  return a;
}

struct UnmetPair {
  MemberPair pair;
  std::int64_t requirement = 0;

  friend bool operator==(const UnmetPair&, const UnmetPair&) = default;
};

struct CongruenceResult {
  std::vector<MemberId> members;
  std::optional<Fraction> team_score;
  std::vector<std::optional<Fraction>> member_scores;
  std::vector<UnmetPair> unmet_pairs;
  std::size_t need_pairs = 0;

  std::optional<Fraction> score_of(const MemberId& id) const {
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (members[i] == id) return member_scores[i];
    }
    throw Error("no congruence score for member '" + id + "'");
  }
};

// Only the positivity pattern of CR matters for scores; its magnitudes are
// kept on unmet pairs for ranking.
inline CongruenceResult congruence(const CountMatrix& cr, const BinaryMatrix& actual, const TeamRoster& roster) {
  const std::size_t m = roster.size();
  if (cr.rows() != m || cr.cols() != m || actual.rows() != m || actual.cols() != m) {
    throw Error("congruence needs " + std::to_string(m) + "x" + std::to_string(m) + " matrices");
  }
  CongruenceResult result;
  result.members = roster.members();
  std::int64_t met = 0;
  std::int64_t needed = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (cr(i, j) <= 0 && cr(j, i) <= 0) continue;
      ++needed;
      if (actual(i, j) || actual(j, i)) {
        ++met;
      } else {
        result.unmet_pairs.push_back({MemberPair{i, j}, std::max(cr(i, j), cr(j, i))});
      }
    }
  }
  result.need_pairs = static_cast<std::size_t>(needed);
  if (needed > 0) result.team_score = Fraction(met, needed);

  for (std::size_t i = 0; i < m; ++i) {
    std::int64_t partners = 0;
    std::int64_t reached = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i || (cr(i, j) <= 0 && cr(j, i) <= 0)) continue;
      ++partners;
      if (actual(i, j) || actual(j, i)) ++reached;
    }
    result.member_scores.push_back(partners > 0 ? std::optional(Fraction(reached, partners)) : std::nullopt);
  }
  return result;
}

struct CongruenceMatrices {
  std::vector<MemberId> members;
  std::vector<std::string> files;
  BinaryMatrix assignment;
  BinaryMatrix dependency;
  CountMatrix requirements;
  BinaryMatrix actual;
};

inline CongruenceMatrices congruence_matrices(std::span<const InteractionEvent> commits, const SocialNetwork& comms,
                                              const TeamRoster& roster, DependencyRule rule, double min_weight) {
  CongruenceMatrices mats;
  mats.members = roster.members();
  mats.files = file_universe(commits);
  mats.assignment = assignment_matrix(commits, roster, mats.files);
  mats.dependency = dependency_matrix(commits, mats.files, rule);
  mats.requirements = coordination_requirements(mats.assignment, mats.dependency);
  mats.actual = actual_coordination(comms, roster, min_weight);
  return mats;
}

struct TrendPoint {
  std::int64_t sprint_index = 0;
  std::optional<double> score;
};

// Least-squares slope of score on sprint index over the defined points.
inline std::optional<double> congruence_trend(std::span<const TrendPoint> series) {
  std::vector<std::pair<double, double>> points;
  for (const auto& p : series) {
    if (p.score) points.emplace_back(static_cast<double>(p.sprint_index), *p.score);
  }
  if (points.size() < 2) return std::nullopt;
  // Shift by the first point so a constant series yields exact zeros.
  const auto [x0, y0] = points.front();
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (auto& [x, y] : points) {
    x -= x0;
    y -= y0;
    mean_x += x;
    mean_y += y;
  }
  mean_x /= static_cast<double>(points.size());
  mean_y /= static_cast<double>(points.size());
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

}  // namespace teamlens
