#include "casa/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "casa/error.hpp"
#include "casa/metrics.hpp"

namespace casa {

SdrMatrix::SdrMatrix(std::size_t references, std::size_t estimates, double fill)
    : rows_(references), cols_(estimates), data_(references * estimates, fill) {}

std::optional<std::size_t> Assignment::estimate_for(std::size_t reference) const {
  for (const auto& p : pairs)
    if (p.reference == reference) return p.estimate;
  return std::nullopt;
}

std::optional<std::size_t> Assignment::reference_for(std::size_t estimate) const {
  for (const auto& p : pairs)
    if (p.estimate == estimate) return p.reference;
  return std::nullopt;
}

namespace detail {

namespace {

// Depth-first enumeration of injections from the `outer` side into the
// `inner` side in lexicographic order. Only a strictly better total replaces
// the incumbent, so the first optimum found (lexicographically smallest) wins.
struct InjectionSearch {
  InjectionSearch(std::size_t outer_count, std::size_t inner_count,
                  std::function<double(std::size_t, std::size_t)> fn)
      : outer(outer_count), inner(inner_count), score(std::move(fn)) {}

  std::size_t outer;
  std::size_t inner;
  // score(outer_index, inner_index)
  std::function<double(std::size_t, std::size_t)> score;

  std::vector<std::size_t> current;
  std::vector<bool> used;
  std::vector<std::size_t> best;
  double best_total = -std::numeric_limits<double>::infinity();

  void run() {
    current.assign(outer, 0);
    used.assign(inner, false);
    recurse(0, 0.0);
  }

  void recurse(std::size_t depth, double partial) {
    if (depth == outer) {
      if (best.empty() || partial > best_total) {
        best_total = partial;
        best = current;
      }
      return;
    }
    for (std::size_t j = 0; j < inner; ++j) {
      if (used[j]) continue;
      used[j] = true;
      current[depth] = j;
      recurse(depth + 1, partial + score(depth, j));
      used[j] = false;
    }
  }
};

}  // namespace

std::vector<long> solve_exhaustive(const SdrMatrix& m) {
  const std::size_t rows = m.references(), cols = m.estimates();
  std::vector<long> row_to_col(rows, -1);
  if (rows == 0 || cols == 0) return row_to_col;

  if (rows <= cols) {
    InjectionSearch search(rows, cols, [&](std::size_t r, std::size_t c) { return m.at(r, c); });
    search.run();
    for (std::size_t r = 0; r < rows; ++r) row_to_col[r] = static_cast<long>(search.best[r]);
  } else {
    InjectionSearch search(cols, rows, [&](std::size_t c, std::size_t r) { return m.at(r, c); });
    search.run();
    for (std::size_t c = 0; c < cols; ++c) row_to_col[search.best[c]] = static_cast<long>(c);
  }
  return row_to_col;
}

// Shortest augmenting path with row/column potentials, O(n^2 m) for n <= m.
// Minimizes the negated SDR.
std::vector<long> solve_hungarian(const SdrMatrix& m) {
  const std::size_t rows = m.references(), cols = m.estimates();
  std::vector<long> row_to_col(rows, -1);
  if (rows == 0 || cols == 0) return row_to_col;

  const bool transposed = rows > cols;
  const std::size_t n = transposed ? cols : rows;
  const std::size_t k = transposed ? rows : cols;
  auto cost = [&](std::size_t i, std::size_t j) {
    return transposed ? -m.at(j - 1, i - 1) : -m.at(i - 1, j - 1);
  };

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(k + 1, 0.0);
  std::vector<std::size_t> owner(k + 1, 0), way(k + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(k + 1, inf);
    std::vector<bool> visited(k + 1, false);
    do {
      visited[j0] = true;
      const std::size_t i0 = owner[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (visited[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= k; ++j) {
        if (visited[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (std::size_t j = 1; j <= k; ++j) {
    if (owner[j] == 0) continue;
    if (transposed)
      row_to_col[j - 1] = static_cast<long>(owner[j] - 1);
    else
      row_to_col[owner[j] - 1] = static_cast<long>(j - 1);
  }
  return row_to_col;
}

}  // namespace detail

Assignment best_assignment(SdrMatrix matrix) {
  const std::size_t rows = matrix.references(), cols = matrix.estimates();
  if (rows == 0 || cols == 0) throw DimensionError("assignment needs at least one estimate and one reference");
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (!std::isfinite(matrix.at(r, c))) throw DomainError("SDR matrix contains a non-finite entry");

  const auto row_to_col = std::max(rows, cols) <= kExhaustiveAssignmentLimit
                              ? detail::solve_exhaustive(matrix)
                              : detail::solve_hungarian(matrix);

  Assignment out;
  for (std::size_t r = 0; r < rows; ++r) {
    if (row_to_col[r] < 0) continue;
    const auto c = static_cast<std::size_t>(row_to_col[r]);
    out.pairs.push_back({c, r});
    out.total_sdr += matrix.at(r, c);
  }
  out.sdr_matrix = std::move(matrix);
  return out;
}

Assignment best_assignment(const std::vector<AudioSignal>& estimates,
                           const std::vector<AudioSignal>& references, double sdr_cap_db) {
  if (estimates.empty() || references.empty())
    throw DimensionError("assignment needs at least one estimate and one reference");
  SdrMatrix m(references.size(), estimates.size());
  for (std::size_t r = 0; r < references.size(); ++r)
    for (std::size_t c = 0; c < estimates.size(); ++c) m.at(r, c) = sdr(estimates[c], references[r], sdr_cap_db);
  return best_assignment(std::move(m));
}

}  // namespace casa
