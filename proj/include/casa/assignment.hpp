#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "casa/signal.hpp"

namespace casa {

// Dense matrix of pairwise SDRs in dB. Row = reference, column = estimate.
class SdrMatrix {
 public:
  SdrMatrix() = default;
  SdrMatrix(std::size_t references, std::size_t estimates, double fill = 0.0);

  std::size_t references() const { return rows_; }
  std::size_t estimates() const { return cols_; }

  double& at(std::size_t reference, std::size_t estimate) { return data_[reference * cols_ + estimate]; }
  double at(std::size_t reference, std::size_t estimate) const { return data_[reference * cols_ + estimate]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct MatchedPair {
  std::size_t estimate;
  std::size_t reference;
  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

struct Assignment {
  std::vector<MatchedPair> pairs;  // sorted by reference index
  SdrMatrix sdr_matrix;
  double total_sdr = 0.0;

  // Estimate matched to `reference`, if any.
  std::optional<std::size_t> estimate_for(std::size_t reference) const;
  std::optional<std::size_t> reference_for(std::size_t estimate) const;
};

// Largest side count for which the exact search enumerates every injection.
inline constexpr std::size_t kExhaustiveAssignmentLimit = 8;

// Maximum-total matching on a precomputed matrix. The smaller side is fully
// matched. Among exactly tied optima the lexicographically smallest pairing
// (identity first) is returned by the exhaustive path.
Assignment best_assignment(SdrMatrix matrix);

// Computes the SDR matrix with `sdr_cap_db` and solves it.
Assignment best_assignment(const std::vector<AudioSignal>& estimates,
                           const std::vector<AudioSignal>& references,
                           double sdr_cap_db);

namespace detail {

// Both solvers return, for every reference row, the matched estimate column
// or -1. Exposed for cross-checking.
std::vector<long> solve_exhaustive(const SdrMatrix& matrix);
std::vector<long> solve_hungarian(const SdrMatrix& matrix);

}  // namespace detail

}  // namespace casa
