#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kacpoly {

/// Sample points for the sign sweep on a subinterval of [0, 1].
///
/// Spacing follows the expected local zero density of a Gaussian polynomial
/// with coefficient variances `weights_sq`, for both f and f', so each cell
/// is expected to hold about kappa/pi zeros of either.
struct SweepGrid {
  std::vector<double> nodes;  // ascending, nodes.front() = lo, nodes.back() = hi
};

SweepGrid make_sweep_grid(std::span<const double> weights_sq, double lo, double hi,
                          double kappa = 0.1);

struct SweepResult {
  std::size_t count = 0;
  std::vector<double> roots;  // filled only when locating
  std::size_t evaluations = 0;
};

/// Counts zeros of f in the open interval (nodes.front(), nodes.back()).
///
/// A cell where f' keeps its sign holds a zero iff f changes sign; a cell
/// where f' changes sign is split at the critical point and each monotone
/// piece is tested. Pairs of zeros missed by this rule need two sign
/// changes of f' inside one cell.
SweepResult sweep_count(std::span<const double> coeffs, const SweepGrid& grid,
                        bool locate = false);

/// Zeros per cell (nodes[i], nodes[i+1]) under the same rule; a zero exactly
/// on an interior node is assigned to one of its two cells.
std::vector<std::uint32_t> sweep_cell_counts(std::span<const double> coeffs,
                                             const SweepGrid& grid);

}  // namespace kacpoly
