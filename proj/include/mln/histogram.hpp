#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mln {

inline constexpr std::size_t kDefaultBins = 20;

/// Linear-binned histogram: bin i covers [edges[i], edges[i+1]), except the
/// last bin which also holds the maximum.
struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;

    std::size_t total() const;
    bool operator==(const Histogram&) const = default;
};

/// bin_count equal-width bins over [min, max]. A constant input yields one bin
/// of width 1 centred on the value; an empty input yields an empty histogram.
Histogram histogram(std::span<const double> values, std::size_t bin_count = kDefaultBins);

/// Bins over caller-provided range [lo, hi] so that several series share a
/// grid. Values outside the range are clamped into the end bins.
Histogram histogram_on_range(std::span<const double> values, double lo, double hi,
                             std::size_t bin_count = kDefaultBins);

}  // namespace mln
