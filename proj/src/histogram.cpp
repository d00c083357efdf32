#include "mln/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mln {

std::size_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

Histogram histogram_on_range(std::span<const double> values, double lo, double hi, std::size_t bin_count) {
    Histogram h;
    if (bin_count == 0) bin_count = 1;
    if (!(hi > lo)) {
        h.edges = {lo - 0.5, lo + 0.5};
        h.counts = {values.size()};
        return h;
    }
    const double width = (hi - lo) / static_cast<double>(bin_count);
    h.edges.resize(bin_count + 1);
    for (std::size_t i = 0; i <= bin_count; ++i) h.edges[i] = lo + width * static_cast<double>(i);
    h.edges.back() = hi;
    h.counts.assign(bin_count, 0);
    for (double v : values) {
        const double t = (v - lo) / (hi - lo) * static_cast<double>(bin_count);
        auto bin = t <= 0.0 ? std::size_t{0} : static_cast<std::size_t>(std::floor(t));
        ++h.counts[std::min(bin, bin_count - 1)];
    }
    return h;
}

Histogram histogram(std::span<const double> values, std::size_t bin_count) {
    if (values.empty()) return {};
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return histogram_on_range(values, *lo, *hi, bin_count);
}

}  // namespace mln
