#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "topokin/errors.hpp"

namespace topokin {

// Sorted, pairwise-disjoint closed subintervals of a trajectory domain.
struct IntervalSet {
    struct Interval {
        double lo = 0.0;
        double hi = 0.0;
        double length() const { return hi - lo; }
    };

    std::vector<Interval> intervals;

    bool empty() const { return intervals.empty(); }
    std::size_t size() const { return intervals.size(); }

    void add(double lo, double hi) {
        if (!(lo < hi)) return; // degenerate pieces carry no measure
        intervals.push_back({lo, hi});
    }

    void normalize() {
        std::sort(intervals.begin(), intervals.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        std::vector<Interval> merged;
        for (const Interval& iv : intervals) {
            if (!merged.empty() && iv.lo <= merged.back().hi)
                merged.back().hi = std::max(merged.back().hi, iv.hi);
            else
                merged.push_back(iv);
        }
        intervals = std::move(merged);
    }

    static IntervalSet whole(double a, double b) {
        IntervalSet s;
        s.add(a, b);
        return s;
    }
};

// Total 1D Lebesgue measure: sum of interval lengths.
inline double lebesgue_measure_1d(const IntervalSet& s) {
    double total = 0.0;
    for (const auto& iv : s.intervals) total += iv.length();
    return total;
}

} // namespace topokin
