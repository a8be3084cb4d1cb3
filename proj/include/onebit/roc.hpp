#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "onebit/model.hpp"

namespace onebit {

struct RocPoint {
    double eta = 0.0;
    double pfa = 0.0;
    double pd = 0.0;
};

enum class RocSource { Empirical, TheoryPaperLiteral, TheoryConsistent, ExactH0Hybrid };

inline std::string_view to_string(RocSource s) {
    switch (s) {
        case RocSource::Empirical: return "empirical";
        case RocSource::TheoryPaperLiteral: return "theory-paper";
        case RocSource::TheoryConsistent: return "theory-consistent";
        case RocSource::ExactH0Hybrid: return "exact-h0-hybrid";
    }
    return "unknown";
}

struct RocCurve {
    std::vector<RocPoint> points;  ///< ordered by increasing eta
    RocSource source = RocSource::Empirical;
    DetectorDirection direction = DetectorDirection::GreaterIsH1;
    std::size_t trials_used = 0;   ///< 0 for analytic curves
};

/// Detection rate at exactly `pfa`, read off the piecewise-linear ROC through
/// the curve's points. Between two thresholds this is the operating point of
/// the detector that randomizes between them. Points must span `pfa`.
inline double pd_at_pfa(const RocCurve& curve, double pfa) {
    std::vector<RocPoint> pts = curve.points;
    std::sort(pts.begin(), pts.end(), [](const RocPoint& a, const RocPoint& b) {
        return a.pfa < b.pfa || (a.pfa == b.pfa && a.pd < b.pd);
    });
    if (pts.empty() || pfa < pts.front().pfa || pfa > pts.back().pfa)
        throw std::out_of_range("pd_at_pfa: target outside the curve's false-alarm range");
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const auto& lo = pts[i - 1];
        const auto& hi = pts[i];
        if (pfa <= hi.pfa) {
            if (hi.pfa == lo.pfa) return hi.pd;
            const double w = (pfa - lo.pfa) / (hi.pfa - lo.pfa);
            return lo.pd + w * (hi.pd - lo.pd);
        }
    }
    return pts.back().pd;
}

/// Direction used when tracing a curve. Unlike direction_for, r = 0 is allowed
/// here (and traced as GreaterIsH1) so the uninformative case can be plotted.
inline DetectorDirection roc_direction(const ModelParams& p) noexcept {
    return p.r < 0.0 ? DetectorDirection::LessIsH1 : DetectorDirection::GreaterIsH1;
}

}  // namespace onebit
