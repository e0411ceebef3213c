#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace abel {

enum class Provenance { numeric, closed_form, parametric, construction };

inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::numeric: return "numeric";
        case Provenance::closed_form: return "closed-form";
        case Provenance::parametric: return "parametric";
        case Provenance::construction: return "construction";
    }
    return "?";
}

struct TracePoint {
    double x = 0.0;
    double y = 0.0;
    double residual = 0.0;
};

// Sampled (x, y, residual) series. x is strictly monotone within a segment;
// gap markers record grid points excluded by domain guards.
struct SolutionTrace {
    Provenance provenance = Provenance::numeric;
    std::vector<std::vector<TracePoint>> segments;
    std::vector<double> gaps;
    bool hit_singularity = false;
    double singularity_x = std::numeric_limits<double>::quiet_NaN();
    int branch_switches = 0;

    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& s : segments) n += s.size();
        return n;
    }
    bool finite() const {
        for (const auto& seg : segments)
            for (const auto& p : seg)
                if (!std::isfinite(p.y) || !std::isfinite(p.residual)) return false;
        return true;
    }
};

}  // namespace abel
