#pragma once

#include <vector>

#include "vperc/geometry.hpp"
#include "vperc/rng.hpp"

namespace vperc {

/// One Poisson environment: nuclei plus the window they were sampled in.
struct PointSet {
    std::vector<Vec2> points;
    Window window;
    double intensity = 1.0;
    SeedPath stream;
};

/// Poisson(intensity * area) points, i.i.d. uniform in the window, fully
/// determined by (window, intensity, stream). Exact coordinate duplicates are
/// redrawn from the same stream.
PointSet sample_poisson(const Window& window, double intensity, const SeedPath& stream);

}  // namespace vperc
