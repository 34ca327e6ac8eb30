#include "vperc/point_set.hpp"

#include <bit>
#include <cstdint>
#include <vector>

namespace vperc {

namespace {

// Open-addressing fingerprint table for coordinate-duplicate detection. A
// fingerprint collision just redraws the point, which keeps determinism and
// distinctness either way.
class DedupTable {
public:
    void reset(std::size_t expected) {
        std::size_t cap = 16;
        while (cap < 2 * expected + 16) cap <<= 1;
        mask_ = cap - 1;
        slots_.assign(cap, 0);
    }

    bool insert(Vec2 p) {
        std::uint64_t fp =
            detail::mix64(std::bit_cast<std::uint64_t>(p.x) ^
                          detail::mix64(std::bit_cast<std::uint64_t>(p.y)));
        if (fp == 0) fp = 1;
        std::size_t at = fp & mask_;
        while (slots_[at] != 0) {
            if (slots_[at] == fp) return false;
            at = (at + 1) & mask_;
        }
        slots_[at] = fp;
        return true;
    }

private:
    std::vector<std::uint64_t> slots_;
    std::size_t mask_ = 0;
};

}  // namespace

PointSet sample_poisson(const Window& window, double intensity, const SeedPath& stream) {
    if (!window.valid()) throw ParameterError("sample_poisson: degenerate window");
    if (!(intensity > 0)) throw ParameterError("sample_poisson: intensity must be positive");

    Rng rng(stream);
    const std::uint64_t n = rng.poisson(intensity * window.area());

    PointSet ps;
    ps.window = window;
    ps.intensity = intensity;
    ps.stream = stream;
    ps.points.reserve(n);

    static thread_local DedupTable seen;
    seen.reset(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        while (true) {
            Vec2 p{rng.uniform(window.xmin, window.xmax), rng.uniform(window.ymin, window.ymax)};
            if (seen.insert(p)) {
                ps.points.push_back(p);
                break;
            }
        }
    }
    return ps;
}

}  // namespace vperc
