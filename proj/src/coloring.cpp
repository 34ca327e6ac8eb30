#include "vperc/coloring.hpp"

#include <algorithm>
#include <string>

namespace vperc {

Coloring color(const VoronoiComplex& complex, double p, const SeedPath& stream) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("color: p must lie in [0,1]");
    Coloring c;
    c.p = p;
    c.stream = stream;
    c.signs.resize(complex.cell_count());
    Rng rng(stream);
    for (auto& s : c.signs) s = rng.uniform() < p ? std::int8_t{1} : std::int8_t{-1};
    return c;
}

Coloring flip(const Coloring& coloring, std::uint32_t cell) {
    if (cell >= coloring.signs.size()) throw ParameterError("flip: unknown cell id");
    Coloring out = coloring;
    out.signs[cell] = static_cast<std::int8_t>(-out.signs[cell]);
    return out;
}

ColoringEnumeration::ColoringEnumeration(Coloring base, std::vector<std::uint32_t> free_cells)
    : base_(std::move(base)), free_cells_(std::move(free_cells)) {}

Coloring ColoringEnumeration::current() const {
    Coloring out = base_;
    for (std::size_t i = 0; i < free_cells_.size(); ++i) {
        out.signs[free_cells_[i]] =
            (cursor_ >> i) & 1u ? std::int8_t{1} : std::int8_t{-1};
    }
    return out;
}

ColoringEnumeration enumerate_recolorings(const Coloring& coloring,
                                          std::vector<std::uint32_t> cells, int cap) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    for (const std::uint32_t c : cells)
        if (c >= coloring.signs.size())
            throw ParameterError("enumerate_recolorings: unknown cell id");
    if (static_cast<int>(cells.size()) > cap)
        throw CapacityError("enumerate_recolorings: " + std::to_string(cells.size()) +
                                " cells exceed the enumeration cap of " + std::to_string(cap),
                            static_cast<int>(cells.size()));
    return ColoringEnumeration(coloring, std::move(cells));
}

}  // namespace vperc
