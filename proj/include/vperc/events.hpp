#pragma once

#include <memory>
#include <span>
#include <vector>

#include "vperc/coloring.hpp"
#include "vperc/region_graph.hpp"

namespace vperc {

enum class EventKind : std::uint8_t {
    Cross,     // black left-right crossing of a rectangle
    Arms,      // j-arm event in an annulus variant
    Circuit,   // signed circuit indicator in the delta-annulus of a square
    Dense,     // every point of D within delta*diam(D) of a nucleus in D
    PivotalOf, // quenched pivotality of a square for an inner event
    CellBlack, // the cell containing a fixed site is black (probe event)
};

struct EventSpec {
    EventKind kind = EventKind::Cross;
    RegionSpec region;
    int j = 1;                         // arms
    double delta = 0;                  // circuit / dense
    std::shared_ptr<EventSpec> inner;  // pivotal-of
    RegionSpec square;                 // pivotal-of
    Vec2 site{0, 0};                   // cell-black

    static EventSpec cross(const RegionSpec& rect);
    static EventSpec arms(const RegionSpec& annulus, int j);
    static EventSpec circuit(const RegionSpec& square, double delta);
    static EventSpec dense(const RegionSpec& d, double delta);
    static EventSpec pivotal_of(const EventSpec& inner, const RegionSpec& square);
    static EventSpec cell_black(Vec2 site);

    /// Region whose padding determines the sampling window.
    RegionSpec support() const;
    /// Monotone nondecreasing in every cell sign.
    bool is_monotone() const;
};

/// Black/white clusters of the region-clipped cells, their boundary touch
/// flags, and the inner-boundary attachment word over crossing clusters.
struct ClusterDecomposition {
    std::vector<std::uint32_t> cluster_of;  // per local cell
    std::vector<std::int8_t> cluster_color;
    std::vector<std::uint8_t> cluster_touch;
    std::vector<std::uint32_t> word;  // crossing clusters in inner-walk order
    std::uint32_t n_clusters = 0;
    bool cyclic = false;

    int word_sign_changes() const;
};

/// Reusable union-find workspace; run() leaves the result in `d`.
class Decomposer {
public:
    const ClusterDecomposition& run(const RegionGraph& rg, std::span<const std::int8_t> signs);
    ClusterDecomposition d;

private:
    std::uint32_t find(std::uint32_t x);
    std::vector<std::uint32_t> parent_;
};

ClusterDecomposition decompose(const VoronoiComplex& complex, const Coloring& coloring,
                               const RegionSpec& region);

namespace detail {

struct ArmStats {
    int sign_changes = 0;           // over the attachment word (one arc per cell)
    int distinct_sign_changes = 0;  // over first attachments of distinct clusters
    int black_crossing_clusters = 0;
    bool any_black_crossing = false;
    bool cyclic = true;
    bool degenerate_empty = false;
};

ArmStats arm_stats(const RegionGraph& rg, const ClusterDecomposition& d,
                   std::span<const std::int8_t> signs);

/// Alternation threshold on the attachment word for a j-arm family.
int arm_threshold(bool cyclic, int j);

/// Word-level decision: 1 = event holds, 0 = it does not, -1 = the word cannot
/// decide (same-cluster re-attachments interleave; needs the exact path
/// search). `threshold_bias` shifts the threshold so tests can check that an
/// off-by-one breaks oracle equivalence.
int arm_quick_decision(const ArmStats& st, int j, bool black_cluster_has_two_disjoint_crossings,
                       int threshold_bias = 0);

/// Menger check inside one cluster: two vertex-disjoint inner-outer crossings.
bool two_disjoint_crossings(const RegionGraph& rg, const ClusterDecomposition& d,
                            std::uint32_t cluster);

/// Exact j-arm decision by designated-start disjoint-path search over the
/// boundary attachments; used when the word is inconclusive.
bool exact_arm_search(const RegionGraph& rg, const ClusterDecomposition& d,
                      std::span<const std::int8_t> signs, int j);

}  // namespace detail

// Fast paths over a prebuilt RegionGraph (shared across colorings).
bool detect_cross(const RegionGraph& rg, std::span<const std::int8_t> signs, Decomposer& dec);
bool detect_arms(const RegionGraph& rg, std::span<const std::int8_t> signs, int j,
                 Decomposer& dec);
int detect_circuit(const RegionGraph& delta_annulus, std::span<const std::int8_t> signs,
                   Decomposer& dec);
int count_interfaces(const RegionGraph& rg, std::span<const std::int8_t> signs, Decomposer& dec);

/// The annulus (1-delta)Q \ (1-2*delta)Q a circuit event lives in.
RegionSpec circuit_annulus(const RegionSpec& square, double delta);

// Contract-level operations.
bool detect_cross(const VoronoiComplex& complex, const Coloring& coloring,
                  const RegionSpec& rect);
bool detect_arms(const VoronoiComplex& complex, const Coloring& coloring,
                 const RegionSpec& region, int j);
int detect_circuit(const VoronoiComplex& complex, const Coloring& coloring,
                   const RegionSpec& square, double delta);
int count_interfaces(const VoronoiComplex& complex, const Coloring& coloring,
                     const RegionSpec& region);
bool detect_dense(const PointSet& points, const RegionSpec& d, double delta);

/// Cells whose nuclei lie in the half-open box [xmin,xmax) x [ymin,ymax).
std::vector<std::uint32_t> cells_with_nuclei_in(const VoronoiComplex& complex, const Box& box);

/// True iff the inner event is non-constant over all recolorings of `cells`.
bool is_quenched_pivotal(const VoronoiComplex& complex, const Coloring& coloring,
                         const std::vector<std::uint32_t>& cells, const EventSpec& inner,
                         int cap = kDefaultRecoloringCap);

/// Event value for one sample: indicator for boolean events, {-1,0,+1} for circuit.
/// `opts` controls replicate-discard behavior on safe-zone boundary breaches.
double evaluate_event(const VoronoiComplex& complex, const Coloring& coloring,
                      const PointSet& points, const EventSpec& spec,
                      const RegionGraphOptions& opts = {});

}  // namespace vperc
