#include "vperc/events.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

namespace vperc {

EventSpec EventSpec::cross(const RegionSpec& rect) {
    if (rect.kind != RegionKind::Rect) throw ParameterError("cross event needs a rectangle");
    EventSpec s;
    s.kind = EventKind::Cross;
    s.region = rect;
    return s;
}

EventSpec EventSpec::arms(const RegionSpec& annulus, int j) {
    if (!annulus.is_annulus_kind()) throw ParameterError("arms event needs an annulus region");
    if (j < 1) throw ParameterError("arms event needs j >= 1");
    EventSpec s;
    s.kind = EventKind::Arms;
    s.region = annulus;
    s.j = j;
    return s;
}

EventSpec EventSpec::circuit(const RegionSpec& square, double delta) {
    if (square.kind != RegionKind::Rect || square.lambda1 != square.lambda2)
        throw ParameterError("circuit event needs a square");
    if (!(delta > 0 && delta < 0.5)) throw ParameterError("circuit delta must lie in (0, 1/2)");
    EventSpec s;
    s.kind = EventKind::Circuit;
    s.region = square;
    s.delta = delta;
    return s;
}

EventSpec EventSpec::dense(const RegionSpec& d, double delta) {
    if (!(delta > 0 && delta < 1)) throw ParameterError("dense delta must lie in (0, 1)");
    EventSpec s;
    s.kind = EventKind::Dense;
    s.region = d;
    s.delta = delta;
    return s;
}

EventSpec EventSpec::pivotal_of(const EventSpec& inner, const RegionSpec& square) {
    if (inner.kind == EventKind::PivotalOf)
        throw ParameterError("pivotal-of nests exactly one level");
    if (square.kind != RegionKind::Rect) throw ParameterError("pivotal-of needs a rectangle");
    EventSpec s;
    s.kind = EventKind::PivotalOf;
    s.inner = std::make_shared<EventSpec>(inner);
    s.square = square;
    s.region = inner.region;
    return s;
}

EventSpec EventSpec::cell_black(Vec2 site) {
    EventSpec s;
    s.kind = EventKind::CellBlack;
    s.site = site;
    s.region = RegionSpec::rectangle(site, 1.0, 1.0);
    return s;
}

RegionSpec EventSpec::support() const {
    switch (kind) {
        case EventKind::Circuit: {
            // the delta-annulus lives inside the square already
            return region;
        }
        case EventKind::PivotalOf: {
            RegionSpec inner_support = inner->support();
            Box b = inner_support.bbox();
            const Box sq = square.outer_box();
            b.xmin = std::min(b.xmin, sq.xmin);
            b.ymin = std::min(b.ymin, sq.ymin);
            b.xmax = std::max(b.xmax, sq.xmax);
            b.ymax = std::max(b.ymax, sq.ymax);
            return RegionSpec::rectangle(b.center(), 0.5 * b.width(), 0.5 * b.height());
        }
        default:
            return region;
    }
}

bool EventSpec::is_monotone() const {
    return kind == EventKind::Cross || kind == EventKind::CellBlack ||
           (kind == EventKind::Arms && j == 1);
}

int ClusterDecomposition::word_sign_changes() const {
    const std::size_t n = word.size();
    if (n < 2) return 0;
    int s = 0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        s += cluster_color[word[i]] != cluster_color[word[i + 1]];
    if (cyclic) s += cluster_color[word[n - 1]] != cluster_color[word[0]];
    return s;
}

std::uint32_t Decomposer::find(std::uint32_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

const ClusterDecomposition& Decomposer::run(const RegionGraph& rg,
                                            std::span<const std::int8_t> signs) {
    const auto n = static_cast<std::uint32_t>(rg.size());
    parent_.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) parent_[i] = i;

    for (std::uint32_t u = 0; u < n; ++u) {
        const std::int8_t su = signs[rg.cells[u]];
        for (std::uint32_t k = rg.nbr_offsets[u]; k < rg.nbr_offsets[u + 1]; ++k) {
            const std::uint32_t v = rg.nbrs[k];
            if (v < u) continue;
            if (signs[rg.cells[v]] != su) continue;
            const std::uint32_t ru = find(u);
            const std::uint32_t rv = find(v);
            if (ru != rv) parent_[ru] = rv;
        }
    }

    d.cyclic = rg.cyclic;
    d.cluster_of.assign(n, 0);
    d.cluster_color.clear();
    d.cluster_touch.clear();
    d.word.clear();
    std::uint32_t next = 0;
    // roots get dense ids in first-seen order
    static thread_local std::vector<std::uint32_t> id_of_root;
    id_of_root.assign(n, kNoCell);
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint32_t r = find(i);
        if (id_of_root[r] == kNoCell) {
            id_of_root[r] = next++;
            d.cluster_color.push_back(signs[rg.cells[r]]);
            d.cluster_touch.push_back(0);
        }
        d.cluster_of[i] = id_of_root[r];
        d.cluster_touch[id_of_root[r]] |= rg.touch[i];
    }
    d.n_clusters = next;

    // Attachment word: walk the inner boundary keeping one arc per cell (a cell
    // straddling a corner of the hole attaches twice but is still a single arm
    // start), run-length encode by cluster, keep the crossing clusters.
    static thread_local std::vector<std::uint8_t> cell_seen;
    cell_seen.assign(n, 0);
    std::uint32_t prev = kNoCell;
    for (const auto& arc : rg.inner_arcs) {
        if (cell_seen[arc.local]) continue;
        cell_seen[arc.local] = 1;
        const std::uint32_t c = d.cluster_of[arc.local];
        if (c == prev) continue;
        prev = c;
        if ((d.cluster_touch[c] & (kTouchInner | kTouchOuter)) == (kTouchInner | kTouchOuter))
            d.word.push_back(c);
    }
    return d;
}

ClusterDecomposition decompose(const VoronoiComplex& complex, const Coloring& coloring,
                               const RegionSpec& region) {
    RegionGraph rg;
    build_region_graph(complex, region, rg);
    Decomposer dec;
    return dec.run(rg, coloring.signs);
}

namespace detail {

int arm_threshold(bool cyclic, int j) {
    if (j % 2 == 0) return cyclic ? j : j - 1;
    return cyclic ? j - 1 : j - 2;
}

ArmStats arm_stats(const RegionGraph& rg, const ClusterDecomposition& d,
                   std::span<const std::int8_t> signs) {
    ArmStats st;
    st.cyclic = rg.cyclic;
    st.degenerate_empty = rg.degenerate_empty;
    st.sign_changes = d.word_sign_changes();
    for (std::uint32_t c = 0; c < d.n_clusters; ++c) {
        const bool crossing =
            (d.cluster_touch[c] & (kTouchInner | kTouchOuter)) == (kTouchInner | kTouchOuter);
        if (!crossing) continue;
        if (d.cluster_color[c] > 0) {
            ++st.black_crossing_clusters;
            st.any_black_crossing = true;
        }
    }
    // word over first attachments of distinct clusters
    static thread_local std::vector<std::int8_t> dc_colors;
    static thread_local std::vector<std::uint8_t> cluster_seen;
    dc_colors.clear();
    cluster_seen.assign(d.n_clusters, 0);
    for (const std::uint32_t c : d.word) {
        if (cluster_seen[c]) continue;
        cluster_seen[c] = 1;
        dc_colors.push_back(d.cluster_color[c]);
    }
    int s = 0;
    const std::size_t m = dc_colors.size();
    if (m >= 2) {
        for (std::size_t i = 0; i + 1 < m; ++i) s += dc_colors[i] != dc_colors[i + 1];
        if (st.cyclic) s += dc_colors[m - 1] != dc_colors[0];
    }
    st.distinct_sign_changes = s;
    (void)signs;
    return st;
}

int arm_quick_decision(const ArmStats& st, int j, bool black_cluster_has_two_disjoint_crossings,
                       int threshold_bias) {
    if (st.degenerate_empty) return 1;  // vacuous at r == R
    if (j == 1) return st.any_black_crossing ? 1 : 0;
    const int need = arm_threshold(st.cyclic, j) + threshold_bias;
    if (st.sign_changes < need) return 0;  // alternation upper bound
    if (j == 2) return 1;  // both colors cross; two arms of different colors
    if (j == 3) {
        // one black + one white witness (no ordering constraint) plus a black
        // arm disjoint from the first: two disjoint black crossings in total
        if (st.black_crossing_clusters >= 2) return 1;
        return black_cluster_has_two_disjoint_crossings ? 1 : 0;
    }
    // j >= 4: distinct clusters in alternating first-attachment order certify
    // the family; anything else needs the exact search.
    if (st.distinct_sign_changes >= need) {
        if (j % 2 == 0) return 1;
        if (st.black_crossing_clusters >= (j + 1) / 2) return 1;
    }
    return -1;
}

namespace {

// Unit-capacity max-flow (node-split) over an allowed subset of region cells.
// Sources are either designated cells or every allowed inner-touching cell;
// sinks are the allowed outer-touching cells. Augments until `target` paths.
template <typename Allowed>
int disjoint_crossing_paths(const RegionGraph& rg, Allowed&& allowed,
                            std::span<const std::uint32_t> designated_sources, int target) {
    std::vector<std::uint32_t> members;
    for (std::uint32_t i = 0; i < rg.size(); ++i)
        if (allowed(i)) members.push_back(i);
    const auto m = static_cast<std::uint32_t>(members.size());
    std::vector<std::uint32_t> idx(rg.size(), kNoCell);
    for (std::uint32_t k = 0; k < m; ++k) idx[members[k]] = k;

    // nodes: 2k = in, 2k+1 = out, then source, sink
    const std::uint32_t src = 2 * m, sink = 2 * m + 1;
    struct Arc {
        std::uint32_t to;
        std::int32_t cap;
        std::uint32_t rev;
    };
    std::vector<std::vector<Arc>> g(2 * m + 2);
    auto add_arc = [&](std::uint32_t a, std::uint32_t b, std::int32_t cap) {
        g[a].push_back({b, cap, static_cast<std::uint32_t>(g[b].size())});
        g[b].push_back({a, 0, static_cast<std::uint32_t>(g[a].size() - 1)});
    };
    for (std::uint32_t k = 0; k < m; ++k) {
        add_arc(2 * k, 2 * k + 1, 1);
        const std::uint32_t u = members[k];
        if (designated_sources.empty() && (rg.touch[u] & kTouchInner)) add_arc(src, 2 * k, 1);
        if (rg.touch[u] & kTouchOuter) add_arc(2 * k + 1, sink, 1);
        for (std::uint32_t e = rg.nbr_offsets[u]; e < rg.nbr_offsets[u + 1]; ++e) {
            const std::uint32_t v = rg.nbrs[e];
            if (idx[v] == kNoCell) continue;
            add_arc(2 * k + 1, 2 * idx[v], 1);
        }
    }
    for (const std::uint32_t s : designated_sources) {
        if (idx[s] == kNoCell) return 0;
        add_arc(src, 2 * idx[s], 1);
    }

    int flow = 0;
    std::vector<std::int32_t> prev_node(g.size());
    std::vector<std::int32_t> prev_arc(g.size());
    std::vector<std::uint32_t> queue;
    while (flow < target) {
        std::fill(prev_node.begin(), prev_node.end(), -1);
        queue.clear();
        queue.push_back(src);
        prev_node[src] = static_cast<std::int32_t>(src);
        bool reached = false;
        for (std::size_t head = 0; head < queue.size() && !reached; ++head) {
            const std::uint32_t u = queue[head];
            for (std::size_t a = 0; a < g[u].size(); ++a) {
                const Arc& arc = g[u][a];
                if (arc.cap <= 0 || prev_node[arc.to] >= 0) continue;
                prev_node[arc.to] = static_cast<std::int32_t>(u);
                prev_arc[arc.to] = static_cast<std::int32_t>(a);
                if (arc.to == sink) {
                    reached = true;
                    break;
                }
                queue.push_back(arc.to);
            }
        }
        if (!reached) break;
        std::uint32_t v = sink;
        while (v != src) {
            const auto u = static_cast<std::uint32_t>(prev_node[v]);
            Arc& arc = g[u][static_cast<std::size_t>(prev_arc[v])];
            arc.cap -= 1;
            g[arc.to][arc.rev].cap += 1;
            v = u;
        }
        ++flow;
    }
    return flow;
}

// Designated-start disjoint-crossing feasibility within one color class,
// memoized on the (at most four-element) start set.
class DesignatedFlow {
public:
    DesignatedFlow(const RegionGraph& rg, const ClusterDecomposition& d,
                   std::span<const std::int8_t> signs, std::int8_t want)
        : rg_(rg), d_(d), signs_(signs), want_(want) {}

    bool feasible(std::vector<std::uint32_t> starts) {
        if (starts.empty()) return true;
        std::sort(starts.begin(), starts.end());
        std::uint64_t key = 0;
        for (const std::uint32_t s : starts) key = key * 1048583ULL + (s + 1);
        const auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        const auto target = static_cast<int>(starts.size());
        const bool ok = disjoint_crossing_paths(
                            rg_, [&](std::uint32_t i) { return signs_[rg_.cells[i]] == want_; },
                            starts, target) == target;
        memo_.emplace(key, ok);
        return ok;
    }

private:
    const RegionGraph& rg_;
    const ClusterDecomposition& d_;
    std::span<const std::int8_t> signs_;
    std::int8_t want_;
    std::unordered_map<std::uint64_t, bool> memo_;
};

}  // namespace

bool two_disjoint_crossings(const RegionGraph& rg, const ClusterDecomposition& d,
                            std::uint32_t cluster) {
    return disjoint_crossing_paths(
               rg, [&](std::uint32_t i) { return d.cluster_of[i] == cluster; }, {}, 2) >= 2;
}

bool exact_arm_search(const RegionGraph& rg, const ClusterDecomposition& d,
                      std::span<const std::int8_t> signs, int j) {
    struct Attachment {
        std::uint32_t local;
        std::int8_t color;
    };
    std::vector<Attachment> att;
    {
        std::vector<std::uint8_t> seen(rg.size(), 0);
        for (const auto& arc : rg.inner_arcs) {
            if (seen[arc.local]) continue;
            seen[arc.local] = 1;
            const std::uint32_t c = d.cluster_of[arc.local];
            if ((d.cluster_touch[c] & (kTouchInner | kTouchOuter)) !=
                (kTouchInner | kTouchOuter))
                continue;
            att.push_back({arc.local, d.cluster_color[c]});
        }
    }
    DesignatedFlow black(rg, d, signs, 1);
    DesignatedFlow white(rg, d, signs, -1);
    const int witnesses = j % 2 == 0 ? j : j - 1;

    std::vector<std::uint32_t> picked;
    auto complete = [&]() -> bool {
        if (rg.cyclic && witnesses >= 2 &&
            att[picked.front()].color == att[picked.back()].color)
            return false;
        std::vector<std::uint32_t> bs, ws;
        for (const std::uint32_t u : picked)
            (att[u].color > 0 ? bs : ws).push_back(att[u].local);
        if (!black.feasible(bs) || !white.feasible(ws)) return false;
        if (j % 2 == 0) return true;
        for (std::uint32_t e = 0; e < att.size(); ++e) {
            if (att[e].color <= 0) continue;
            bool used = false;
            for (const std::uint32_t u : picked) used |= u == e;
            if (used) continue;
            std::vector<std::uint32_t> bs2 = bs;
            bs2.push_back(att[e].local);
            if (black.feasible(bs2)) return true;
        }
        return false;
    };
    std::function<bool(std::uint32_t)> rec = [&](std::uint32_t from) -> bool {
        if (static_cast<int>(picked.size()) == witnesses) return complete();
        for (std::uint32_t i = from; i < att.size(); ++i) {
            if (!picked.empty() && att[picked.back()].color == att[i].color) continue;
            picked.push_back(i);
            if (rec(i + 1)) return true;
            picked.pop_back();
        }
        return false;
    };
    return rec(0);
}

}  // namespace detail

bool detect_cross(const RegionGraph& rg, std::span<const std::int8_t> signs, Decomposer& dec) {
    if (rg.region.kind != RegionKind::Rect)
        throw ParameterError("detect_cross needs a rectangle region");
    const ClusterDecomposition& d = dec.run(rg, signs);
    for (std::uint32_t c = 0; c < d.n_clusters; ++c) {
        if (d.cluster_color[c] > 0 &&
            (d.cluster_touch[c] & (kTouchLeft | kTouchRight)) == (kTouchLeft | kTouchRight))
            return true;
    }
    return false;
}

bool detect_arms(const RegionGraph& rg, std::span<const std::int8_t> signs, int j,
                 Decomposer& dec) {
    if (!rg.region.is_annulus_kind())
        throw ParameterError("detect_arms needs an annulus-kind region");
    if (j < 1) throw ParameterError("detect_arms needs j >= 1");
    if (rg.degenerate_empty) return true;
    const ClusterDecomposition& d = dec.run(rg, signs);
    const detail::ArmStats st = detail::arm_stats(rg, d, signs);
    bool two_flow = false;
    if (j == 3 && st.sign_changes >= detail::arm_threshold(st.cyclic, 3) &&
        st.black_crossing_clusters == 1) {
        for (std::uint32_t c = 0; c < d.n_clusters && !two_flow; ++c) {
            if (d.cluster_color[c] > 0 &&
                (d.cluster_touch[c] & (kTouchInner | kTouchOuter)) ==
                    (kTouchInner | kTouchOuter))
                two_flow = detail::two_disjoint_crossings(rg, d, c);
        }
    }
    const int quick = detail::arm_quick_decision(st, j, two_flow);
    if (quick >= 0) return quick == 1;
    return detail::exact_arm_search(rg, d, signs, j);
}

int count_interfaces(const RegionGraph& rg, std::span<const std::int8_t> signs, Decomposer& dec) {
    if (rg.region.kind != RegionKind::Annulus)
        throw ParameterError("count_interfaces needs a plane annulus");
    const ClusterDecomposition& d = dec.run(rg, signs);
    return d.word_sign_changes();
}

bool detect_cross(const VoronoiComplex& complex, const Coloring& coloring,
                  const RegionSpec& rect) {
    RegionGraph rg;
    build_region_graph(complex, rect, rg);
    Decomposer dec;
    return detect_cross(rg, coloring.signs, dec);
}

bool detect_arms(const VoronoiComplex& complex, const Coloring& coloring,
                 const RegionSpec& region, int j) {
    RegionGraph rg;
    build_region_graph(complex, region, rg);
    Decomposer dec;
    return detect_arms(rg, coloring.signs, j, dec);
}

RegionSpec circuit_annulus(const RegionSpec& square, double delta) {
    if (square.kind != RegionKind::Rect || square.lambda1 != square.lambda2)
        throw ParameterError("detect_circuit needs a square");
    if (!(delta > 0 && delta < 0.5)) throw ParameterError("circuit delta must lie in (0, 1/2)");
    const double h = square.lambda1;
    return RegionSpec::annulus(square.center, (1.0 - 2.0 * delta) * h, (1.0 - delta) * h);
}

int detect_circuit(const RegionGraph& delta_annulus, std::span<const std::int8_t> signs,
                   Decomposer& dec) {
    const ClusterDecomposition& d = dec.run(delta_annulus, signs);
    bool black = false, white = false;
    for (std::uint32_t c = 0; c < d.n_clusters; ++c) {
        const bool crossing =
            (d.cluster_touch[c] & (kTouchInner | kTouchOuter)) == (kTouchInner | kTouchOuter);
        if (!crossing) continue;
        (d.cluster_color[c] > 0 ? black : white) = true;
    }
    // Planar duality: a black circuit exists iff no white radial crossing does.
    if (black && !white) return 1;
    if (white && !black) return -1;
    return 0;
}

int detect_circuit(const VoronoiComplex& complex, const Coloring& coloring,
                   const RegionSpec& square, double delta) {
    RegionGraph rg;
    build_region_graph(complex, circuit_annulus(square, delta), rg);
    Decomposer dec;
    return detect_circuit(rg, coloring.signs, dec);
}

int count_interfaces(const VoronoiComplex& complex, const Coloring& coloring,
                     const RegionSpec& region) {
    RegionGraph rg;
    build_region_graph(complex, region, rg);
    Decomposer dec;
    return count_interfaces(rg, coloring.signs, dec);
}

std::vector<std::uint32_t> cells_with_nuclei_in(const VoronoiComplex& complex, const Box& box) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < complex.cell_count(); ++i) {
        const Vec2 p = complex.nuclei[i];
        if (p.x >= box.xmin && p.x < box.xmax && p.y >= box.ymin && p.y < box.ymax)
            out.push_back(i);
    }
    return out;
}

namespace {

double evaluate_colored(const VoronoiComplex& complex, const Coloring& coloring,
                        const EventSpec& spec) {
    switch (spec.kind) {
        case EventKind::Cross:
            return detect_cross(complex, coloring, spec.region) ? 1.0 : 0.0;
        case EventKind::Arms:
            return detect_arms(complex, coloring, spec.region, spec.j) ? 1.0 : 0.0;
        case EventKind::Circuit:
            return detect_circuit(complex, coloring, spec.region, spec.delta);
        case EventKind::CellBlack:
            return coloring.signs[complex.cell_of(spec.site)] > 0 ? 1.0 : 0.0;
        default:
            throw ParameterError("event kind needs evaluate_event with points");
    }
}

}  // namespace

bool is_quenched_pivotal(const VoronoiComplex& complex, const Coloring& coloring,
                         const std::vector<std::uint32_t>& cells, const EventSpec& inner,
                         int cap) {
    if (inner.kind == EventKind::PivotalOf)
        throw ParameterError("pivotal-of nests exactly one level");
    if (cells.empty()) return false;
    ColoringEnumeration en = enumerate_recolorings(coloring, cells, cap);

    if (inner.is_monotone()) {
        Coloring work = coloring;
        for (const std::uint32_t c : en.free_cells()) work.signs[c] = 1;
        const double up = evaluate_colored(complex, work, inner);
        for (const std::uint32_t c : en.free_cells()) work.signs[c] = -1;
        const double down = evaluate_colored(complex, work, inner);
        return up != down;
    }

    Coloring work = en.current();
    const double first = evaluate_colored(complex, work, inner);
    for (en.advance(); !en.done(); en.advance()) {
        // gray-code step: exactly one sign differs from the previous state
        const std::uint64_t gray_prev = (en.cursor() - 1) ^ ((en.cursor() - 1) >> 1);
        const std::uint64_t gray_cur = en.cursor() ^ (en.cursor() >> 1);
        const std::uint64_t changed = gray_prev ^ gray_cur;
        int bit = 0;
        while (!((changed >> bit) & 1u)) ++bit;
        const std::uint32_t cell = en.free_cells()[static_cast<std::size_t>(bit)];
        work.signs[cell] = (gray_cur >> bit) & 1u ? std::int8_t{1} : std::int8_t{-1};
        if (evaluate_colored(complex, work, inner) != first) return true;
    }
    return false;
}

double evaluate_event(const VoronoiComplex& complex, const Coloring& coloring,
                      const PointSet& points, const EventSpec& spec,
                      const RegionGraphOptions& opts) {
    RegionGraph rg;
    Decomposer dec;
    switch (spec.kind) {
        case EventKind::Cross:
            build_region_graph(complex, spec.region, rg, opts);
            return detect_cross(rg, coloring.signs, dec) ? 1.0 : 0.0;
        case EventKind::Arms:
            build_region_graph(complex, spec.region, rg, opts);
            return detect_arms(rg, coloring.signs, spec.j, dec) ? 1.0 : 0.0;
        case EventKind::Circuit:
            build_region_graph(complex, circuit_annulus(spec.region, spec.delta), rg, opts);
            return detect_circuit(rg, coloring.signs, dec);
        case EventKind::Dense:
            return detect_dense(points, spec.region, spec.delta) ? 1.0 : 0.0;
        case EventKind::CellBlack:
            return coloring.signs[complex.cell_of(spec.site)] > 0 ? 1.0 : 0.0;
        case EventKind::PivotalOf:
            return is_quenched_pivotal(complex, coloring,
                                       cells_with_nuclei_in(complex, spec.square.outer_box()),
                                       *spec.inner)
                       ? 1.0
                       : 0.0;
    }
    throw ParameterError("unknown event kind");
}

}  // namespace vperc
