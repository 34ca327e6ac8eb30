#include "vperc/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace vperc::oracle {

namespace {

bool bfs_color(const RegionGraph& rg, std::span<const std::int8_t> signs, std::int8_t want,
               std::uint8_t from_bit, std::uint8_t to_bit) {
    const auto n = static_cast<std::uint32_t>(rg.size());
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<std::uint32_t> queue;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (signs[rg.cells[i]] == want && (rg.touch[i] & from_bit)) {
            seen[i] = 1;
            queue.push_back(i);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t u = queue[head];
        if (rg.touch[u] & to_bit) return true;
        for (std::uint32_t e = rg.nbr_offsets[u]; e < rg.nbr_offsets[u + 1]; ++e) {
            const std::uint32_t v = rg.nbrs[e];
            if (seen[v] || signs[rg.cells[v]] != want) continue;
            seen[v] = 1;
            queue.push_back(v);
        }
    }
    return false;
}

// Max-flow feasibility: can every designated start cell be joined to the outer
// boundary by vertex-disjoint paths inside its own color?
class DisjointPathCheck {
public:
    explicit DisjointPathCheck(const RegionGraph& rg) : rg_(rg) {}

    bool feasible(std::span<const std::int8_t> signs,
                  const std::vector<std::uint32_t>& starts, std::int8_t want) const {
        if (starts.empty()) return true;
        const auto n = static_cast<std::uint32_t>(rg_.size());
        const std::uint32_t src = 2 * n, sink = 2 * n + 1;
        struct Arc {
            std::uint32_t to;
            std::int32_t cap;
            std::uint32_t rev;
        };
        std::vector<std::vector<Arc>> g(2 * n + 2);
        auto add = [&](std::uint32_t a, std::uint32_t b, std::int32_t cap) {
            g[a].push_back({b, cap, static_cast<std::uint32_t>(g[b].size())});
            g[b].push_back({a, 0, static_cast<std::uint32_t>(g[a].size() - 1)});
        };
        for (std::uint32_t i = 0; i < n; ++i) {
            if (signs[rg_.cells[i]] != want) continue;
            add(2 * i, 2 * i + 1, 1);
            if (rg_.touch[i] & kTouchOuter) add(2 * i + 1, sink, 1);
            for (std::uint32_t e = rg_.nbr_offsets[i]; e < rg_.nbr_offsets[i + 1]; ++e) {
                const std::uint32_t v = rg_.nbrs[e];
                if (signs[rg_.cells[v]] != want) continue;
                add(2 * i + 1, 2 * v, 1);
            }
        }
        for (const std::uint32_t s : starts) add(src, 2 * s, 1);

        int flow = 0;
        const int target = static_cast<int>(starts.size());
        std::vector<std::int32_t> prev_node(g.size()), prev_arc(g.size());
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
            if (!reached) return false;
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
        return true;
    }

private:
    const RegionGraph& rg_;
};

struct Attachment {
    std::uint32_t local;
    double pos;
    std::int8_t color;
};

// Inner-touching cells in walk order, one entry per cell (first attachment).
std::vector<Attachment> attachments(const RegionGraph& rg, std::span<const std::int8_t> signs) {
    std::vector<Attachment> out;
    std::vector<std::uint8_t> seen(rg.size(), 0);
    for (const auto& arc : rg.inner_arcs) {
        if (seen[arc.local]) continue;
        seen[arc.local] = 1;
        out.push_back({arc.local, arc.t0, signs[rg.cells[arc.local]]});
    }
    return out;
}

// Recursive choice of `want` attachment indices with alternating colors; calls
// try_family on each complete pick.
template <typename F>
bool pick_alternating(const std::vector<Attachment>& att, int want, std::size_t from,
                      std::vector<std::uint32_t>& picked, F&& try_family) {
    if (static_cast<int>(picked.size()) == want) return try_family(picked);
    for (std::size_t i = from; i < att.size(); ++i) {
        if (!picked.empty() &&
            att[picked.back()].color == att[i].color)
            continue;  // must alternate along the walk
        picked.push_back(static_cast<std::uint32_t>(i));
        if (pick_alternating(att, want, i + 1, picked, try_family)) return true;
        picked.pop_back();
    }
    return false;
}

}  // namespace

bool cross_bfs(const RegionGraph& rg, std::span<const std::int8_t> signs) {
    return bfs_color(rg, signs, 1, kTouchLeft, kTouchRight);
}

bool arms_disjoint_paths(const RegionGraph& rg, std::span<const std::int8_t> signs, int j) {
    if (rg.degenerate_empty) return true;
    if (j == 1) return bfs_color(rg, signs, 1, kTouchInner, kTouchOuter);

    const std::vector<Attachment> att = attachments(rg, signs);
    const DisjointPathCheck flow(rg);
    const bool cyclic = rg.cyclic;

    auto family_feasible = [&](const std::vector<std::uint32_t>& picked,
                               std::uint32_t extra_black) {
        std::vector<std::uint32_t> blacks, whites;
        for (const std::uint32_t idx : picked) {
            (att[idx].color > 0 ? blacks : whites).push_back(att[idx].local);
        }
        if (extra_black != kNoCell) blacks.push_back(extra_black);
        return flow.feasible(signs, blacks, 1) && flow.feasible(signs, whites, -1);
    };

    if (j % 2 == 0) {
        // For a cyclic walk, alternation must also hold across the wrap, which
        // for an even count reduces to alternation along the walk.
        std::vector<std::uint32_t> picked;
        return pick_alternating(att, j, 0, picked, [&](const std::vector<std::uint32_t>& p) {
            if (cyclic && att[p.front()].color == att[p.back()].color) return false;
            return family_feasible(p, kNoCell);
        });
    }

    // Odd j: j-1 alternating arms plus one more black arm, cell-disjoint from
    // all of them; its position along the walk is unconstrained.
    std::vector<std::uint32_t> picked;
    return pick_alternating(att, j - 1, 0, picked, [&](const std::vector<std::uint32_t>& p) {
        if (cyclic && j > 1 && att[p.front()].color == att[p.back()].color) return false;
        for (std::size_t e = 0; e < att.size(); ++e) {
            if (att[e].color <= 0) continue;
            bool used = false;
            for (const std::uint32_t idx : p) used |= idx == e;
            if (used) continue;
            if (family_feasible(p, att[e].local)) return true;
        }
        // The extra black path may also share its attachment cluster with a
        // picked arm as long as the paths are cell-disjoint; starting from any
        // unpicked black attachment covers that. A same-cell start can never
        // give disjoint paths, so nothing is missed.
        return false;
    });
}

bool pivotal_exhaustive(const VoronoiComplex& complex, const Coloring& coloring,
                        const std::vector<std::uint32_t>& cells, const EventSpec& inner) {
    if (cells.empty()) return false;
    const std::size_t total = complex.cell_count();
    if (total > 20) throw ParameterError("pivotal oracle is exhaustive; needs <= 20 cells");

    RegionGraph rg;
    build_region_graph(complex, inner.region, rg);
    auto evaluate = [&](std::span<const std::int8_t> signs) {
        switch (inner.kind) {
            case EventKind::Cross:
                return cross_bfs(rg, signs);
            case EventKind::Arms:
                return arms_disjoint_paths(rg, signs, inner.j);
            case EventKind::CellBlack:
                return signs[complex.cell_of(inner.site)] > 0;
            default:
                throw ParameterError("pivotal oracle supports cross/arms/cell-black");
        }
    };

    std::vector<std::uint8_t> in_d(total, 0);
    for (const std::uint32_t c : cells) in_d[c] = 1;

    bool seen_true = false, seen_false = false;
    std::vector<std::int8_t> signs(total);
    const std::uint64_t lim = std::uint64_t{1} << total;
    for (std::uint64_t mask = 0; mask < lim; ++mask) {
        bool agrees = true;
        for (std::size_t c = 0; c < total && agrees; ++c) {
            const std::int8_t s = (mask >> c) & 1u ? 1 : -1;
            if (!in_d[c] && s != coloring.signs[c]) agrees = false;
            signs[c] = s;
        }
        if (!agrees) continue;
        (evaluate(signs) ? seen_true : seen_false) = true;
        if (seen_true && seen_false) return true;
    }
    return false;
}

int trace_interfaces(const VoronoiComplex& complex, const Coloring& coloring,
                     const RegionSpec& region) {
    if (region.kind != RegionKind::Annulus)
        throw ParameterError("interface tracing expects a plane annulus");
    RegionGraph rg;
    build_region_graph(complex, region, rg);

    // Pieces of interface: shared Voronoi edges between opposite colors,
    // clipped to the region.
    struct Piece {
        Vec2 a, b;
    };
    std::vector<Piece> pieces;
    for (std::uint32_t li = 0; li < rg.size(); ++li) {
        const std::uint32_t gi = rg.cells[li];
        for (std::uint32_t e = rg.nbr_offsets[li]; e < rg.nbr_offsets[li + 1]; ++e) {
            const std::uint32_t lj = rg.nbrs[e];
            if (lj < li) continue;
            const std::uint32_t gj = rg.cells[lj];
            if (coloring.signs[gi] == coloring.signs[gj]) continue;
            const auto seg = complex.shared_edge(gi, gj);
            if (!seg) continue;
            // clip the segment to the annulus (outer box minus inner box)
            double t0, t1;
            if (!segment_box_interval(seg->first, seg->second, region.outer_box(), t0, t1))
                continue;
            double h0 = 1, h1 = 0;
            const bool hits_hole =
                region.r > 0 &&
                segment_box_interval(seg->first, seg->second, region.inner_box(), h0, h1);
            auto emit = [&](double u0, double u1) {
                if (u1 - u0 < 1e-12) return;
                const Vec2 d = seg->second - seg->first;
                pieces.push_back({seg->first + u0 * d, seg->first + u1 * d});
            };
            if (!hits_hole) {
                emit(t0, t1);
            } else {
                emit(t0, std::min(t1, h0));
                emit(std::max(t0, h1), t1);
            }
        }
    }

    // Join pieces that share an endpoint (Voronoi vertices match coordinates up
    // to construction noise).
    const double tol = 1e-9 * std::max(1.0, region.R);
    const auto n = static_cast<int>(pieces.size());
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto close = [&](Vec2 u, Vec2 v) { return norm(u - v) <= tol; };
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) {
            const bool touch = close(pieces[i].a, pieces[k].a) || close(pieces[i].a, pieces[k].b) ||
                               close(pieces[i].b, pieces[k].a) || close(pieces[i].b, pieces[k].b);
            if (touch) parent[find(i)] = find(k);
        }

    auto on_square = [&](Vec2 p, double half) {
        const double dx = std::fabs(p.x - region.center.x);
        const double dy = std::fabs(p.y - region.center.y);
        return std::fabs(std::max(dx, dy) - half) <= tol;
    };
    std::vector<std::uint8_t> hits_inner(n, 0), hits_outer(n, 0);
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        for (const Vec2 p : {pieces[i].a, pieces[i].b}) {
            if (region.r > 0 && on_square(p, region.r)) hits_inner[r] = 1;
            if (on_square(p, region.R)) hits_outer[r] = 1;
        }
    }
    int count = 0;
    for (int i = 0; i < n; ++i)
        if (find(i) == i && hits_inner[i] && hits_outer[i]) ++count;
    return count;
}

}  // namespace vperc::oracle
