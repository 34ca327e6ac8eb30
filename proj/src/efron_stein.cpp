#include <algorithm>
#include <cmath>
#include <string>

#include "vperc/estimators.hpp"
#include "vperc/parallel.hpp"

namespace vperc {

namespace {

struct Grid {
    double rho;
    long long i0, j0;
    long long nx, ny;
    long long size() const { return nx * ny; }
    long long index_of(Vec2 p) const {
        const auto ix = static_cast<long long>(std::floor(p.x / rho));
        const auto iy = static_cast<long long>(std::floor(p.y / rho));
        if (ix < i0 || ix >= i0 + nx || iy < j0 || iy >= j0 + ny) return -1;
        return (ix - i0) + nx * (iy - j0);
    }
};

Grid make_grid(const Box& bb, double rho) {
    Grid g;
    g.rho = rho;
    g.i0 = static_cast<long long>(std::floor((bb.xmin - rho) / rho));
    g.j0 = static_cast<long long>(std::floor((bb.ymin - rho) / rho));
    const auto i1 = static_cast<long long>(std::ceil((bb.xmax + rho) / rho));
    const auto j1 = static_cast<long long>(std::ceil((bb.ymax + rho) / rho));
    g.nx = std::max<long long>(1, i1 - g.i0);
    g.ny = std::max<long long>(1, j1 - g.j0);
    return g;
}

// Monotone events tested by a touch-mask pair on black components.
struct TouchMasks {
    std::uint8_t m1, m2;
};

TouchMasks event_masks(const EventSpec& inner) {
    if (inner.kind == EventKind::Cross) return {kTouchLeft, kTouchRight};
    return {kTouchInner, kTouchOuter};  // arms j == 1
}

class MonotonePivotal {
public:
    void attach(const RegionGraph& rg, const EventSpec& inner) {
        rg_ = &rg;
        masks_ = event_masks(inner);
        const std::size_t n = rg.size();
        black_.resize(n);
        parent_.resize(n);
        touch_.resize(n);
        scratch_parent_.resize(n);
        scratch_touch_.resize(n);
        down_parent_.resize(n);
        down_touch_.resize(n);
        in_ds_.assign(n, 0);
    }

    // Base black components for this coloring; returns the event value.
    bool set_coloring(std::span<const std::int8_t> signs) {
        const auto n = static_cast<std::uint32_t>(rg_->size());
        for (std::uint32_t i = 0; i < n; ++i) {
            black_[i] = signs[rg_->cells[i]] > 0;
            parent_[i] = i;
        }
        for (std::uint32_t u = 0; u < n; ++u) {
            if (!black_[u]) continue;
            for (std::uint32_t e = rg_->nbr_offsets[u]; e < rg_->nbr_offsets[u + 1]; ++e) {
                const std::uint32_t v = rg_->nbrs[e];
                if (v < u || !black_[v]) continue;
                const std::uint32_t ru = find(parent_, u);
                const std::uint32_t rv = find(parent_, v);
                if (ru != rv) parent_[ru] = rv;
            }
        }
        std::fill(touch_.begin(), touch_.end(), 0);
        for (std::uint32_t i = 0; i < n; ++i) {
            parent_[i] = find(parent_, i);
            touch_[parent_[i]] |= rg_->touch[i];
        }
        crossing_roots_.clear();
        value_ = false;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (parent_[i] != i || !black_[i]) continue;
            if ((touch_[i] & masks_.m1) && (touch_[i] & masks_.m2)) {
                crossing_roots_.push_back(i);
                value_ = true;
            }
        }
        return value_;
    }

    // Quenched pivotality of the cells `ds` (local ids) for the current coloring.
    bool pivotal(std::span<const std::uint32_t> ds) {
        if (ds.empty()) return false;
        if (!value_) {
            // f(all-white on S) stays 0 by monotonicity; pivotal iff painting S
            // black creates a crossing component.
            scratch_parent_.assign(parent_.begin(), parent_.end());
            scratch_touch_.assign(touch_.begin(), touch_.end());
            for (const std::uint32_t c : ds) scratch_touch_[c] |= rg_->touch[c];
            for (const std::uint32_t c : ds) {
                for (std::uint32_t e = rg_->nbr_offsets[c]; e < rg_->nbr_offsets[c + 1]; ++e) {
                    const std::uint32_t v = rg_->nbrs[e];
                    if (!black_[v] && !contains(ds, v)) continue;
                    const std::uint32_t rc = find(scratch_parent_, c);
                    const std::uint32_t rv = find(scratch_parent_, v);
                    if (rc == rv) continue;
                    scratch_parent_[rc] = rv;
                    scratch_touch_[rv] |= scratch_touch_[rc];
                }
            }
            for (const std::uint32_t c : ds) {
                const std::uint32_t r = find(scratch_parent_, c);
                if ((scratch_touch_[r] & masks_.m1) && (scratch_touch_[r] & masks_.m2))
                    return true;
            }
            return false;
        }
        // f(all-black on S) stays 1; pivotal iff whitening S kills every crossing.
        for (const std::uint32_t r : crossing_roots_) {
            bool hit = false;
            for (const std::uint32_t c : ds)
                if (black_[c] && parent_[c] == r) {
                    hit = true;
                    break;
                }
            if (!hit) return false;  // this crossing survives untouched
        }
        const auto n = static_cast<std::uint32_t>(rg_->size());
        ++epoch_;
        for (const std::uint32_t c : ds) in_ds_[c] = epoch_;
        for (std::uint32_t i = 0; i < n; ++i) down_parent_[i] = i;
        for (std::uint32_t u = 0; u < n; ++u) {
            if (!black_[u] || in_ds_[u] == epoch_) continue;
            for (std::uint32_t e = rg_->nbr_offsets[u]; e < rg_->nbr_offsets[u + 1]; ++e) {
                const std::uint32_t v = rg_->nbrs[e];
                if (v < u || !black_[v] || in_ds_[v] == epoch_) continue;
                const std::uint32_t ru = find(down_parent_, u);
                const std::uint32_t rv = find(down_parent_, v);
                if (ru != rv) down_parent_[ru] = rv;
            }
        }
        std::fill(down_touch_.begin(), down_touch_.end(), 0);
        for (std::uint32_t i = 0; i < n; ++i) {
            if (!black_[i] || in_ds_[i] == epoch_) continue;
            const std::uint32_t r = find(down_parent_, i);
            down_touch_[r] |= rg_->touch[i];
            if ((down_touch_[r] & masks_.m1) && (down_touch_[r] & masks_.m2)) return false;
        }
        return true;
    }

private:
    static std::uint32_t find(std::vector<std::uint32_t>& parent, std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    static bool contains(std::span<const std::uint32_t> ds, std::uint32_t v) {
        for (const std::uint32_t d : ds)
            if (d == v) return true;
        return false;
    }

    const RegionGraph* rg_ = nullptr;
    TouchMasks masks_{0, 0};
    bool value_ = false;
    std::vector<std::uint8_t> black_;
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> touch_;
    std::vector<std::uint32_t> crossing_roots_;
    std::vector<std::uint32_t> scratch_parent_;
    std::vector<std::uint8_t> scratch_touch_;
    std::vector<std::uint32_t> down_parent_;
    std::vector<std::uint8_t> down_touch_;
    std::vector<std::uint32_t> in_ds_;
    std::uint32_t epoch_ = 0;
};

}  // namespace

EfronSteinResult efron_stein_sides(const EventSpec& inner, const EfronSteinParams& params) {
    if (params.environments < 2 || params.colorings < 2)
        throw ParameterError("efron-stein needs K >= 2 and M >= 2");
    if (!(params.rho > 0)) throw ParameterError("efron-stein needs rho > 0");
    if (inner.kind == EventKind::PivotalOf || inner.kind == EventKind::Circuit ||
        inner.kind == EventKind::Dense)
        throw ParameterError("efron-stein inner event must be an indicator coloring event");

    const long long K = params.environments;
    const long long M = params.colorings;

    McParams lhs_params;
    lhs_params.intensity = params.intensity;
    lhs_params.p = params.p;
    lhs_params.environments = K;
    lhs_params.colorings = M;
    lhs_params.stream = params.stream.child("lhs");
    lhs_params.workers = params.workers;
    const QuenchedMoments lhs_m = estimate_quenched_moments(inner, lhs_params);

    const Grid grid = make_grid(inner.support().bbox(), params.rho);
    const Box grid_box{grid.i0 * params.rho, grid.j0 * params.rho,
                       (grid.i0 + grid.nx) * params.rho, (grid.j0 + grid.ny) * params.rho};
    const RegionSpec window_region =
        RegionSpec::rectangle(grid_box.center(), 0.5 * grid_box.width(), 0.5 * grid_box.height());
    const Window window = window_for_region(window_region);

    const bool fast = inner.is_monotone() && inner.kind != EventKind::CellBlack;
    const SeedPath rhs_stream = params.stream.child("rhs");

    std::vector<double> T(K, 0);
    std::vector<std::uint8_t> kept(K, 0);
    run_indexed(K, params.workers, [&](long long k) {
        thread_local struct {
            ComplexBuilder builder;
            VoronoiComplex complex;
            PointSet points;
            RegionGraph rg;
            MonotonePivotal piv;
            std::vector<std::int8_t> signs;
            std::vector<std::uint32_t> sq_offsets;   // CSR: square -> local cells
            std::vector<std::uint32_t> sq_cells;
            std::vector<std::uint32_t> sq_nuclei;    // per square nucleus count
            std::vector<long long> s_counts;
            std::vector<std::uint32_t> live_squares;
        } ctx;
        const SeedPath env = rhs_stream.child(static_cast<std::uint64_t>(k));
        try {
            for (std::uint64_t attempt = 0;; ++attempt) {
                try {
                    ctx.points = sample_poisson(window, params.intensity,
                                                env.child("pts").child(attempt));
                    ctx.builder.build(ctx.points, ctx.complex);
                    break;
                } catch (const DegenerateGeometryError&) {
                    if (attempt >= 64) throw;
                }
            }
            const VoronoiComplex& cx = ctx.complex;
            build_region_graph(cx, inner.region, ctx.rg, {.discard_boundary_flagged = true});

            // Bin nuclei into grid squares (half-open), keeping region members.
            const long long nsq = grid.size();
            ctx.sq_nuclei.assign(nsq, 0);
            ctx.sq_offsets.assign(nsq + 1, 0);
            for (std::uint32_t i = 0; i < cx.cell_count(); ++i) {
                const long long s = grid.index_of(cx.nuclei[i]);
                if (s < 0) continue;
                ++ctx.sq_nuclei[s];
                if (ctx.rg.local_of[i] != kNoCell) ++ctx.sq_offsets[s + 1];
            }
            for (long long s = 0; s < nsq; ++s) {
                if (ctx.sq_nuclei[s] > static_cast<std::uint32_t>(params.recoloring_cap))
                    throw CapacityError("grid square holds " + std::to_string(ctx.sq_nuclei[s]) +
                                            " nuclei, above the enumeration cap",
                                        static_cast<int>(ctx.sq_nuclei[s]));
                ctx.sq_offsets[s + 1] += ctx.sq_offsets[s];
            }
            ctx.sq_cells.assign(ctx.sq_offsets[nsq], 0);
            {
                std::vector<std::uint32_t> cursor(ctx.sq_offsets.begin(),
                                                  ctx.sq_offsets.end() - 1);
                for (std::uint32_t i = 0; i < cx.cell_count(); ++i) {
                    const long long s = grid.index_of(cx.nuclei[i]);
                    if (s < 0 || ctx.rg.local_of[i] == kNoCell) continue;
                    ctx.sq_cells[cursor[s]++] = ctx.rg.local_of[i];
                }
            }
            ctx.live_squares.clear();
            for (long long s = 0; s < nsq; ++s)
                if (ctx.sq_offsets[s + 1] > ctx.sq_offsets[s])
                    ctx.live_squares.push_back(static_cast<std::uint32_t>(s));

            ctx.s_counts.assign(nsq, 0);
            ctx.signs.resize(cx.cell_count());
            if (fast && !ctx.rg.degenerate_empty) ctx.piv.attach(ctx.rg, inner);

            const SeedPath cols = env.child("col");
            for (long long m = 0; m < M; ++m) {
                Rng rng(cols.child(static_cast<std::uint64_t>(m)));
                detail::fill_signs(rng, params.p, ctx.signs);
                if (ctx.rg.degenerate_empty) continue;  // constant event
                if (fast) {
                    ctx.piv.set_coloring(ctx.signs);
                    for (const std::uint32_t s : ctx.live_squares) {
                        const std::span<const std::uint32_t> ds{
                            ctx.sq_cells.data() + ctx.sq_offsets[s],
                            ctx.sq_cells.data() + ctx.sq_offsets[s + 1]};
                        ctx.s_counts[s] += ctx.piv.pivotal(ds);
                    }
                } else {
                    Coloring col;
                    col.p = params.p;
                    col.signs.assign(ctx.signs.begin(), ctx.signs.end());
                    for (const std::uint32_t s : ctx.live_squares) {
                        std::vector<std::uint32_t> cells;
                        for (std::uint32_t e = ctx.sq_offsets[s]; e < ctx.sq_offsets[s + 1]; ++e)
                            cells.push_back(ctx.rg.cells[ctx.sq_cells[e]]);
                        ctx.s_counts[s] +=
                            is_quenched_pivotal(cx, col, cells, inner, params.recoloring_cap);
                    }
                }
            }

            double t = 0;
            const double Md = static_cast<double>(M);
            for (long long s = 0; s < nsq; ++s) {
                const double c = static_cast<double>(ctx.s_counts[s]);
                t += c * (c - 1) / (Md * (Md - 1));
            }
            T[k] = t;
            kept[k] = 1;
        } catch (const ReplicateDiscard&) {
            kept[k] = 0;
        }
    });

    std::vector<double> t_kept;
    for (long long k = 0; k < K; ++k)
        if (kept[k]) t_kept.push_back(T[k]);
    const auto ke = static_cast<long long>(t_kept.size());
    if (ke < 2) throw ParameterError("too many discarded environments");

    const double rhs_mean = tree_sum(t_kept) / static_cast<double>(ke);
    std::vector<double> loo(ke);
    const double total = tree_sum(t_kept);
    for (long long i = 0; i < ke; ++i) loo[i] = (total - t_kept[i]) / static_cast<double>(ke - 1);
    double ss = 0, lm = 0;
    for (const double x : loo) lm += x;
    lm /= static_cast<double>(ke);
    for (const double x : loo) ss += (x - lm) * (x - lm);
    const double rhs_se =
        std::sqrt((static_cast<double>(ke) - 1) / static_cast<double>(ke) * ss);

    EfronSteinResult res;
    res.lhs = lhs_m.variance;
    res.rhs = {rhs_mean, ke, rhs_se, 1.96 * rhs_se};
    res.discarded = lhs_m.discarded + (K - ke);
    res.grid_squares = static_cast<int>(grid.size());
    return res;
}

}  // namespace vperc
