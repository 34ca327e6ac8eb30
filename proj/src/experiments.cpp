#include "vperc/experiments.hpp"

#include <charconv>
#include <chrono>

namespace vperc {

using nlohmann::json;

const std::vector<std::string>& experiment_registry() {
    static const std::vector<std::string> names = {
        "cross-prob",  "arm-prob",   "quenched-moments",   "efron-stein",
        "exponent-fit", "theta-scan", "correlation-length", "dense-check"};
    return names;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

int worker_count_with_env(int from_config) {
    if (const char* env = std::getenv("VPERC_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    return from_config;
}

std::string hash_hex(const json& canonical) {
    const std::string dump = canonical.dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

const json* find_field(const json& j, const std::string& path) {
    const json* cur = &j;
    std::size_t start = 0;
    while (start < path.size()) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (!cur->is_object() || !cur->contains(key)) return nullptr;
        cur = &(*cur)[key];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return cur;
}

double need_number(const json& j, const std::string& path, double lo, double hi) {
    const json* f = find_field(j, path);
    if (!f) throw ConfigError(path, "missing required field");
    if (!f->is_number()) throw ConfigError(path, "expected a number");
    const double v = f->get<double>();
    if (!(v >= lo && v <= hi))
        throw ConfigError(path, "out of range [" + format_double(lo) + ", " + format_double(hi) +
                                    "]");
    return v;
}

long long need_integer(const json& j, const std::string& path, long long lo, long long hi) {
    const json* f = find_field(j, path);
    if (!f) throw ConfigError(path, "missing required field");
    if (!f->is_number_integer() && !f->is_number_unsigned())
        throw ConfigError(path, "expected an integer");
    const long long v = f->get<long long>();
    if (v < lo || v > hi) throw ConfigError(path, "out of range");
    return v;
}

std::vector<double> need_number_list(const json& j, const std::string& path, double lo,
                                     double hi) {
    const json* f = find_field(j, path);
    if (!f) throw ConfigError(path, "missing required field");
    if (!f->is_array() || f->empty()) throw ConfigError(path, "expected a non-empty array");
    std::vector<double> out;
    for (const auto& e : *f) {
        if (!e.is_number()) throw ConfigError(path, "expected numbers");
        const double v = e.get<double>();
        if (!(v >= lo && v <= hi)) throw ConfigError(path, "entry out of range");
        out.push_back(v);
    }
    return out;
}

RegionKind variant_kind(const std::string& v, const std::string& field) {
    if (v == "plane") return RegionKind::Annulus;
    if (v == "half") return RegionKind::HalfAnnulus;
    if (v == "quarter") return RegionKind::QuarterAnnulus;
    if (v == "quarter-complement") return RegionKind::QuarterComplementAnnulus;
    throw ConfigError(field, "unknown variant (plane|half|quarter|quarter-complement)");
}

}  // namespace

EventSpec parse_event(const json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError(field + ".kind", "missing event kind");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "cross") {
        const double l1 = need_number(j, "lambda1", 1e-9, 1e9);
        const double l2 = need_number(j, "lambda2", 1e-9, 1e9);
        return EventSpec::cross(RegionSpec::rectangle({0, 0}, l1, l2));
    }
    if (kind == "arms") {
        const double r = need_number(j, "r", 0, 1e9);
        const double R = need_number(j, "R", r, 1e9);
        const auto jj = static_cast<int>(need_integer(j, "j", 1, 64));
        const auto orient = j.contains("orientation")
                                ? static_cast<int>(need_integer(j, "orientation", 0, 3))
                                : 0;
        const RegionKind kindv =
            j.contains("variant") ? variant_kind(j["variant"].get<std::string>(), field) :
                                    RegionKind::Annulus;
        return EventSpec::arms(RegionSpec::annulus({0, 0}, r, R, kindv, orient), jj);
    }
    if (kind == "circuit") {
        const double side = need_number(j, "side", 1e-9, 1e9);
        const double delta = need_number(j, "delta", 1e-9, 0.5);
        return EventSpec::circuit(RegionSpec::rectangle({0, 0}, 0.5 * side, 0.5 * side), delta);
    }
    if (kind == "cell-black") {
        Vec2 site{0, 0};
        if (j.contains("at")) {
            const auto& a = j["at"];
            if (!a.is_array() || a.size() != 2) throw ConfigError(field + ".at", "expected [x,y]");
            site = {a[0].get<double>(), a[1].get<double>()};
        }
        return EventSpec::cell_black(site);
    }
    throw ConfigError(field + ".kind", "unknown event kind (cross|arms|circuit|cell-black)");
}

ExperimentConfig parse_config(const json& config) {
    ExperimentConfig c;
    c.raw = config;
    if (!config.is_object()) throw ConfigError("", "config must be a JSON object");
    {
        const json* f = find_field(config, "experiment");
        if (!f || !f->is_string()) throw ConfigError("experiment", "missing experiment name");
        c.experiment = f->get<std::string>();
        const auto& reg = experiment_registry();
        if (std::find(reg.begin(), reg.end(), c.experiment) == reg.end()) {
            std::string names;
            for (const auto& n : reg) names += (names.empty() ? "" : ", ") + n;
            throw ConfigError("experiment", "unknown experiment; registry: " + names);
        }
    }
    c.master_seed =
        static_cast<std::uint64_t>(need_integer(config, "master_seed", 0, (1LL << 62)));
    c.intensity = need_number(config, "intensity", 1e-9, 1e9);

    if (config.contains("p")) {
        if (config["p"].is_array())
            c.p_values = need_number_list(config, "p", 0.0, 1.0);
        else
            c.p_values = {need_number(config, "p", 0.0, 1.0)};
    }

    const bool nested = c.experiment == "quenched-moments" || c.experiment == "efron-stein";
    if (nested) {
        c.environments = need_integer(config, "budget.K", 2, 1'000'000'000);
        c.colorings = need_integer(config, "budget.M", 2, 1'000'000'000);
    } else {
        c.replicates = need_integer(config, "budget.replicates", 1, 1'000'000'000'000LL);
    }
    c.workers = config.contains("workers")
                    ? static_cast<int>(need_integer(config, "workers", 1, 4096))
                    : 1;
    c.geometry = config.contains("geometry") ? config["geometry"] : json::object();
    return c;
}

namespace {

void push_estimate_row(ResultRecord& rec, const std::vector<std::string>& prefix,
                       const Estimate& e, long long discarded) {
    std::vector<std::string> row = prefix;
    row.push_back(format_double(e.value));
    row.push_back(std::to_string(e.n));
    row.push_back(format_double(e.std_error));
    row.push_back(format_double(e.ci_half_width));
    row.push_back(std::to_string(discarded));
    rec.csv_rows.push_back(std::move(row));
}

McParams base_params(const ExperimentConfig& c, double p) {
    McParams params;
    params.intensity = c.intensity;
    params.p = p;
    params.replicates = c.replicates;
    params.environments = c.environments;
    params.colorings = c.colorings;
    params.workers = c.workers;
    params.stream = SeedPath::root(c.master_seed).child(c.experiment);
    return params;
}

}  // namespace

ResultRecord run_experiment(const ExperimentConfig& c) {
    const auto t0 = std::chrono::steady_clock::now();
    ResultRecord rec;
    rec.experiment = c.experiment;
    rec.config_hash = hash_hex(c.raw);
    const json& g = c.geometry;

    if (c.experiment == "cross-prob") {
        const double l1 = need_number(c.raw, "geometry.lambda1", 1e-9, 1e9);
        const double l2 = need_number(c.raw, "geometry.lambda2", 1e-9, 1e9);
        const EventSpec spec = EventSpec::cross(RegionSpec::rectangle({0, 0}, l1, l2));
        rec.csv_header = {"p", "lambda1", "lambda2", "value", "n", "std_error",
                          "ci_half_width", "discarded"};
        for (std::size_t i = 0; i < c.p_values.size(); ++i) {
            McParams params = base_params(c, c.p_values[i]);
            params.stream = params.stream.child(i);
            const AnnealedResult res = estimate_annealed(spec, params);
            rec.discarded += res.discarded;
            rec.estimates.push_back({"cross_p=" + format_double(c.p_values[i]), res.estimate});
            push_estimate_row(rec,
                              {format_double(c.p_values[i]), format_double(l1), format_double(l2)},
                              res.estimate, res.discarded);
        }
    } else if (c.experiment == "arm-prob") {
        json ev = g;
        ev["kind"] = "arms";
        const EventSpec spec = parse_event(ev, "geometry");
        rec.csv_header = {"p", "r", "R", "j", "value", "n", "std_error", "ci_half_width",
                          "discarded"};
        for (std::size_t i = 0; i < c.p_values.size(); ++i) {
            McParams params = base_params(c, c.p_values[i]);
            params.stream = params.stream.child(i);
            const AnnealedResult res = estimate_annealed(spec, params);
            rec.discarded += res.discarded;
            rec.estimates.push_back({"arms_p=" + format_double(c.p_values[i]), res.estimate});
            push_estimate_row(rec,
                              {format_double(c.p_values[i]), format_double(spec.region.r),
                               format_double(spec.region.R), std::to_string(spec.j)},
                              res.estimate, res.discarded);
        }
    } else if (c.experiment == "quenched-moments") {
        if (!g.contains("event")) throw ConfigError("geometry.event", "missing event");
        const EventSpec spec = parse_event(g["event"], "geometry.event");
        const QuenchedMoments m = estimate_quenched_moments(spec, base_params(c, c.p_values[0]));
        rec.discarded = m.discarded;
        rec.estimates.push_back({"mean_q", m.mean_q});
        rec.estimates.push_back({"second_moment", m.second_moment});
        rec.estimates.push_back({"annealed_sq", m.annealed_sq});
        rec.estimates.push_back({"variance", m.variance});
        rec.csv_header = {"K",        "M",        "mean_q",     "mean_q_se",
                          "second",   "second_se", "annealed_sq", "annealed_sq_se",
                          "variance", "variance_se", "neg_var_flag", "discarded"};
        rec.csv_rows.push_back({std::to_string(m.environments), std::to_string(m.colorings),
                                format_double(m.mean_q.value), format_double(m.mean_q.std_error),
                                format_double(m.second_moment.value),
                                format_double(m.second_moment.std_error),
                                format_double(m.annealed_sq.value),
                                format_double(m.annealed_sq.std_error),
                                format_double(m.variance.value),
                                format_double(m.variance.std_error),
                                m.negative_variance_flagged ? "1" : "0",
                                std::to_string(m.discarded)});
    } else if (c.experiment == "efron-stein") {
        if (!g.contains("inner")) throw ConfigError("geometry.inner", "missing inner event");
        const EventSpec inner = parse_event(g["inner"], "geometry.inner");
        EfronSteinParams params;
        params.intensity = c.intensity;
        params.p = c.p_values[0];
        params.rho = need_number(c.raw, "geometry.rho", 1e-9, 1e9);
        params.environments = c.environments;
        params.colorings = c.colorings;
        params.workers = c.workers;
        params.stream = SeedPath::root(c.master_seed).child(c.experiment);
        const EfronSteinResult res = efron_stein_sides(inner, params);
        rec.discarded = res.discarded;
        rec.estimates.push_back({"lhs_variance", res.lhs});
        rec.estimates.push_back({"rhs_pivotal_sum", res.rhs});
        rec.csv_header = {"K",   "M",      "rho",    "squares",  "lhs",
                          "lhs_se", "rhs", "rhs_se", "discarded"};
        rec.csv_rows.push_back(
            {std::to_string(c.environments), std::to_string(c.colorings),
             format_double(params.rho), std::to_string(res.grid_squares),
             format_double(res.lhs.value), format_double(res.lhs.std_error),
             format_double(res.rhs.value), format_double(res.rhs.std_error),
             std::to_string(res.discarded)});
    } else if (c.experiment == "exponent-fit") {
        json ev = g;
        ev["kind"] = "arms";
        ev["R"] = need_number(c.raw, "geometry.r", 0, 1e9) + 1;  // placeholder for parsing
        const EventSpec family = parse_event(ev, "geometry");
        const std::vector<double> scales = need_number_list(c.raw, "geometry.scales", 1e-9, 1e9);
        const ExponentFit fit = fit_exponent(family, scales, base_params(c, c.p_values[0]));
        rec.discarded = fit.discarded;
        rec.estimates.push_back(
            {"slope", {fit.slope, static_cast<long long>(scales.size()), fit.slope_std_error,
                       1.96 * fit.slope_std_error}});
        rec.csv_header = {"r", "R", "log_alpha", "n", "std_error", "ci_half_width", "discarded"};
        for (std::size_t s = 0; s < scales.size(); ++s) {
            push_estimate_row(
                rec, {format_double(family.region.r), format_double(scales[s])},
                fit.log_probs[s], 0);
        }
    } else if (c.experiment == "theta-scan") {
        const double R = need_number(c.raw, "geometry.R", 1, 1e9);
        rec.csv_header = {"p", "R", "value", "n", "std_error", "ci_half_width", "discarded"};
        for (std::size_t i = 0; i < c.p_values.size(); ++i) {
            McParams params = base_params(c, c.p_values[i]);
            params.stream = params.stream.child(i);
            const AnnealedResult res = estimate_theta(c.p_values[i], R, params);
            rec.discarded += res.discarded;
            rec.estimates.push_back({"theta_p=" + format_double(c.p_values[i]), res.estimate});
            push_estimate_row(rec, {format_double(c.p_values[i]), format_double(R)}, res.estimate,
                              res.discarded);
        }
    } else if (c.experiment == "correlation-length") {
        const double eps0 = need_number(c.raw, "geometry.eps0", 1e-9, 0.5 - 1e-12);
        const std::vector<double> grid = need_number_list(c.raw, "geometry.R_grid", 1, 1e9);
        const double p = c.p_values[0];
        const CorrelationLengthResult res =
            estimate_correlation_length(p, eps0, grid, base_params(c, p));
        rec.discarded = res.discarded;
        rec.estimates.push_back({"correlation_length", res.length});
        rec.estimates.push_back({"crossing_at_length", res.crossing_at_length});
        rec.csv_header = {"p", "R", "crossing", "n", "std_error", "ci_half_width", "discarded"};
        for (const auto& [R, est] : res.scan)
            push_estimate_row(rec, {format_double(p), format_double(R)}, est, 0);
    } else if (c.experiment == "dense-check") {
        const double R = need_number(c.raw, "geometry.R", 1e-9, 1e9);
        const double delta = need_number(c.raw, "geometry.delta", 1e-9, 1 - 1e-12);
        const EventSpec spec =
            EventSpec::dense(RegionSpec::rectangle({0, 0}, R, R), delta);
        const AnnealedResult res = estimate_annealed(spec, base_params(c, c.p_values[0]));
        rec.discarded = res.discarded;
        rec.estimates.push_back({"dense_freq", res.estimate});
        rec.csv_header = {"R", "delta", "value", "n", "std_error", "ci_half_width", "discarded"};
        push_estimate_row(rec, {format_double(R), format_double(delta)}, res.estimate,
                          res.discarded);
    } else {
        throw ConfigError("experiment", "unknown experiment");
    }

    rec.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

json ResultRecord::to_json() const {
    json j;
    j["config_hash"] = config_hash;
    j["experiment"] = experiment;
    j["version"] = version;
    j["discarded"] = discarded;
    j["wall_time_s"] = wall_time_s;
    json ests = json::array();
    for (const auto& item : estimates) {
        ests.push_back({{"name", item.name},
                        {"value", item.estimate.value},
                        {"n", item.estimate.n},
                        {"std_error", item.estimate.std_error},
                        {"ci_half_width", item.estimate.ci_half_width}});
    }
    j["estimates"] = ests;
    return j;
}

std::string ResultRecord::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < csv_header.size(); ++i) {
        if (i) out += ',';
        out += csv_header[i];
    }
    out += '\n';
    for (const auto& row : csv_rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

json dump_complex_json(const json& config) {
    if (!config.contains("window") || !config["window"].is_array() ||
        config["window"].size() != 4)
        throw ConfigError("window", "expected [xmin, ymin, xmax, ymax]");
    const auto& w = config["window"];
    const Window window{w[0].get<double>(), w[1].get<double>(), w[2].get<double>(),
                        w[3].get<double>()};
    const double intensity = need_number(config, "intensity", 1e-9, 1e9);
    const auto seed =
        static_cast<std::uint64_t>(need_integer(config, "master_seed", 0, (1LL << 62)));

    const PointSet ps =
        sample_poisson(window, intensity, SeedPath::root(seed).child("dump-complex"));
    const VoronoiComplex cx = build_complex(ps);

    json out;
    out["window"] = {window.xmin, window.ymin, window.xmax, window.ymax};
    json nuclei = json::array();
    for (const Vec2 p : cx.nuclei) nuclei.push_back({p.x, p.y});
    out["nuclei"] = nuclei;
    json adj = json::array();
    for (std::uint32_t i = 0; i < cx.cell_count(); ++i) {
        json row = json::array();
        for (const std::uint32_t nb : cx.neighbors(i)) row.push_back(nb);
        adj.push_back(row);
    }
    out["adjacency"] = adj;
    json polys = json::array();
    for (std::uint32_t i = 0; i < cx.cell_count(); ++i) {
        json poly = json::array();
        const std::uint32_t base = cx.poly_offsets[i];
        for (int k = 0; k < cx.polygon_size(i); ++k)
            poly.push_back({cx.poly_verts[base + k].x, cx.poly_verts[base + k].y});
        polys.push_back(poly);
    }
    out["polygons"] = polys;
    json flags = json::array();
    for (const std::uint8_t f : cx.boundary_flags) flags.push_back(f != 0);
    out["boundary_flags"] = flags;
    return out;
}

}  // namespace vperc
