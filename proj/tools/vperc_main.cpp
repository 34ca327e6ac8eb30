// vperc: Voronoi percolation experiment runner.
//   vperc run <config.json> [--out prefix]
//   vperc verify --suite fast|full
//   vperc dump-complex <config.json> [--out file]

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "vperc/acceptance.hpp"
#include "vperc/experiments.hpp"

namespace {

using nlohmann::json;

int emit_error(int code, const std::string& kind, const std::string& message,
               const std::string& field = "") {
    json err;
    err["error"]["code"] = code;
    err["error"]["kind"] = kind;
    err["error"]["message"] = message;
    if (!field.empty()) err["error"]["field"] = field;
    std::cout << err.dump() << "\n";
    return code;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw vperc::ConfigError(path, "cannot open config file");
    json j;
    in >> j;
    return j;
}

int cmd_run(const std::string& config_path, std::string out_prefix) {
    const json raw = load_json(config_path);
    vperc::ExperimentConfig config = vperc::parse_config(raw);
    config.workers = vperc::worker_count_with_env(config.workers);

    const vperc::ResultRecord rec = vperc::run_experiment(config);

    if (out_prefix.empty()) {
        out_prefix = config_path;
        const auto dot = out_prefix.rfind(".json");
        if (dot != std::string::npos) out_prefix.resize(dot);
        out_prefix += ".result";
    }
    {
        std::ofstream jf(out_prefix + ".json");
        jf << rec.to_json().dump(2) << "\n";
        std::ofstream cf(out_prefix + ".csv");
        cf << rec.to_csv();
    }
    std::cout << rec.experiment << " done: " << rec.estimates.size() << " estimate(s), "
              << rec.discarded << " discarded replicate(s), " << vperc::format_double(rec.wall_time_s)
              << " s -> " << out_prefix << ".{json,csv}\n";
    return 0;
}

int cmd_verify(const std::string& suite, int workers) {
    if (suite != "fast" && suite != "full")
        return emit_error(2, "config", "suite must be 'fast' or 'full'", "suite");
    const vperc::accept::SuiteResult res =
        vperc::accept::run_suite(suite == "full", workers, std::cout);
    return res.ok() ? 0 : 4;
}

int cmd_dump(const std::string& config_path, const std::string& out) {
    const json config = load_json(config_path);
    const json dump = vperc::dump_complex_json(config);
    if (out.empty()) {
        std::cout << dump.dump() << "\n";
    } else {
        std::ofstream f(out);
        f << dump.dump() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Critical planar Voronoi percolation simulator"};
    app.require_subcommand(1);

    std::string config_path, out, suite;
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;

    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "experiment config JSON")->required();
    run->add_option("--out", out, "output prefix (default: <config>.result)");

    CLI::App* verify = app.add_subcommand("verify", "run the acceptance experiments");
    verify->add_option("--suite", suite, "fast|full")->required();
    verify->add_option("--workers", workers, "worker threads");

    CLI::App* dump = app.add_subcommand("dump-complex", "geometry debug dump");
    dump->add_option("config", config_path, "dump config JSON")->required();
    dump->add_option("--out", out, "output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out);
        if (verify->parsed()) return cmd_verify(suite, vperc::worker_count_with_env(workers));
        if (dump->parsed()) return cmd_dump(config_path, out);
    } catch (const vperc::ConfigError& e) {
        return emit_error(2, "config", e.what(), e.field);
    } catch (const vperc::ParameterError& e) {
        return emit_error(2, "parameter", e.what());
    } catch (const nlohmann::json::exception& e) {
        return emit_error(2, "config", e.what());
    } catch (const vperc::CapacityError& e) {
        return emit_error(3, "capacity", e.what());
    } catch (const vperc::SafeZoneError& e) {
        return emit_error(3, "safe-zone", e.what());
    } catch (const vperc::DegenerateGeometryError& e) {
        return emit_error(3, "geometry", e.what());
    } catch (const vperc::InsufficientSamplesError& e) {
        return emit_error(3, "insufficient-samples", e.what());
    } catch (const vperc::NotFoundError& e) {
        return emit_error(3, "not-found", e.what());
    } catch (const std::exception& e) {
        return emit_error(3, "runtime", e.what());
    }
    return 0;
}
