#include "snstf/keyrate.hpp"
#include "snstf/phasedemo.hpp"
#include "snstf/recordio.hpp"
#include "snstf/simulate.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace snstf;

std::string resolve_out(const std::string& path) {
    // only the output directory is overridable from the environment
    const char* dir = std::getenv("SNSTF_OUT_DIR");
    if (!dir || path.empty() || path.front() == '/') return path;
    return std::string(dir) + "/" + path;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_file(resolve_out(out_path), text);
    }
}

int cmd_keyrate(const std::string& record_path, const std::string& mode_name,
                const std::string& out_path, double atten_db) {
    const std::string bytes = read_file(record_path);
    const RecordFile rf = parse_record_file(bytes, record_path);

    KeyRateInputs in;
    in.record = rf.record;
    if (rf.source) in.src = *rf.source;
    if (rf.security) in.sec = *rf.security;
    in.mode = mode_name == "finite" ? RateMode::Finite : RateMode::Asymptotic;

    KeyRateReport rep = key_rate(in);
    if (atten_db >= 0.0) rep.plob_bits = key_rate_vs_plob(rep, atten_db).plob_bits;
    emit(out_path, serialize_report(rep, fnv1a_hex(bytes)));
    if (rep.collapsed)
        std::cerr << "note: bound collapse, no extractable key at this confidence\n";
    else if (!rep.positive)
        std::cerr << "note: key rate not positive\n";
    return 0;
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed, bool seed_set,
                 bool use_mc, std::int64_t batch, const std::string& out_path) {
    SimConfig cfg = load_sim_config(config_path);
    if (seed_set) cfg.seed = seed;

    RecordFile rf;
    rf.record = use_mc ? run_monte_carlo(cfg, std::min<std::int64_t>(batch, cfg.n_total))
                       : run_analytic(cfg);
    rf.source = cfg.src;
    rf.security = SecurityParams{};
    emit(out_path, serialize_record(rf));
    return 0;
}

int cmd_scan(std::vector<double> distances, const std::string& config_path,
             const std::string& mode_name, const std::string& out_path) {
    SimConfig base = load_sim_config(config_path);
    std::sort(distances.begin(), distances.end());

    // per-km fiber loss from the configured budget, ultralow-loss default
    double alpha = 0.167;
    const double len = base.link.length_ac_km + base.link.length_bc_km;
    if (len > 0.0) alpha = (base.link.atten_ac_db + base.link.atten_bc_db) / len;

    const RateMode mode =
        mode_name == "asymptotic" ? RateMode::Asymptotic : RateMode::Finite;

    struct Row {
        double dist, loss, r, rbps, plob;
    };
    std::vector<Row> rows(distances.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::size_t i = 0; i < distances.size(); ++i) {
        SimConfig cfg = base;
        cfg.link.length_ac_km = distances[i] / 2.0;
        cfg.link.length_bc_km = distances[i] / 2.0;
        cfg.link.atten_ac_db = alpha * distances[i] / 2.0;
        cfg.link.atten_bc_db = alpha * distances[i] / 2.0;

        KeyRateInputs in;
        in.record = run_analytic(cfg);
        in.src = cfg.src;
        in.mode = mode;
        KeyRateReport rep = key_rate(in);
        const auto cmp = key_rate_vs_plob(rep, alpha * distances[i]);
        rows[i] = {distances[i], alpha * distances[i],
                   rep.collapsed ? 0.0 : rep.r_per_pulse,
                   rep.collapsed ? 0.0 : rep.r_bps, cmp.plob_bits};
    }

    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows)
        cells.push_back({format_full(r.dist), format_full(r.loss), format_full(r.r),
                         format_full(r.rbps), format_full(r.plob)});
    emit(out_path,
         to_csv({"distance_km", "loss_db", "r_per_pulse", "r_bps", "plob_bits"}, cells));
    return 0;
}

int cmd_phase_demo(const std::string& drift_path, const std::string& out_path) {
    const DriftConfig cfg =
        drift_path.empty() ? DriftConfig{} : load_drift_config(drift_path);
    const PhaseDemoResult res = run_phase_demo(cfg);

    std::vector<std::vector<std::string>> cells;
    for (std::size_t i = 0; i < res.t_s.size(); ++i)
        cells.push_back({format_full(res.t_s[i]), format_full(res.free_resid_deg[i]),
                         format_full(res.simple_resid_deg[i]),
                         format_full(res.fine_resid_deg[i])});
    emit(out_path, to_csv({"t_s", "free_deg", "simple_deg", "fine_deg"}, cells));

    std::cout << "std_free_deg = " << format_full(res.std_free) << "\n"
              << "std_simple_deg = " << format_full(res.std_simple) << "\n"
              << "std_fine_deg = " << format_full(res.std_fine) << "\n"
              << "reduction = " << format_full(res.reduction) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SNS-TF-QKD post-processing toolkit"};
    app.require_subcommand(1);

    std::string record_path, mode = "asymptotic", out_path;
    double atten_db = -1.0;
    auto* kr = app.add_subcommand("keyrate", "key rate from a record file");
    kr->add_option("record", record_path, "record file")->required();
    kr->add_option("--mode", mode, "asymptotic|finite")
        ->check(CLI::IsMember({"asymptotic", "finite"}));
    kr->add_option("--out", out_path, "report path (stdout when omitted)");
    kr->add_option("--atten-db", atten_db, "total channel loss for the PLOB column");

    std::string sim_config, sim_out;
    std::uint64_t seed = 1;
    bool use_mc = false, use_analytic = false;
    std::int64_t batch = 1 << 20;
    auto* sim = app.add_subcommand("simulate", "generate a record from a channel config");
    sim->add_option("config", sim_config, "simulation config")->required();
    auto* seed_opt = sim->add_option("--seed", seed, "sampler seed");
    sim->add_flag("--mc", use_mc, "Monte-Carlo sampling");
    sim->add_flag("--analytic", use_analytic, "expected counts (default)");
    sim->add_option("--batch", batch, "Monte-Carlo batch size");
    sim->add_option("--out", sim_out, "record path (stdout when omitted)");

    std::vector<double> distances;
    std::string scan_config, scan_out, scan_mode = "finite";
    auto* scan = app.add_subcommand("scan", "key rate versus distance CSV");
    scan->add_option("--distances", distances, "distances in km")
        ->required()
        ->delimiter(',');
    scan->add_option("--config", scan_config, "base simulation config")->required();
    scan->add_option("--mode", scan_mode, "asymptotic|finite")
        ->check(CLI::IsMember({"asymptotic", "finite"}));
    scan->add_option("--out", scan_out, "CSV path (stdout when omitted)");

    std::string drift_path, demo_out;
    auto* demo = app.add_subcommand("phase-demo", "dual-band compensation demo");
    demo->add_option("--drift-config", drift_path, "drift scenario config");
    demo->add_option("--out", demo_out, "trace CSV path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (kr->parsed()) return cmd_keyrate(record_path, mode, out_path, atten_db);
        if (sim->parsed()) {
            if (use_mc && use_analytic)
                throw std::invalid_argument("choose one of --mc / --analytic");
            return cmd_simulate(sim_config, seed, seed_opt->count() > 0, use_mc, batch,
                                sim_out);
        }
        if (scan->parsed()) return cmd_scan(distances, scan_config, scan_mode, scan_out);
        if (demo->parsed()) return cmd_phase_demo(drift_path, demo_out);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
