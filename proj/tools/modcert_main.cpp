// modcert command line: sampling, scoring, certifying and simulating the
// modularity bounds for configuration-model random graphs.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "modcert/csv.hpp"
#include "modcert/degree_general.hpp"
#include "modcert/graph.hpp"
#include "modcert/modularity.hpp"
#include "modcert/ode_lower.hpp"
#include "modcert/phase_sim.hpp"
#include "modcert/upper_bound.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitFailedCertificate = 3;

std::uint64_t resolve_seed(const std::string& seed_arg) {
    if (seed_arg == "auto") {
        const auto now = std::chrono::steady_clock::now().time_since_epoch().count();
        return modcert::Rng::mix(static_cast<std::uint64_t>(now), 0xC0FFEE);
    }
    return std::stoull(seed_arg);
}

int default_jobs() {
    if (const char* env = std::getenv("MODCERT_JOBS")) {
        const int j = std::atoi(env);
        if (j > 0) return j;
    }
    return 1;
}

void emit(const json& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open output file: " + out_path);
        out << payload.dump(2) << "\n";
    }
}

modcert::DegreeSequence sequence_from_flags(const std::string& sequence, const std::string& profile,
                                            std::int64_t n) {
    if (!sequence.empty()) return modcert::DegreeSequence::parse(sequence);
    if (profile.empty()) throw std::invalid_argument("need --sequence or --profile");
    if (n <= 0) throw std::invalid_argument("--profile requires --n");
    return modcert::DegreeSequence::from_profile(modcert::DegreeProfile::parse(profile).probs, n);
}

modcert::MultiGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open graph file: " + path);
    return modcert::read_edge_list(in);
}

json block_report_json(const modcert::ModularityReport& report) {
    json blocks = json::array();
    for (const auto& b : report.blocks)
        blocks.push_back({{"size", b.size}, {"e", b.e_within}, {"vol", b.volume}, {"q_r", b.q_r}});
    return {{"q", report.q}, {"blocks", blocks}};
}

// Runs `trials` jobs across `jobs` threads; results land in submission order.
template <typename Fn>
auto run_trials(int trials, int jobs, Fn&& fn) {
    using Result = decltype(fn(0));
    std::vector<Result> results(trials);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= trials) return;
            results[i] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::max(1, std::min(jobs, trials));
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return results;
}

json phase_summary_json(const modcert::PhaseSimResult& r) {
    return {
        {"n", r.n},
        {"eps", r.eps},
        {"seed", r.seed},
        {"phase0", {{"edges", r.phase0_edges}}},
        {"phase1",
         {{"x0", r.x0_end}, {"x1", r.x1_end}, {"x23", r.x23_end}, {"a", r.a_end}, {"steps", r.t1_steps}, {"h_end", r.h_end}}},
        {"phase2",
         {{"z0", r.z0_end}, {"z1", r.z1_end}, {"steps", r.t2_steps}, {"absorbed", r.absorbed2_frac}}},
        {"phase3",
         {{"w0", r.w_end[0]}, {"w1", r.w_end[1]}, {"w2", r.w_end[2]}, {"w3", r.w_end[3]}, {"steps", r.t3_steps}}},
        {"c3", {{"v3", r.v3}, {"e3", r.e3}, {"q_r", r.qr3}}},
        {"cbar3",
         {{"v", r.vbar3},
          {"e", r.ebar3},
          {"q_r", r.qrbar3},
          {"absorbed", r.closure_absorbed},
          {"guard_hit", r.cherry_guard_hit},
          {"within_4x", r.cbar_within_4x}}},
        {"assembled",
         {{"q", r.q},
          {"blocks", r.block_count},
          {"blocks_outside_window", r.blocks_outside_window},
          {"leftover_blocks", r.leftover_blocks},
          {"min_big_block", r.min_big_block},
          {"max_big_block", r.max_big_block}}},
    };
}

void write_trajectory_csv(const modcert::PhaseSimResult& r, bool with_ode, const std::string& path) {
    modcert::CsvTable table;
    table.header = {"step", "X0", "X1", "X23", "A", "H", "Z0", "Z1", "W0", "W1", "W2", "W3"};
    if (with_ode)
        for (const char* c : {"x0", "x1", "x2", "a", "h", "z0", "z1", "w0", "w1", "w2", "w3"})
            table.header.push_back(std::string("pred_") + c);
    const double n = static_cast<double>(r.n);
    const auto p1 = modcert::phase1_of(r.eps);
    const auto p2 = modcert::t2_of(r.eps);
    const auto p3 = modcert::phase3_of(r.eps);
    auto add_row = [&](double step_frac, double x0, double x1, double x23, double a, double h, double z0,
                       double z1, const std::array<double, 4>& w, int phase, double t_local) {
        std::vector<std::string> row{
            modcert::csv_format_double(step_frac * n), modcert::csv_format_double(x0),
            modcert::csv_format_double(x1),            modcert::csv_format_double(x23),
            modcert::csv_format_double(a),             modcert::csv_format_double(h),
            modcert::csv_format_double(z0),            modcert::csv_format_double(z1),
            modcert::csv_format_double(w[0]),          modcert::csv_format_double(w[1]),
            modcert::csv_format_double(w[2]),          modcert::csv_format_double(w[3])};
        if (with_ode) {
            const double eps = r.eps;
            const double t1c = std::min(t_local, p1.t1);
            const double t2c = std::min(t_local, p2.t2);
            const double t3c = std::min(t_local, p3.t3);
            const double pred_x0 = phase >= 1 ? modcert::phase1_x0_at(eps, phase == 1 ? t1c : p1.t1)
                                              : 1.0 - modcert::phase0_x_at(t_local);
            const double pred_x1 = phase >= 1 ? modcert::phase1_x1_at(eps, phase == 1 ? t1c : p1.t1) : 0.0;
            const double pred_x2 = phase >= 1 ? modcert::phase1_x2_at(eps, phase == 1 ? t1c : p1.t1) : 0.0;
            const double pred_a = phase >= 1 ? modcert::phase1_a_at(eps, phase == 1 ? t1c : p1.t1) : 0.0;
            const double pred_h = phase >= 1 ? modcert::phase1_h_at(eps, phase == 1 ? t1c : p1.t1) : 0.0;
            const double pred_z0 = phase >= 2 ? modcert::phase2_z0_at(eps, phase == 2 ? t2c : p2.t2) : 0.0;
            const double pred_z1 =
                phase >= 2 ? (phase == 2 ? t2c - pred_z0 : p2.z1) : 0.0;
            std::array<double, 4> pred_w{};
            for (int i = 0; i < 4; ++i)
                pred_w[i] = phase >= 3 ? modcert::phase3_w_at(eps, phase == 3 ? t3c : p3.t3, i)
                                       : (i == 0 ? pred_x0 : 0.0);
            for (double v : {pred_x0, pred_x1, pred_x2, pred_a, pred_h, pred_z0, pred_z1, pred_w[0],
                             pred_w[1], pred_w[2], pred_w[3]})
                row.push_back(modcert::csv_format_double(v));
        }
        table.rows.push_back(std::move(row));
    };
    for (const auto& p : r.traj0)
        add_row(p[0], 1.0 - p[1], 0, 0, 0, 0, 0, 0, {1.0 - p[1], 0, 0, 0}, 0, p[0]);
    for (const auto& p : r.traj1)
        add_row(p[0], p[1], p[2], p[3], p[4], p[5], 0, 0, {p[1], 0, 0, 0}, 1, p[0]);
    for (const auto& p : r.traj2)
        add_row(p[0], r.x0_end, r.x1_end, r.x23_end, r.a_end, 0, p[1], p[2],
                {r.x0_end, 0, 0, 0}, 2, p[0]);
    for (const auto& p : r.traj3)
        add_row(p[0], r.x0_end, r.x1_end, r.x23_end, r.a_end, 0, r.z0_end, r.z1_end,
                {p[1], p[2], p[3], p[4]}, 3, p[0]);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open trajectory file: " + path);
    table.write(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modularity bound toolkit for configuration-model random graphs"};
    app.require_subcommand(1);

    std::string seed_arg = "auto";
    std::string out_path;
    app.add_option("--out", out_path, "write the JSON result here instead of stdout");

    // --- sample ---
    auto* sample = app.add_subcommand("sample", "sample a configuration-model multigraph");
    std::string sample_sequence, sample_profile, sample_graph_out;
    std::int64_t sample_n = 0;
    bool sample_simple_flag = false;
    int sample_retries = 1000;
    sample->add_option("--sequence", sample_sequence, "degree sequence, e.g. 3:12");
    sample->add_option("--profile", sample_profile, "degree probabilities, e.g. 1:0.5,3:0.5");
    sample->add_option("--n", sample_n, "vertex count (required with --profile)");
    sample->add_option("--seed", seed_arg, "64-bit seed or 'auto'");
    sample->add_flag("--simple", sample_simple_flag, "reject until the sample is a simple graph");
    sample->add_option("--max-retries", sample_retries, "rejection budget for --simple");
    sample->add_option("--graph-out", sample_graph_out, "edge-list output path")->required();

    // --- score ---
    auto* score = app.add_subcommand("score", "modularity report of a partition");
    std::string score_graph, score_partition;
    score->add_option("--graph", score_graph, "edge-list file")->required();
    score->add_option("--partition", score_partition, "partition file (one block per line)")->required();

    // --- brute ---
    auto* brute = app.add_subcommand("brute", "exhaustive modularity maximum (small n)");
    std::string brute_graph;
    int brute_limit = 10;
    brute->add_option("--graph", brute_graph, "edge-list file")->required();
    brute->add_option("--limit", brute_limit, "maximum n accepted");

    // --- certify-lower ---
    auto* lower = app.add_subcommand("certify-lower", "phased-exploration lower bound certificate");
    double lower_lo = 1e-4, lower_hi = 0.8745, lower_tol = 1e-7;
    double lower_trace_eps = -1.0;
    std::string lower_trace_out = "trace.csv";
    lower->add_option("--lo", lower_lo, "bracket lower end");
    lower->add_option("--hi", lower_hi, "bracket upper end");
    lower->add_option("--tol", lower_tol, "golden-section tolerance");
    lower->add_option("--trace", lower_trace_eps, "emit CSV of (t,x0,x1,x2,a,h) for this eps");
    lower->add_option("--trace-out", lower_trace_out, "trace CSV path");

    // --- certify-upper ---
    auto* upper = app.add_subcommand("certify-upper", "first-moment upper bound certificate");
    double upper_grid = 1e-4, upper_target = 0.789998;
    std::string upper_csv;
    upper->add_option("--grid-step", upper_grid, "certification grid step (<= 1e-4)");
    upper->add_option("--target", upper_target, "relative-modularity target");
    upper->add_option("--csv", upper_csv, "emit (eps, g) grid CSV here");

    // --- simulate-phases ---
    auto* sim = app.add_subcommand("simulate-phases", "run phases 0-3 on sampled 3-regular graphs");
    std::int64_t sim_n = 200000;
    double sim_eps = 0.037562;
    int sim_trials = 1, sim_jobs = default_jobs();
    std::string sim_traj;
    sim->add_option("--n", sim_n, "vertex count");
    sim->add_option("--eps", sim_eps, "phase-0 exploration fraction");
    sim->add_option("--seed", seed_arg, "64-bit seed or 'auto'");
    sim->add_option("--trials", sim_trials, "independent seeded trials");
    sim->add_option("--jobs", sim_jobs, "worker threads (default MODCERT_JOBS or 1)");
    sim->add_option("--trajectory", sim_traj, "write first trial's trajectory CSV here");

    // --- subcritical-c ---
    auto* subc = app.add_subcommand("subcritical-c", "subcritical constant: series and Monte Carlo");
    std::string subc_profile, subc_csv;
    int subc_tmax = 400, subc_trials = 0;
    std::int64_t subc_n = 100000;
    subc->add_option("--profile", subc_profile, "degree probabilities")->required();
    subc->add_option("--t-max", subc_tmax, "series truncation");
    subc->add_option("--trials", subc_trials, "Monte Carlo trials (0 = series only)");
    subc->add_option("--n", subc_n, "Monte Carlo graph size");
    subc->add_option("--seed", seed_arg, "64-bit seed or 'auto'");
    subc->add_option("--csv", subc_csv, "write per-trial q values here");

    // --- supercritical ---
    auto* superc = app.add_subcommand("supercritical", "supercritical S-chain pipeline");
    std::string superc_profile;
    std::int64_t superc_n = 100000;
    std::vector<double> superc_eps{0.002, 0.005, 0.01};
    std::vector<int> superc_ell{4, 6, 8};
    superc->add_option("--profile", superc_profile, "degree probabilities")->required();
    superc->add_option("--n", superc_n, "vertex count");
    superc->add_option("--eps-prime", superc_eps, "exploration fractions (grid)");
    superc->add_option("--ell", superc_ell, "chain length caps (grid, even)");
    superc->add_option("--seed", seed_arg, "64-bit seed or 'auto'");

    // --- urns ---
    auto* urns = app.add_subcommand("urns", "two-slot urn process simulation");
    std::int64_t urns_a = 50000, urns_b = 30000;
    urns->add_option("--a-count", urns_a, "number of two-slot urns")->required();
    urns->add_option("--b-count", urns_b, "2*b balls are thrown")->required();
    urns->add_option("--seed", seed_arg, "64-bit seed or 'auto'");

    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints usage or the error message
        return e.get_exit_code() == 0 ? kExitOk : kExitBadInput;
    }

    try {
        const std::uint64_t seed = resolve_seed(seed_arg);

        if (*sample) {
            const auto seq = sequence_from_flags(sample_sequence, sample_profile, sample_n);
            const auto g = sample_simple_flag ? modcert::sample_simple(seq, seed, sample_retries)
                                              : modcert::sample_configuration(seq, seed);
            std::ofstream gout(sample_graph_out);
            if (!gout) throw std::runtime_error("cannot open " + sample_graph_out);
            modcert::write_edge_list(g, gout);
            emit({{"command", "sample"},
                  {"seed", seed},
                  {"n", g.n},
                  {"m", g.edge_count()},
                  {"simple", sample_simple_flag},
                  {"graph_out", sample_graph_out}},
                 out_path);
        } else if (*score) {
            const auto g = load_graph(score_graph);
            std::ifstream pin(score_partition);
            if (!pin) throw std::invalid_argument("cannot open partition file: " + score_partition);
            const auto partition = modcert::read_partition(pin);
            auto payload = block_report_json(modcert::modularity_report(g, partition));
            payload["command"] = "score";
            payload["graph"] = score_graph;
            payload["partition"] = score_partition;
            emit(payload, out_path);
        } else if (*brute) {
            const auto g = load_graph(brute_graph);
            const auto res = modcert::brute_force_qstar(g, brute_limit);
            emit({{"command", "brute"},
                  {"graph", brute_graph},
                  {"qstar", res.qstar},
                  {"argmax", res.argmax.blocks}},
                 out_path);
        } else if (*lower) {
            const auto cert = modcert::lower_certificate(lower_lo, lower_hi, lower_tol);
            if (lower_trace_eps > 0.0) {
                modcert::CsvTable table;
                table.header = {"t", "x0", "x1", "x2", "a", "h"};
                const double t1 = modcert::phase1_t1_of(lower_trace_eps);
                for (int i = 0; i <= 1000; ++i) {
                    const double t = t1 * static_cast<double>(i) / 1000.0;
                    table.rows.push_back({modcert::csv_format_double(t),
                                          modcert::csv_format_double(modcert::phase1_x0_at(lower_trace_eps, t)),
                                          modcert::csv_format_double(modcert::phase1_x1_at(lower_trace_eps, t)),
                                          modcert::csv_format_double(modcert::phase1_x2_at(lower_trace_eps, t)),
                                          modcert::csv_format_double(modcert::phase1_a_at(lower_trace_eps, t)),
                                          modcert::csv_format_double(modcert::phase1_h_at(lower_trace_eps, t))});
                }
                std::ofstream tout(lower_trace_out);
                if (!tout) throw std::runtime_error("cannot open " + lower_trace_out);
                table.write(tout);
            }
            emit({{"command", "certify-lower"},
                  {"config", {{"lo", lower_lo}, {"hi", lower_hi}, {"tol", lower_tol}}},
                  {"eps_star", cert.eps_star},
                  {"qr_star", cert.qr_star},
                  {"v3_star", cert.v3_star},
                  {"bound", cert.bound},
                  {"guards",
                   {{"eps_below_seven_eighths", cert.eps_below_seven_eighths},
                    {"cherry_budget_ok", cert.cherry_budget_ok},
                    {"reported_rounding_ok", cert.reported_rounding_ok}}},
                  {"valid", cert.valid}},
                 out_path);
            return cert.valid ? kExitOk : kExitFailedCertificate;
        } else if (*upper) {
            modcert::UpperParams params;
            params.target = upper_target;
            const auto cert = modcert::certify_upper(upper_grid, params);
            if (!upper_csv.empty()) {
                modcert::CsvTable table;
                table.header = {"eps", "g"};
                for (double x = cert.eps0; x <= 0.5; x += 1e-3)
                    table.rows.push_back({modcert::csv_format_double(x),
                                          modcert::csv_format_double(modcert::g_of(x, params))});
                std::ofstream gout(upper_csv);
                if (!gout) throw std::runtime_error("cannot open " + upper_csv);
                table.write(gout);
            }
            emit({{"command", "certify-upper"},
                  {"config", {{"grid_step", upper_grid}, {"target", upper_target}}},
                  {"target", cert.target},
                  {"density_slack", cert.density_slack},
                  {"extra_edge_rate", cert.extra_edge_rate},
                  {"tree_growth_C", cert.tree_growth_c},
                  {"eps0", cert.eps0},
                  {"max_g", cert.max_g},
                  {"gprime_sign_changes", cert.gprime_sign_changes},
                  {"small_set_sums", {cert.small_set_sums.first, cert.small_set_sums.second}},
                  {"reference_n", cert.reference_n},
                  {"guards",
                   {{"small_set_sums_decreasing", cert.small_set_sums_decreasing},
                    {"printed_constants_match", cert.printed_constants_match}}},
                  {"valid", cert.valid},
                  {"reason", cert.reason}},
                 out_path);
            return cert.valid ? kExitOk : kExitFailedCertificate;
        } else if (*sim) {
            auto results = run_trials(sim_trials, sim_jobs, [&](int i) {
                modcert::PhaseSimOptions opts;
                opts.n = sim_n;
                opts.eps = sim_eps;
                opts.seed = modcert::Rng::mix(seed, static_cast<std::uint64_t>(i));
                opts.record_trajectories = (i == 0 && !sim_traj.empty());
                return modcert::run_phase_simulation(opts);
            });
            if (!sim_traj.empty()) write_trajectory_csv(results[0], true, sim_traj);
            json trials = json::array();
            double q_sum = 0.0;
            bool all_qr_above = true;
            for (const auto& r : results) {
                trials.push_back(phase_summary_json(r));
                q_sum += r.q;
                all_qr_above = all_qr_above && r.qrbar3 > 2.0 / 3.0;
            }
            const auto cert = modcert::lower_certificate();
            emit({{"command", "simulate-phases"},
                  {"config",
                   {{"n", sim_n}, {"eps", sim_eps}, {"seed", seed}, {"trials", sim_trials}, {"jobs", sim_jobs}}},
                  {"mean_q", q_sum / static_cast<double>(sim_trials)},
                  {"all_qrbar_above_two_thirds", all_qr_above},
                  {"certificate_comparison",
                   {{"asymptotic_bound", cert.bound}, {"eps_star", cert.eps_star}}},
                  {"trials", trials}},
                 out_path);
        } else if (*subc) {
            const auto profile = modcert::DegreeProfile::parse(subc_profile);
            const auto series = modcert::subcritical_constant(profile, subc_tmax);
            json payload{{"command", "subcritical-c"},
                         {"config",
                          {{"profile", subc_profile}, {"t_max", subc_tmax}, {"n", subc_n},
                           {"trials", subc_trials}, {"seed", seed}}},
                         {"c_series", series.c},
                         {"tail_bound", series.tail_bound}};
            if (subc_trials > 0) {
                const auto emp = modcert::subcritical_empirical(profile, subc_n, subc_trials, seed);
                payload["c_hat"] = emp.c_hat;
                payload["relative_difference"] = std::abs(emp.c_hat - series.c) / series.c;
                payload["per_trial"] = emp.per_trial;
                if (!subc_csv.empty()) {
                    // Per-trial modularity of the component partition (q = 1 - c/(Mn)).
                    modcert::CsvTable table;
                    table.header = {"trial", "q", "c_hat"};
                    const double mn = profile.m_value() * static_cast<double>(subc_n);
                    for (std::size_t i = 0; i < emp.per_trial.size(); ++i)
                        table.rows.push_back({std::to_string(i),
                                              modcert::csv_format_double(1.0 - emp.per_trial[i] / mn),
                                              modcert::csv_format_double(emp.per_trial[i])});
                    std::ofstream cout_(subc_csv);
                    if (!cout_) throw std::runtime_error("cannot open " + subc_csv);
                    table.write(cout_);
                }
            }
            emit(payload, out_path);
        } else if (*superc) {
            const auto profile = modcert::DegreeProfile::parse(superc_profile);
            json runs = json::array();
            bool any_margin = false;
            for (double ep : superc_eps)
                for (int ell : superc_ell) {
                    const auto run = modcert::supercritical_pipeline(profile, superc_n, ep, ell, seed);
                    any_margin = any_margin ||
                                 (run.q_achieved > run.baseline && run.density_margin > 0.0);
                    runs.push_back({{"eps_prime", run.eps_prime},
                                    {"ell", run.ell},
                                    {"s_size", run.s_size},
                                    {"aprime_size", run.aprime_size},
                                    {"amax_size", run.amax_size},
                                    {"e_amax", run.e_amax},
                                    {"density_margin", run.density_margin},
                                    {"complement_components", run.complement_components},
                                    {"q_achieved", run.q_achieved},
                                    {"baseline", run.baseline},
                                    {"mu_hat", run.mu_hat},
                                    {"m_hat", run.m_hat}});
                }
            emit({{"command", "supercritical"},
                  {"config", {{"profile", superc_profile}, {"n", superc_n}, {"seed", seed}}},
                  {"any_run_beats_baseline_with_margin", any_margin},
                  {"runs", runs}},
                 out_path);
        } else if (*urns) {
            const auto filled = modcert::simulate_urns(urns_a, urns_b, seed);
            const double expected =
                modcert::urn_fraction(static_cast<double>(urns_a), static_cast<double>(urns_b));
            emit({{"command", "urns"},
                  {"config", {{"a_count", urns_a}, {"b_count", urns_b}, {"seed", seed}}},
                  {"filled", filled},
                  {"expected", expected},
                  {"relative_error",
                   std::abs(static_cast<double>(filled) - expected) / std::max(1.0, expected)}},
                 out_path);
        }
        return kExitOk;
    } catch (const std::invalid_argument& err) {
        std::cerr << "invalid input: " << err.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitBadInput;
    }
}
