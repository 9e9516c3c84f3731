#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ichea/engine.hpp"
#include "ichea/nqueen.hpp"

using json = nlohmann::ordered_json;
using namespace ichea;
namespace fs = std::filesystem;

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitNoSolution = 1;
constexpr int kExitUsage = 2;

std::string format_cost(double value) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << value;
    return out.str();
}

fs::path data_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("ICHEA_DATA_DIR")) return env;
    return "data";
}

/// Locates `name.crs` / `name.stu`: a bare name resolves inside the data
/// directory, a value with a path separator is used as a file prefix.
struct InstancePaths {
    fs::path crs;
    fs::path stu;
    std::string name;
};

InstancePaths resolve_instance(const std::string& spec, const fs::path& root) {
    InstancePaths p;
    const fs::path base =
        spec.find('/') == std::string::npos ? root / spec : fs::path(spec);
    p.crs = base;
    p.crs += ".crs";
    p.stu = base;
    p.stu += ".stu";
    p.name = base.filename().string();
    return p;
}

int metadata_slots(const fs::path& root, const std::string& name) {
    const fs::path meta = root / "instances.txt";
    if (!fs::exists(meta)) return 0;
    for (const auto& entry : read_instance_metadata(meta))
        if (entry.name == name) return entry.slots;
    return 0;
}

struct LoadedInstance {
    Instance inst;
    ConflictMatrix cm;
};

LoadedInstance load_instance(const std::string& spec, const std::string& data_flag, int slots) {
    const fs::path root = data_dir(data_flag);
    const InstancePaths paths = resolve_instance(spec, root);
    if (!fs::exists(paths.crs) || !fs::exists(paths.stu))
        throw std::runtime_error("instance files not found: " + paths.crs.string() + " / " +
                                 paths.stu.string());
    int t = slots;
    if (t <= 0) t = metadata_slots(root, paths.name);
    if (t <= 0)
        throw std::runtime_error("no timeslot count: pass --slots or list '" + paths.name +
                                 "' in " + (root / "instances.txt").string());
    LoadedInstance loaded;
    loaded.inst = parse_instance(paths.crs, paths.stu, t, &std::cerr);
    loaded.inst.name = paths.name;
    loaded.cm = build_conflict_matrix(loaded.inst);
    return loaded;
}

EngineMode parse_mode(const std::string& mode) {
    if (mode == "ichea") return EngineMode::Ichea;
    if (mode == "iichea") return EngineMode::Iichea;
    throw std::runtime_error("unknown mode '" + mode + "' (expected ichea or iichea)");
}

FitnessMode parse_fitness(const std::string& fitness) {
    if (fitness == "weighted") return FitnessMode::Weighted;
    if (fitness == "generic") return FitnessMode::Generic;
    throw std::runtime_error("unknown fitness mode '" + fitness +
                             "' (expected weighted or generic)");
}

/// Flat `key = value` configuration file mirroring the engine parameters;
/// command-line flags override anything set here.
void apply_config_file(EngineConfig& config, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        try {
            if (key == "population_size") config.population_size = std::stoi(value);
            else if (key == "optimize_generations") config.optimize_generations = std::stoi(value);
            else if (key == "degree_of_influence") config.degree_of_influence = std::stoi(value);
            else if (key == "community_size") config.community_size = std::stoi(value);
            else if (key == "total_communities") config.total_communities = std::stoi(value);
            else if (key == "stagnant_generations") config.stagnant_generations = std::stoi(value);
            else if (key == "clone_constant") config.clone_constant = std::stoi(value);
            else if (key == "history_depth") config.history_depth = std::stoi(value);
            else if (key == "backtrack_stagnation") config.backtrack_stagnation = std::stoi(value);
            else if (key == "tabu_history") config.tabu_history = std::stoi(value);
            else if (key == "increment_fraction") config.increment_fraction = std::stod(value);
            else if (key == "selection_rho") config.selection_rho = std::stod(value);
            else if (key == "seed") config.seed = std::stoull(value);
            else if (key == "mode") config.mode = parse_mode(value);
            else if (key == "fitness_mode") config.fitness_mode = parse_fitness(value);
            else throw std::runtime_error("unknown key '" + key + "'");
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " +
                                     e.what());
        }
    }
}

Timetable timetable_from_genes(const std::vector<ConstraintAssignment>& genes, int exams,
                               int slots) {
    Timetable tt(exams, slots);
    for (const auto& g : genes) tt.assign(g.constraint, g.value);
    return tt;
}

json histogram_json(const PreferenceHistogram& h) {
    json out = json::object();
    for (std::size_t d = 0; d < h.counts.size(); ++d)
        out["l" + std::to_string(d)] = h.counts[d];
    out["conflicting_pairs"] = h.total_constraints;
    return out;
}

json run_summary(const RunResult& result, const std::string& instance,
                 const EngineConfig& config, const std::string& mode,
                 const std::string& fitness) {
    json summary;
    summary["instance"] = instance;
    summary["mode"] = mode;
    summary["fitness"] = fitness;
    summary["seed"] = config.seed;
    summary["feasible"] = result.success;
    summary["cost"] = format_cost(result.best_cost_display);
    summary["generations"] = result.generations;
    summary["assigned"] = result.best_genes.size();
    json trace = json::array();
    for (const auto& [generation, cost] : result.cost_trace)
        trace.push_back({generation, format_cost(cost)});
    summary["cost_trace"] = trace;
    json increments = json::array();
    for (const auto& stats : result.increments) {
        increments.push_back({{"increment", stats.increment},
                              {"generations", stats.generations},
                              {"migrations", stats.migrations},
                              {"first_feasible_generation", stats.first_feasible_generation}});
    }
    summary["increments"] = increments;
    if (result.has_histogram) summary["histogram"] = histogram_json(result.histogram);
    return summary;
}

struct SolveOptions {
    std::string instance;
    std::string data;
    std::string config_file;
    std::string mode = "iichea";
    std::string fitness = "weighted";
    std::string out;
    std::string snapshots;
    std::string summary;
    int slots = 0;
    std::uint64_t seed = 1;
    double budget_secs = 0;
    long budget_gens = 0;
    double target_cost = -1;
};

EngineConfig build_config(const SolveOptions& opt) {
    EngineConfig config;
    if (!opt.config_file.empty()) apply_config_file(config, opt.config_file);
    config.mode = parse_mode(opt.mode);
    config.fitness_mode = parse_fitness(opt.fitness);
    config.seed = opt.seed;
    if (config.mode == EngineMode::Ichea) config.optimize_generations = 0;
    config.budget.max_seconds = opt.budget_secs;
    config.budget.max_generations = opt.budget_gens;
    config.budget.target_cost = opt.target_cost;
    if (config.budget.max_seconds <= 0 && config.budget.max_generations <= 0)
        config.budget.max_seconds = 60; // never run unbounded by accident
    return config;
}

int cmd_solve(const SolveOptions& opt) {
    const LoadedInstance loaded = load_instance(opt.instance, opt.data, opt.slots);
    const TimetablingAdapter adapter(loaded.inst, loaded.cm);
    const EngineConfig config = build_config(opt);

    Engine engine(adapter, config);
    const RunResult result = engine.run();

    std::cout << loaded.inst.name << ": " << (result.success ? "feasible" : "no full solution")
              << ", cost " << format_cost(result.best_cost_display) << ", "
              << result.best_genes.size() << "/" << loaded.inst.exams << " exams, "
              << result.generations << " generations, " << format_cost(result.wall_seconds)
              << "s\n";

    if (!opt.out.empty() && result.success) {
        const Timetable tt =
            timetable_from_genes(result.best_genes, loaded.inst.exams, loaded.inst.slots);
        write_solution(tt, opt.out);
    }
    if (!opt.snapshots.empty()) {
        fs::create_directories(opt.snapshots);
        for (const auto& snap : result.snapshots) {
            std::ostringstream name;
            name << "snapshot_" << std::setw(3) << std::setfill('0') << snap.increment << ".txt";
            write_snapshot(snap, fs::path(opt.snapshots) / name.str());
        }
    }
    if (!opt.summary.empty()) {
        std::ofstream out(opt.summary);
        if (!out) throw std::runtime_error("cannot write " + opt.summary);
        out << run_summary(result, loaded.inst.name, config, opt.mode, opt.fitness).dump(2)
            << '\n';
    }
    return result.success ? kExitSuccess : kExitNoSolution;
}

int cmd_evaluate(const std::string& instance, const std::string& data, int slots,
                 const std::string& solution) {
    const LoadedInstance loaded = load_instance(instance, data, slots);
    const Timetable tt = read_solution(solution, loaded.inst.exams, loaded.inst.slots);
    const long violations = hard_violations(tt, loaded.cm);
    std::cout << "hard violations: " << violations << "\n";
    if (violations == 0) {
        const auto cost = proximity_cost(tt, loaded.cm, loaded.inst.students);
        std::cout << "proximity cost: " << format_cost(cost.value()) << "\n";
        return kExitSuccess;
    }
    return kExitNoSolution;
}

struct TrialResult {
    std::string instance;
    std::string mode;
    int trial = 0;
    std::uint64_t seed = 0;
    bool feasible = false;
    double cost = 0;
    double seconds = 0;
    std::string error;
};

struct BenchRow {
    std::string instance;
    std::string mode;
    double best = 0, median = 0, worst = 0, sd = 0, sr = 0;
    int trials = 0;
    std::vector<std::uint64_t> seeds;
    std::string error;
};

int cmd_bench(const std::string& suite, const std::string& data, int trials, double budget_secs,
              long budget_gens, const std::string& modes_flag, int jobs, std::uint64_t seed,
              const std::string& out_prefix) {
    const fs::path suite_path = suite;
    const auto metadata = read_instance_metadata(suite_path);
    if (metadata.empty()) throw std::runtime_error("empty suite file " + suite);

    std::vector<std::string> modes;
    {
        std::stringstream ss(modes_flag);
        std::string mode;
        while (std::getline(ss, mode, ',')) {
            parse_mode(mode);
            modes.push_back(mode);
        }
    }

    struct Task {
        std::string instance;
        std::string mode;
        int trial;
    };
    std::vector<Task> tasks;
    for (const auto& meta : metadata)
        for (const auto& mode : modes)
            for (int trial = 0; trial < trials; ++trial) tasks.push_back({meta.name, mode, trial});

    // Instances load once, up front; a broken instance fails its rows only.
    std::map<std::string, LoadedInstance> instances;
    std::map<std::string, std::string> load_errors;
    const fs::path root = data_dir(data);
    for (const auto& meta : metadata) {
        try {
            instances.emplace(meta.name, load_instance(meta.name, data, meta.slots));
        } catch (const std::exception& e) {
            load_errors[meta.name] = e.what();
        }
    }

    std::vector<TrialResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t at = next.fetch_add(1);
            if (at >= tasks.size()) return;
            const Task& task = tasks[at];
            TrialResult& r = results[at];
            r.instance = task.instance;
            r.mode = task.mode;
            r.trial = task.trial;
            r.seed = seed + static_cast<std::uint64_t>(task.trial);
            if (auto it = load_errors.find(task.instance); it != load_errors.end()) {
                r.error = it->second;
                continue;
            }
            try {
                const LoadedInstance& loaded = instances.at(task.instance);
                TimetablingAdapter adapter(loaded.inst, loaded.cm);
                EngineConfig config;
                config.mode = parse_mode(task.mode);
                if (config.mode == EngineMode::Ichea) config.optimize_generations = 0;
                config.seed = r.seed;
                config.budget.max_seconds = budget_secs;
                config.budget.max_generations = budget_gens;
                if (budget_secs <= 0 && budget_gens <= 0) config.budget.max_seconds = 60;
                Engine engine(adapter, config);
                const RunResult run = engine.run();
                r.feasible = run.success;
                r.cost = run.best_cost_display;
                r.seconds = run.wall_seconds;
            } catch (const std::exception& e) {
                r.error = e.what();
            }
        }
    };
    const int thread_count = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int t = 1; t < thread_count; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    // Aggregate in deterministic (instance, mode) order.
    std::vector<BenchRow> rows;
    for (const auto& meta : metadata) {
        for (const auto& mode : modes) {
            BenchRow row;
            row.instance = meta.name;
            row.mode = mode;
            std::vector<double> costs;
            int feasible = 0;
            for (const auto& r : results) {
                if (r.instance != meta.name || r.mode != mode) continue;
                ++row.trials;
                row.seeds.push_back(r.seed);
                if (!r.error.empty()) {
                    row.error = r.error;
                    continue;
                }
                if (r.feasible) {
                    ++feasible;
                    costs.push_back(r.cost);
                }
            }
            if (row.trials > 0) row.sr = static_cast<double>(feasible) / row.trials;
            if (!costs.empty()) {
                std::sort(costs.begin(), costs.end());
                row.best = costs.front();
                row.worst = costs.back();
                row.median = costs[(costs.size() - 1) / 2]; // lower middle for even counts
                double mean = 0;
                for (double c : costs) mean += c;
                mean /= static_cast<double>(costs.size());
                double var = 0;
                for (double c : costs) var += (c - mean) * (c - mean);
                row.sd = std::sqrt(var / static_cast<double>(costs.size()));
            }
            rows.push_back(std::move(row));
        }
    }

    std::ofstream csv(out_prefix + ".csv");
    if (!csv) throw std::runtime_error("cannot write " + out_prefix + ".csv");
    csv << "instance,mode,best,median,worst,sd,sr\n";
    for (const auto& row : rows) {
        csv << row.instance << ',' << row.mode << ',';
        if (row.error.empty() && row.sr > 0)
            csv << format_cost(row.best) << ',' << format_cost(row.median) << ','
                << format_cost(row.worst) << ',' << format_cost(row.sd);
        else
            csv << ",,,";
        csv << ',' << format_cost(row.sr) << '\n';
    }

    json report = json::array();
    for (const auto& row : rows) {
        json entry;
        entry["instance"] = row.instance;
        entry["mode"] = row.mode;
        entry["trials"] = row.trials;
        entry["sr"] = row.sr;
        if (row.sr > 0 && row.error.empty()) {
            entry["best"] = format_cost(row.best);
            entry["median"] = format_cost(row.median);
            entry["worst"] = format_cost(row.worst);
            entry["sd"] = format_cost(row.sd);
        }
        entry["seeds"] = row.seeds;
        if (!row.error.empty()) entry["error"] = row.error;
        report.push_back(entry);
    }
    std::ofstream jout(out_prefix + ".json");
    jout << report.dump(2) << '\n';

    for (const auto& row : rows)
        std::cout << row.instance << " " << row.mode << ": best "
                  << (row.sr > 0 ? format_cost(row.best) : "-") << ", median "
                  << (row.sr > 0 ? format_cost(row.median) : "-") << ", SR "
                  << format_cost(row.sr) << (row.error.empty() ? "" : " [" + row.error + "]")
                  << "\n";
    return kExitSuccess;
}

int cmd_nqueen(int n, std::uint64_t seed, double budget_secs) {
    if (n <= 10 && enumerate_solutions(n).empty()) {
        std::cout << "no solution exists for n = " << n << "\n";
        return kExitNoSolution;
    }
    NQueenAdapter queens(n);
    EngineConfig config;
    config.mode = EngineMode::Ichea;
    config.optimize_generations = 0;
    config.seed = seed;
    config.budget.max_seconds = budget_secs > 0 ? budget_secs : 60;
    Engine engine(queens, config);
    const RunResult result = engine.run();
    if (!result.success) {
        std::cout << "no solution found within the budget\n";
        return kExitNoSolution;
    }
    Chromosome best;
    best.genes = result.best_genes;
    const auto rows = NQueenAdapter::to_rows(best);
    for (std::size_t c = 0; c < rows.size(); ++c)
        std::cout << (c ? " " : "") << rows[c];
    std::cout << "\n";

    bool verified = true;
    if (n <= 10) {
        const auto oracle = enumerate_solutions(n);
        verified = std::find(oracle.begin(), oracle.end(), rows) != oracle.end();
    } else {
        Chromosome check;
        for (std::size_t c = 0; c < rows.size(); ++c) {
            if (!queen_compatible(static_cast<int>(c) + 1, rows[c], check)) {
                verified = false;
                break;
            }
            check.genes.push_back({static_cast<int>(c) + 1, rows[c]});
        }
    }
    std::cout << (verified ? "verified" : "VERIFICATION FAILED") << "\n";
    return verified ? kExitSuccess : kExitNoSolution;
}

int cmd_whatif(const std::string& instance, const std::string& data, int slots,
               const std::string& snapshots_dir, int add_exam, const std::string& students,
               const SolveOptions& opt) {
    LoadedInstance loaded = load_instance(instance, data, slots);

    std::vector<int> student_ids;
    {
        std::stringstream ss(students);
        std::string token;
        while (std::getline(ss, token, ',')) {
            if (token.empty()) continue;
            const int id = std::stoi(token);
            if (id < 1 || id > loaded.inst.students)
                throw std::runtime_error("unknown student " + token);
            student_ids.push_back(id);
        }
    }
    if (student_ids.empty()) throw std::runtime_error("no students given");
    if (add_exam < 1 || add_exam > loaded.inst.exams + 1)
        throw std::runtime_error("exam id out of range (new exams extend the count by one)");

    Instance extended = loaded.inst;
    extended.exams = std::max(extended.exams, add_exam);
    for (int s : student_ids) extended.enrollments[s - 1].push_back(add_exam);
    const ConflictMatrix extended_cm = build_conflict_matrix(extended);
    TimetablingAdapter adapter(extended, extended_cm);

    std::vector<IncrementSnapshot> snapshots;
    for (const auto& entry : fs::directory_iterator(snapshots_dir))
        if (entry.is_regular_file()) snapshots.push_back(read_snapshot(entry.path()));
    std::sort(snapshots.begin(), snapshots.end(),
              [](const IncrementSnapshot& a, const IncrementSnapshot& b) {
                  return a.increment < b.increment;
              });
    if (snapshots.empty()) throw std::runtime_error("no snapshots in " + snapshots_dir);

    EngineConfig config = build_config(opt);
    const ConstraintId added = add_exam;
    const WhatIfOutcome outcome = whatif_add(adapter, snapshots, std::span(&added, 1), config);

    if (outcome.resolved) {
        std::cout << "resolved from snapshot " << outcome.snapshot_used << ", cost "
                  << format_cost(outcome.result.best_cost_display) << "\n";
        if (!opt.out.empty()) {
            const Timetable tt = timetable_from_genes(outcome.result.best_genes, extended.exams,
                                                      extended.slots);
            write_solution(tt, opt.out);
        }
        return kExitSuccess;
    }
    std::cout << "list of combinations of constraints not solved:\n";
    for (const auto& line : outcome.unresolved) std::cout << "  " << line << "\n";
    return kExitNoSolution;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Incremental constraint-driven evolutionary solver"};
    app.require_subcommand(1);

    SolveOptions opt;
    double bench_budget = 0;
    long bench_gens = 0;
    int bench_trials = 5;
    int bench_jobs = 1;
    std::string bench_suite, bench_modes = "ichea,iichea", bench_out = "bench";
    std::string eval_solution;
    int nq_n = 8;
    std::string whatif_snapshots, whatif_students;
    int whatif_exam = 0;

    auto add_instance_flags = [&](CLI::App* cmd) {
        cmd->add_option("--instance", opt.instance, "instance name or path prefix")->required();
        cmd->add_option("--data-dir", opt.data, "dataset root (default: $ICHEA_DATA_DIR or ./data)");
        cmd->add_option("--slots", opt.slots, "timeslot count (default: instances.txt)");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve one timetabling instance");
    add_instance_flags(solve);
    solve->add_option("--config", opt.config_file, "flat key = value parameter file");
    solve->add_option("--mode", opt.mode, "ichea|iichea")->capture_default_str();
    solve->add_option("--fitness", opt.fitness, "weighted|generic")->capture_default_str();
    solve->add_option("--seed", opt.seed, "random seed")->capture_default_str();
    solve->add_option("--budget-secs", opt.budget_secs, "wall-clock budget in seconds");
    solve->add_option("--budget-gens", opt.budget_gens, "generation budget");
    solve->add_option("--target-cost", opt.target_cost, "stop once this cost is reached");
    solve->add_option("--out", opt.out, "solution file to write");
    solve->add_option("--snapshots", opt.snapshots, "directory for increment snapshots");
    solve->add_option("--summary", opt.summary, "run summary JSON path");

    CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate a solution file");
    add_instance_flags(evaluate);
    evaluate->add_option("--solution", eval_solution, "solution file")->required();

    CLI::App* bench = app.add_subcommand("bench", "benchmark a suite of instances");
    bench->add_option("--suite", bench_suite, "metadata file: one 'name slots' line per instance")
        ->required();
    bench->add_option("--data-dir", opt.data, "dataset root (default: $ICHEA_DATA_DIR or ./data)");
    bench->add_option("--trials", bench_trials, "independent trials per instance and mode")
        ->capture_default_str();
    bench->add_option("--budget-secs", bench_budget, "wall-clock budget per trial");
    bench->add_option("--budget-gens", bench_gens, "generation budget per trial");
    bench->add_option("--modes", bench_modes, "comma-separated mode list")->capture_default_str();
    bench->add_option("--jobs", bench_jobs, "concurrent trials")->capture_default_str();
    bench->add_option("--seed", opt.seed, "base seed; trial k uses seed + k")
        ->capture_default_str();
    bench->add_option("--out", bench_out, "output prefix for .csv and .json")
        ->capture_default_str();

    CLI::App* nqueen = app.add_subcommand("nqueen", "solve the n-queen problem");
    nqueen->add_option("--n", nq_n, "board size")->required();
    nqueen->add_option("--seed", opt.seed, "random seed")->capture_default_str();
    nqueen->add_option("--budget-secs", opt.budget_secs, "wall-clock budget in seconds");

    CLI::App* whatif = app.add_subcommand("whatif", "re-solve stored snapshots with a new exam");
    add_instance_flags(whatif);
    whatif->add_option("--snapshots", whatif_snapshots, "snapshot directory")->required();
    whatif->add_option("--add-exam", whatif_exam, "exam id to add")->required();
    whatif->add_option("--students", whatif_students, "comma-separated student ids")->required();
    whatif->add_option("--mode", opt.mode, "ichea|iichea")->capture_default_str();
    whatif->add_option("--seed", opt.seed, "random seed")->capture_default_str();
    whatif->add_option("--budget-secs", opt.budget_secs, "wall-clock budget in seconds");
    whatif->add_option("--budget-gens", opt.budget_gens, "generation budget");
    whatif->add_option("--out", opt.out, "solution file to write");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitSuccess : kExitUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(opt);
        if (evaluate->parsed())
            return cmd_evaluate(opt.instance, opt.data, opt.slots, eval_solution);
        if (bench->parsed())
            return cmd_bench(bench_suite, opt.data, bench_trials, bench_budget, bench_gens,
                             bench_modes, bench_jobs, opt.seed, bench_out);
        if (nqueen->parsed()) return cmd_nqueen(nq_n, opt.seed, opt.budget_secs);
        if (whatif->parsed())
            return cmd_whatif(opt.instance, opt.data, opt.slots, whatif_snapshots, whatif_exam,
                              whatif_students, opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
