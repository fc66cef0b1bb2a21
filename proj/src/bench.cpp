#include "nps/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace nps::bench {

namespace fs = std::filesystem;

std::string format_double(double value) {
    char buf[64];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value)
            break;
    }
    return buf;
}

int worker_count() {
    if (const char* env = std::getenv("NPS_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1)
            return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<double> checkpoints_for_budget(double budget_seconds) {
    std::vector<double> points;
    for (double t = 1.0; t <= budget_seconds; t *= 2.0)
        points.push_back(t);
    if (points.empty() || points.back() != budget_seconds)
        points.push_back(budget_seconds);
    return points;
}

std::vector<CurvePoint> aggregate_curve(const std::vector<SeedOutcome>& outcomes,
                                        const std::vector<double>& checkpoints,
                                        const std::function<double(Score)>& to_units) {
    std::vector<CurvePoint> curve;
    curve.reserve(checkpoints.size());
    for (double t : checkpoints) {
        CurvePoint point;
        point.checkpoint_seconds = t;
        double sum = 0.0;
        for (const auto& outcome : outcomes) {
            const AnytimeRecord* last = nullptr;
            for (const auto& rec : outcome.records) {
                if (rec.elapsed_seconds <= t)
                    last = &rec;
                else
                    break;
            }
            if (last) {
                sum += to_units(last->best_score);
                ++point.seeds;
            }
        }
        point.mean_best_score = point.seeds ? sum / point.seeds : 0.0;
        curve.push_back(point);
    }
    return curve;
}

namespace {

template <Problem P>
SeedOutcome run_one_seed(const P& problem, SearchConfig cfg, std::uint64_t seed) {
    SeedOutcome outcome;
    outcome.seed = seed;
    cfg.seed = seed;
    try {
        auto result = run_search(problem, cfg);
        outcome.records = std::move(result.records);
        outcome.final_score = result.best.score;
        outcome.final_score_text = format_score(problem, result.best.score);
        outcome.final_score_units = score_units(problem, result.best.score);
        outcome.playouts = result.playouts;
        outcome.completed = true;
    } catch (const std::exception& e) {
        outcome.error = e.what();
    }
    return outcome;
}

template <Problem P>
std::vector<SeedOutcome> run_sweep(const P& problem, const ExperimentSpec& spec) {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = spec.seed_lo; s <= spec.seed_hi; ++s)
        seeds.push_back(s);

    std::vector<SeedOutcome> outcomes(seeds.size());
    std::atomic<std::size_t> cursor{0};
    int workers = std::min<int>(worker_count(), static_cast<int>(seeds.size()));
    auto body = [&] {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= seeds.size())
                return;
            SearchConfig cfg = spec.config;
            cfg.time_budget_seconds = spec.budget_seconds;
            outcomes[i] = run_one_seed(problem, cfg, seeds[i]);
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(body);
        for (auto& t : pool)
            t.join();
    }
    return outcomes;
}

void write_raw_csv(const std::string& path, const std::vector<SeedOutcome>& outcomes,
                   const std::function<std::string(Score)>& fmt_score) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "seed,elapsed,best_score,playouts\n";
    char elapsed[32];
    for (const auto& outcome : outcomes) {
        for (const auto& rec : outcome.records) {
            std::snprintf(elapsed, sizeof elapsed, "%.6f", rec.elapsed_seconds);
            out << outcome.seed << ',' << elapsed << ',' << fmt_score(rec.best_score) << ','
                << rec.playouts << '\n';
        }
    }
}

void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& curve) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "checkpoint_seconds,mean_best_score,seeds\n";
    for (const auto& point : curve)
        out << format_double(point.checkpoint_seconds) << ',' << format_double(point.mean_best_score)
            << ',' << point.seeds << '\n';
}

template <Problem P>
ExperimentResult run_with_problem(const P& problem, const ExperimentSpec& spec) {
    ExperimentResult result;
    result.outcomes = run_sweep(problem, spec);
    result.all_completed = std::all_of(result.outcomes.begin(), result.outcomes.end(),
                                       [](const SeedOutcome& o) { return o.completed; });
    result.curve = aggregate_curve(result.outcomes, checkpoints_for_budget(spec.budget_seconds),
                                   [&](Score s) { return score_units(problem, s); });

    fs::create_directories(spec.out_dir);
    result.raw_csv_path = (fs::path(spec.out_dir) / "raw.csv").string();
    result.curve_csv_path = (fs::path(spec.out_dir) / "curve.csv").string();
    write_raw_csv(result.raw_csv_path, result.outcomes,
                  [&](Score s) { return format_score(problem, s); });
    write_curve_csv(result.curve_csv_path, result.curve);
    return result;
}

struct CurveFile {
    std::vector<double> checkpoints;
    std::vector<double> means;
};

CurveFile read_curve_csv(const std::string& dir) {
    fs::path path = fs::path(dir) / "curve.csv";
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    CurveFile curve;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty())
            continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ','))
            fields.push_back(field);
        if (fields.size() < 2)
            throw std::runtime_error("malformed curve row in " + path.string() + ": " + line);
        curve.checkpoints.push_back(std::strtod(fields[0].c_str(), nullptr));
        curve.means.push_back(std::strtod(fields[1].c_str(), nullptr));
    }
    if (curve.checkpoints.empty())
        throw std::runtime_error("no data rows in " + path.string());
    return curve;
}

// First checkpoint whose mean reaches the level, or nothing.
std::optional<double> first_reach(const CurveFile& curve, double level) {
    for (std::size_t i = 0; i < curve.checkpoints.size(); ++i)
        if (curve.means[i] >= level)
            return curve.checkpoints[i];
    return std::nullopt;
}

} // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    if (spec.seed_lo > spec.seed_hi)
        throw ConfigError("seed range is empty (seed_lo > seed_hi)");
    if (!(spec.budget_seconds > 0.0))
        throw ConfigError("budget must be positive");
    if (spec.out_dir.empty())
        throw ConfigError("output directory required");
    validate_config(spec.config);

    if (spec.problem == ProblemKind::tsptw) {
        tsptw::TsptwProblem problem(tsptw::load_instance(spec.instance_path), spec.bias_sign);
        return run_with_problem(problem, spec);
    }
    weakschur::SchurProblem problem(spec.schur_parts, spec.schur_menu);
    return run_with_problem(problem, spec);
}

void compare_runs(const std::string& dir_a, const std::string& dir_b, std::ostream& out) {
    CurveFile a = read_curve_csv(dir_a);
    CurveFile b = read_curve_csv(dir_b);

    std::vector<std::size_t> common_a, common_b;
    for (std::size_t i = 0; i < a.checkpoints.size(); ++i)
        for (std::size_t j = 0; j < b.checkpoints.size(); ++j)
            if (a.checkpoints[i] == b.checkpoints[j]) {
                common_a.push_back(i);
                common_b.push_back(j);
                break;
            }
    if (common_a.empty())
        throw std::runtime_error("curve files share no checkpoint");

    out << "checkpoint_seconds,mean_a,mean_b\n";
    for (std::size_t k = 0; k < common_a.size(); ++k)
        out << format_double(a.checkpoints[common_a[k]]) << ',' << format_double(a.means[common_a[k]])
            << ',' << format_double(b.means[common_b[k]]) << '\n';

    std::set<double> levels(a.means.begin(), a.means.end());
    levels.insert(b.means.begin(), b.means.end());

    out << "\nscore_level,first_a_seconds,first_b_seconds,time_ratio_b_over_a\n";
    for (double level : levels) {
        auto ta = first_reach(a, level);
        auto tb = first_reach(b, level);
        if (!ta || !tb)
            continue;
        out << format_double(level) << ',' << format_double(*ta) << ',' << format_double(*tb)
            << ',' << format_double(*tb / *ta) << '\n';
    }
}

} // namespace nps::bench
