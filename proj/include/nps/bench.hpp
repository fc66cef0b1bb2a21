#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nps/search.hpp"
#include "nps/tsptw.hpp"
#include "nps/weakschur.hpp"

namespace nps::bench {

enum class ProblemKind { tsptw, weakschur };

// One seed sweep: a problem, a search configuration and a seed range, run
// under a wall-clock budget per seed. raw.csv gets every improvement event;
// curve.csv samples the mean best score at geometrically spaced checkpoints.
struct ExperimentSpec {
    ProblemKind problem = ProblemKind::weakschur;
    std::string instance_path;                              // tsptw
    int schur_parts = 8;                                    // weakschur
    weakschur::MoveMenu schur_menu = weakschur::MoveMenu::selective;
    tsptw::BiasSign bias_sign = tsptw::BiasSign::negative;
    SearchConfig config;                                    // seed is overridden per sweep member
    std::uint64_t seed_lo = 1;
    std::uint64_t seed_hi = 1;
    double budget_seconds = 1.0;
    std::string out_dir;
};

struct SeedOutcome {
    std::uint64_t seed = 0;
    std::vector<AnytimeRecord> records;
    Score final_score = 0;
    std::string final_score_text;
    double final_score_units = 0.0;
    std::uint64_t playouts = 0;
    bool completed = false;
    std::string error;
};

struct CurvePoint {
    double checkpoint_seconds = 0.0;
    double mean_best_score = 0.0;
    int seeds = 0;
};

struct ExperimentResult {
    std::vector<SeedOutcome> outcomes;
    std::vector<CurvePoint> curve;
    bool all_completed = false;
    std::string raw_csv_path;
    std::string curve_csv_path;
};

// Doubling grid 1, 2, 4, ... capped at the budget; the budget itself closes
// the grid when it is not a power of two, and is the single checkpoint for
// sub-second budgets.
std::vector<double> checkpoints_for_budget(double budget_seconds);

// Mean best score per checkpoint with carry-forward semantics: each seed
// contributes its last improvement at or before the checkpoint; seeds with no
// record yet are excluded and the count column says how many were averaged.
// to_units converts exact scores to problem units for averaging.
std::vector<CurvePoint> aggregate_curve(const std::vector<SeedOutcome>& outcomes,
                                        const std::vector<double>& checkpoints,
                                        const std::function<double(Score)>& to_units);

// Runs the sweep (seeds in parallel, bounded by NPS_THREADS or the core
// count) and writes <out>/raw.csv and <out>/curve.csv.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Side-by-side curve comparison of two run directories: per-checkpoint means
// on the common checkpoints, then for every score level both runs reach, the
// ratio of first-reach times (B over A). Throws std::runtime_error when the
// directories share no checkpoint.
void compare_runs(const std::string& dir_a, const std::string& dir_b, std::ostream& out);

// Worker cap: NPS_THREADS when set (minimum 1), else the hardware core count.
int worker_count();

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

} // namespace nps::bench
