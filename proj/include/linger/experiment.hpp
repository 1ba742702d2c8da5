#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "linger/config.hpp"
#include "linger/gdlin.hpp"
#include "linger/lp.hpp"
#include "linger/monitor.hpp"
#include "linger/problem.hpp"
#include "linger/svm.hpp"

namespace linger {

// A problem instance assembled from the problem.* keys, plus the reference
// values used to turn objectives into errors.
struct Experiment {
    std::string kind;  // lp, svm, gaussian, cubic-kink, uniform-kink
    ProblemPtr problem;
    std::shared_ptr<const LpProblem> lp;    // set for kind == lp
    std::shared_ptr<const SvmProblem> svm;  // set for svm and gaussian
    std::optional<double> f_star;           // reference.f_star or computed
    std::optional<double> opt;              // LP optimum estimate
    bool relative_error = false;            // LP dual error is relative
    std::uint64_t seed = 0;
};

Experiment build_experiment(const Config& cfg);

enum class MethodKind { gd_lin, svrg_lin, scsg_lin, gd, svrg, saga, scsg, pegasos };
MethodKind parse_method(const std::string& name);
std::string to_string(MethodKind m);
bool is_lingering(MethodKind m);

struct MethodSpec {
    MethodKind kind = MethodKind::svrg_lin;
    double eta = 0.1;
    std::size_t epochs = 0;  // 0 keeps the solver default
    std::size_t mbar0 = 100;
    std::size_t min_epoch_len = 16;
    std::size_t distance_exact_every = 0;
    std::size_t epoch_len = 0;
    GdLinMode mode = GdLinMode::practical;
    std::optional<double> C, D, L;
    std::size_t warmup_steps = 50;
    double warmup_eta = 0.0;
};

MethodSpec parse_method_spec(const Config& cfg);

struct RunOptions {
    double budget = 30.0;
    double checkpoint = 0.25;
    std::uint64_t seed = 1;
    bool keep_points = false;
};
RunOptions parse_run_options(const Config& cfg);

struct RunResult {
    MethodSpec spec;
    std::vector<RunRecord> records;
    std::vector<Vector> points;  // one per record when keep_points is set
    Vector x;
    bool aborted = false;
    std::string abort_reason;

    double final_objective() const;
};

// Runs one method. A SolverAbort is caught and reported through `aborted`.
RunResult run_method(const Experiment& ex, const MethodSpec& spec, const RunOptions& opt);

// Fills objective errors (and LP primal errors) from the experiment's
// reference values. No-op for fields whose reference is unknown.
void apply_references(const Experiment& ex, RunResult& r);

// Candidate learning rates: "lp" gives {1, 3, 5} x 10^-k, "svm" gives
// {1, 2.5, 5, 7.5} x 10^-k, for k_min <= k <= k_max, largest first.
std::vector<double> named_grid(const std::string& name, int k_min, int k_max);
std::vector<double> parse_grid(const Config& cfg);

struct TuneResult {
    std::vector<RunResult> candidates;  // in grid order
    std::optional<std::size_t> best;    // empty when every candidate aborted
};

// Runs every eta and picks the smallest final objective; ties go to the
// smaller eta. Uses up to `workers` threads.
TuneResult tune(const Experiment& ex, const MethodSpec& base, const std::vector<double>& grid,
                const RunOptions& opt, unsigned workers = 1);

// Fills missing reference values: projected Newton for LP (f* and the
// dual-bound OPT), certified dual coordinate descent for SVMs, and
// otherwise the best objective of a long SVRG^lin run at eta. Returns a
// short description of the source.
std::string ensure_references(Experiment& ex, double eta, double budget, std::uint64_t seed);

// Lowers f_star / opt to the best values observed in runs. For LP the
// optimum estimate is the smallest unregularized dual bound seen.
void tighten_references(Experiment& ex, const std::vector<const RunResult*>& runs);

void write_csv(std::ostream& os, const std::vector<RunRecord>& records, bool record_wall = true);

// 0 overrides the OpenMP default; also read from LINGER_THREADS.
unsigned env_threads();

}  // namespace linger
