#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "srpcp/linalg.hpp"
#include "srpcp/solver.hpp"

namespace srpcp::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
  kExitOk = 0,        // converged to tolerance
  kExitError = 1,     // bad input, I/O failure
  kExitMaxIter = 2,
  kExitTimeOut = 3,
  kExitOverfit = 4,
};

int exit_code_for(solver::TerminationReason reason);

struct GenOptions {
  Index n = 0;
  Index r = 0;
  Index s = 0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  fs::path out;
};

/// Writes D.srpm, L0.srpm, S0.srpm, Z0.srpm and manifest.json into `out`.
int cmd_gen(const GenOptions& options, std::ostream& log);

struct SolveOptions {
  fs::path input;
  std::optional<double> lambda;
  std::optional<double> mu;
  double eps = 1e-6;
  solver::Mode mode = solver::Mode::Plain;
  int max_iter = 5000;
  Index k0 = 10;
  std::string out_prefix = "srpcp";
  std::optional<double> max_time_seconds;
};

/// Writes <prefix>L_hat.srpm, <prefix>S_hat.srpm and <prefix>history.csv.
int cmd_solve(const SolveOptions& options, std::ostream& log);

struct HistoryRow {
  int iteration = 0;
  double objective = 0.0;
  double residual = 0.0;  // NaN where not evaluated
  Index rank = 0;
};

void save_history(const fs::path& path, const solver::SolveResult& result);
std::vector<HistoryRow> load_history(const fs::path& path);

struct BenchRow {
  Index n = 0;
  Index r = 0;
  Index s = 0;
  double sigma = 0.0;
  std::string seed;  // seed value, or "mean" on aggregate rows
  std::string mode;
  double wall_ms = 0.0;
  double iters = 0.0;
  double eta_S = 0.0;
  double eta_L = 0.0;
  double obj = 0.0;
  double rank = 0.0;
  std::string status = "ok";  // not written; "failed" rows carry NaNs
};

inline constexpr const char* kBenchHeader =
    "n,r,s,sigma,seed,mode,wall_ms,iters,eta_S,eta_L,obj,rank";

struct BenchOptions {
  std::vector<Index> n;
  std::vector<Index> r;
  std::vector<Index> s;              // absolute sparsity; overrides s_frac
  double s_frac = 0.05;              // s = round(s_frac * n^2)
  std::vector<double> sigma;
  std::vector<std::uint64_t> seeds;
  double eps = 1e-6;
  std::vector<solver::Mode> modes = {solver::Mode::Plain};
  int max_iter = 5000;
  double max_time_seconds = 5.0 * 3600.0;
  fs::path out;
  int threads = 0;  // 0: SRPCP_THREADS or hardware concurrency
};

/// Runs every (cell, seed, mode) job, appends one row per job to `out` as
/// it finishes, then one seed="mean" row per (cell, mode). min/mean/max per
/// (cell, mode) go to <out stem>.summary.csv next to it. Returns all rows in
/// file order.
std::vector<BenchRow> run_bench(const BenchOptions& options, std::ostream& log);
int cmd_bench(const BenchOptions& options, std::ostream& log);

std::vector<BenchRow> load_bench_csv(const fs::path& path);
fs::path summary_path(const fs::path& bench_csv);

struct VideoOptions {
  fs::path frames_dir;
  fs::path out_dir;
  double eps = 1e-5;
  bool stretch = false;
  solver::Mode mode = solver::Mode::Accelerated;
  int max_iter = 5000;
};

struct VideoResult {
  DenseMatrix D;
  solver::SolveResult solve;
  DenseMatrix noise;  // D - (L_hat + S_hat)
};

/// Library form of the video command: decomposes and writes
/// background_/foreground_/noise_ PGMs per input frame.
VideoResult run_video(const VideoOptions& options, std::ostream& log);
int cmd_video(const VideoOptions& options, std::ostream& log);

}  // namespace srpcp::cli
