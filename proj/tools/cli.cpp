#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "srpcp/frames.hpp"
#include "srpcp/matrix_io.hpp"
#include "srpcp/synthetic.hpp"

namespace srpcp::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw data::IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

// wall_ms,iters,eta_S,eta_L,obj,rank
std::string metrics_tail(const BenchRow& row) {
  using data::format_double;
  std::ostringstream os;
  os << format_double(row.wall_ms) << ',' << format_double(row.iters) << ','
     << format_double(row.eta_S) << ',' << format_double(row.eta_L) << ','
     << format_double(row.obj) << ',' << format_double(row.rank);
  return os.str();
}

std::string bench_line(const BenchRow& row) {
  std::ostringstream os;
  os << row.n << ',' << row.r << ',' << row.s << ',' << data::format_double(row.sigma)
     << ',' << row.seed << ',' << row.mode << ',' << metrics_tail(row);
  return os.str();
}

int resolve_threads(int requested, std::size_t jobs) {
  int threads = requested;
  if (threads <= 0) {
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("SRPCP_THREADS")) {
      const int cap = std::atoi(env);
      if (cap > 0) threads = std::min(threads, cap);
    }
  }
  return std::max(1, std::min<int>(threads, static_cast<int>(jobs)));
}

struct BenchJob {
  Index n, r, s;
  double sigma;
  std::uint64_t seed;
  solver::Mode mode;
};

BenchRow run_job(const BenchJob& job, const BenchOptions& options) {
  BenchRow row;
  row.n = job.n;
  row.r = job.r;
  row.s = job.s;
  row.sigma = job.sigma;
  row.seed = std::to_string(job.seed);
  row.mode = solver::to_string(job.mode);
  try {
    const data::SyntheticInstance inst =
        data::gen_synthetic(job.n, job.r, job.s, job.sigma, job.seed);
    const solver::Problem problem = solver::Problem::with_defaults(inst.D);
    solver::SolverConfig config;
    config.tolerance = options.eps;
    config.mode = job.mode;
    config.max_iterations = options.max_iter;
    config.max_wall_time = std::chrono::duration<double>(options.max_time_seconds);
    const auto t0 = std::chrono::steady_clock::now();
    const solver::SolveResult res = solver::solve(problem, config);
    const auto t1 = std::chrono::steady_clock::now();
    const data::RecoveryErrors err = data::recovery_errors(res.L_hat, res.S_hat, inst);
    row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    row.iters = res.iterations;
    row.eta_S = err.eta_S;
    row.eta_L = err.eta_L;
    row.obj = res.objective_history.back();
    row.rank = static_cast<double>(res.rank_history.back());
    if (res.termination_reason != solver::TerminationReason::Tolerance) {
      row.status = solver::to_string(res.termination_reason);
    }
  } catch (const std::exception& e) {
    row.status = std::string("failed: ") + e.what();
    row.wall_ms = row.iters = row.eta_S = row.eta_L = row.obj = row.rank = kNaN;
  }
  return row;
}

// Field-wise statistic over rows; failed rows (NaN) are skipped.
BenchRow reduce_rows(const std::vector<BenchRow>& rows, const std::string& label,
                     double (*fold)(const std::vector<double>&)) {
  BenchRow out = rows.front();
  out.seed = label;
  out.status = "ok";
  auto field = [&](double BenchRow::*member) {
    std::vector<double> vals;
    for (const BenchRow& r : rows) {
      if (!std::isnan(r.*member)) vals.push_back(r.*member);
    }
    out.*member = vals.empty() ? kNaN : fold(vals);
  };
  field(&BenchRow::wall_ms);
  field(&BenchRow::iters);
  field(&BenchRow::eta_S);
  field(&BenchRow::eta_L);
  field(&BenchRow::obj);
  field(&BenchRow::rank);
  return out;
}

double fold_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}
double fold_min(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }
double fold_max(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

int exit_code_for(solver::TerminationReason reason) {
  switch (reason) {
    case solver::TerminationReason::Tolerance: return kExitOk;
    case solver::TerminationReason::MaxIter: return kExitMaxIter;
    case solver::TerminationReason::TimeOut: return kExitTimeOut;
    case solver::TerminationReason::Overfit: return kExitOverfit;
  }
  return kExitError;
}

int cmd_gen(const GenOptions& options, std::ostream& log) {
  const data::SyntheticInstance inst =
      data::gen_synthetic(options.n, options.r, options.s, options.sigma, options.seed);
  fs::create_directories(options.out);
  data::save_matrix(options.out / "D.srpm", inst.D);
  data::save_matrix(options.out / "L0.srpm", inst.L0);
  data::save_matrix(options.out / "S0.srpm", inst.S0);
  data::save_matrix(options.out / "Z0.srpm", inst.Z0);

  nlohmann::ordered_json manifest;
  manifest["generator"] = "srpcp gen";
  manifest["n"] = options.n;
  manifest["r"] = options.r;
  manifest["s"] = options.s;
  manifest["sigma"] = options.sigma;
  manifest["seed"] = options.seed;
  manifest["files"] = {{"D", "D.srpm"}, {"L0", "L0.srpm"}, {"S0", "S0.srpm"}, {"Z0", "Z0.srpm"}};
  std::ofstream out(options.out / "manifest.json");
  if (!out) throw data::IoError("cannot write manifest in " + options.out.string());
  out << manifest.dump(2) << '\n';
  log << "wrote instance n=" << options.n << " r=" << options.r << " s=" << options.s
      << " sigma=" << options.sigma << " seed=" << options.seed << " to "
      << options.out.string() << '\n';
  return kExitOk;
}

void save_history(const fs::path& path, const solver::SolveResult& result) {
  std::ofstream out(path);
  if (!out) throw data::IoError("cannot write " + path.string());
  out << "iteration,objective,residual,rank\n";
  for (std::size_t i = 0; i < result.objective_history.size(); ++i) {
    out << i << ',' << data::format_double(result.objective_history[i]) << ','
        << data::format_double(result.residual_history[i]) << ','
        << result.rank_history[i] << '\n';
  }
}

std::vector<HistoryRow> load_history(const fs::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || lines[0] != "iteration,objective,residual,rank") {
    throw data::FormatError(path.string() + ": not a history file");
  }
  std::vector<HistoryRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_csv_line(lines[i]);
    const auto row = static_cast<Index>(i);
    if (fields.size() != 4) {
      throw data::FormatError(path.string() + ": row " + std::to_string(i) +
                              " has " + std::to_string(fields.size()) + " fields");
    }
    HistoryRow h;
    h.iteration = static_cast<int>(data::parse_double(fields[0], row, 1));
    h.objective = data::parse_double(fields[1], row, 2);
    h.residual = data::parse_double(fields[2], row, 3);
    h.rank = static_cast<Index>(data::parse_double(fields[3], row, 4));
    rows.push_back(h);
  }
  return rows;
}

int cmd_solve(const SolveOptions& options, std::ostream& log) {
  DenseMatrix d = data::load_matrix(options.input);
  const double lambda = options.lambda.value_or(solver::Problem::default_lambda(d.rows()));
  const double mu = options.mu.value_or(solver::Problem::default_mu(d.cols()));
  const solver::Problem problem = solver::Problem::make(std::move(d), lambda, mu);

  solver::SolverConfig config;
  config.tolerance = options.eps;
  config.mode = options.mode;
  config.max_iterations = options.max_iter;
  config.initial_rank = options.k0;
  if (options.max_time_seconds) {
    config.max_wall_time = std::chrono::duration<double>(*options.max_time_seconds);
  }
  const solver::SolveResult res = solver::solve(problem, config);

  data::save_matrix(options.out_prefix + "L_hat.srpm", res.L_hat);
  data::save_matrix(options.out_prefix + "S_hat.srpm", res.S_hat);
  save_history(options.out_prefix + "history.csv", res);
  log << "iterations=" << res.iterations << " eta=" << res.final_residual
      << " objective=" << data::format_double(res.objective_history.back())
      << " rank=" << res.rank_history.back()
      << " reason=" << solver::to_string(res.termination_reason)
      << " seconds=" << res.wall_seconds << '\n';
  return exit_code_for(res.termination_reason);
}

fs::path summary_path(const fs::path& bench_csv) {
  fs::path out = bench_csv;
  out.replace_filename(bench_csv.stem().string() + ".summary.csv");
  return out;
}

std::vector<BenchRow> run_bench(const BenchOptions& options, std::ostream& log) {
  if (options.n.empty() || options.r.empty() || options.sigma.empty() ||
      options.seeds.empty() || options.modes.empty()) {
    throw std::invalid_argument("bench: n, r, sigma, seeds and modes must be non-empty");
  }
  std::vector<BenchJob> jobs;
  for (Index n : options.n) {
    std::vector<Index> sparsities = options.s;
    if (sparsities.empty()) {
      sparsities.push_back(static_cast<Index>(
          std::llround(options.s_frac * static_cast<double>(n) * static_cast<double>(n))));
    }
    for (Index r : options.r) {
      for (Index s : sparsities) {
        if (r < 1 || r > n || s < 0 || s > n * n) {
          throw std::invalid_argument("bench: grid cell n=" + std::to_string(n) +
                                      " r=" + std::to_string(r) + " s=" +
                                      std::to_string(s) + " is out of range");
        }
        for (double sigma : options.sigma) {
          for (solver::Mode mode : options.modes) {
            for (std::uint64_t seed : options.seeds) {
              jobs.push_back({n, r, s, sigma, seed, mode});
            }
          }
        }
      }
    }
  }

  std::ofstream out(options.out);
  if (!out) throw data::IoError("cannot write " + options.out.string());
  out << kBenchHeader << '\n' << std::flush;

  std::vector<BenchRow> results(jobs.size());
  std::mutex io_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      BenchRow row = run_job(jobs[j], options);
      std::lock_guard<std::mutex> lock(io_mutex);
      out << bench_line(row) << '\n' << std::flush;
      log << bench_line(row);
      if (row.status != "ok") log << "  # " << row.status;
      log << '\n';
      results[j] = std::move(row);
    }
  };
  const int threads = resolve_threads(options.threads, jobs.size());
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  // Jobs are grouped by (cell, mode) with seeds innermost.
  const std::size_t per_group = options.seeds.size();
  std::vector<BenchRow> means;
  std::ofstream summary(summary_path(options.out));
  if (!summary) throw data::IoError("cannot write " + summary_path(options.out).string());
  summary << "n,r,s,sigma,mode,stat,wall_ms,iters,eta_S,eta_L,obj,rank\n";
  for (std::size_t g = 0; g < results.size(); g += per_group) {
    const std::vector<BenchRow> group(results.begin() + static_cast<std::ptrdiff_t>(g),
                                      results.begin() + static_cast<std::ptrdiff_t>(g + per_group));
    const BenchRow mean = reduce_rows(group, "mean", fold_mean);
    means.push_back(mean);
    out << bench_line(mean) << '\n';
    for (const auto& [label, fold] :
         {std::pair{"min", fold_min}, std::pair{"mean", fold_mean}, std::pair{"max", fold_max}}) {
      const BenchRow stat = reduce_rows(group, label, fold);
      summary << stat.n << ',' << stat.r << ',' << stat.s << ','
              << data::format_double(stat.sigma) << ',' << stat.mode << ',' << label
              << ',' << metrics_tail(stat) << '\n';
    }
  }
  std::vector<BenchRow> all = std::move(results);
  all.insert(all.end(), means.begin(), means.end());
  return all;
}

int cmd_bench(const BenchOptions& options, std::ostream& log) {
  const std::vector<BenchRow> rows = run_bench(options, log);
  bool all_ok = true;
  for (const BenchRow& r : rows) all_ok = all_ok && r.status == "ok";
  return all_ok ? kExitOk : kExitMaxIter;
}

std::vector<BenchRow> load_bench_csv(const fs::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || lines[0] != kBenchHeader) {
    throw data::FormatError(path.string() + ": missing bench header");
  }
  std::vector<BenchRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    const auto row = static_cast<Index>(i);
    if (f.size() != 12) {
      throw data::FormatError(path.string() + ": row " + std::to_string(i) + " has " +
                              std::to_string(f.size()) + " fields, expected 12");
    }
    BenchRow b;
    b.n = static_cast<Index>(data::parse_double(f[0], row, 1));
    b.r = static_cast<Index>(data::parse_double(f[1], row, 2));
    b.s = static_cast<Index>(data::parse_double(f[2], row, 3));
    b.sigma = data::parse_double(f[3], row, 4);
    b.seed = f[4];
    b.mode = f[5];
    b.wall_ms = data::parse_double(f[6], row, 7);
    b.iters = data::parse_double(f[7], row, 8);
    b.eta_S = data::parse_double(f[8], row, 9);
    b.eta_L = data::parse_double(f[9], row, 10);
    b.obj = data::parse_double(f[10], row, 11);
    b.rank = data::parse_double(f[11], row, 12);
    if (std::isnan(b.obj)) b.status = "failed";
    rows.push_back(std::move(b));
  }
  return rows;
}

VideoResult run_video(const VideoOptions& options, std::ostream& log) {
  const data::FrameStack stack = data::load_frame_stack(options.frames_dir);
  VideoResult out;
  out.D = data::stack_to_matrix(stack);
  const solver::Problem problem = solver::Problem::with_defaults(out.D);
  solver::SolverConfig config;
  config.tolerance = options.eps;
  config.mode = options.mode;
  config.max_iterations = options.max_iter;
  out.solve = solver::solve(problem, config);
  out.noise = out.D - (out.solve.L_hat + out.solve.S_hat);

  fs::create_directories(options.out_dir);
  auto emit = [&](const DenseMatrix& m, Index f, const std::string& kind) {
    DenseMatrix img = data::unstack_column(m, f, stack.height, stack.width);
    if (options.stretch) img = data::contrast_stretch(img);
    const fs::path name = fs::path(stack.names[f]).stem();
    data::write_pgm(options.out_dir / (kind + "_" + name.string() + ".pgm"),
                    data::quantize(img));
  };
  for (Index f = 0; f < out.D.cols(); ++f) {
    emit(out.solve.L_hat, f, "background");
    emit(out.solve.S_hat, f, "foreground");
    emit(out.noise, f, "noise");
  }
  log << "frames=" << out.D.cols() << " pixels=" << out.D.rows()
      << " iterations=" << out.solve.iterations
      << " rank=" << out.solve.rank_history.back() << " eta=" << out.solve.final_residual
      << " reason=" << solver::to_string(out.solve.termination_reason) << '\n';
  return out;
}

int cmd_video(const VideoOptions& options, std::ostream& log) {
  const VideoResult res = run_video(options, log);
  return exit_code_for(res.solve.termination_reason);
}

}  // namespace srpcp::cli
