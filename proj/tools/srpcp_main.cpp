#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli.hpp"

namespace {

srpcp::solver::Mode mode_flag(const std::string& text) {
  return srpcp::solver::parse_mode(text);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace srpcp;
  CLI::App app{"Square-root principal component pursuit: low-rank + sparse decomposition"};
  app.require_subcommand(1);

  cli::GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic instance");
  gen_cmd->add_option("--n", gen.n, "Matrix size")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--r", gen.r, "Rank of L0")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--s", gen.s, "Number of sparse corruptions")->required();
  gen_cmd->add_option("--sigma", gen.sigma, "Noise standard deviation")->required();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  cli::SolveOptions solve;
  std::string solve_mode = "plain";
  double solve_max_time = 0.0;
  auto* solve_cmd = app.add_subcommand("solve", "Decompose a data matrix");
  solve_cmd->add_option("--input", solve.input, "Data matrix (.srpm or .csv)")
      ->required()
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--lambda", solve.lambda, "Sparse weight (default 1/sqrt(rows))");
  solve_cmd->add_option("--mu", solve.mu, "Fit weight (default sqrt(cols/2))");
  solve_cmd->add_option("--eps", solve.eps, "Stopping tolerance on the KKT residual");
  solve_cmd->add_option("--mode", solve_mode, "plain or acc");
  solve_cmd->add_option("--max-iter", solve.max_iter, "Iteration cap");
  solve_cmd->add_option("--k0", solve.k0, "Initial rank guess (acc mode)");
  solve_cmd->add_option("--out-prefix", solve.out_prefix, "Prefix for output files");
  auto* solve_time = solve_cmd->add_option("--max-time", solve_max_time,
                                           "Wall-clock cap in seconds");

  cli::BenchOptions bench;
  std::vector<std::string> bench_modes{"plain"};
  auto* bench_cmd = app.add_subcommand("bench", "Run a synthetic benchmark grid");
  bench_cmd->add_option("--n", bench.n, "Sizes")->required();
  bench_cmd->add_option("--r", bench.r, "Ranks")->required();
  bench_cmd->add_option("--s", bench.s, "Sparsity counts (overrides --s-frac)");
  bench_cmd->add_option("--s-frac", bench.s_frac, "Sparsity as a fraction of n^2");
  bench_cmd->add_option("--sigma", bench.sigma, "Noise levels")->required();
  bench_cmd->add_option("--seeds", bench.seeds, "Seeds")->required();
  bench_cmd->add_option("--eps", bench.eps, "Stopping tolerance");
  bench_cmd->add_option("--modes", bench_modes, "plain and/or acc");
  bench_cmd->add_option("--max-iter", bench.max_iter, "Iteration cap per solve");
  bench_cmd->add_option("--max-time", bench.max_time_seconds, "Seconds per solve");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (SRPCP_THREADS caps)");
  bench_cmd->add_option("--out", bench.out, "Output CSV")->required();

  cli::VideoOptions video;
  std::string video_mode = "acc";
  auto* video_cmd = app.add_subcommand("video", "Background/foreground split of PGM frames");
  video_cmd->add_option("--frames-dir", video.frames_dir, "Directory of P5 PGM frames")
      ->required()
      ->check(CLI::ExistingDirectory);
  video_cmd->add_option("--out-dir", video.out_dir, "Output directory")->required();
  video_cmd->add_option("--eps", video.eps, "Stopping tolerance");
  video_cmd->add_flag("--stretch", video.stretch, "Contrast-stretch the output frames");
  video_cmd->add_option("--mode", video_mode, "plain or acc");
  video_cmd->add_option("--max-iter", video.max_iter, "Iteration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; every usage error maps to the error code.
    return app.exit(e) == 0 ? cli::kExitOk : cli::kExitError;
  }

  try {
    if (*gen_cmd) return cli::cmd_gen(gen, std::cout);
    if (*solve_cmd) {
      solve.mode = mode_flag(solve_mode);
      if (*solve_time) solve.max_time_seconds = solve_max_time;
      return cli::cmd_solve(solve, std::cout);
    }
    if (*bench_cmd) {
      bench.modes.clear();
      for (const std::string& m : bench_modes) bench.modes.push_back(mode_flag(m));
      return cli::cmd_bench(bench, std::cout);
    }
    if (*video_cmd) {
      video.mode = mode_flag(video_mode);
      return cli::cmd_video(video, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitError;
  }
  return cli::kExitError;
}
