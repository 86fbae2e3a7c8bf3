// Command-line front end for the fouriercsp shared library. Subcommands:
//   solve  <instance>             run the continuous-local-search solver
//   gen    scheduling|coloring    emit benchmark instances
//   mdd    build|eval|check       decision-diagram files
//   bench  <dir>                  run a directory and score it
//
// Machine-readable output goes to stdout, human summaries to stderr.
// Exit codes for solve: 10 fully satisfied, 20 best effort, 1 error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fouriercsp.h"

namespace {

struct SolveFlags {
  double timeout = 1000.0;
  int restarts = 32;
  int max_iter = 10000;
  std::string step_size = "auto";
  double eps = 1e-6;
  std::string rounding = "randomized";
  int samples = 100;
  unsigned long long seed = 0;
  bool batch = false;
  bool deterministic = false;
  int threads = 0;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--timeout", f.timeout, "time budget in seconds")->capture_default_str();
  cmd->add_option("--restarts", f.restarts)->capture_default_str();
  cmd->add_option("--max-iter", f.max_iter)->capture_default_str();
  cmd->add_option("--step-size", f.step_size, "'auto' or a positive real")->capture_default_str();
  cmd->add_option("--eps", f.eps, "stop threshold on the squared gradient-mapping norm")
      ->capture_default_str();
  cmd->add_option("--rounding", f.rounding)->check(CLI::IsMember({"randomized", "argmax"}))
      ->capture_default_str();
  cmd->add_option("--samples", f.samples, "rounded assignments per local optimum")->capture_default_str();
  cmd->add_option("--seed", f.seed)->capture_default_str();
  cmd->add_flag("--batch", f.batch, "batched edge-table evaluation");
  cmd->add_flag("--deterministic", f.deterministic, "reproducible reports");
  cmd->add_option("--threads", f.threads, "0 = hardware (or FOURIERCSP_THREADS)");
}

fcsp_solve_options to_options(const SolveFlags& f) {
  fcsp_solve_options o;
  fcsp_solve_options_init(&o);
  o.timeout_s = f.timeout;
  o.restarts = f.restarts;
  o.max_iter = f.max_iter;
  if (f.step_size != "auto") o.step_size = std::stod(f.step_size);
  o.eps = f.eps;
  o.rounding_argmax = f.rounding == "argmax" ? 1 : 0;
  o.samples = f.samples;
  o.seed = f.seed;
  o.use_batch = f.batch ? 1 : 0;
  o.deterministic = f.deterministic ? 1 : 0;
  o.threads = f.threads;
  if (o.threads == 0) {
    if (const char* env = std::getenv("FOURIERCSP_THREADS")) o.threads = std::atoi(env);
  }
  return o;
}

int fail(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 1;
}

int fail_api(const std::string& what) {
  std::cerr << "error: " << what << ": " << fcsp_last_error() << "\n";
  return 1;
}

struct InstanceHandle {
  fcsp_instance* ptr = nullptr;
  ~InstanceHandle() { fcsp_instance_free(ptr); }
};
struct ReportHandle {
  fcsp_report* ptr = nullptr;
  ~ReportHandle() { fcsp_report_free(ptr); }
};
struct MddHandle {
  fcsp_mdd* ptr = nullptr;
  ~MddHandle() { fcsp_mdd_free(ptr); }
};

int run_solve(const std::string& path, const SolveFlags& flags) {
  InstanceHandle inst;
  if (fcsp_instance_read(path.c_str(), &inst.ptr) != FCSP_OK) return fail_api(path);
  const fcsp_solve_options opts = to_options(flags);
  ReportHandle report;
  if (fcsp_solve(inst.ptr, &opts, &report.ptr) != FCSP_OK) return fail_api("solve");
  char* json = fcsp_report_json(report.ptr);
  std::cout << json << "\n";
  fcsp_string_free(json);
  std::cerr << "hard " << fcsp_report_hard_satisfied(report.ptr) << "/" << fcsp_report_hard_total(report.ptr)
            << ", soft cost " << fcsp_report_soft_cost(report.ptr) << ", "
            << (fcsp_report_timed_out(report.ptr) ? "timed out" : "within budget") << ", "
            << fcsp_report_wall_time(report.ptr) << " s\n";
  return fcsp_report_fully_satisfied(report.ptr) ? 10 : 20;
}

const std::vector<int> kSchedulingWorkers{32, 64, 128, 256, 512};
const std::vector<int> kSchedulingRatios{4, 8, 16};
const std::vector<int> kColoringNodes{512, 1024, 2048, 4096};
const std::vector<int> kColoringColors{8, 16, 32, 64};

std::string grid_hint(const std::vector<int>& v) {
  std::string s = "{";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "}";
}

bool in_grid(const std::vector<int>& grid, int v) {
  return std::find(grid.begin(), grid.end(), v) != grid.end();
}

int run_gen_scheduling(int workers, int ratio, unsigned long long seed, const std::string& out) {
  if (!in_grid(kSchedulingWorkers, workers))
    return fail("--workers must be one of " + grid_hint(kSchedulingWorkers));
  if (!in_grid(kSchedulingRatios, ratio))
    return fail("--ratio must be one of " + grid_hint(kSchedulingRatios));
  InstanceHandle inst;
  if (fcsp_gen_scheduling(workers, ratio, seed, &inst.ptr) != FCSP_OK) return fail_api("gen scheduling");
  if (fcsp_instance_write(inst.ptr, out.c_str()) != FCSP_OK) return fail_api(out);
  std::cerr << "wrote " << out << ": " << fcsp_instance_var_count(inst.ptr) << " variables, "
            << fcsp_instance_constraint_count(inst.ptr) << " constraints\n";
  return 0;
}

int run_gen_coloring(int nodes, int colors, unsigned long long seed, const std::string& out) {
  if (!in_grid(kColoringNodes, nodes))
    return fail("--nodes must be one of " + grid_hint(kColoringNodes));
  if (!in_grid(kColoringColors, colors))
    return fail("--colors must be one of " + grid_hint(kColoringColors));
  InstanceHandle inst;
  if (fcsp_gen_coloring(nodes, colors, seed, &inst.ptr) != FCSP_OK) return fail_api("gen coloring");
  if (fcsp_instance_write(inst.ptr, out.c_str()) != FCSP_OK) return fail_api(out);
  std::cerr << "wrote " << out << ": " << fcsp_instance_var_count(inst.ptr) << " variables, "
            << fcsp_instance_constraint_count(inst.ptr) << " constraints\n";
  return 0;
}

int run_mdd_build(const std::string& path, const std::string& out_dir) {
  InstanceHandle inst;
  if (fcsp_instance_read(path.c_str(), &inst.ptr) != FCSP_OK) return fail_api(path);
  const int n = fcsp_instance_constraint_count(inst.ptr);
  std::vector<MddHandle> mdds(static_cast<size_t>(n));
  int pad_to = 0;
  for (int i = 0; i < n; ++i) {
    if (fcsp_mdd_build(inst.ptr, i, &mdds[static_cast<size_t>(i)].ptr) != FCSP_OK)
      return fail_api("constraint " + std::to_string(i + 1));
    pad_to = std::max(pad_to, fcsp_mdd_edge_count(mdds[static_cast<size_t>(i)].ptr));
  }
  std::filesystem::create_directories(out_dir);
  for (int i = 0; i < n; ++i) {
    const std::string out = out_dir + "/c" + std::to_string(i + 1) + ".mdd";
    if (fcsp_mdd_write(mdds[static_cast<size_t>(i)].ptr, out.c_str(), pad_to) != FCSP_OK)
      return fail_api(out);
  }
  std::cerr << "wrote " << n << " diagrams to " << out_dir << " (rows padded to " << pad_to << ")\n";
  return 0;
}

int run_mdd_eval(const std::string& path, const std::string& point) {
  MddHandle m;
  if (fcsp_mdd_read(path.c_str(), &m.ptr) != FCSP_OK) return fail_api(path);
  const int len = fcsp_mdd_point_len(m.ptr);
  const int nv = fcsp_mdd_var_count(m.ptr);
  std::vector<int> ids(static_cast<size_t>(nv)), doms(static_cast<size_t>(nv));
  fcsp_mdd_vars(m.ptr, ids.data(), doms.data(), nv);
  std::vector<double> p;
  if (point == "uniform") {
    for (int d : doms)
      for (int j = 0; j < d; ++j) p.push_back(1.0 / d);
  } else {
    std::stringstream ss(point);
    std::string tok;
    while (std::getline(ss, tok, ',')) p.push_back(std::stod(tok));
  }
  if (static_cast<int>(p.size()) != len)
    return fail("--point needs " + std::to_string(len) + " comma-separated values (rows in level order)");
  double cop = 0;
  std::vector<double> grad(static_cast<size_t>(len), 0.0);
  if (fcsp_mdd_eval(m.ptr, p.data(), len, &cop, grad.data()) != FCSP_OK) return fail_api("eval");
  std::cout << "{\"cop\":" << cop << ",\"gradient\":[";
  for (size_t k = 0; k < grad.size(); ++k) std::cout << (k ? "," : "") << grad[k];
  std::cout << "]}\n";
  return 0;
}

int run_mdd_check(const std::string& path) {
  if (fcsp_mdd_check(path.c_str()) != FCSP_OK) {
    std::cerr << path << ": " << fcsp_last_error() << "\n";
    return 1;
  }
  std::cerr << path << ": ok\n";
  return 0;
}

std::map<std::string, double> read_best_known(const std::string& path) {
  std::map<std::string, double> best;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open best-known file '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const size_t comma = line.find(',');
    if (comma == std::string::npos) continue;
    best[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
  }
  return best;
}

int run_bench(const std::string& dir, const SolveFlags& flags, const std::string& out_csv,
              const std::string& best_known_path) {
  std::vector<std::string> paths;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".csp") paths.push_back(entry.path().string());
  }
  if (ec) return fail("cannot read directory '" + dir + "'");
  if (paths.empty()) return fail("no instances (*.csp) in '" + dir + "'");
  std::sort(paths.begin(), paths.end());

  std::map<std::string, double> best_known;
  if (!best_known_path.empty()) {
    try {
      best_known = read_best_known(best_known_path);
    } catch (const std::exception& e) {
      return fail(e.what());
    }
  }

  std::ostringstream csv;
  csv << "instance,seed,solved,time_s,hard_violations,soft_cost,par2_contrib,relative_score\n";
  std::vector<double> times;
  std::vector<int> solved_flags;
  double score_sum = 0;
  int score_count = 0, wins = 0, solved_count = 0;
  for (const auto& path : paths) {
    const std::string name = std::filesystem::path(path).filename().string();
    InstanceHandle inst;
    if (fcsp_instance_read(path.c_str(), &inst.ptr) != FCSP_OK) {
      std::cerr << name << ": " << fcsp_last_error() << " (skipped)\n";
      csv << name << "," << flags.seed << ",error,,,,,\n";
      continue;
    }
    const fcsp_solve_options opts = to_options(flags);
    const auto t0 = std::chrono::steady_clock::now();
    ReportHandle report;
    if (fcsp_solve(inst.ptr, &opts, &report.ptr) != FCSP_OK) {
      std::cerr << name << ": " << fcsp_last_error() << " (skipped)\n";
      csv << name << "," << flags.seed << ",error,,,,,\n";
      continue;
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int hard_viol = fcsp_report_hard_total(report.ptr) - fcsp_report_hard_satisfied(report.ptr);
    const double soft_cost = fcsp_report_soft_cost(report.ptr);
    // "solved" means every hard constraint holds: full satisfaction for pure
    // satisfaction instances, feasibility for optimization ones.
    const bool solved = hard_viol == 0;
    times.push_back(elapsed);
    solved_flags.push_back(solved ? 1 : 0);
    solved_count += solved ? 1 : 0;
    const double par2_contrib = (solved && elapsed <= flags.timeout) ? elapsed : 2.0 * flags.timeout;
    csv << name << "," << flags.seed << "," << (solved ? "yes" : "no") << "," << elapsed << ","
        << hard_viol << "," << soft_cost << "," << par2_contrib << ",";
    auto it = best_known.find(name);
    if (it != best_known.end()) {
      const double cost = fcsp_report_weighted_violation(report.ptr);
      const double score = fcsp_relative_score(cost, it->second);
      csv << score;
      score_sum += score;
      ++score_count;
      if (cost <= it->second) ++wins;
    }
    csv << "\n";
    std::cerr << name << ": " << (solved ? "solved" : "best-effort") << " in " << elapsed << " s\n";
  }

  const double par2 =
      fcsp_par2(times.data(), solved_flags.data(), static_cast<int>(times.size()), flags.timeout);
  std::ostringstream summary;
  summary << "instances " << paths.size() << ", solved " << solved_count << ", PAR-2 " << par2;
  if (score_count > 0)
    summary << ", relative score " << score_sum / score_count << ", wins " << wins << "/" << score_count;
  std::cerr << summary.str() << "\n";

  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    if (!out) return fail("cannot write '" + out_csv + "'");
    out << csv.str();
    std::cerr << "wrote " << out_csv << "\n";
  } else {
    std::cout << csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-domain CSP solver by continuous optimization over decision diagrams"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "solve one instance file");
  std::string solve_path;
  solve->add_option("instance", solve_path, "instance file")->required();
  SolveFlags solve_flags;
  add_solve_flags(solve, solve_flags);

  auto* gen = app.add_subcommand("gen", "generate benchmark instances");
  gen->require_subcommand(1);
  auto* gen_sched = gen->add_subcommand("scheduling", "task scheduling instances");
  int workers = 32, ratio = 4;
  unsigned long long gen_seed = 0;
  std::string gen_out = "instance.csp";
  gen_sched->add_option("--workers", workers, "clock-cycle grid value")->required();
  gen_sched->add_option("--ratio", ratio, "jobs = ratio * workers")->required();
  gen_sched->add_option("--seed", gen_seed)->capture_default_str();
  gen_sched->add_option("--out", gen_out)->capture_default_str();
  auto* gen_color = gen->add_subcommand("coloring", "graph coloring with parity hashes");
  int nodes = 512, colors = 8;
  gen_color->add_option("--nodes", nodes)->required();
  gen_color->add_option("--colors", colors)->required();
  gen_color->add_option("--seed", gen_seed)->capture_default_str();
  gen_color->add_option("--out", gen_out)->capture_default_str();

  auto* mdd = app.add_subcommand("mdd", "decision-diagram files");
  mdd->require_subcommand(1);
  auto* mdd_build = mdd->add_subcommand("build", "compile every constraint to a .mdd file");
  std::string mdd_instance, mdd_out_dir = "mdd-out";
  mdd_build->add_option("instance", mdd_instance)->required();
  mdd_build->add_option("--out-dir", mdd_out_dir)->capture_default_str();
  auto* mdd_eval = mdd->add_subcommand("eval", "circuit-output probability and gradient");
  std::string mdd_file, mdd_point = "uniform";
  mdd_eval->add_option("file", mdd_file)->required();
  mdd_eval->add_option("--point", mdd_point, "'uniform' or flat comma-separated rows")
      ->capture_default_str();
  auto* mdd_check = mdd->add_subcommand("check", "validate a .mdd file");
  std::string mdd_check_file;
  mdd_check->add_option("file", mdd_check_file)->required();

  auto* bench = app.add_subcommand("bench", "run a directory of instances");
  std::string bench_dir, bench_csv, bench_best;
  bench->add_option("dir", bench_dir, "directory of *.csp files")->required();
  bench->add_option("--out", bench_csv, "per-instance CSV path (default: stdout)");
  bench->add_option("--best-known", bench_best, "CSV of instance,best_cost for relative scores");
  SolveFlags bench_flags;
  add_solve_flags(bench, bench_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(solve_path, solve_flags);
    if (gen_sched->parsed()) return run_gen_scheduling(workers, ratio, gen_seed, gen_out);
    if (gen_color->parsed()) return run_gen_coloring(nodes, colors, gen_seed, gen_out);
    if (mdd_build->parsed()) return run_mdd_build(mdd_instance, mdd_out_dir);
    if (mdd_eval->parsed()) return run_mdd_eval(mdd_file, mdd_point);
    if (mdd_check->parsed()) return run_mdd_check(mdd_check_file);
    if (bench->parsed()) return run_bench(bench_dir, bench_flags, bench_csv, bench_best);
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return fail("no subcommand");
}
