#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fnmc/group_ring.hpp"
#include "fnmc/homology.hpp"
#include "fnmc/tree.hpp"

namespace fnmc {

// Applies D_r termwise on `threads` workers and reduces mod 2. With prune_depth_one, output
// terms using depth 1 are discarded as they are produced. raw_terms receives the number of
// terms before reduction.
FnChain apply_parallel(const FnChain& c, int r, int threads, bool prune_depth_one = false,
                       std::size_t* raw_terms = nullptr);
FnChain drop_depth_one(const FnChain& c);

// Solves D0 x = b for x in FN(k, d), with b in FN(k, d-1).
struct D0Solution {
  bool feasible = false;
  FnChain x;
  SolveStats stats;
};
D0Solution solve_d0(const FnChain& b, int d, const SolveProgress& progress = {});

struct StageRecord {
  std::string stage;
  double seconds = 0;
  std::size_t terms = 0;
  std::optional<int> t_min;
};

struct PipelineReport {
  std::vector<StageRecord> stages;
  std::size_t rank_base = 0;                 // im d1 at (9,5)
  std::size_t rank_with_result = 0;
  std::size_t rank_framing = 0;              // im d1 + framing span
  std::size_t rank_framing_with_result = 0;
  bool result_is_d1_cycle = false;
  bool verdict_e = false;            // result outside im d1
  bool verdict_e_underline = false;  // result outside im d1 + framing
  CoordVector result;
};

struct PipelineOptions {
  std::string workdir = ".";
  bool resume = false;
  int threads = 1;
  // Replaces the constructed class representative (a D0-cycle in FN(6,8)).
  std::optional<FnChain> representative;
  std::function<void(const std::string&)> log;
};

struct WitnessState {
  FnChain vas, x, y, result;
  CoordVector coords;
};

// Witnesses x, y with D0 x = D1 vas, D0 y = D2 vas + D1 x, and the class of
// D1 y + D2 x + D3 vas in E1(9,10). Checkpoints x, y and result go to the work directory.
PipelineReport run_d3_pipeline(const PipelineOptions& options, WitnessState* state = nullptr);

std::string format_report_text(const PipelineReport& r);
std::string format_report_json(const PipelineReport& r);

}  // namespace fnmc
