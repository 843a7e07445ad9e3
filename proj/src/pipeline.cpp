#include "fnmc/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "fnmc/multicomplex.hpp"

namespace fnmc {

namespace {

FnChain apply_tree(const FnTree& t, int r) {
  switch (r) {
    case 0: return D0(t);
    case 1: return D1(t);
    case 2: return D2(t);
    case 3: return D3(t);
  }
  throw FnError("differential index must be 0..3");
}

bool uses_depth_one(const FnTree& t) { return t.has_depth(1); }

// Sorted, reduced chains merge by symmetric difference.
std::vector<FnTree> xor_merge(const std::vector<FnTree>& a, const std::vector<FnTree>& b) {
  std::vector<FnTree> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string chain_hash(const FnChain& c) { return hex(fnv1a(format_fnchain(c))); }

std::string inputs_hash(std::initializer_list<const FnChain*> chains) {
  std::uint64_t h = 1469598103934665603ull;
  for (auto* c : chains) h = fnv1a(format_fnchain(*c), h);
  return hex(h);
}

struct Checkpoint {
  FnChain chain;
  std::string hash, inputs;
  std::optional<int> t_min;
};

void write_checkpoint(const std::filesystem::path& path, const FnChain& c, const std::string& inputs,
                      std::optional<int> t_min) {
  std::ofstream f(path);
  if (!f) throw FnError("cannot write " + path.string());
  f << "# hash=" << chain_hash(c) << " inputs=" << inputs;
  if (t_min) f << " t_min=" << *t_min;
  f << "\n" << format_fnchain(c);
  if (!f) throw FnError("write failed: " + path.string());
}

std::optional<Checkpoint> read_checkpoint(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::ifstream f(path);
  std::string first;
  std::getline(f, first);
  Checkpoint cp;
  std::istringstream hs(first);
  std::string tok;
  hs >> tok;
  if (tok != "#") throw FnError("checkpoint " + path.string() + ": missing hash line");
  while (hs >> tok) {
    if (tok.rfind("hash=", 0) == 0) cp.hash = tok.substr(5);
    else if (tok.rfind("inputs=", 0) == 0) cp.inputs = tok.substr(7);
    else if (tok.rfind("t_min=", 0) == 0) cp.t_min = std::stoi(tok.substr(6));
  }
  std::stringstream rest;
  rest << f.rdbuf();
  cp.chain = parse_fnchain(rest.str()).chain;
  if (cp.hash != chain_hash(cp.chain))
    throw FnError("checkpoint " + path.string() + ": content hash mismatch");
  return cp;
}

class Stopwatch {
 public:
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::size_t popcount(const Gf2Vector& v) { return static_cast<std::size_t>(std::count(v.begin(), v.end(), 1)); }

}  // namespace

FnChain drop_depth_one(const FnChain& c) {
  std::vector<FnTree> keep;
  for (auto& t : c)
    if (!uses_depth_one(t)) keep.push_back(t);
  return FnChain::from_terms(c.points(), std::move(keep));
}

FnChain apply_parallel(const FnChain& c, int r, int threads, bool prune_depth_one,
                       std::size_t* raw_terms) {
  const int out_points = c.points() + r;
  const std::size_t n = c.size();
  const int workers = static_cast<int>(std::clamp<std::size_t>(threads < 1 ? 1 : threads, 1, std::max<std::size_t>(n, 1)));
  std::vector<std::vector<FnTree>> parts(workers);
  std::vector<std::size_t> raw(workers, 0);
  constexpr std::size_t kFlush = std::size_t{1} << 22;

  auto work = [&](int w) {
    const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
    std::vector<FnTree> acc, buf;
    auto flush = [&] {
      reduce_mod2(buf);
      acc = xor_merge(acc, buf);
      buf.clear();
    };
    for (std::size_t i = lo; i < hi; ++i) {
      for (auto& t : apply_tree(c.terms()[i], r)) {
        ++raw[w];
        if (!prune_depth_one || !uses_depth_one(t)) buf.push_back(t);
      }
      if (buf.size() >= kFlush) flush();
    }
    flush();
    parts[w] = std::move(acc);
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::vector<FnTree> total;
  for (auto& p : parts) total = xor_merge(total, p);
  if (raw_terms) {
    *raw_terms = 0;
    for (auto x : raw) *raw_terms += x;
  }
  return FnChain::from_terms(out_points, std::move(total));
}

D0Solution solve_d0(const FnChain& b, int d, const SolveProgress& progress) {
  const int k = b.points();
  const GroupRingMatrix a = action_convert(d0_matrix(k, d));
  const GrVector rhs = action_convert(chain_to_grvector(b, d - 1));
  auto res = equivariant_solve(a, rhs, 0, progress);
  D0Solution out;
  out.feasible = res.feasible;
  out.stats = res.stats;
  if (!res.feasible) return out;
  out.x = grvector_to_chain(action_convert(res.x), d);
  if (!(D0(out.x) == b)) throw FnError("solution fails D0 x = b at chain level");
  return out;
}

PipelineReport run_d3_pipeline(const PipelineOptions& opt, WitnessState* state) {
  namespace fs = std::filesystem;
  const fs::path dir(opt.workdir);
  fs::create_directories(dir);
  auto log = [&](const std::string& s) {
    if (opt.log) opt.log(s);
  };
  PipelineReport rep;
  Stopwatch sw;
  auto record = [&](std::string name, std::size_t terms, std::optional<int> t_min = std::nullopt) {
    rep.stages.push_back({std::move(name), sw.lap(), terms, t_min});
    const auto& s = rep.stages.back();
    log(s.stage + ": " + std::to_string(s.terms) + " terms, " + std::to_string(s.seconds) + " s" +
        (t_min ? ", t_min=" + std::to_string(*t_min) : std::string()));
  };
  auto solver_log = [&](const char* what) {
    return [&log, what](int level, std::size_t rows, std::size_t pivots) {
      log(std::string(what) + ": level S" + std::to_string(level) + ", " + std::to_string(rows) +
          " rows, " + std::to_string(pivots) + " unit pivots");
    };
  };

  FnChain vas;
  if (opt.representative) {
    vas = *opt.representative;
  } else {
    vas = vassiliev_class().cycle;
  }
  if (vas.points() != 6) throw FnError("representative must live on 6 points");
  for (auto& t : vas)
    if (t.degree() != 8) throw FnError("representative must have degree 8");
  if (!D0(vas).empty()) throw FnError("representative is not a D0-cycle");
  write_fnchain((dir / "vas.fnchain").string(), vas);
  record("vas", vas.size());

  const FnChain d1v = apply_parallel(vas, 1, opt.threads);
  record("d1_vas", d1v.size());
  const FnChain d2v = apply_parallel(vas, 2, opt.threads);
  record("d2_vas", d2v.size());
  const FnChain d3v = apply_parallel(vas, 3, opt.threads);
  record("d3_vas", d3v.size());

  // Stage 1: D0 x = D1 vas in FN(7,9).
  const fs::path x_path = dir / "x.fnchain";
  const std::string x_inputs = inputs_hash({&vas});
  FnChain x;
  std::optional<int> x_tmin;
  std::optional<Checkpoint> cp;
  if (opt.resume && (cp = read_checkpoint(x_path))) {
    if (cp->inputs != x_inputs) throw FnError("checkpoint x.fnchain belongs to another representative");
    if (!(D0(cp->chain) == d1v)) throw FnError("checkpoint x.fnchain fails D0 x = D1 vas");
    x = std::move(cp->chain);
    x_tmin = cp->t_min;
    log("resumed x from checkpoint");
  } else {
    auto sol = solve_d0(d1v, 9, solver_log("solve x"));
    if (!sol.feasible) throw FnError("stage 1 system D0 x = D1 vas is infeasible");
    x = std::move(sol.x);
    x_tmin = sol.stats.t_min;
    write_checkpoint(x_path, x, x_inputs, x_tmin);
  }
  record("solve_x", x.size(), x_tmin);

  // Stage 2: D0 y = D2 vas + D1 x in FN(8,10).
  const FnChain rhs = d2v + apply_parallel(x, 1, opt.threads);
  record("rhs_y", rhs.size());
  const fs::path y_path = dir / "y.fnchain";
  const std::string y_inputs = inputs_hash({&vas, &x});
  FnChain y;
  std::optional<int> y_tmin;
  if (opt.resume && (cp = read_checkpoint(y_path))) {
    if (cp->inputs != y_inputs) throw FnError("checkpoint y.fnchain belongs to other inputs");
    if (!(D0(cp->chain) == rhs)) throw FnError("checkpoint y.fnchain fails D0 y = D2 vas + D1 x");
    y = std::move(cp->chain);
    y_tmin = cp->t_min;
    log("resumed y from checkpoint");
  } else {
    auto sol = solve_d0(rhs, 10, solver_log("solve y"));
    if (!sol.feasible) throw FnError("stage 2 system D0 y = D2 vas + D1 x is infeasible");
    y = std::move(sol.x);
    y_tmin = sol.stats.t_min;
    write_checkpoint(y_path, y, y_inputs, y_tmin);
  }
  record("solve_y", y.size(), y_tmin);

  // Result D1 y + D2 x + D3 vas; terms with a depth-1 gap never meet a Sinha shape.
  const fs::path r_path = dir / "result.fnchain";
  const std::string r_inputs = inputs_hash({&vas, &x, &y});
  FnChain result;
  if (opt.resume && (cp = read_checkpoint(r_path)) && cp->inputs == r_inputs) {
    result = std::move(cp->chain);
    log("resumed result from checkpoint");
  } else {
    std::size_t raw = 0;
    FnChain d1y = apply_parallel(y, 1, opt.threads, true, &raw);
    log("d1_y: " + std::to_string(raw) + " raw terms");
    result = d1y + drop_depth_one(apply_parallel(x, 2, opt.threads)) + drop_depth_one(d3v);
    write_checkpoint(r_path, result, r_inputs, std::nullopt);
  }
  record("result", result.size());

  rep.result = class_coordinates(result, 9, 5);
  record("coordinates", popcount(rep.result.bits));

  const Gf2Vector img = d1_matrix(10, 5) * rep.result.bits;
  rep.result_is_d1_cycle = popcount(img) == 0;
  Gf2Matrix m = d1_matrix(9, 5);
  rep.rank_base = gf2_rank(m);
  Gf2Matrix with = m;
  with.append_column(rep.result.bits);
  rep.rank_with_result = gf2_rank(with);
  for (auto& v : framing_span(9, 5)) m.append_column(v.bits);
  rep.rank_framing = gf2_rank(m);
  m.append_column(rep.result.bits);
  rep.rank_framing_with_result = gf2_rank(m);
  rep.verdict_e = rep.rank_with_result > rep.rank_base;
  rep.verdict_e_underline = rep.rank_framing_with_result > rep.rank_framing;
  record("ranks", 0);

  {
    std::ofstream f(dir / "result.gf2vec");
    f << format_gf2vec(rep.result);
  }
  if (state) *state = WitnessState{std::move(vas), std::move(x), std::move(y), std::move(result), rep.result};
  return rep;
}

std::string format_report_text(const PipelineReport& r) {
  std::ostringstream s;
  for (auto& st : r.stages) {
    s << "stage=" << st.stage << " seconds=" << st.seconds << " terms=" << st.terms;
    if (st.t_min) s << " t_min=" << *st.t_min;
    s << "\n";
  }
  s << "result_support=" << popcount(r.result.bits) << "\n"
    << "result_is_d1_cycle=" << (r.result_is_d1_cycle ? "true" : "false") << "\n"
    << "rank_base=" << r.rank_base << "\n"
    << "rank_with_result=" << r.rank_with_result << "\n"
    << "rank_framing=" << r.rank_framing << "\n"
    << "rank_framing_with_result=" << r.rank_framing_with_result << "\n"
    << "verdict_e=" << (r.verdict_e ? "nonzero" : "zero") << "\n"
    << "verdict_e_underline=" << (r.verdict_e_underline ? "nonzero" : "zero") << "\n";
  return s.str();
}

std::string format_report_json(const PipelineReport& r) {
  nlohmann::json j;
  j["stages"] = nlohmann::json::array();
  for (auto& st : r.stages) {
    nlohmann::json e{{"stage", st.stage}, {"seconds", st.seconds}, {"terms", st.terms}};
    e["t_min"] = st.t_min ? nlohmann::json(*st.t_min) : nlohmann::json(nullptr);
    j["stages"].push_back(e);
  }
  j["result_support"] = popcount(r.result.bits);
  j["result_is_d1_cycle"] = r.result_is_d1_cycle;
  j["rank_base"] = r.rank_base;
  j["rank_with_result"] = r.rank_with_result;
  j["rank_framing"] = r.rank_framing;
  j["rank_framing_with_result"] = r.rank_framing_with_result;
  j["verdict_e"] = r.verdict_e;
  j["verdict_e_underline"] = r.verdict_e_underline;
  return j.dump(2) + "\n";
}

}  // namespace fnmc
