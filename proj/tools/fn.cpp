#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "fnmc/group_ring.hpp"
#include "fnmc/homology.hpp"
#include "fnmc/multicomplex.hpp"
#include "fnmc/pipeline.hpp"

using namespace fnmc;

namespace {

constexpr int kOk = 0, kFailed = 1, kUsage = 2;

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FnError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
    return;
  }
  std::ofstream f(out);
  if (!f) throw FnError("cannot write " + out);
  f << content;
}

struct Args {
  std::string kind;
  int points = 0;
  int degree = -1;
  int max_level = 3;
  std::string op = "d0";
  std::string in, out, rhs, diagram;
  std::string workdir = "fn-work";
  bool resume = false;
  bool perturb = false;
  std::string representative;
  int threads = 1;
  std::string report;
  int samples = 1000;
  unsigned seed = 1;
  std::string from = "tourtchine";
  int a = 0, b = 0, m = 3;
};

int op_index(const std::string& op) {
  if (op == "d0") return 0;
  if (op == "d1") return 1;
  if (op == "d2") return 2;
  if (op == "d3") return 3;
  throw CLI::ValidationError("--op", "expected d0, d1, d2 or d3");
}

int cmd_enumerate(const Args& a) {
  std::string s;
  if (a.kind == "depths") {
    for (auto& v : enumerate_depth_vectors(a.points, a.degree)) {
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
      s += "\n";
    }
  } else if (a.kind == "trees") {
    s = format_fnchain(FnChain::from_terms(a.points, enumerate_trees(a.points, a.degree)));
  } else if (a.kind == "diagrams") {
    if (a.degree % 2) throw FnError("chord diagrams live in even degree");
    for (auto& g : enumerate_normalized(a.points, a.degree / 2)) {
      for (std::size_t e = 0; e < g.edges.size(); ++e)
        s += (e ? "," : "") + std::to_string(g.edges[e].first) + "-" + std::to_string(g.edges[e].second);
      s += "\n";
    }
  } else if (a.kind == "planetary") {
    ChordDiagram g = !a.diagram.empty() ? parse_diagram_inline(a.diagram, a.points) : parse_diag(slurp(a.in));
    s = format_fnchain(planetary_cycle(g));
  } else {
    throw CLI::ValidationError("enumerate", "kind must be depths, trees, diagrams or planetary");
  }
  emit(a.out, s);
  return kOk;
}

int cmd_diff(const Args& a) {
  auto cf = read_fnchain(a.in);
  if (cf.ambient != 3) throw FnError("only m = 3 chains are supported by diff");
  emit(a.out, format_fnchain(apply_parallel(cf.chain, op_index(a.op), a.threads)));
  return kOk;
}

int cmd_matrix(const Args& a) {
  if (a.op == "d0") {
    emit(a.out, format_grmat(d0_matrix(a.points, a.degree)));
  } else if (a.op == "d1") {
    if (a.degree % 2) throw FnError("d1 matrices live in even degree");
    emit(a.out, format_gf2(d1_matrix(a.points, a.degree / 2)));
  } else {
    throw CLI::ValidationError("--op", "matrix supports d0 (group ring) and d1 (homology)");
  }
  return kOk;
}

int cmd_rank(const Args& a) {
  std::cout << gf2_rank(parse_gf2(slurp(a.in))) << "\n";
  return kOk;
}

int cmd_solve(const Args& a) {
  auto m = parse_grmat(slurp(a.in));
  auto b = parse_grvec(slurp(a.rhs));
  auto res = equivariant_solve(m, b, 0, [](int level, std::size_t rows, std::size_t pivots) {
    std::cerr << "level S" << level << ": " << rows << " rows, " << pivots << " unit pivots\n";
  });
  std::cerr << "t_min=" << res.stats.t_min << "\n";
  if (!res.feasible) {
    std::cerr << "infeasible\n";
    return kFailed;
  }
  emit(a.out, format_grvec(res.x));
  return kOk;
}

std::vector<FnTree> all_trees(int n) {
  std::vector<FnTree> out;
  for (int d = 0; d <= 2 * (n - 1); ++d) {
    auto t = enumerate_trees(n, d);
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

int cmd_verify(const Args& a) {
  std::size_t checked = 0, failed = 0;
  if (a.kind == "multicomplex" || a.kind == "mu-bound") {
    std::vector<FnTree> trees;
    if (a.points <= 4) {
      trees = all_trees(a.points);
    } else {
      std::mt19937 rng(a.seed);
      for (int s = 0; s < a.samples; ++s) {
        std::vector<int> order(a.points), depths(a.points - 1);
        std::iota(order.begin(), order.end(), 1);
        std::shuffle(order.begin(), order.end(), rng);
        for (auto& d : depths) d = static_cast<int>(rng() % 3);
        trees.emplace_back(order, depths);
      }
    }
    for (auto& t : trees) {
      ++checked;
      bool ok = true;
      if (a.kind == "multicomplex") {
        ok = verify_truncated_identity(t, a.max_level) && (a.max_level < 3 || verify_sliced(t).ok);
      } else {
        const int n = t.points();
        for (int i = 0; i <= n + 1 && ok; ++i) ok = verify_mu_bound(t, {i});
        for (int i = 1; i <= n && ok; ++i)
          for (int j = i + 1; j <= n && ok; ++j) {
            ok = verify_mu_bound(t, {i, j});
            for (int l = j + 1; l <= n && ok; ++l) ok = verify_mu_bound(t, {i, j, l});
          }
      }
      if (!ok) {
        ++failed;
        std::cerr << "failed on " << format_tree(t) << "\n";
      }
    }
  } else if (a.kind == "m2") {
    for (int d = 0; d < a.points; ++d)
      for (auto& t : enumerate_trees(a.points, d)) {
        if (t.has_depth(2)) continue;
        ++checked;
        if (!verify_sliced_m2(t, a.max_level)) {
          ++failed;
          std::cerr << "failed on " << format_tree(t) << "\n";
        }
      }
  } else if (a.kind == "chain") {
    auto cf = read_fnchain(a.in);
    checked = 1;
    if (!D0(cf.chain).empty()) {
      failed = 1;
      std::cerr << "chain is not a D0-cycle\n";
    }
  } else {
    throw CLI::ValidationError("verify", "kind must be multicomplex, mu-bound, m2 or chain");
  }
  std::cout << a.kind << ": " << checked << " checked, " << failed << " failed\n";
  return failed ? kFailed : kOk;
}

int cmd_e2dim(const Args& a) {
  std::cout << e2_dimension(a.points, a.degree) << "\n";
  return kOk;
}

int cmd_bigrade(const Args& a) {
  Bigrading t;
  if (a.from == "tourtchine") {
    t = {a.a, a.b};
  } else if (a.from == "vassiliev") {
    // (n, d) = (-i, m i - j)
    t = {-a.a, a.m * -a.a - a.b};
  } else {
    throw CLI::ValidationError("--from", "expected tourtchine or vassiliev");
  }
  auto v = tourtchine_to_vassiliev(t, a.m);
  auto s = tourtchine_to_sinha(t, a.m);
  std::cout << "tourtchine (i,j) = (" << t.a << "," << t.b << ")\n"
            << "vassiliev (n,d) = (" << v.a << "," << v.b << ")\n"
            << "sinha (p,q) = (" << s.a << "," << s.b << ")\n"
            << "points = " << -s.a << ", inside vanishing lines: "
            << (inside_vanishing_lines(-s.a, s.b, a.m) ? "yes" : "no") << "\n";
  return kOk;
}

int cmd_d3vas(const Args& a) {
  PipelineOptions opt;
  opt.workdir = a.workdir;
  opt.resume = a.resume;
  opt.threads = a.threads;
  opt.log = [](const std::string& s) { std::cerr << s << std::endl; };
  if (!a.representative.empty()) opt.representative = read_fnchain(a.representative).chain;
  if (a.perturb) {
    FnChain base = opt.representative ? *opt.representative : vassiliev_class().cycle;
    opt.representative = base + planetary_cycle(q1_iota_squared());
  }
  PipelineReport rep;
  try {
    rep = run_d3_pipeline(opt);
  } catch (const FnError& e) {
    std::cerr << "pipeline failed: " << e.what() << "\n";
    return kFailed;
  }
  const std::string text = format_report_text(rep);
  std::cout << text;
  const std::string path = a.report.empty() ? a.workdir + "/report.txt" : a.report;
  emit(path, text);
  emit(path + ".json", format_report_json(rep));
  const bool ok = rep.result_is_d1_cycle && rep.verdict_e && rep.verdict_e_underline;
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fox-Neuwirth multicomplex toolkit"};
  app.require_subcommand(1);
  Args a;

  auto points = [&](CLI::App* c, bool required = true) {
    auto* o = c->add_option("--points,-k", a.points, "number of points")->check(CLI::Range(1, 16));
    if (required) o->required();
  };
  auto degree = [&](CLI::App* c) { c->add_option("--degree,-d", a.degree, "degree (sum of depths)")->required(); };

  auto* en = app.add_subcommand("enumerate", "list depth vectors, trees, normalized diagrams or a planetary cycle");
  en->add_option("kind", a.kind, "depths | trees | diagrams | planetary")->required();
  points(en, false);
  en->add_option("--degree,-d", a.degree, "degree");
  en->add_option("--diagram", a.diagram, "inline diagram, e.g. 1-2,1-3");
  en->add_option("--in", a.in, ".diag file");
  en->add_option("--out", a.out, "output file (default stdout)");

  auto* df = app.add_subcommand("diff", "apply D0..D3 to a chain");
  df->add_option("--op", a.op, "d0 | d1 | d2 | d3")->required();
  df->add_option("--in", a.in, ".fnchain input")->required();
  df->add_option("--out", a.out, ".fnchain output (default stdout)");
  df->add_option("--threads", a.threads, "worker threads")->check(CLI::Range(1, 256));

  auto* mx = app.add_subcommand("matrix", "D0 over the group ring (.grmat) or d1 on E1 (.gf2)");
  mx->add_option("--op", a.op, "d0 | d1");
  points(mx);
  degree(mx);
  mx->add_option("--out", a.out, "output file (default stdout)");

  auto* rk = app.add_subcommand("rank", "rank of a .gf2 matrix");
  rk->add_option("--in", a.in, ".gf2 input")->required();

  auto* sv = app.add_subcommand("solve", "solve A x = b over F2[S_k]");
  sv->add_option("--in", a.in, ".grmat matrix")->required();
  sv->add_option("--rhs", a.rhs, ".grvec right-hand side")->required();
  sv->add_option("--out", a.out, ".grvec output (default stdout)");

  auto* vf = app.add_subcommand("verify", "check identities: multicomplex | mu-bound | m2 | chain");
  vf->add_option("kind", a.kind, "multicomplex | mu-bound | m2 | chain")->required();
  points(vf, false);
  vf->add_option("--max-level", a.max_level, "highest k in sum D_i D_j, i+j=k")->check(CLI::Range(0, 3));
  vf->add_option("--samples", a.samples, "random trees when points > 4");
  vf->add_option("--seed", a.seed, "random seed");
  vf->add_option("--in", a.in, ".fnchain for kind chain");

  auto* e2 = app.add_subcommand("e2dim", "dimension of E2 at (points, degree)");
  points(e2);
  degree(e2);

  auto* bg = app.add_subcommand("bigrade", "convert between Tourtchine, Vassiliev and Sinha gradings");
  bg->add_option("--from", a.from, "tourtchine | vassiliev");
  bg->add_option("a", a.a, "i or n")->required();
  bg->add_option("b", a.b, "j or d")->required();
  bg->add_option("--m", a.m, "ambient dimension")->check(CLI::Range(2, 16));

  auto* d3 = app.add_subcommand("d3vas", "compute d3 of the degree-2 Vassiliev class");
  d3->add_option("--workdir", a.workdir, "checkpoint directory");
  d3->add_flag("--resume", a.resume, "reuse validated checkpoints");
  d3->add_option("--threads", a.threads, "worker threads")->check(CLI::Range(1, 256));
  d3->add_option("--report", a.report, "report path; JSON goes to <path>.json");
  d3->add_option("--representative", a.representative, ".fnchain representative in FN(6,8)");
  d3->add_flag("--perturb", a.perturb, "add the planetary cycle of Q1(iota)^2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (en->parsed()) {
      if (a.kind != "planetary" && (a.points == 0 || a.degree < 0))
        throw CLI::ValidationError("enumerate", "--points and --degree are required");
      return cmd_enumerate(a);
    }
    if (df->parsed()) return cmd_diff(a);
    if (mx->parsed()) return cmd_matrix(a);
    if (rk->parsed()) return cmd_rank(a);
    if (sv->parsed()) return cmd_solve(a);
    if (vf->parsed()) {
      if (a.kind != "chain" && a.points == 0) throw CLI::ValidationError("verify", "--points is required");
      return cmd_verify(a);
    }
    if (e2->parsed()) return cmd_e2dim(a);
    if (bg->parsed()) return cmd_bigrade(a);
    if (d3->parsed()) return cmd_d3vas(a);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FnError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
