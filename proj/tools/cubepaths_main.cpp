#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "cubepaths/json_io.hpp"
#include "cubepaths/verify.hpp"

namespace {

using namespace cubepaths;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 2;
constexpr int kExitUnresolved = 3;
constexpr int kExitBadInput = 64;
constexpr int kExitUnsupported = 65;

std::string read_input(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return arg;  // inline JSON
  if (arg == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(arg);
  if (!in) throw cube_error(errc::invalid_input, "cannot open " + arg);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw cube_error(errc::invalid_input, "malformed JSON");
  return j;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CUBEPATHS_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
    }
  }
  return 0x5eed;
}

struct CommonOpts {
  std::uint64_t seed = default_seed();
  int retries = 32;
  std::uint64_t fallback_budget = 2'000'000;
  int threads = 1;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.seed, "random seed (default from CUBEPATHS_SEED)");
  cmd->add_option("--retries", o.retries, "completion retries per coordinate");
  cmd->add_option("--fallback-budget", o.fallback_budget,
                  "node budget of the fallback search");
  cmd->add_option("--threads", o.threads, "worker threads");
  cmd->add_option("--format", o.format, "output format: json or text")
      ->check(CLI::IsMember({"json", "text"}));
}

SolveConfig to_config(const CommonOpts& o) {
  SolveConfig cfg;
  cfg.seed = o.seed;
  cfg.completion_retries = o.retries;
  cfg.fallback_nodes = o.fallback_budget;
  cfg.threads = o.threads;
  return cfg;
}

void print_connector_text(const Connector& c, std::ostream& os) {
  for (const Path& p : c.paths) {
    for (std::size_t t = 0; t < p.verts.size(); ++t)
      os << (t ? " " : "") << format_vertex(p.verts[t]);
    os << "\n";
  }
}

int cmd_solve(const std::string& input, const CommonOpts& opts,
              const std::string& trace_file) {
  PairSet a;
  try {
    a = pair_set_from_json(parse_json(read_input(input)));
    if (!is_pure(a) || !is_odd_set(a))
      throw cube_error(errc::invalid_input,
                       "solve expects a pure odd pair-set (distinct endpoints, "
                       "odd Hamming distances)");
  } catch (const cube_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  if (!trace_file.empty()) {
    // debugging view: one alignment run on the input at the first coordinate
    // whose matching is feasible
    for (int i = 0; i < a.dim; ++i) {
      MatchingResult m = build_matching(a, i, opts.seed);
      if (!m.ok) continue;
      CompletionOptions copt;
      copt.seed = opts.seed;
      CompletionResult r = complete(a, i, m.matching, copt);
      if (!r.ok) continue;
      std::ofstream out(trace_file);
      out << trace_to_json(r.trace).dump(2) << "\n";
      break;
    }
  }
  SolveReport rep = solve(a, to_config(opts));
  if (opts.format == "text") {
    std::cout << verdict_name(rep.verdict);
    if (!rep.reason.empty()) std::cout << ": " << rep.reason;
    std::cout << "\n";
    if (rep.verdict == Verdict::connected) print_connector_text(rep.connector, std::cout);
  } else {
    std::cout << report_to_json(rep).dump() << "\n";
  }
  if (rep.verdict == Verdict::connected) return kExitOk;
  if (rep.verdict == Verdict::non_connectable) return kExitNegative;
  return kExitUnresolved;
}

int cmd_verify(const std::string& pairs_file, const std::string& conn_file) {
  try {
    PairSet a = pair_set_from_json(parse_json(read_input(pairs_file)));
    Connector c = connector_from_json(parse_json(read_input(conn_file)));
    auto bad = check(a, c);
    if (!bad) {
      std::cout << "{\"ok\":true}\n";
      return 0;
    }
    json out{{"ok", false},
             {"clause", violation_clause_name(bad->clause)},
             {"detail", bad->detail}};
    json w = json::array();
    for (const Vertex& v : bad->witnesses) w.push_back(format_vertex(v));
    out["witnesses"] = w;
    std::cout << out.dump() << "\n";
    return 1;
  } catch (const cube_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
}

int cmd_classify(const std::string& input) {
  try {
    PairSet a = pair_set_from_json(parse_json(read_input(input)));
    std::cout << classification_to_json(a).dump() << "\n";
    return 0;
  } catch (const cube_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
}

int cmd_gray(int n, const std::string& from, const std::string& to,
             const CommonOpts& opts) {
  Vertex a, b;
  try {
    a = parse_vertex(from, n);
    b = parse_vertex(to, n);
  } catch (const cube_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  if (parity(a) == parity(b)) {
    std::cerr << "no path: endpoints at even Hamming distance\n";
    return kExitNegative;
  }
  Connector c = gray_path(n, a, b, to_config(opts));
  if (auto bad = check_gray_between(n, c.paths.front().verts, a, b)) {
    std::cerr << "internal error: produced sequence failed verification ("
              << violation_clause_name(bad->clause) << ")\n";
    return kExitUnresolved;
  }
  if (opts.format == "text") {
    print_connector_text(c, std::cout);
  } else {
    json seq = json::array();
    for (const Vertex& v : c.paths.front().verts) seq.push_back(format_vertex(v));
    std::cout << json{{"schema", kSchemaVersion}, {"n", n}, {"path", seq}}.dump()
              << "\n";
  }
  return kExitOk;
}

int cmd_census(int n, const CensusFilter& filter, const CommonOpts& opts,
               bool allow_large) {
  CensusSummary s;
  try {
    s = enumerate_classes(n, filter, opts.threads, allow_large);
  } catch (const cube_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == errc::dimension_too_large ? kExitUnsupported : kExitBadInput;
  }
  for (const CensusRecord& r : s.records)
    std::cout << census_record_to_json(r, n).dump() << "\n";
  json summary{{"summary", true},
               {"n", n},
               {"classes_total", s.classes_total},
               {"classes_non_connectable", s.classes_non_connectable},
               {"labeled_total", s.labeled_total},
               {"labeled_non_connectable", s.labeled_non_connectable}};
  std::cout << summary.dump() << "\n";
  return kExitOk;
}

PairSet random_odd_pair_set(int n, int size, std::mt19937_64& rng) {
  for (;;) {
    std::vector<Pair> pairs;
    std::vector<std::uint32_t> used;
    bool ok = true;
    for (int j = 0; j < size && ok; ++j) {
      ok = false;
      for (int t = 0; t < 64; ++t) {
        std::uint32_t x = static_cast<std::uint32_t>(rng()) & ((1u << n) - 1);
        std::uint32_t y = static_cast<std::uint32_t>(rng()) & ((1u << n) - 1);
        if ((std::popcount(x ^ y) & 1) == 0) continue;
        if (std::find(used.begin(), used.end(), x) != used.end()) continue;
        if (std::find(used.begin(), used.end(), y) != used.end()) continue;
        used.push_back(x);
        used.push_back(y);
        pairs.push_back(make_pair_of(make_vertex(x, n), make_vertex(y, n)));
        ok = true;
        break;
      }
    }
    if (ok) return make_pair_set(n, std::move(pairs));
  }
}

int cmd_bench(int nmin, int nmax, int samples, const CommonOpts& opts) {
  std::mt19937_64 rng(opts.seed);
  json lines = json::array();
  for (int n = nmin; n <= nmax; ++n) {
    std::vector<double> times;
    int pass = 0;
    for (int s = 0; s < samples; ++s) {
      std::uniform_int_distribution<int> szd(1, n - 1);
      PairSet a = random_odd_pair_set(n, szd(rng), rng);
      auto t0 = std::chrono::steady_clock::now();
      SolveConfig cfg = to_config(opts);
      cfg.seed = rng();
      SolveReport r = solve(a, cfg);
      auto t1 = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      if (r.verdict == Verdict::connected && !check(a, r.connector)) ++pass;
    }
    std::sort(times.begin(), times.end());
    double median = times.empty() ? 0.0 : times[times.size() / 2];
    json line{{"n", n},
              {"samples", samples},
              {"median_ms", median},
              {"verified", pass},
              {"verify_rate", samples ? static_cast<double>(pass) / samples : 0.0}};
    std::cout << line.dump() << "\n";
    lines.push_back(line);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prescribed-endpoint path partitions of the hypercube"};
  app.require_subcommand(1);

  CommonOpts opts;

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "decide and construct a connector");
  std::string solve_input = "-";
  std::string trace_file;
  solve_cmd->add_option("input", solve_input, "pair-set JSON file, '-' or inline JSON");
  solve_cmd->add_option("--dump-trace", trace_file,
                        "write one alignment trace to this file");
  add_common(solve_cmd, opts);

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check a connector against a pair-set");
  std::string verify_pairs, verify_conn;
  verify_cmd->add_option("pairset", verify_pairs, "pair-set JSON")->required();
  verify_cmd->add_option("connector", verify_conn, "connector JSON")->required();

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "structural facts about a pair-set");
  std::string classify_input = "-";
  classify_cmd->add_option("input", classify_input, "pair-set JSON file, '-' or inline");

  // gray
  auto* gray_cmd = app.add_subcommand("gray", "full path between two vertices");
  int gray_n = 3;
  std::string gray_from, gray_to;
  gray_cmd->add_option("n", gray_n, "dimension")->required();
  gray_cmd->add_option("from", gray_from, "start vertex")->required();
  gray_cmd->add_option("to", gray_to, "end vertex")->required();
  add_common(gray_cmd, opts);

  // census
  auto* census_cmd = app.add_subcommand("census", "isomorphism-class census");
  int census_n = 3;
  CensusFilter filter;
  bool allow_large = false;
  census_cmd->add_option("n", census_n, "dimension (<= 4 full, 5 with slices)")
      ->required();
  census_cmd->add_flag("--odd", filter.require_odd, "odd pairs only");
  census_cmd->add_flag("--balanced", filter.require_balanced, "balanced sets only");
  census_cmd->add_flag("--pure", filter.require_pure, "no degenerate pairs");
  census_cmd->add_option("--size-min", filter.size_min, "minimum number of pairs");
  census_cmd->add_option("--size-max", filter.size_max, "maximum number of pairs");
  census_cmd->add_option("--edges-exact", filter.edge_pairs_exact,
                         "exact number of edge pairs");
  census_cmd->add_option("--edges-min", filter.edge_pairs_min,
                         "minimum number of edge pairs");
  census_cmd->add_flag("--enc-empty", filter.require_enc_empty,
                       "require enc(A) to be empty");
  census_cmd->add_flag("--allow-large", allow_large, "permit the large n=5 census");
  add_common(census_cmd, opts);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "timing over random odd inputs");
  int bench_min = 5, bench_max = 10, bench_samples = 50;
  bench_cmd->add_option("--min", bench_min, "smallest dimension");
  bench_cmd->add_option("--max", bench_max, "largest dimension");
  bench_cmd->add_option("--samples", bench_samples, "instances per dimension");
  add_common(bench_cmd, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_input, opts, trace_file);
    if (verify_cmd->parsed()) return cmd_verify(verify_pairs, verify_conn);
    if (classify_cmd->parsed()) return cmd_classify(classify_input);
    if (gray_cmd->parsed()) return cmd_gray(gray_n, gray_from, gray_to, opts);
    if (census_cmd->parsed()) return cmd_census(census_n, filter, opts, allow_large);
    if (bench_cmd->parsed()) return cmd_bench(bench_min, bench_max, bench_samples, opts);
  } catch (const cube_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
