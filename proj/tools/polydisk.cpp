// Command-line front end: sample, verify, stats, enumerate, partition.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polydisk/harness.hpp"

using namespace polydisk;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::int32_t threads = 1;
  std::string out = "-";
  std::string format = "jsonl";
};

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw input_error("cannot open " + path + " for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<SampleRecord> load_records(const std::string& path) {
  std::stringstream ss(slurp(path));
  return read_records(ss);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_sample(const Globals& g, const std::string& type, std::int32_t p, std::int64_t count, const std::string& mode) {
  const sample_kind kind = sample_kind_from(type);
  if (kind == sample_kind::two_gon && p != 2) throw input_error("type ii-2gon has perimeter 2");
  if (kind != sample_kind::two_gon && p < 3) throw input_error("perimeter too small for type " + type);
  const bol_mode bm = mode == "importance" ? bol_mode::importance : bol_mode::rejection;
  std::vector<std::string> lines(static_cast<std::size_t>(count));
  parallel_for(count, g.threads, [&](std::int64_t i) {
    const SampleRecord r = sample_record(kind, p, g.seed, i, bm);
    if (g.format == "csv") {
      const CombMap& m = r.map;
      lines[i] = std::to_string(r.index) + "," + std::to_string(r.seed) + "," + to_string(r.kind) + "," +
                 std::to_string(r.p) + "," + std::to_string(m.num_vertices()) + "," + std::to_string(m.num_edges()) +
                 "," + std::to_string(m.num_faces());
    } else {
      lines[i] = record_to_json(r).dump();
    }
  });
  Output out(g.out);
  if (g.format == "csv") out.stream() << "index,seed,type,p,vertices,edges,faces\n";
  for (const auto& l : lines) out.stream() << l << '\n';
  return 0;
}

int cmd_verify(const Globals& g, const std::string& in, const std::string& checks, const std::string& report) {
  VerifyOptions opt;
  if (!checks.empty() && checks != "all") opt.checks = split_list(checks);
  opt.threads = g.threads;
  const auto records = load_records(in);
  const VerifyReport rep = run_verify(records, opt);
  Output out(report.empty() ? g.out : report);
  out.stream() << rep.to_json().dump(2) << '\n';
  return rep.ok() ? 0 : 1;
}

struct StatsArgs {
  std::string in;
  std::vector<std::string> compare;
  std::string column = "value";
  std::string test = "ks";
  std::string experiment;
  std::int32_t p = 256;
  std::int64_t count = 10000;
  double s = 0.5;
  double eps = 0.5;
  double h = 1e-3;
  double horizon = 1e3;
  bool disk = false;
};

int cmd_stats(const Globals& g, const StatsArgs& a) {
  Output out(g.out);
  if (!a.compare.empty()) {
    if (a.compare.size() != 2) throw input_error("--compare takes two CSV files");
    if (a.test != "ks") throw input_error("unsupported test " + a.test);
    std::stringstream s1(slurp(a.compare[0])), s2(slurp(a.compare[1]));
    const auto x = read_csv_column(s1, a.column), y = read_csv_column(s2, a.column);
    if (x.empty() || y.empty()) throw input_error("empty sample");
    const KsResult k = ks_two_sample(x, y);
    const ojson j{{"test", "ks"},           {"D", k.D},
                  {"n_eff", k.n_eff},       {"p_value", k.p_value},
                  {"critical_0.01", k.critical(0.01)}, {"reject_0.01", !k.accept(0.01)}};
    out.stream() << j.dump() << '\n';
    return 0;
  }
  if (a.disk) {
    Rng rng(g.seed);
    out.stream() << disk_csv(simulate_disk(rng, a.h, a.horizon));
    return 0;
  }
  if (!a.experiment.empty()) {
    Experiment e;
    const std::string& x = a.experiment;
    if (x == "forest_size")
      e = experiment_forest_size(a.p, a.count, g.seed, g.threads);
    else if (x == "label_marginal")
      e = experiment_label_marginal(a.p, a.s, a.count, g.seed, g.threads);
    else if (x == "bridge_marginal")
      e = experiment_bridge_marginal(a.p, a.s, a.count, g.seed, g.threads);
    else if (x == "bol3_mean")
      e = experiment_bol3_mean(a.p, a.count, g.seed, g.threads);
    else if (x == "two_gon_mean")
      e = experiment_two_gon_mean(a.count, g.seed, g.threads);
    else if (x == "edge_ratio")
      e = experiment_edge_ratio(a.p, a.count, g.seed, g.threads);
    else if (x == "bol2_vertices")
      e = experiment_bol2_vertices(a.p, a.count, g.seed, g.threads);
    else if (x == "lower_bound")
      e = experiment_lower_bound(a.p, a.eps, a.count, g.seed, g.threads);
    else
      throw input_error("unknown experiment " + x);
    out.stream() << e.to_json().dump() << '\n';
    return e.pass ? 0 : 1;
  }
  const auto records = load_records(a.in.empty() ? "-" : a.in);
  if (g.format == "csv") {
    out.stream() << "p,maps,mean_vertices,mean_3V_over_p2,time_scale,label_scale\n";
    for (const auto& j : run_stats(records))
      out.stream() << j["p"] << ',' << j["maps"] << ',' << j["mean_vertices"] << ',' << j["mean_3V_over_p2"] << ','
                   << j["time_scale"] << ',' << j["label_scale"] << '\n';
  } else {
    for (const auto& j : run_stats(records)) out.stream() << j.dump() << '\n';
  }
  return 0;
}

int cmd_enumerate(const Globals& g, std::int32_t p, std::int32_t n_max, bool uniqueness) {
  EnumOptions opt;
  opt.uniqueness = uniqueness;
  const EnumReport rep = enumerate_and_check(p, n_max, opt);
  Output out(g.out);
  out.stream() << enum_report_to_json(rep).dump() << '\n';
  return rep.ok() ? 0 : 1;
}

int cmd_partition(const Globals& g, std::int32_t p, const std::string& theta_text) {
  rational theta;
  try {
    theta = rational(theta_text);
  } catch (const std::exception&) {
    throw input_error("theta must be a rational such as 1/6");
  }
  const PartitionValue v = partition_function(p, theta);
  const ojson j{{"p", p},
                {"theta", theta.str()},
                {"Z", v.Z.str()},
                {"t", v.t.str()},
                {"Z_approx", static_cast<double>(v.Z)},
                {"t_approx", static_cast<double>(v.t)}};
  Output out(g.out);
  out.stream() << j.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boltzmann triangulations of polygons via blossoming forests"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "base seed; item i uses mix_seed(seed, i)");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output file, - for stdout");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"jsonl", "csv"}));

  auto* sample = app.add_subcommand("sample", "draw random triangulations");
  std::string type = "iii-marked", mode = "rejection";
  std::int32_t p = 3;
  std::int64_t count = 1;
  sample->add_option("--type", type, "iii, iii-marked, ii or ii-2gon")
      ->check(CLI::IsMember({"iii", "iii-marked", "ii", "ii-2gon"}));
  sample->add_option("--mode", mode, "unmarked type-III sampling mode")->check(CLI::IsMember({"rejection", "importance"}));
  sample->add_option("-p,--perimeter", p, "perimeter")->required();
  sample->add_option("-n,--count", count, "number of samples")->check(CLI::NonNegativeNumber);

  auto* verify = app.add_subcommand("verify", "run deterministic checks on sampled maps");
  std::string in = "-", checks = "all", report;
  verify->add_option("--in", in, "JSONL input, - for stdin");
  verify->add_option("--checks", checks, "comma-separated list or all");
  verify->add_option("--report", report, "report file");

  auto* stats = app.add_subcommand("stats", "summaries, experiments and two-sample tests");
  StatsArgs sa;
  stats->add_option("--in", sa.in, "JSONL input");
  stats->add_option("--compare", sa.compare, "two CSV files")->expected(2);
  stats->add_option("--column", sa.column, "CSV column name or index");
  stats->add_option("--test", sa.test, "test to run")->check(CLI::IsMember({"ks"}));
  stats->add_option("--experiment", sa.experiment, "named experiment");
  stats->add_option("-p,--perimeter", sa.p, "perimeter");
  stats->add_option("-n,--count", sa.count, "samples")->check(CLI::PositiveNumber);
  stats->add_option("-s,--time", sa.s, "fixed time of a marginal");
  stats->add_option("--eps", sa.eps, "epsilon of the lower-bound experiment");
  stats->add_option("--step", sa.h, "grid step of the disk simulation")->check(CLI::PositiveNumber);
  stats->add_option("--horizon", sa.horizon, "stop the disk simulation at this time")->check(CLI::PositiveNumber);
  stats->add_flag("--disk", sa.disk, "emit one simulated disk as CSV (t, C, Lambda)");

  auto* enumerate = app.add_subcommand("enumerate", "exhaustive bijection check");
  std::int32_t ep = 3, n_max = 6;
  bool uniqueness = false;
  enumerate->add_option("-p,--perimeter", ep, "perimeter")->required();
  enumerate->add_option("--n-max", n_max, "largest vertex count");
  enumerate->add_flag("--uniqueness", uniqueness, "check that minimal orientations are unique");

  auto* partition = app.add_subcommand("partition", "exact type-II partition function");
  std::int32_t pp = 2;
  std::string theta = "1/6";
  partition->add_option("-p,--perimeter", pp, "perimeter")->required();
  partition->add_option("--theta", theta, "rational parameter in (0, 1/2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sample) return cmd_sample(g, type, p, count, mode);
    if (*verify) return cmd_verify(g, in, checks, report);
    if (*stats) return cmd_stats(g, sa);
    if (*enumerate) return cmd_enumerate(g, ep, n_max, uniqueness);
    if (*partition) return cmd_partition(g, pp, theta);
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
