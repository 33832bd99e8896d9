#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <thread>

#include "pars3/bench.hpp"
#include "pars3/error.hpp"
#include "pars3/generate.hpp"
#include "pars3/kernel_parallel.hpp"
#include "pars3/kernel_serial.hpp"
#include "pars3/matrix_market.hpp"
#include "pars3/reorder.hpp"
#include "pars3/split.hpp"
#include "pars3/validate.hpp"

namespace pars3::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr double verify_tolerance = 1e-12;

// ---- file helpers ---------------------------------------------------------

// "-" means the command's standard output.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path == "-" || path.empty()) {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error("cannot write '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }
  void finish(const std::string& path) {
    stream_->flush();
    if (!*stream_) throw Error("write failed for '" + path + "'");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

// Strict or shifted, whichever the diagonal allows. Errors name the offending
// entry.
SssMatrix to_sss_auto(const CooMatrix& coo) {
  const SkewReport r = validate_skew(coo, default_skew_tolerance(coo));
  const SkewMode mode =
      r.diagonal == DiagonalClass::zero ? SkewMode::strict : SkewMode::shifted;
  return coo_to_sss(coo, mode);
}

SssMatrix load_sss(const std::string& path) {
  return to_sss_auto(read_matrix_market_file(path));
}

MmQualifier compact_qualifier(const CooMatrix& m) {
  for (const Triplet& t : m.entries())
    if (t.row == t.col) return MmQualifier::general;
  return validate_skew(m, default_skew_tolerance(m)).strict() ? MmQualifier::skew_symmetric
                                                              : MmQualifier::general;
}

DenseVector read_vector(const std::string& path, Index n) {
  std::ifstream in = open_input(path);
  DenseVector v;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* b = line.data() + first;
    const char* e = line.data() + last + 1;
    if (*b == '+') ++b;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(b, e, value);
    if (ec != std::errc() || ptr != e)
      throw ParseError("malformed value '" + line.substr(first, last - first + 1) +
                           "' in '" + path + "'",
                       line_no);
    v.push_back(value);
  }
  if (v.size() != n)
    throw ArgumentError("vector file '" + path + "' holds " + std::to_string(v.size()) +
                        " values, matrix dimension is " + std::to_string(n));
  return v;
}

void write_vector(std::ostream& out, std::span<const double> v) {
  for (double d : v) out << format_real(d) << '\n';
}

// ---- kernel dispatch ------------------------------------------------------

Index resolve_beta(const std::optional<Index>& flag, const SssMatrix& m) {
  if (flag) return *flag;
  return default_outer_bandwidth(m.size(), compute_bandwidth(m));
}

DenseVector run_kernel(KernelKind kind, const SssMatrix& m, Index beta, Index workers,
                       std::span<const double> x) {
  switch (kind) {
    case KernelKind::serial:
      return spmv_sss_serial(m, x);
    case KernelKind::atomic:
      if (workers < 1) throw ArgumentError("--workers must be at least 1");
      return spmv_atomic(m, x, workers);
    case KernelKind::pars3: {
      const BandSplit split = split_bands(m, beta);
      const Classification c = classify_conflicts(split, partition_rows(m.size(), workers));
      return spmv_pars3(split, c.plan, x);
    }
  }
  throw ArgumentError("unknown kernel");
}

struct VectorSource {
  std::string file;
  std::uint64_t seed = 0;

  DenseVector get(Index n) const {
    return file.empty() ? random_vector(n, seed) : read_vector(file, n);
  }
};

void add_x_options(CLI::App* cmd, VectorSource& x) {
  auto* file = cmd->add_option("--x", x.file, "input vector file, one value per line");
  cmd->add_option("--x-seed", x.seed, "seed of the uniform [-1,1] input vector")
      ->excludes(file);
}

json error_json(const ErrorLocation& e) {
  return json{{"maxRelativeError", e.error}, {"row", e.row}};
}

// ---- commands -------------------------------------------------------------

struct GenArgs {
  Index n = 0;
  Index half_bandwidth = 0;
  double fill = 0.0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::string output = "-";
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const CooMatrix m = generate_band_skew(a.n, a.half_bandwidth, a.fill, a.alpha, a.seed);
  Output o(a.output, out);
  write_matrix_market(o.stream(), m,
                      a.alpha == 0.0 ? MmQualifier::skew_symmetric : MmQualifier::general);
  o.finish(a.output);
  return exit_ok;
}

struct ConvertArgs {
  std::string input;
  std::string output = "-";
  std::string qualifier = "general";
};

int cmd_convert(const ConvertArgs& a, std::ostream& out) {
  const CooMatrix m = read_matrix_market_file(a.input);
  const MmQualifier q =
      a.qualifier == "skew-symmetric" ? MmQualifier::skew_symmetric : MmQualifier::general;
  Output o(a.output, out);
  write_matrix_market(o.stream(), m, q);
  o.finish(a.output);
  return exit_ok;
}

struct ReorderArgs {
  std::string input;
  std::string output;
  std::string perm;
};

int cmd_reorder(const ReorderArgs& a, std::ostream& out) {
  const CooMatrix m = read_matrix_market_file(a.input);
  const SkewReport r = validate_skew(m, 0.0);
  if (!r.pattern_asymmetries.empty()) {
    const auto [i, j] = r.pattern_asymmetries.front();
    throw StructuralError("asymmetric pattern: entry (" + std::to_string(i) + ", " +
                          std::to_string(j) + ") has no mirror");
  }
  const Permutation p = rcm_order(pattern_from_coo(m));
  const CooMatrix pm = apply_permutation(m, p);
  write_matrix_market_file(a.output, pm, compact_qualifier(pm));
  if (!a.perm.empty()) {
    std::ofstream f(a.perm);
    if (!f) throw Error("cannot write '" + a.perm + "'");
    write_permutation(f, p);
    if (!f) throw Error("write failed for '" + a.perm + "'");
  }
  out << json{{"n", m.size()},
              {"bandwidthBefore", compute_bandwidth(m)},
              {"bandwidthAfter", compute_bandwidth(pm)}}
             .dump()
      << '\n';
  return exit_ok;
}

struct SplitArgs {
  std::string input;
  std::optional<Index> beta;
  Index workers = 1;
};

int cmd_split(const SplitArgs& a, std::ostream& out) {
  const SssMatrix m = load_sss(a.input);
  const Index beta = resolve_beta(a.beta, m);
  const BandSplit s = split_bands(m, beta);
  const Classification c = classify_conflicts(s, partition_rows(m.size(), a.workers));
  json per_worker = json::array();
  for (const WorkerConflictStats& w : c.report.per_worker)
    per_worker.push_back({{"rows", w.rows}, {"safe", w.safe}, {"conflicts", w.conflicts}});
  out << json{{"n", m.size()},
              {"beta", beta},
              {"workers", a.workers},
              {"nnzDiag", s.diag.size()},
              {"nnzMiddle", s.middle.size()},
              {"nnzOuter", s.outer.size()},
              {"totalConflicts", c.report.total_conflicts},
              {"perWorker", per_worker}}
             .dump(2)
      << '\n';
  return exit_ok;
}

struct SpmvArgs {
  std::string input;
  std::string kernel = "serial";
  Index workers = 1;
  std::optional<Index> beta;
  VectorSource x;
  std::string output = "-";
};

int cmd_spmv(const SpmvArgs& a, std::ostream& out) {
  const KernelKind kind = parse_kernel(a.kernel);
  const SssMatrix m = load_sss(a.input);
  const DenseVector x = a.x.get(m.size());
  const DenseVector y = run_kernel(kind, m, resolve_beta(a.beta, m), a.workers, x);
  Output o(a.output, out);
  write_vector(o.stream(), y);
  o.finish(a.output);
  return exit_ok;
}

struct VerifyArgs {
  std::string input;
  std::string kernel = "pars3";
  Index workers = 2;
  std::optional<Index> beta;
  VectorSource x;
  std::string candidate;  // precomputed y instead of running the kernel
  Index cap = 2048;
  bool no_dense = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const KernelKind kind = parse_kernel(a.kernel);
  const SssMatrix m = load_sss(a.input);
  const Index n = m.size();
  if (!a.no_dense && n > a.cap) {
    err << "error: n = " << n << " exceeds the dense oracle cap " << a.cap
        << "; rerun with --no-dense to compare against the serial kernel only, "
           "or raise --cap\n";
    return exit_usage;
  }
  const Index beta = resolve_beta(a.beta, m);
  const DenseVector x = a.x.get(n);
  const DenseVector y =
      a.candidate.empty() ? run_kernel(kind, m, beta, a.workers, x) : read_vector(a.candidate, n);

  json report{{"input", a.input},
              {"n", n},
              {"kernel", a.candidate.empty() ? to_string(kind) : "file"},
              {"workers", a.workers},
              {"beta", beta},
              {"tolerance", verify_tolerance}};
  double worst = 0.0;
  std::size_t worst_row = 0;
  auto compare = [&](const char* key, const DenseVector& ref) {
    const ErrorLocation e = max_relative_error(y, ref);
    report[key] = error_json(e);
    if (!(e.error <= worst)) {  // NaN propagates
      worst = e.error;
      worst_row = e.row;
    }
  };
  if (a.no_dense) {
    report["vsDense"] = nullptr;
  } else {
    compare("vsDense", spmv_dense_oracle(to_dense(m), x));
  }
  compare("vsSerial", spmv_sss_serial(m, x));
  const bool pass = worst <= verify_tolerance;
  report["maxRelativeError"] = worst;
  report["row"] = worst_row;
  report["pass"] = pass;
  out << report.dump(2) << '\n';
  out << (pass ? "PASS" : "FAIL") << " max relative error " << format_real(worst)
      << " at row " << worst_row << '\n';
  return pass ? exit_ok : exit_verify_failed;
}

struct BenchArgs {
  std::string input;
  std::optional<Index> gen_n;
  Index gen_b = 64;
  double gen_f = 0.5;
  double gen_alpha = 0.0;
  std::uint64_t gen_seed = 0;
  std::vector<std::string> kernels{"serial", "pars3"};
  std::vector<Index> workers{1, 2, 4};
  unsigned reps = 5;
  std::optional<Index> beta;
  std::uint64_t x_seed = 0;
  bool no_reorder = false;
  std::string perm;
  std::string output = "-";
};

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  if (a.input.empty() == !a.gen_n)
    throw ArgumentError("bench needs exactly one of --input or --gen-n");
  std::vector<KernelKind> kinds;
  for (const std::string& k : a.kernels) kinds.push_back(parse_kernel(k));

  CooMatrix coo = a.input.empty()
                      ? generate_band_skew(*a.gen_n, a.gen_b, a.gen_f, a.gen_alpha, a.gen_seed)
                      : read_matrix_market_file(a.input);
  const Index original_bandwidth = compute_bandwidth(coo);
  double reorder_sec = 0.0;
  if (!a.no_reorder) {
    const auto t0 = std::chrono::steady_clock::now();
    const Permutation p = rcm_order(pattern_from_coo(coo));
    coo = apply_permutation(coo, p);
    reorder_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!a.perm.empty()) {
      std::ofstream f(a.perm);
      if (!f) throw Error("cannot write '" + a.perm + "'");
      write_permutation(f, p);
    }
  }
  const SssMatrix m = to_sss_auto(coo);
  coo = CooMatrix();

  BenchOptions o;
  o.kernels = kinds;
  o.workers = a.workers;
  o.reps = a.reps;
  o.x_seed = a.x_seed;
  o.beta = resolve_beta(a.beta, m);
  const BenchReport r = run_benchmark(m, o);
  for (const std::string& w : r.warnings) err << "warning: " << w << '\n';

  json generator = nullptr;
  std::string name;
  if (a.input.empty()) {
    generator = {{"n", *a.gen_n},
                 {"halfBandwidth", a.gen_b},
                 {"fill", a.gen_f},
                 {"alpha", a.gen_alpha},
                 {"seed", a.gen_seed}};
    name = "band(n=" + std::to_string(*a.gen_n) + ",b=" + std::to_string(a.gen_b) +
           ",f=" + format_real(a.gen_f) + ",alpha=" + format_real(a.gen_alpha) +
           ",seed=" + std::to_string(a.gen_seed) + ")";
  } else {
    name = std::filesystem::path(a.input).stem().string();
  }
  auto or_null = [](const std::string& s) { return s.empty() || s == "-" ? json() : json(s); };

  json runs = json::array();
  for (const BenchRun& run : r.runs)
    runs.push_back({{"kernel", to_string(run.kernel)},
                    {"workers", run.workers},
                    {"meanSec", run.mean_sec},
                    {"minSec", run.min_sec},
                    {"stddevSec", run.stddev_sec},
                    {"speedup", run.speedup},
                    {"conflicts", run.conflicts},
                    {"outerCount", run.outer_count}});

  const json report{
      {"manifest",
       {{"input", or_null(a.input)},
        {"generator", generator},
        {"permutation", a.no_reorder ? json() : or_null(a.perm)},
        {"reordered", !a.no_reorder},
        {"beta", r.beta},
        {"workers", a.workers},
        {"kernels", a.kernels},
        {"reps", a.reps},
        {"xSeed", a.x_seed},
        {"report", or_null(a.output)}}},
      {"matrix", name},
      {"n", r.n},
      {"nnz", r.nnz},
      {"originalBandwidth", original_bandwidth},
      {"rcmBandwidth", r.bandwidth},
      {"beta", r.beta},
      {"nnzDiag", r.nnz_diag},
      {"nnzMiddle", r.nnz_middle},
      {"nnzOuter", r.nnz_outer},
      {"reorderSec", reorder_sec},
      {"preprocessSec", r.preprocess_sec},
      {"hardwareThreads", std::thread::hardware_concurrency()},
      {"warnings", r.warnings},
      {"runs", runs}};
  Output sink(a.output, out);
  sink.stream() << report.dump(2) << '\n';
  sink.finish(a.output);
  return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Skew-symmetric sparse matrix-vector multiply toolkit", "pars3"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "generate a banded (shifted) skew matrix");
  c_gen->add_option("-n,--size", gen.n, "dimension")->required()->check(CLI::PositiveNumber);
  c_gen->add_option("-b,--half-bandwidth", gen.half_bandwidth, "half bandwidth")->required();
  c_gen->add_option("-f,--fill", gen.fill, "fill probability in [0,1]")->required();
  c_gen->add_option("--alpha", gen.alpha, "diagonal shift");
  c_gen->add_option("--seed", gen.seed, "random seed");
  c_gen->add_option("-o,--output", gen.output, "output file, - for stdout");

  ConvertArgs conv;
  auto* c_conv = app.add_subcommand("convert", "rewrite a Matrix Market file");
  c_conv->add_option("-i,--input", conv.input)->required();
  c_conv->add_option("-o,--output", conv.output);
  c_conv->add_option("-q,--qualifier", conv.qualifier)
      ->check(CLI::IsMember({"general", "skew-symmetric"}));

  ReorderArgs ro;
  auto* c_ro = app.add_subcommand("reorder", "apply reverse Cuthill-McKee");
  c_ro->add_option("-i,--input", ro.input)->required();
  c_ro->add_option("-o,--output", ro.output)->required();
  c_ro->add_option("--perm", ro.perm, "write the permutation here");

  SplitArgs sp;
  auto* c_sp = app.add_subcommand("split", "summarize the 3-way split and conflicts");
  c_sp->add_option("-i,--input", sp.input)->required();
  c_sp->add_option("--outer-bandwidth", sp.beta, "split bandwidth beta");
  c_sp->add_option("-p,--workers", sp.workers);

  SpmvArgs mv;
  auto* c_mv = app.add_subcommand("spmv", "multiply once and write y");
  c_mv->add_option("-i,--input", mv.input)->required();
  c_mv->add_option("-k,--kernel", mv.kernel, "serial, pars3 or atomic");
  c_mv->add_option("-p,--workers", mv.workers);
  c_mv->add_option("--outer-bandwidth", mv.beta);
  add_x_options(c_mv, mv.x);
  c_mv->add_option("-o,--out", mv.output, "output vector file, - for stdout");

  VerifyArgs ve;
  auto* c_ve = app.add_subcommand("verify", "check a kernel against the oracles");
  c_ve->add_option("-i,--input", ve.input)->required();
  c_ve->add_option("-k,--kernel", ve.kernel);
  c_ve->add_option("-p,--workers", ve.workers);
  c_ve->add_option("--outer-bandwidth", ve.beta);
  add_x_options(c_ve, ve.x);
  c_ve->add_option("--y", ve.candidate, "check this result file instead of running a kernel");
  c_ve->add_option("--cap", ve.cap, "largest n for the dense oracle");
  c_ve->add_flag("--no-dense", ve.no_dense, "compare against the serial kernel only");

  BenchArgs be;
  auto* c_be = app.add_subcommand("bench", "time kernels and emit a JSON report");
  c_be->add_option("-i,--input", be.input);
  c_be->add_option("--gen-n", be.gen_n, "generate instead of reading a file");
  c_be->add_option("--gen-b", be.gen_b);
  c_be->add_option("--gen-f", be.gen_f);
  c_be->add_option("--gen-alpha", be.gen_alpha);
  c_be->add_option("--gen-seed", be.gen_seed);
  c_be->add_option("--kernels", be.kernels)->delimiter(',');
  c_be->add_option("-p,--workers", be.workers)->delimiter(',');
  c_be->add_option("--reps", be.reps);
  c_be->add_option("--outer-bandwidth", be.beta);
  c_be->add_option("--x-seed", be.x_seed);
  c_be->add_flag("--no-reorder", be.no_reorder);
  c_be->add_option("--perm", be.perm, "write the applied permutation here");
  c_be->add_option("-o,--out", be.output, "report file, - for stdout");

  std::vector<const char*> argv;
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);  // --help
    err << "error: " << e.what() << '\n';
    err << "run with --help for usage\n";
    return exit_usage;
  }

  try {
    if (*c_gen) return cmd_gen(gen, out);
    if (*c_conv) return cmd_convert(conv, out);
    if (*c_ro) return cmd_reorder(ro, out);
    if (*c_sp) return cmd_split(sp, out);
    if (*c_mv) return cmd_spmv(mv, out);
    if (*c_ve) return cmd_verify(ve, out, err);
    if (*c_be) return cmd_bench(be, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace pars3::cli
