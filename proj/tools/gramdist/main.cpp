#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bench.hpp"
#include "gramdist/box_dp.hpp"
#include "gramdist/error.hpp"
#include "gramdist/io.hpp"
#include "gramdist/multi_edit.hpp"
#include "gramdist/product.hpp"
#include "gramdist/shift.hpp"
#include "gramdist/slp.hpp"
#include "json.hpp"

using namespace gramdist;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kLimits = 3 };

int exit_code(Errc e) {
  switch (e) {
    case Errc::invalid_tau:
    case Errc::invalid_cap:
    case Errc::invalid_epsilon:
    case Errc::invalid_params:
    case Errc::invalid_groups:
    case Errc::unsupported_k:
      return kUsage;
    case Errc::expansion_too_large:
    case Errc::fragment_too_large:
    case Errc::too_large:
      return kLimits;
    default:
      return kData;
  }
}

enum class Format { automatic, raw, slp };

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_all(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
    throw Error(Errc::io_error, "cannot write " + path);
  }
}

Slp load(const std::string& source, Format format, bool literal) {
  const std::string bytes = literal ? source : read_all(source);
  if (format == Format::slp || (format == Format::automatic && !literal && looks_like_slp(bytes))) {
    std::istringstream in(bytes);
    return to_cnf(read_slp(in));
  }
  return slp_from_text(utf8_decode(bytes));
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

struct DistOptions {
  std::string measure;
  std::vector<std::string> inputs;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> cap;
  std::optional<std::uint64_t> tau;
  std::optional<std::size_t> k;
  std::optional<std::size_t> groups;
  std::string hamming_mode = "all-equal";
  std::string output = "plain";
  std::string format = "auto";
  bool literal = false;
  unsigned threads = 1;
};

struct Answer {
  std::string value;
  std::vector<std::string> extra_lines;
  std::vector<std::pair<std::string, std::string>> params;
};

Answer compute(const DistOptions& o, const std::vector<Slp>& gs) {
  Answer a;
  const double eps = o.epsilon.value_or(0.5);
  if (!o.epsilon && (o.measure == "edit-approx" || o.measure == "lcs-approx" || o.measure == "median" ||
                     o.measure == "center")) {
    std::cerr << "gramdist: epsilon=0.5 (default)\n";
  }
  BoxTuning tuning;
  if (o.tau) {
    tuning.path = BoxTuning::Path::boxes;
    tuning.min_tau = tuning.max_tau = *o.tau;
    a.params.emplace_back("tau", std::to_string(*o.tau));
  }
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (gs.size() < lo || gs.size() > hi) {
      const std::string range = lo == hi ? std::to_string(lo) : std::to_string(lo) + " to " + std::to_string(hi);
      throw Error(Errc::unsupported_k, o.measure + " takes " + range + " inputs");
    }
  };
  auto with_eps = [&] {
    std::ostringstream os;
    os << eps;
    a.params.emplace_back("epsilon", os.str());
  };

  if (o.measure == "hamming") {
    need(2, kMaxProductArity);
    if (gs.size() == 2 && o.hamming_mode == "all-equal") {
      a.value = std::to_string(hamming(gs[0], gs[1]));
    } else {
      const auto mode = o.hamming_mode == "median" ? HammingMode::median : HammingMode::all_equal;
      a.value = std::to_string(hamming_multi(gs, mode));
    }
    a.params.emplace_back("mode", o.hamming_mode);
  } else if (o.measure == "edit") {
    need(2, 2);
    if (o.cap) {
      // delta_E <= cap iff the deletion distance of the dollar images is <= 2 cap
      const auto r = deletion_distance_bounded(dollar_transform(gs[0]), dollar_transform(gs[1]), 2 * *o.cap, tuning);
      a.value = r ? std::to_string(*r / 2) : "exceeds";
      a.params.emplace_back("cap", std::to_string(*o.cap));
    } else {
      a.value = std::to_string(edit_distance_exact(gs[0], gs[1], tuning));
    }
  } else if (o.measure == "edit-approx") {
    need(2, 2);
    a.value = std::to_string(edit_distance_approx(gs[0], gs[1], eps, tuning));
    with_eps();
  } else if (o.measure == "lcs-approx") {
    need(2, 2);
    a.value = std::to_string(lcs_approx(gs[0], gs[1], eps, tuning));
    with_eps();
  } else if (o.measure == "median") {
    if (o.cap) {
      need(2, 4);
      std::vector<Text> texts;
      for (const Slp& g : gs) texts.push_back(expand(g));
      const auto r = bounded_k_edit(texts, *o.cap);
      a.value = r ? std::to_string(*r) : "exceeds";
      a.params.emplace_back("cap", std::to_string(*o.cap));
    } else {
      need(2, 3);
      a.value = std::to_string(median_edit_approx(gs, eps));
      with_eps();
    }
  } else if (o.measure == "center") {
    need(2, 3);
    a.value = std::to_string(center_edit_approx(gs, eps));
    with_eps();
  } else if (o.measure == "shift") {
    need(2, 64);
    std::vector<Text> texts;
    for (const Slp& g : gs) texts.push_back(expand(g));
    if (o.groups) {
      const auto b = shift_distance_approx(texts, *o.groups, o.threads);
      a.value = std::to_string(b.lower) + " " + std::to_string(b.upper);
      a.params.emplace_back("groups", std::to_string(*o.groups));
      a.params.emplace_back("lower", std::to_string(b.lower));
      a.params.emplace_back("upper", std::to_string(b.upper));
    } else {
      const auto r = shift_match_k(texts, o.threads);
      a.value = std::to_string(r.distance);
      a.extra_lines.push_back("offsets " + join(r.offsets));
      a.params.emplace_back("score", std::to_string(r.score));
      a.params.emplace_back("offsets", join(r.offsets));
    }
  } else {
    throw Error(Errc::invalid_params, "unknown measure " + o.measure);
  }
  return a;
}

int run_dist(const DistOptions& o) {
  if (o.k && *o.k != o.inputs.size()) {
    throw Error(Errc::invalid_params, "--k " + std::to_string(*o.k) + " but " + std::to_string(o.inputs.size()) +
                                          " inputs given");
  }
  if (o.epsilon && !(*o.epsilon > 0 && *o.epsilon <= 1)) throw Error(Errc::invalid_epsilon, "epsilon must lie in (0, 1]");
  if (o.cap && *o.cap < 1) throw Error(Errc::invalid_cap, "cap must be at least 1");
  const Format format = o.format == "slp" ? Format::slp : (o.format == "raw" ? Format::raw : Format::automatic);
  std::vector<Slp> gs;
  for (const auto& in : o.inputs) gs.push_back(load(in, format, o.literal));

  const Answer a = compute(o, gs);
  std::cout << a.value << '\n';
  for (const auto& line : a.extra_lines) std::cout << line << '\n';
  if (o.output == "csv") {
    std::cout << o.measure << ',' << a.value;
    for (const auto& [key, v] : a.params) std::cout << ',' << key << '=' << v;
    std::cout << '\n';
  } else if (o.output == "json") {
    nlohmann::json j;
    j["measure"] = o.measure;
    j["value"] = a.value;
    for (const auto& [key, v] : a.params) j["params"][key] = v;
    std::cout << j.dump() << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distances between grammar-compressed strings"};
  app.require_subcommand(1);

  std::string in_path, out_path;
  auto* compress = app.add_subcommand("compress", "Build an SLPv1 grammar from a text file");
  compress->add_option("input", in_path, "Text file")->required();
  compress->add_option("-o,--output", out_path, "Output file (stdout when omitted)");

  auto* decompress = app.add_subcommand("decompress", "Expand an SLPv1 grammar back to text");
  decompress->add_option("input", in_path, "SLPv1 file")->required();
  decompress->add_option("-o,--output", out_path, "Output file (stdout when omitted)");

  DistOptions d;
  auto* dist = app.add_subcommand("dist", "Compute a distance between inputs");
  dist->add_option("-m,--measure", d.measure, "Measure")
      ->required()
      ->check(CLI::IsMember({"hamming", "edit", "edit-approx", "lcs-approx", "median", "center", "shift"}));
  dist->add_option("inputs", d.inputs, "Input files, or strings with --literal")->required();
  dist->add_option("-e,--epsilon", d.epsilon, "Approximation parameter in (0, 1], default 0.5");
  dist->add_option("--cap", d.cap, "Distance cap: bounded edit or exact bounded median");
  dist->add_option("--tau", d.tau, "Force the box path with this phrase length");
  dist->add_option("--k", d.k, "Expected number of inputs");
  dist->add_option("--groups", d.groups, "Shift: group count l for the bracket");
  dist->add_option("--hamming-mode", d.hamming_mode, "all-equal or median")
      ->check(CLI::IsMember({"all-equal", "median"}));
  dist->add_option("--output-format", d.output, "plain, csv or json")->check(CLI::IsMember({"plain", "csv", "json"}));
  dist->add_flag_callback("--csv", [&] { d.output = "csv"; }, "Same as --output-format csv");
  dist->add_option("--format", d.format, "Input format")->check(CLI::IsMember({"auto", "raw", "slp"}));
  dist->add_flag("--literal", d.literal, "Treat inputs as the strings themselves");
  dist->add_option("--threads", d.threads, "Worker threads for shift matching")->check(CLI::PositiveNumber);

  cli::BenchOptions b;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "Compressed vs naive timings as CSV");
  bench->add_option("--suite", b.suite, "all, quick or perf")->check(CLI::IsMember({"all", "quick", "perf"}));
  bench->add_option("--sizes", b.sizes, "Text lengths");
  bench->add_option("--seed", b.seed, "Random seed");
  bench->add_option("-e,--epsilon", b.epsilon, "Approximation parameter")->check(CLI::Range(1e-9, 1.0));
  bench->add_flag("!--no-timing", b.timing, "Leave timing columns empty");
  bench->add_option("-o,--output", bench_out, "CSV file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*compress) {
      const Slp g = slp_from_text(utf8_decode(read_all(in_path)));
      std::ostringstream os;
      write_slp(os, g);
      write_all(out_path, os.str());
    } else if (*decompress) {
      std::istringstream in(read_all(in_path));
      write_all(out_path, utf8_encode(expand(read_slp(in))));
    } else if (*dist) {
      return run_dist(d);
    } else if (*bench) {
      std::cerr << "gramdist: suite=" << b.suite << " seed=" << b.seed << " epsilon=" << b.epsilon << '\n';
      if (bench_out.empty()) {
        cli::run_bench(b, std::cout);
      } else {
        std::ofstream out(bench_out);
        if (!out) throw Error(Errc::io_error, "cannot write " + bench_out);
        cli::run_bench(b, out);
      }
    }
  } catch (const Error& e) {
    std::cerr << "gramdist: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::bad_alloc&) {
    std::cerr << "gramdist: out of memory\n";
    return kLimits;
  }
  return kOk;
}
