#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "positlab/kernels.hpp"
#include "positlab/number_format.hpp"
#include "positlab/prau.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace positlab;

// Exit contract: 0 success, 1 usage error (bad flags, unknown formats,
// malformed inputs), 2 computation guard (table width, run instruction limit).
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitGuard = 2;

void apply_thread_cap() {
#ifdef _OPENMP
  if (const char* env = std::getenv("POSITLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) omp_set_num_threads(n);
  }
#endif
}

/// Writes to --out if given, else stdout.
int emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return kExitOk;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open output file: " << path << "\n";
    return kExitUsage;
  }
  f << content;
  return kExitOk;
}

std::vector<NumberFormat> parse_formats(const std::string& csv) {
  std::vector<NumberFormat> out;
  std::stringstream ss(csv);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (!name.empty()) out.push_back(NumberFormat::parse(name));
  }
  if (out.empty()) throw std::invalid_argument("no formats given");
  return out;
}

std::string bit_group(std::uint32_t bits, int hi, int lo) {
  std::string s;
  for (int i = hi; i >= lo; --i) s += ((bits >> i) & 1) ? '1' : '0';
  return s;
}

int cmd_inspect(const std::string& format, const std::string& bits) {
  const NumberFormat fmt = NumberFormat::parse(format);
  std::string out;
  out += "format: " + fmt.name() + "\n";
  if (fmt.kind() == NumberFormat::Kind::posit) {
    const FormatSpec sp = fmt.posit_spec();
    const PositBits p = PositBits::from_hex(bits, sp);
    out += "pattern: " + p.to_hex() + "\n";
    const DecodedPosit d = decode(p);
    if (d.kind == DecodedPosit::Kind::Zero) {
      out += "value: 0 (zero)\n";
    } else if (d.kind == DecodedPosit::Kind::NaR) {
      out += "value: NaR\n";
    } else {
      const int n = sp.n;
      const int rlo = n - 1 - d.regime_field_bits;
      const int elo = rlo - d.exponent_field_bits;
      out += "fields: S=" + bit_group(p.bits, n - 1, n - 1);
      out += " R=" + bit_group(p.bits, n - 2, rlo);
      out += " E=" + (d.exponent_field_bits ? bit_group(p.bits, rlo - 1, elo) : std::string("-"));
      out += " F=" + (d.fraction_bits ? bit_group(p.bits, elo - 1, 0) : std::string("-"));
      out += "\n";
      out += "regime: run=" + std::to_string(d.regime_run) + " r=" + std::to_string(d.regime) + "\n";
      out += "exponent: e=" + std::to_string(d.exponent) + " (" +
             std::to_string(d.exponent_field_bits) + " of " + std::to_string(sp.es) +
             " bits present)\n";
      out += "fraction: f=" + std::to_string(d.fraction) + "/" +
             std::to_string(1u << d.fraction_bits) + "\n";
      out += "value: " + d.value.to_decimal_string() + "\n";
      out += "binary64: " + format_double(d.value.to_double()) + "\n";
    }
    return emit("", out);
  }
  if (fmt.kind() == NumberFormat::Kind::minifloat) {
    const MiniFloatSpec sp = fmt.minifloat_spec();
    const MiniFloatBits b = MiniFloatBits::from_hex(bits, sp);
    out += "pattern: " + b.to_hex() + "\n";
    const int t = sp.total_bits();
    out += "fields: S=" + bit_group(b.pattern, t - 1, t - 1) +
           " E=" + bit_group(b.pattern, t - 2, sp.man_bits) +
           " M=" + bit_group(b.pattern, sp.man_bits - 1, 0) + "\n";
    const MiniValue v = mf_decode(b);
    if (v.kind == MiniValue::Kind::NaN) {
      out += "value: NaN\n";
    } else if (v.kind == MiniValue::Kind::Inf) {
      out += std::string("value: ") + (v.negative ? "-Inf" : "+Inf") + "\n";
    } else if (v.value.is_zero()) {
      out += std::string("value: ") + (v.negative ? "-0" : "+0") + "\n";
    } else {
      out += std::string("class: ") + (b.exp_field() == 0 ? "subnormal" : "normal") + "\n";
      out += "value: " + v.value.to_decimal_string() + "\n";
      out += "binary64: " + format_double(fmt.to_double(b.pattern)) + "\n";
    }
    return emit("", out);
  }
  std::cerr << "error: inspect supports posit and minifloat formats\n";
  return kExitUsage;
}

int cmd_profile(const std::string& formats_csv, int ppd, const std::string& out_path) {
  const auto formats = parse_formats(formats_csv);
  std::string out = std::string(kProfileCsvHeader) + "\n";
  for (const auto& fmt : formats) {
    for (const ProfilePoint& pt : accuracy_profile(fmt, ppd)) {
      out += fmt.name() + "," + format_double(pt.log10_x) + "," + format_double(pt.digits) + "\n";
    }
  }
  return emit(out_path, out);
}

int cmd_fft(std::size_t size, const std::string& formats_csv, std::uint64_t seed,
            const std::string& signal, const std::string& out_path) {
  const auto formats = parse_formats(formats_csv);
  const auto base = make_signal(signal, size, seed);

  // binary64 reference pipeline: the same kernel run in the native format
  auto ref_bits = encode_signal(base, NumberFormat::binary64());
  fft(ref_bits, NumberFormat::binary64(), /*parallel=*/true);
  std::vector<std::complex<double>> ref(size);
  for (std::size_t i = 0; i < size; ++i) {
    ref[i] = {NumberFormat::binary64().to_double(ref_bits[i].re),
              NumberFormat::binary64().to_double(ref_bits[i].im)};
  }

  std::string out = std::string(kErrorReportCsvHeader) + "\n";
  for (const auto& fmt : formats) {
    auto data = encode_signal(base, fmt);
    fft(data, fmt, /*parallel=*/true);
    out += error_metrics(data, fmt, ref, "fft-" + signal, seed).csv_row() + "\n";
  }
  return emit(out_path, out);
}

int cmd_dot(std::size_t n, const std::string& formats_csv, bool use_quire,
            std::uint64_t seed, const std::string& out_path) {
  const auto formats = parse_formats(formats_csv);
  const auto av = make_uniform(n, seed);
  const auto bv = make_uniform(n, seed + 1);
  // Extended ErrorReport row: the computed result pattern and the oracle
  // pattern (exact dot rounded once into the format).
  std::string out = std::string(kErrorReportCsvHeader) + ",result_hex,oracle_hex\n";
  for (const auto& fmt : formats) {
    std::vector<NumberFormat::Scalar> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = fmt.from_double(av[i]);
      b[i] = fmt.from_double(bv[i]);
    }
    // Formats without a quire silently fall back to the serial kernel, so a
    // mixed format list stays comparable in one report.
    const DotResult r = dot(a, b, fmt, use_quire && fmt.has_quire(), seed);
    out += r.report.csv_row() + "," + fmt.pattern_hex(r.value) + "," +
           fmt.pattern_hex(fmt.from_exact(r.exact)) + "\n";
  }
  return emit(out_path, out);
}

int cmd_table(const std::string& format, const std::string& op, std::int64_t sample,
              std::uint64_t seed, const std::string& out_path) {
  const NumberFormat fmt = NumberFormat::parse(format);
  const bool unary = op == "sqrt";
  if (!(op == "add" || op == "sub" || op == "mul" || op == "div" || op == "sqrt")) {
    throw std::invalid_argument("unknown op: " + op + " (want add|sub|mul|div|sqrt)");
  }
  const int width = fmt.total_bits();
  if (width > 10 && sample <= 0) {
    std::cerr << "error: " << fmt.name() << " is " << width
              << " bits wide; exhaustive tables are limited to 10-bit formats."
              << " Pass --sample COUNT for a seeded random sample.\n";
    return kExitGuard;
  }
  auto apply = [&](NumberFormat::Scalar a, NumberFormat::Scalar b) {
    if (op == "add") return fmt.add(a, b);
    if (op == "sub") return fmt.sub(a, b);
    if (op == "mul") return fmt.mul(a, b);
    if (op == "div") return fmt.div(a, b);
    return fmt.sqrt(a);
  };
  std::string out;
  if (sample <= 0) {
    const std::uint64_t space = std::uint64_t{1} << width;
    if (unary) {
      out = "a,result\n";
      for (std::uint64_t a = 0; a < space; ++a) {
        out += fmt.pattern_hex(a) + "," + fmt.pattern_hex(apply(a, 0)) + "\n";
      }
    } else {
      out = "a,b,result\n";
      for (std::uint64_t a = 0; a < space; ++a) {
        for (std::uint64_t b = 0; b < space; ++b) {
          out += fmt.pattern_hex(a) + "," + fmt.pattern_hex(b) + "," +
                 fmt.pattern_hex(apply(a, b)) + "\n";
        }
      }
    }
  } else {
    std::mt19937_64 eng(seed);
    const std::uint64_t mask = width == 64 ? ~std::uint64_t{0}
                                           : (std::uint64_t{1} << width) - 1;
    out = unary ? "a,result\n" : "a,b,result\n";
    for (std::int64_t i = 0; i < sample; ++i) {
      const NumberFormat::Scalar a = eng() & mask;
      if (unary) {
        out += fmt.pattern_hex(a) + "," + fmt.pattern_hex(apply(a, 0)) + "\n";
      } else {
        const NumberFormat::Scalar b = eng() & mask;
        out += fmt.pattern_hex(a) + "," + fmt.pattern_hex(b) + "," +
               fmt.pattern_hex(apply(a, b)) + "\n";
      }
    }
  }
  return emit(out_path, out);
}

int cmd_run(const std::string& path, const std::string& format, std::uint64_t limit,
            const std::string& trace_path, const std::string& out_path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot read program: " << path << "\n";
    return kExitUsage;
  }
  std::stringstream ss;
  ss << f.rdbuf();
  const NumberFormat fmt = NumberFormat::parse(format);
  if (!fmt.is_posit()) {
    throw std::invalid_argument("run needs a posit format, got " + fmt.name());
  }
  prau::Program prog;
  try {
    prog = prau::assemble(ss.str());
  } catch (const prau::AsmError& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return kExitUsage;
  }
  const prau::RunResult res = prau::run(prog, fmt.posit_spec(), limit, !trace_path.empty());

  if (!trace_path.empty()) {
    std::string tr = std::string(prau::kTraceCsvHeader) + "\n";
    for (const auto& row : res.trace) tr += row.csv_row() + "\n";
    const int rc = emit(trace_path, tr);
    if (rc != kExitOk) return rc;
  }

  std::string out;
  out += std::string("status: ") + (res.hit_limit ? "limit" : res.halted ? "halted" : "end") + "\n";
  out += "retired: " + std::to_string(res.state.retired) + "\n";
  std::string counts = "counts:";
  for (const auto& [name, cnt] : res.op_counts) {
    counts += " " + name + "=" + std::to_string(cnt);
  }
  out += counts + "\n";
  for (int i = 0; i < 32; ++i) {
    const PositBits& p = res.state.pregs[i];
    if (p.bits == 0) continue;
    const DecodedPosit d = decode(p);
    out += "p" + std::to_string(i) + " = " + p.to_hex() + " (" +
           (d.kind == DecodedPosit::Kind::NaR ? "NaR" : d.value.to_decimal_string()) + ")\n";
  }
  for (int i = 0; i < 32; ++i) {
    if (res.state.xregs[i] == 0) continue;
    out += "x" + std::to_string(i) + " = " + std::to_string(res.state.xregs[i]) + "\n";
  }
  if (res.state.quire && !(res.state.quire->exact_value() == ExactValue::zero())) {
    out += "quire = " + res.state.quire->dump_hex() + "\n";
  }
  const int rc = emit(out_path, out);
  if (rc != kExitOk) return rc;
  if (res.hit_limit) {
    std::cerr << "error: " << res.diagnostic << "\n";
    return kExitGuard;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"posit / minifloat arithmetic laboratory"};
  app.require_subcommand(1);

  std::string format = "p16e2", bits, formats = "p16e2", out_path, signal = "uniform";
  std::string op = "add", program_path, trace_path;
  int ppd = 16;
  std::size_t size = 4096, n = 1000;
  std::uint64_t seed = 42, limit = 1'000'000;
  std::int64_t sample = 0;
  bool use_quire = true;

  auto* inspect = app.add_subcommand("inspect", "decode one pattern into its fields");
  inspect->add_option("--format", format, "format name")->required();
  inspect->add_option("--bits", bits, "pattern (hex)")->required();

  auto* profile = app.add_subcommand("profile", "accuracy-vs-magnitude profile CSV");
  profile->add_option("--formats", formats, "comma-separated format names")->required();
  profile->add_option("--points-per-decade", ppd, "samples per decade (default 16)");
  profile->add_option("--out", out_path, "output file (default stdout)");

  auto* fft_cmd = app.add_subcommand("fft", "FFT error benchmark vs binary64 reference");
  fft_cmd->add_option("--size", size, "transform length, power of two (default 4096)");
  fft_cmd->add_option("--formats", formats, "comma-separated format names")->required();
  fft_cmd->add_option("--seed", seed, "signal seed (default 42)");
  fft_cmd->add_option("--signal", signal, "uniform|ecg-synth|impulse|dc (default uniform)");
  fft_cmd->add_option("--out", out_path, "output file (default stdout)");

  auto* dot_cmd = app.add_subcommand("dot", "dot-product error benchmark");
  dot_cmd->add_option("--n", n, "vector length (default 1000)");
  dot_cmd->add_option("--formats", formats, "comma-separated format names")->required();
  dot_cmd->add_flag("--quire,!--no-quire", use_quire,
                    "use the quire for es=2 posits (default on)");
  dot_cmd->add_option("--seed", seed, "vector seed (default 42)");
  dot_cmd->add_option("--out", out_path, "output file (default stdout)");

  auto* table = app.add_subcommand("table", "exhaustive (or sampled) operation table CSV");
  table->add_option("--format", format, "format name")->required();
  table->add_option("--op", op, "add|sub|mul|div|sqrt")->required();
  table->add_option("--sample", sample, "sample COUNT random inputs (required above 10 bits)");
  table->add_option("--seed", seed, "sampling seed (default 42)");
  table->add_option("--out", out_path, "output file (default stdout)");

  auto* run_cmd = app.add_subcommand("run", "assemble and execute a coprocessor program");
  run_cmd->add_option("program", program_path, "assembly file (.pasm)")->required();
  run_cmd->add_option("--format", format, "posit format (default p16e2)");
  run_cmd->add_option("--limit", limit, "instruction budget (default 10^6)");
  run_cmd->add_option("--trace", trace_path, "write a per-step trace CSV to this file");
  run_cmd->add_option("--out", out_path, "output file for the state dump (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (inspect->parsed()) return cmd_inspect(format, bits);
    if (profile->parsed()) return cmd_profile(formats, ppd, out_path);
    if (fft_cmd->parsed()) return cmd_fft(size, formats, seed, signal, out_path);
    if (dot_cmd->parsed()) return cmd_dot(n, formats, use_quire, seed, out_path);
    if (table->parsed()) return cmd_table(format, op, sample, seed, out_path);
    if (run_cmd->parsed()) return cmd_run(program_path, format, limit, trace_path, out_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
