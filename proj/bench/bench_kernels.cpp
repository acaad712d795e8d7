// Throughput comparison of the serial and OpenMP FFT paths plus the scalar
// op and dot-product kernels. Not part of the test suite; build and run
// ./bench/bench_kernels after configuring with google-benchmark installed.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "positlab/kernels.hpp"
#include "positlab/number_format.hpp"

using namespace positlab;

namespace {

std::vector<Complex> fft_input(const NumberFormat& fmt, std::size_t n) {
  return encode_signal(make_signal("uniform", n, 42), fmt);
}

void BM_fft_serial(benchmark::State& state, const char* format) {
  const NumberFormat fmt = NumberFormat::parse(format);
  const auto input = fft_input(fmt, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto data = input;
    fft(data, fmt, /*parallel=*/false);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_fft_parallel(benchmark::State& state, const char* format) {
  const NumberFormat fmt = NumberFormat::parse(format);
  const auto input = fft_input(fmt, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto data = input;
    fft(data, fmt, /*parallel=*/true);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_dot(benchmark::State& state, const char* format, bool use_quire) {
  const NumberFormat fmt = NumberFormat::parse(format);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto av = make_uniform(n, 7), bv = make_uniform(n, 8);
  std::vector<NumberFormat::Scalar> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = fmt.from_double(av[i]);
    b[i] = fmt.from_double(bv[i]);
  }
  for (auto _ : state) {
    DotResult r = dot(a, b, fmt, use_quire, 7);
    benchmark::DoNotOptimize(r.value);
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_scalar_op(benchmark::State& state, const char* format, char op) {
  const NumberFormat fmt = NumberFormat::parse(format);
  std::mt19937_64 rng(3);
  const std::uint64_t mask = (std::uint64_t{1} << fmt.total_bits()) - 1;
  std::vector<NumberFormat::Scalar> xs(4096), ys(4096);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = rng() & mask;
    ys[i] = rng() & mask;
  }
  std::size_t i = 0;
  for (auto _ : state) {
    NumberFormat::Scalar r;
    switch (op) {
      case '+': r = fmt.add(xs[i], ys[i]); break;
      case '*': r = fmt.mul(xs[i], ys[i]); break;
      default: r = fmt.div(xs[i], ys[i]); break;
    }
    benchmark::DoNotOptimize(r);
    i = (i + 1) & 4095;
  }
  state.SetItemsProcessed(state.iterations());
}

}  // namespace

BENCHMARK_CAPTURE(BM_fft_serial, p16e2, "p16e2")->Arg(1024)->Arg(4096);
BENCHMARK_CAPTURE(BM_fft_parallel, p16e2, "p16e2")->Arg(1024)->Arg(4096);
BENCHMARK_CAPTURE(BM_fft_serial, fp16, "fp16")->Arg(4096);
BENCHMARK_CAPTURE(BM_fft_parallel, fp16, "fp16")->Arg(4096);
BENCHMARK_CAPTURE(BM_fft_serial, binary64, "binary64")->Arg(4096);
BENCHMARK_CAPTURE(BM_fft_parallel, binary64, "binary64")->Arg(4096);

BENCHMARK_CAPTURE(BM_dot, p16e2_quire, "p16e2", true)->Arg(1000)->Arg(10000);
BENCHMARK_CAPTURE(BM_dot, p16e2_plain, "p16e2", false)->Arg(1000)->Arg(10000);
BENCHMARK_CAPTURE(BM_dot, fp16_plain, "fp16", false)->Arg(1000);

BENCHMARK_CAPTURE(BM_scalar_op, p16e2_add, "p16e2", '+');
BENCHMARK_CAPTURE(BM_scalar_op, p16e2_mul, "p16e2", '*');
BENCHMARK_CAPTURE(BM_scalar_op, p16e2_div, "p16e2", '/');
BENCHMARK_CAPTURE(BM_scalar_op, fp16_add, "fp16", '+');
BENCHMARK_CAPTURE(BM_scalar_op, fp16_mul, "fp16", '*');

BENCHMARK_MAIN();
