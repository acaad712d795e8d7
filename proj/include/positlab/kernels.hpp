#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "positlab/number_format.hpp"

namespace positlab {

/// One complex sample; both components share the owning format.
struct Complex {
  NumberFormat::Scalar re = 0;
  NumberFormat::Scalar im = 0;
  friend bool operator==(const Complex&, const Complex&) = default;
};

struct ErrorReport {
  std::string kernel;
  std::string format;
  std::size_t size = 0;
  std::uint64_t seed = 0;
  double rmse = 0.0;
  double max_abs_err = 0.0;

  std::string csv_row() const;
};

inline constexpr const char* kErrorReportCsvHeader = "kernel,format,size,seed,rmse,max_abs_err";
inline constexpr const char* kProfileCsvHeader = "format,log10_x,digits";

/// Shortest locale-independent round-trip decimal for CSV output.
std::string format_double(double v);

/// Test signals, generated in binary64. Kinds: uniform (seeded uniform[-1,1]),
/// ecg-synth (synthetic sum-of-Gaussians heartbeat train with seeded beat
/// jitter and noise), impulse (x[0]=1), dc (all ones). Imaginary parts are 0.
/// Unknown kinds throw invalid_argument.
std::vector<std::complex<double>> make_signal(const std::string& kind, std::size_t n,
                                              std::uint64_t seed);

/// Seeded uniform[-1,1] values (dot-product operands).
std::vector<double> make_uniform(std::size_t n, std::uint64_t seed);

std::vector<Complex> encode_signal(const std::vector<std::complex<double>>& x,
                                   const NumberFormat& fmt);

/// In-place iterative radix-2 decimation-in-time FFT with bit-reversal
/// permutation. Twiddle factors are computed in binary64 and encoded into the
/// format once; every butterfly operation rounds in the format. The parallel
/// path splits the independent butterflies of each stage across OpenMP
/// threads and is bit-identical to the serial path.
/// Length must be a power of two with 8 <= N <= 65536 (invalid_argument).
void fft(std::vector<Complex>& data, const NumberFormat& fmt, bool parallel = false);

/// Measurement is done in binary64 on exactly decoded values, so it adds no
/// format error of its own. rmse = sqrt(mean |delta|^2), max_abs_err = max
/// |delta| over complex deltas.
ErrorReport error_metrics(const std::vector<Complex>& result, const NumberFormat& fmt,
                          const std::vector<std::complex<double>>& reference,
                          const std::string& kernel, std::uint64_t seed);

struct DotResult {
  NumberFormat::Scalar value = 0;
  ExactValue exact;  // arbitrary-precision reference dot product
  ErrorReport report;
};

/// Dot product in the format. Non-quire path: serial multiply-then-add with
/// per-operation rounding. Quire path (es=2 posits only, else
/// invalid_argument): exact multiply-accumulate, one final rounding.
DotResult dot(const std::vector<NumberFormat::Scalar>& a,
              const std::vector<NumberFormat::Scalar>& b, const NumberFormat& fmt,
              bool use_quire, std::uint64_t seed);

struct ProfilePoint {
  double log10_x = 0.0;
  double digits = 0.0;
};

/// Accuracy profile over the positive dynamic range: at representable points
/// spaced ~points_per_decade apart in log10 (plus the exact range endpoints),
/// digits = -log10(gap/x) where gap is the step to the adjacent representable
/// value. Rows are ordered by increasing x with duplicates removed.
std::vector<ProfilePoint> accuracy_profile(const NumberFormat& fmt, int points_per_decade);

}  // namespace positlab
