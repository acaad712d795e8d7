#include "positlab/kernels.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace positlab {

std::string format_double(double v) {
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string ErrorReport::csv_row() const {
  return kernel + "," + format + "," + std::to_string(size) + "," + std::to_string(seed) +
         "," + format_double(rmse) + "," + format_double(max_abs_err);
}

namespace {

// Uniform [0,1) from the top 53 bits of the generator; avoids the
// distribution classes, whose output is not pinned by the standard.
double unit_double(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

double log2_of(const ExactValue& v) {
  // Exact for significands up to 53 bits; beyond that the truncation error
  // is far below anything a digits/log10 plot can resolve.
  return std::log2(mpz_get_d(v.significand().get_mpz_t())) +
         static_cast<double>(v.exp2());
}

}  // namespace

std::vector<std::complex<double>> make_signal(const std::string& kind, std::size_t n,
                                              std::uint64_t seed) {
  std::vector<std::complex<double>> x(n, {0.0, 0.0});
  if (kind == "uniform") {
    std::mt19937_64 eng(seed);
    for (auto& s : x) s = {2.0 * unit_double(eng) - 1.0, 0.0};
  } else if (kind == "dc") {
    for (auto& s : x) s = {1.0, 0.0};
  } else if (kind == "impulse") {
    if (n) x[0] = {1.0, 0.0};
  } else if (kind == "ecg-synth") {
    // Heartbeat train: per beat a fixed P-QRS-T sum of Gaussians on the
    // normalized beat phase, with seeded per-beat amplitude jitter and a
    // small seeded noise floor; scaled into [-1,1] like normalized audio.
    const std::size_t beats = n >= 512 ? n / 256 : 2;
    const std::size_t beat_len = (n + beats - 1) / beats;
    std::mt19937_64 eng(seed);
    std::vector<double> amp(beats);
    for (auto& a : amp) a = 1.0 + 0.05 * (2.0 * unit_double(eng) - 1.0);
    auto g = [](double t, double c, double w) {
      const double d = (t - c) / w;
      return std::exp(-0.5 * d * d);
    };
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t b = i / beat_len < beats ? i / beat_len : beats - 1;
      const double t = static_cast<double>(i % beat_len) / static_cast<double>(beat_len);
      const double beat = 0.12 * g(t, 0.18, 0.035) - 0.14 * g(t, 0.385, 0.012) +
                          1.00 * g(t, 0.410, 0.010) - 0.22 * g(t, 0.435, 0.012) +
                          0.32 * g(t, 0.620, 0.045);
      const double noise = 0.01 * (2.0 * unit_double(eng) - 1.0);
      x[i] = {(beat * amp[b] + noise) / 1.2, 0.0};
    }
  } else {
    throw std::invalid_argument("unknown signal kind: " + kind +
                                " (want uniform|ecg-synth|impulse|dc)");
  }
  return x;
}

std::vector<double> make_uniform(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::vector<double> v(n);
  for (auto& d : v) d = 2.0 * unit_double(eng) - 1.0;
  return v;
}

std::vector<Complex> encode_signal(const std::vector<std::complex<double>>& x,
                                   const NumberFormat& fmt) {
  std::vector<Complex> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = {fmt.from_double(x[i].real()), fmt.from_double(x[i].imag())};
  }
  return out;
}

namespace {

Complex cmul(const Complex& a, const Complex& b, const NumberFormat& f) {
  return {f.sub(f.mul(a.re, b.re), f.mul(a.im, b.im)),
          f.add(f.mul(a.re, b.im), f.mul(a.im, b.re))};
}

void butterfly(std::vector<Complex>& a, const std::vector<Complex>& tw, std::size_t n,
               std::size_t len, std::size_t b, const NumberFormat& f) {
  const std::size_t half = len >> 1;
  const std::size_t block = b / half;
  const std::size_t j = b % half;
  const std::size_t i0 = block * len + j;
  const std::size_t i1 = i0 + half;
  const Complex t = cmul(tw[j * (n / len)], a[i1], f);
  const Complex u = a[i0];
  a[i0] = {f.add(u.re, t.re), f.add(u.im, t.im)};
  a[i1] = {f.sub(u.re, t.re), f.sub(u.im, t.im)};
}

}  // namespace

void fft(std::vector<Complex>& data, const NumberFormat& fmt, bool parallel) {
  const std::size_t n = data.size();
  if (n < 8 || n > 65536 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("fft length must be a power of two in [8, 65536], got " +
                                std::to_string(n));
  }

  // Bit-reversal permutation (pattern moves only, no arithmetic).
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  // Twiddles exp(-2*pi*i*k/n), k < n/2: binary64 trig, one encoding into the
  // format. Stages index this single table with stride n/len.
  std::vector<Complex> tw(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    tw[k] = {fmt.from_double(std::cos(ang)), fmt.from_double(std::sin(ang))};
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::int64_t nbf = static_cast<std::int64_t>(n / 2);
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
      for (std::int64_t b = 0; b < nbf; ++b) {
        butterfly(data, tw, n, len, static_cast<std::size_t>(b), fmt);
      }
    } else {
      for (std::int64_t b = 0; b < nbf; ++b) {
        butterfly(data, tw, n, len, static_cast<std::size_t>(b), fmt);
      }
    }
  }
}

ErrorReport error_metrics(const std::vector<Complex>& result, const NumberFormat& fmt,
                          const std::vector<std::complex<double>>& reference,
                          const std::string& kernel, std::uint64_t seed) {
  if (result.size() != reference.size()) {
    throw std::invalid_argument("error_metrics: length mismatch");
  }
  double sum_sq = 0.0, max_sq = 0.0;
  for (std::size_t i = 0; i < result.size(); ++i) {
    const double dre = fmt.to_double(result[i].re) - reference[i].real();
    const double dim = fmt.to_double(result[i].im) - reference[i].imag();
    const double sq = dre * dre + dim * dim;
    sum_sq += sq;
    if (sq > max_sq) max_sq = sq;
  }
  ErrorReport r;
  r.kernel = kernel;
  r.format = fmt.name();
  r.size = result.size();
  r.seed = seed;
  r.rmse = result.empty() ? 0.0 : std::sqrt(sum_sq / static_cast<double>(result.size()));
  r.max_abs_err = std::sqrt(max_sq);
  return r;
}

DotResult dot(const std::vector<NumberFormat::Scalar>& a,
              const std::vector<NumberFormat::Scalar>& b, const NumberFormat& fmt,
              bool use_quire, std::uint64_t seed) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  if (use_quire && !fmt.has_quire()) {
    throw std::invalid_argument("quire dot product needs an es=2 posit format, got " +
                                fmt.name());
  }
  DotResult out;
  if (use_quire) {
    Quire q(fmt.posit_spec());
    for (std::size_t i = 0; i < a.size(); ++i) {
      q.mac(PositBits(static_cast<std::uint32_t>(a[i]), fmt.posit_spec()),
            PositBits(static_cast<std::uint32_t>(b[i]), fmt.posit_spec()));
    }
    out.value = q.to_posit().bits;
  } else {
    NumberFormat::Scalar acc = fmt.from_double(0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      acc = fmt.add(acc, fmt.mul(a[i], b[i]));
    }
    out.value = acc;
  }
  ExactValue exact;  // zero
  for (std::size_t i = 0; i < a.size(); ++i) {
    exact = exact + fmt.to_exact(a[i]) * fmt.to_exact(b[i]);
  }
  out.exact = exact;
  const double err = std::fabs(fmt.to_double(out.value) - exact.to_double());
  out.report.kernel = use_quire ? "dot-quire" : "dot";
  out.report.format = fmt.name();
  out.report.size = a.size();
  out.report.seed = seed;
  out.report.rmse = err;
  out.report.max_abs_err = err;
  return out;
}

std::vector<ProfilePoint> accuracy_profile(const NumberFormat& fmt, int points_per_decade) {
  if (points_per_decade < 1) throw std::invalid_argument("points_per_decade must be >= 1");
  const double log10_2 = std::log10(2.0);
  const NumberFormat::Scalar lo = fmt.min_pos();
  const NumberFormat::Scalar hi = fmt.max_finite();
  const double log10_lo = log2_of(fmt.to_exact(lo)) * log10_2;
  const double log10_hi = log2_of(fmt.to_exact(hi)) * log10_2;

  // Sample targets 10^(k/ppd) across the range, snapped to the nearest
  // representable; endpoints are always included.
  std::vector<NumberFormat::Scalar> samples;
  samples.push_back(lo);
  const long k_lo = static_cast<long>(std::ceil(log10_lo * points_per_decade));
  const long k_hi = static_cast<long>(std::floor(log10_hi * points_per_decade));
  for (long k = k_lo; k <= k_hi; ++k) {
    const double log2_target = static_cast<double>(k) / points_per_decade / log10_2;
    const double e = std::floor(log2_target);
    const double mant = std::exp2(log2_target - e);  // in [1,2)
    const ExactValue target = ExactValue::from_parts(
        1, static_cast<long>(std::llround(mant * 0x1.0p52)),
        static_cast<std::int64_t>(e) - 52);
    NumberFormat::Scalar s = fmt.from_exact(target);
    if (s < lo) s = lo;    // positive finite patterns are value-ordered in
    if (s > hi) s = hi;    // all three families, so clamping is a pattern op
    samples.push_back(s);
  }
  samples.push_back(hi);

  std::vector<ProfilePoint> rows;
  rows.reserve(samples.size());
  NumberFormat::Scalar prev = 0;
  bool have_prev = false;
  for (NumberFormat::Scalar s : samples) {
    if (have_prev && s <= prev) continue;
    prev = s;
    have_prev = true;
    const ExactValue x = fmt.to_exact(s);
    // Gap to the adjacent representable: upward, except at the top endpoint.
    const ExactValue gap = s < hi ? fmt.to_exact(fmt.next_up(s)) - x
                                  : x - fmt.to_exact(s - 1);
    const double lx = log2_of(x);
    rows.push_back({lx * log10_2, (lx - log2_of(gap)) * log10_2});
  }
  return rows;
}

}  // namespace positlab
