#pragma once

// Trial-factor sweeps and everything built on top of them: full
// factorization by repeated checking, ghost-factor discovery and
// suppression, continuous-f scans with peak-to-trial mapping, and prime
// counting.  Rows are pure functions of the configuration, so any parallel
// schedule produces the same output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "gsum/sums.hpp"

namespace gsum {

namespace detail {

// floor(sqrt(n)) for 64-bit n; std::sqrt seed corrected to the exact floor.
inline std::uint64_t isqrt(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

// Plain sieve of Eratosthenes; flags[i] == true iff i is prime.
inline std::vector<bool> prime_sieve(std::uint64_t limit) {
  std::vector<bool> flags(static_cast<std::size_t>(limit) + 1, true);
  flags[0] = false;
  if (limit >= 1) flags[1] = false;
  for (std::uint64_t i = 2; i * i <= limit; ++i) {
    if (!flags[static_cast<std::size_t>(i)]) continue;
    for (std::uint64_t k = i * i; k <= limit; k += i)
      flags[static_cast<std::size_t>(k)] = false;
  }
  return flags;
}

// Static-partition parallel map over [0, count); fn(i) must only touch
// index-i state.  Falls back to a plain loop for small batches.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, bool parallel) {
  const unsigned hw = std::thread::hardware_concurrency();
  if (!parallel || hw < 2 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(hw, count);
  std::vector<std::future<void>> tasks;
  tasks.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    tasks.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    }));
  }
  for (auto& t : tasks) t.get();
}

}  // namespace detail

enum class TrialPolicy { AllIntegers, PrimesOnly };

// Truncation choice for a sweep: a fixed M, or the fourth-root ceiling that
// suppresses ghosts.
struct MPolicy {
  enum class Kind { Fixed, FourthRootCeiling };
  Kind kind = Kind::FourthRootCeiling;
  std::uint64_t value = 0;

  static MPolicy fixed(std::uint64_t m) { return {Kind::Fixed, m}; }
  static MPolicy fourth_root() { return {Kind::FourthRootCeiling, 0}; }

  std::uint64_t resolve(std::uint64_t n) const {
    return kind == Kind::Fixed ? value : truncation_bound(n);
  }
};

struct SweepConfig {
  std::uint64_t n = 0;
  std::uint64_t trial_min = 2;
  std::uint64_t trial_max = 0;
  TrialPolicy trial_policy = TrialPolicy::AllIntegers;
  MPolicy m_policy = MPolicy::fourth_root();
  double threshold = default_threshold;

  void validate() const {
    if (n < 2) throw std::invalid_argument("SweepConfig: n must be >= 2");
    if (trial_min < 2 || trial_min > trial_max || trial_max > n)
      throw std::invalid_argument(
          "SweepConfig: need 2 <= trial_min <= trial_max <= n");
    if (!(threshold > 0.0 && threshold < 1.0))
      throw std::invalid_argument("SweepConfig: threshold must be in (0,1)");
  }
};

// Per-trial verdict.  The exact remainder witness decides `verdict`;
// `magnitude_verdict` is what thresholding alone would have said.  The two
// disagreeing flags a badly placed threshold, never a different answer.
struct SweepRow {
  std::uint64_t trial = 0;
  double magnitude = 0.0;
  double phase = 0.0;
  std::uint64_t remainder = 0;
  Verdict verdict = Verdict::NonFactor;
  Verdict magnitude_verdict = Verdict::NonFactor;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

enum class Execution { Auto, Serial, Parallel };

// Ascending trial candidates for n: all integers in [2, floor(sqrt(n))], or
// just the primes in that range.
inline std::vector<std::uint64_t> enumerate_trials(std::uint64_t n,
                                                   TrialPolicy policy) {
  if (n < 2) throw std::invalid_argument("enumerate_trials: n must be >= 2");
  const std::uint64_t limit = detail::isqrt(n);
  std::vector<std::uint64_t> trials;
  if (policy == TrialPolicy::AllIntegers) {
    for (std::uint64_t l = 2; l <= limit; ++l) trials.push_back(l);
    return trials;
  }
  if (limit < 2) return trials;
  const std::vector<bool> flags = detail::prime_sieve(limit);
  for (std::uint64_t l = 2; l <= limit; ++l)
    if (flags[static_cast<std::size_t>(l)]) trials.push_back(l);
  return trials;
}

struct PrimeCount {
  std::uint64_t exact = 0;
  double estimate = 0.0;  // x / ln x
};

inline PrimeCount count_primes(std::uint64_t x) {
  if (x < 2) throw std::invalid_argument("count_primes: x must be >= 2");
  const std::vector<bool> flags = detail::prime_sieve(x);
  std::uint64_t exact = 0;
  for (std::uint64_t i = 2; i <= x; ++i)
    exact += flags[static_cast<std::size_t>(i)] ? 1 : 0;
  const double xd = static_cast<double>(x);
  return {exact, xd / std::log(xd)};
}

inline std::vector<SweepRow> sweep(const SweepConfig& config,
                                   Execution exec = Execution::Auto) {
  config.validate();
  std::vector<std::uint64_t> trials;
  if (config.trial_policy == TrialPolicy::AllIntegers) {
    for (std::uint64_t l = config.trial_min; l <= config.trial_max; ++l)
      trials.push_back(l);
  } else {
    const std::vector<bool> flags = detail::prime_sieve(config.trial_max);
    for (std::uint64_t l = config.trial_min; l <= config.trial_max; ++l)
      if (flags[static_cast<std::size_t>(l)]) trials.push_back(l);
  }
  const std::uint64_t truncation = config.m_policy.resolve(config.n);
  std::vector<SweepRow> rows(trials.size());
  const bool parallel =
      exec == Execution::Parallel ||
      (exec == Execution::Auto && trials.size() >= 256);
  detail::parallel_for(
      trials.size(),
      [&](std::size_t i) {
        const std::uint64_t l = trials[i];
        const Amplitude a = gauss_sum(SumSpec(config.n, l, truncation));
        const DivisibilityWitness w = divisibility_witness(config.n, l);
        rows[i] = {l,
                   a.magnitude(),
                   a.phase(),
                   w.remainder,
                   w.is_factor ? Verdict::Factor : Verdict::NonFactor,
                   classify(a, config.threshold)};
      },
      parallel);
  return rows;
}

// Prime factorization by repeated smallest-factor extraction.  Every
// division is double-checked the long way round: the matching Gauss sum must
// come back as the exact 1+0i before the factor is accepted.
inline std::vector<std::uint64_t> factorize(std::uint64_t n) {
  if (n < 2) throw std::invalid_argument("factorize: n must be >= 2");
  std::vector<std::uint64_t> factors;
  const auto accept = [&](std::uint64_t current, std::uint64_t l) {
    const Amplitude a = gauss_sum(SumSpec(current, l, truncation_bound(current)));
    if (!(a == Amplitude{1.0, 0.0}))
      throw std::logic_error("factorize: divisor failed the Gauss-sum check");
    factors.push_back(l);
  };
  const auto extract = [&](std::uint64_t l) {
    while (n % l == 0 && n > 1) {
      accept(n, l);
      n /= l;
    }
  };
  extract(2);
  extract(3);
  for (std::uint64_t l = 5; l <= n / l; l += 6) {
    extract(l);
    if (l + 2 <= n / (l + 2)) extract(l + 2);
  }
  if (n > 1) {
    accept(n, n);  // leftover cofactor is prime
    n = 1;
  }
  return factors;
}

struct GhostEntry {
  std::uint64_t trial = 0;
  double magnitude = 0.0;  // at the small truncation
};

// Non-factors whose truncated sums still sit near 1 at a small truncation,
// plus where they end up once M reaches the fourth-root bound.
struct GhostReport {
  std::uint64_t n = 0;
  std::vector<GhostEntry> ghosts;
  std::uint64_t truncation_small = 0;
  std::uint64_t truncation_suppressed = 0;
  double max_nonfactor_magnitude_small = 0.0;
  double max_nonfactor_magnitude_suppressed = 0.0;
};

inline GhostReport find_ghosts(std::uint64_t n, std::uint64_t truncation_small,
                               double ghost_threshold) {
  if (n < 2) throw std::invalid_argument("find_ghosts: n must be >= 2");
  GhostReport report;
  report.n = n;
  report.truncation_small = truncation_small;
  report.truncation_suppressed = truncation_bound(n);
  const std::vector<std::uint64_t> trials =
      enumerate_trials(n, TrialPolicy::AllIntegers);
  struct Row {
    double small = -1.0, suppressed = -1.0;
    bool nonfactor = false;
  };
  std::vector<Row> rows(trials.size());
  detail::parallel_for(
      trials.size(),
      [&](std::size_t i) {
        const std::uint64_t l = trials[i];
        if (n % l == 0) return;
        rows[i].nonfactor = true;
        rows[i].small =
            gauss_sum(SumSpec(n, l, truncation_small)).magnitude();
        rows[i].suppressed =
            gauss_sum(SumSpec(n, l, report.truncation_suppressed)).magnitude();
      },
      trials.size() >= 512);
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (!rows[i].nonfactor) continue;
    report.max_nonfactor_magnitude_small =
        std::max(report.max_nonfactor_magnitude_small, rows[i].small);
    report.max_nonfactor_magnitude_suppressed =
        std::max(report.max_nonfactor_magnitude_suppressed, rows[i].suppressed);
    if (rows[i].small >= ghost_threshold)
      report.ghosts.push_back({trials[i], rows[i].small});
  }
  return report;
}

// |A| for M = 0..truncation_max at fixed (n, trial); single pass over the
// terms via prefix sums.
inline std::vector<std::pair<std::uint64_t, double>> suppression_curve(
    std::uint64_t n, std::uint64_t trial, std::uint64_t truncation_max) {
  const PhaseResidues pr = phase_residues(SumSpec(n, trial, truncation_max));
  std::vector<std::pair<std::uint64_t, double>> curve;
  curve.reserve(pr.residues.size());
  const bool factor = n % trial == 0;
  double sum_re = 0.0, sum_im = 0.0;
  for (std::size_t m = 0; m < pr.residues.size(); ++m) {
    if (factor) {
      curve.emplace_back(m, 1.0);
      continue;
    }
    const double a = pr.phase(m);
    sum_re += std::cos(a);
    sum_im -= std::sin(a);
    // normalize each component before hypot, exactly as gauss_sum does,
    // so curve entries are bitwise reproducible from it
    const double terms = static_cast<double>(m) + 1.0;
    curve.emplace_back(m, std::hypot(sum_re / terms, sum_im / terms));
  }
  return curve;
}

struct FScanConfig {
  double f_min = 0.0;
  double f_max = 0.0;
  double step = 0.0;
  std::uint64_t truncation = 0;
  std::uint64_t n = 0;  // for peak-to-trial mapping

  void validate() const {
    if (!std::isfinite(f_min) || !std::isfinite(f_max) || f_min > f_max)
      throw std::invalid_argument("FScanConfig: need f_min <= f_max");
    if (!(step > 0.0) || !std::isfinite(step))
      throw std::invalid_argument("FScanConfig: step must be positive");
    if (n < 2) throw std::invalid_argument("FScanConfig: n must be >= 2");
  }
};

struct FScanPoint {
  double f = 0.0;
  double magnitude = 0.0;
};

struct FScanPeak {
  double f = 0.0;
  double magnitude = 0.0;
  double mapped_trial = 0.0;  // n / f
  bool integer_trial = false;
};

struct FScanResult {
  std::vector<FScanPoint> grid;
  std::vector<FScanPeak> peaks;
};

inline constexpr double fscan_peak_cut = 1.0 - 1e-6;
inline constexpr double fscan_integer_tol = 1e-9;

// Samples the continuous sum over the grid f_min, f_min+step, ..., f_max and
// annotates grid-local maxima of magnitude >= 1 - 1e-6 with the trial value
// n/f they would correspond to.  The sum peaks at every integral f, so the
// integer_trial flag, not the peak height, is what separates factors from
// bystanders.
inline FScanResult f_scan(const FScanConfig& config) {
  config.validate();
  FScanResult result;
  const double span = config.f_max - config.f_min;
  const auto last = static_cast<std::uint64_t>(std::floor(span / config.step + 1e-9));
  result.grid.reserve(static_cast<std::size_t>(last) + 1);
  for (std::uint64_t k = 0; k <= last; ++k) {
    const double f = config.f_min + static_cast<double>(k) * config.step;
    result.grid.push_back({f, continuous_sum(f, config.truncation).magnitude()});
  }
  const auto& grid = result.grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double mag = grid[i].magnitude;
    if (mag < fscan_peak_cut) continue;
    if (i > 0 && grid[i - 1].magnitude > mag) continue;
    if (i + 1 < grid.size() && grid[i + 1].magnitude > mag) continue;
    const double mapped = static_cast<double>(config.n) / grid[i].f;
    const bool integral =
        std::abs(mapped - std::round(mapped)) <= fscan_integer_tol;
    result.peaks.push_back({grid[i].f, mag, mapped, integral});
  }
  return result;
}

}  // namespace gsum
