// Command-line frontend for the factor-testing engine.
//
// Subcommands: check, sweep, nmr, fscan, ghosts, factorize, primes.
// Exit codes: 0 success (for `check`: trial divides n), 1 trial does not
// divide n (`check` only), 2 usage or argument error, 3 vanishing reference
// signal (`nmr` only).
//
// Every float is printed with 15 significant digits, in every format.
// `--no-timing` drops the elapsed-time field so repeated runs are
// byte-identical.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gsum/gsum.hpp"

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// JSON numbers go through the same 15-digit rendering so all formats agree.
ordered_json jnum(double v) { return ordered_json::parse(fmt(v)); }

enum class Format { Human, Csv, Json };

struct Common {
  Format format = Format::Human;
  bool no_timing = false;
  double elapsed_ms = 0.0;
};

void emit_json(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

void emit_kv(std::ostream& os, const char* key, const std::string& value) {
  os << key << " " << value << "\n";
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(clock::now() - start_)
        .count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

std::string verdict_row_csv(std::uint64_t l, const gsum::Amplitude& a,
                            const gsum::DivisibilityWitness& w) {
  std::ostringstream os;
  os << l << "," << fmt(a.magnitude()) << "," << fmt(a.phase()) << ","
     << w.remainder << ","
     << gsum::to_string(w.is_factor ? gsum::Verdict::Factor
                                    : gsum::Verdict::NonFactor);
  return os.str();
}

constexpr const char* sweep_csv_header = "l,magnitude,phase,remainder,verdict";

// ---------------------------------------------------------------- check ---

struct CheckOptions {
  std::uint64_t n = 0;
  std::uint64_t trial = 0;
  std::uint64_t truncation = 0;  // 0 = fourth-root default
  int power = 2;
  std::uint64_t samples = 0;     // 0 = full sum
  std::uint64_t seed = 0;
  double threshold = gsum::default_threshold;
  Common common;
};

int run_check(const CheckOptions& opt) {
  Stopwatch watch;
  const std::uint64_t truncation =
      opt.truncation ? opt.truncation : gsum::truncation_bound(opt.n);
  const gsum::SumSpec spec(opt.n, opt.trial, truncation, opt.power);
  const gsum::Amplitude a = opt.samples
                                ? gsum::gauss_sum_sampled(spec, opt.samples,
                                                          opt.seed)
                                : gsum::gauss_sum(spec);
  const gsum::DivisibilityWitness w =
      gsum::divisibility_witness(opt.n, opt.trial);
  const gsum::Verdict verdict =
      w.is_factor ? gsum::Verdict::Factor : gsum::Verdict::NonFactor;
  const gsum::Verdict magnitude_verdict = gsum::classify(a, opt.threshold);
  if (magnitude_verdict != verdict)
    std::cerr << "warning: magnitude threshold disagrees with the exact "
                 "remainder for trial "
              << opt.trial << "\n";
  const double elapsed = watch.ms();

  switch (opt.common.format) {
    case Format::Csv:
      std::cout << sweep_csv_header << "\n"
                << verdict_row_csv(opt.trial, a, w) << "\n";
      break;
    case Format::Json: {
      ordered_json j{{"n", opt.n},
                     {"trial", opt.trial},
                     {"truncation", truncation},
                     {"power", opt.power}};
      if (opt.samples) {
        j["samples"] = opt.samples;
        j["seed"] = opt.seed;
      }
      j["magnitude"] = jnum(a.magnitude());
      j["phase"] = jnum(a.phase());
      j["remainder"] = w.remainder;
      j["verdict"] = gsum::to_string(verdict);
      j["magnitude_verdict"] = gsum::to_string(magnitude_verdict);
      j["threshold"] = jnum(opt.threshold);
      if (!opt.common.no_timing) j["elapsed_ms"] = jnum(elapsed);
      emit_json(j);
      break;
    }
    case Format::Human: {
      auto& os = std::cout;
      emit_kv(os, "n", std::to_string(opt.n));
      emit_kv(os, "trial", std::to_string(opt.trial));
      emit_kv(os, "truncation", std::to_string(truncation));
      emit_kv(os, "power", std::to_string(opt.power));
      if (opt.samples) {
        emit_kv(os, "samples", std::to_string(opt.samples));
        emit_kv(os, "seed", std::to_string(opt.seed));
      }
      emit_kv(os, "magnitude", fmt(a.magnitude()));
      emit_kv(os, "phase", fmt(a.phase()));
      emit_kv(os, "remainder", std::to_string(w.remainder));
      emit_kv(os, "verdict", gsum::to_string(verdict));
      emit_kv(os, "magnitude_verdict", gsum::to_string(magnitude_verdict));
      emit_kv(os, "threshold", fmt(opt.threshold));
      if (!opt.common.no_timing) emit_kv(os, "elapsed_ms", fmt(elapsed));
      break;
    }
  }
  return w.is_factor ? 0 : 1;
}

// ---------------------------------------------------------------- sweep ---

struct SweepOptions {
  std::uint64_t n = 0;
  std::uint64_t trial_min = 2;
  std::uint64_t trial_max = 0;  // 0 = floor(sqrt(n))
  bool primes_only = false;
  std::uint64_t truncation = 0;  // 0 = fourth-root default
  double threshold = gsum::default_threshold;
  Common common;
};

int run_sweep(const SweepOptions& opt) {
  Stopwatch watch;
  gsum::SweepConfig config;
  config.n = opt.n;
  config.trial_min = opt.trial_min;
  config.trial_max = opt.trial_max ? opt.trial_max : gsum::detail::isqrt(opt.n);
  config.trial_policy = opt.primes_only ? gsum::TrialPolicy::PrimesOnly
                                        : gsum::TrialPolicy::AllIntegers;
  config.m_policy = opt.truncation ? gsum::MPolicy::fixed(opt.truncation)
                                   : gsum::MPolicy::fourth_root();
  config.threshold = opt.threshold;
  const std::vector<gsum::SweepRow> rows = gsum::sweep(config);
  std::vector<std::uint64_t> factors;
  for (const gsum::SweepRow& row : rows) {
    if (row.verdict == gsum::Verdict::Factor) factors.push_back(row.trial);
    if (row.magnitude_verdict != row.verdict)
      std::cerr << "warning: magnitude threshold disagrees with the exact "
                   "remainder for trial "
                << row.trial << "\n";
  }
  const std::uint64_t truncation = config.m_policy.resolve(opt.n);
  const double elapsed = watch.ms();

  switch (opt.common.format) {
    case Format::Csv:
      std::cout << sweep_csv_header << "\n";
      for (const gsum::SweepRow& row : rows) {
        std::cout << row.trial << "," << fmt(row.magnitude) << ","
                  << fmt(row.phase) << "," << row.remainder << ","
                  << gsum::to_string(row.verdict) << "\n";
      }
      break;
    case Format::Json: {
      ordered_json j{{"n", opt.n},
                     {"trial_min", config.trial_min},
                     {"trial_max", config.trial_max},
                     {"trial_policy", opt.primes_only ? "primes" : "all"},
                     {"truncation", truncation},
                     {"threshold", jnum(opt.threshold)},
                     {"rows", ordered_json::array()},
                     {"factors", factors}};
      for (const gsum::SweepRow& row : rows) {
        j["rows"].push_back({{"l", row.trial},
                             {"magnitude", jnum(row.magnitude)},
                             {"phase", jnum(row.phase)},
                             {"remainder", row.remainder},
                             {"verdict", gsum::to_string(row.verdict)}});
      }
      if (!opt.common.no_timing) j["elapsed_ms"] = jnum(elapsed);
      emit_json(j);
      break;
    }
    case Format::Human: {
      auto& os = std::cout;
      os << "n " << opt.n << " trials " << config.trial_min << ".."
         << config.trial_max << (opt.primes_only ? " primes-only" : "")
         << " truncation " << truncation << " threshold "
         << fmt(opt.threshold) << "\n";
      os << "l magnitude phase remainder verdict\n";
      for (const gsum::SweepRow& row : rows) {
        os << row.trial << " " << fmt(row.magnitude) << " " << fmt(row.phase)
           << " " << row.remainder << " " << gsum::to_string(row.verdict)
           << "\n";
      }
      os << "factors";
      for (std::uint64_t f : factors) os << " " << f;
      os << "\n";
      if (!opt.common.no_timing) emit_kv(os, "elapsed_ms", fmt(elapsed));
      break;
    }
  }
  return 0;
}

// ------------------------------------------------------------------ nmr ---

struct NmrOptions {
  std::uint64_t n = 0;
  std::uint64_t trial = 0;
  std::uint64_t truncation = 0;  // 0 = fourth-root default
  double theta = gsum::default_flip_angle;
  bool first_order = false;
  bool compare = false;
  Common common;
};

// estimate_gauss for the Eq. 5 form: same signal-over-reference readout,
// with the combined pulse standing in for the time-ordered product on both
// sides so the factor case stays exactly 1.
gsum::Amplitude first_order_estimate(const gsum::PulseSequence& seq) {
  const gsum::Signal s =
      gsum::simulate_signal(gsum::first_order_propagator(seq));
  const gsum::PulseSequence ref(seq.theta(),
                                std::vector<double>(seq.size(), 0.0));
  const gsum::Signal s_ref =
      gsum::simulate_signal(gsum::first_order_propagator(ref));
  if (s_ref.magnitude() < 1e-12)
    throw std::domain_error(
        "estimate: reference signal vanishes; total rotation (M+1)*theta is "
        "a multiple of pi, pick a different theta");
  if (s.value == s_ref.value) return {1.0, 0.0};
  const gsum::complexd ratio = s.value / s_ref.value;
  return {ratio.real(), -ratio.imag()};
}

int run_nmr(const NmrOptions& opt) {
  Stopwatch watch;
  const std::uint64_t truncation =
      opt.truncation ? opt.truncation : gsum::truncation_bound(opt.n);
  const gsum::PulseSequence seq =
      gsum::trial_sequence(opt.n, opt.trial, truncation, opt.theta);
  if (!seq.small_angle())
    std::cerr << "warning: total nominal rotation (M+1)*theta reaches a half "
                 "turn; the first-order readout degrades\n";
  const gsum::Unitary2 propagator = opt.first_order
                                        ? gsum::first_order_propagator(seq)
                                        : gsum::sequence_propagator(seq);
  const gsum::Signal signal = gsum::simulate_signal(propagator);
  const gsum::Amplitude estimate =
      opt.first_order ? first_order_estimate(seq) : gsum::estimate_gauss(seq);
  const gsum::Amplitude exact =
      gsum::gauss_sum(gsum::SumSpec(opt.n, opt.trial, truncation));
  const double error =
      std::hypot(estimate.re - exact.re, estimate.im - exact.im);
  const double distance =
      opt.compare ? gsum::propagator_distance(gsum::sequence_propagator(seq),
                                              gsum::first_order_propagator(seq))
                  : 0.0;
  const gsum::DivisibilityWitness w =
      gsum::divisibility_witness(opt.n, opt.trial);
  const gsum::Verdict verdict =
      w.is_factor ? gsum::Verdict::Factor : gsum::Verdict::NonFactor;
  const char* form = opt.first_order ? "first_order" : "exact";
  const double elapsed = watch.ms();

  switch (opt.common.format) {
    case Format::Csv:
      std::cout << "l,signal_re,signal_im,estimate_magnitude,estimate_phase,"
                   "estimate_error";
      if (opt.compare) std::cout << ",propagator_distance";
      std::cout << ",remainder,verdict\n"
                << opt.trial << "," << fmt(signal.value.real()) << ","
                << fmt(signal.value.imag()) << "," << fmt(estimate.magnitude())
                << "," << fmt(estimate.phase()) << "," << fmt(error);
      if (opt.compare) std::cout << "," << fmt(distance);
      std::cout << "," << w.remainder << "," << gsum::to_string(verdict)
                << "\n";
      break;
    case Format::Json: {
      ordered_json j{{"n", opt.n},
                     {"trial", opt.trial},
                     {"truncation", truncation},
                     {"theta", jnum(opt.theta)},
                     {"form", form},
                     {"signal_re", jnum(signal.value.real())},
                     {"signal_im", jnum(signal.value.imag())},
                     {"signal_magnitude", jnum(signal.magnitude())},
                     {"estimate_re", jnum(estimate.re)},
                     {"estimate_im", jnum(estimate.im)},
                     {"estimate_magnitude", jnum(estimate.magnitude())},
                     {"estimate_phase", jnum(estimate.phase())},
                     {"exact_re", jnum(exact.re)},
                     {"exact_im", jnum(exact.im)},
                     {"estimate_error", jnum(error)},
                     {"remainder", w.remainder},
                     {"verdict", gsum::to_string(verdict)}};
      if (opt.compare) j["propagator_distance"] = jnum(distance);
      if (!opt.common.no_timing) j["elapsed_ms"] = jnum(elapsed);
      emit_json(j);
      break;
    }
    case Format::Human: {
      auto& os = std::cout;
      emit_kv(os, "n", std::to_string(opt.n));
      emit_kv(os, "trial", std::to_string(opt.trial));
      emit_kv(os, "truncation", std::to_string(truncation));
      emit_kv(os, "theta", fmt(opt.theta));
      emit_kv(os, "form", form);
      emit_kv(os, "signal_re", fmt(signal.value.real()));
      emit_kv(os, "signal_im", fmt(signal.value.imag()));
      emit_kv(os, "signal_magnitude", fmt(signal.magnitude()));
      emit_kv(os, "estimate_re", fmt(estimate.re));
      emit_kv(os, "estimate_im", fmt(estimate.im));
      emit_kv(os, "estimate_magnitude", fmt(estimate.magnitude()));
      emit_kv(os, "estimate_phase", fmt(estimate.phase()));
      emit_kv(os, "exact_re", fmt(exact.re));
      emit_kv(os, "exact_im", fmt(exact.im));
      emit_kv(os, "estimate_error", fmt(error));
      if (opt.compare) emit_kv(os, "propagator_distance", fmt(distance));
      emit_kv(os, "remainder", std::to_string(w.remainder));
      emit_kv(os, "verdict", gsum::to_string(verdict));
      if (!opt.common.no_timing) emit_kv(os, "elapsed_ms", fmt(elapsed));
      break;
    }
  }
  return 0;
}

// ---------------------------------------------------------------- fscan ---

struct FscanOptions {
  std::uint64_t n = 0;
  double f_min = 0.0;
  double f_max = 0.0;
  double step = 0.0;
  std::uint64_t truncation = 0;  // 0 = fourth-root default
  bool dump_grid = false;
  Common common;
};

int run_fscan(const FscanOptions& opt) {
  Stopwatch watch;
  gsum::FScanConfig config;
  config.n = opt.n;
  config.f_min = opt.f_min;
  config.f_max = opt.f_max;
  config.step = opt.step;
  config.truncation =
      opt.truncation ? opt.truncation : gsum::truncation_bound(opt.n);
  const gsum::FScanResult result = gsum::f_scan(config);
  const double elapsed = watch.ms();

  switch (opt.common.format) {
    case Format::Csv:
      if (opt.dump_grid) {
        std::cout << "f,magnitude\n";
        for (const gsum::FScanPoint& p : result.grid)
          std::cout << fmt(p.f) << "," << fmt(p.magnitude) << "\n";
      } else {
        std::cout << "f,magnitude,mapped_trial,integer_trial\n";
        for (const gsum::FScanPeak& p : result.peaks)
          std::cout << fmt(p.f) << "," << fmt(p.magnitude) << ","
                    << fmt(p.mapped_trial) << ","
                    << (p.integer_trial ? "true" : "false") << "\n";
      }
      break;
    case Format::Json: {
      ordered_json j{{"n", opt.n},
                     {"f_min", jnum(opt.f_min)},
                     {"f_max", jnum(opt.f_max)},
                     {"step", jnum(opt.step)},
                     {"truncation", config.truncation},
                     {"grid_points", result.grid.size()},
                     {"peaks", ordered_json::array()}};
      for (const gsum::FScanPeak& p : result.peaks)
        j["peaks"].push_back({{"f", jnum(p.f)},
                              {"magnitude", jnum(p.magnitude)},
                              {"mapped_trial", jnum(p.mapped_trial)},
                              {"integer_trial", p.integer_trial}});
      if (opt.dump_grid) {
        j["grid"] = ordered_json::array();
        for (const gsum::FScanPoint& p : result.grid)
          j["grid"].push_back(
              {{"f", jnum(p.f)}, {"magnitude", jnum(p.magnitude)}});
      }
      if (!opt.common.no_timing) j["elapsed_ms"] = jnum(elapsed);
      emit_json(j);
      break;
    }
    case Format::Human: {
      auto& os = std::cout;
      emit_kv(os, "n", std::to_string(opt.n));
      emit_kv(os, "f_min", fmt(opt.f_min));
      emit_kv(os, "f_max", fmt(opt.f_max));
      emit_kv(os, "step", fmt(opt.step));
      emit_kv(os, "truncation", std::to_string(config.truncation));
      emit_kv(os, "grid_points", std::to_string(result.grid.size()));
      emit_kv(os, "peaks", std::to_string(result.peaks.size()));
      for (const gsum::FScanPeak& p : result.peaks)
        os << "f " << fmt(p.f) << " magnitude " << fmt(p.magnitude)
           << " mapped_trial " << fmt(p.mapped_trial) << " integer_trial "
           << (p.integer_trial ? "true" : "false") << "\n";
      if (opt.dump_grid)
        for (const gsum::FScanPoint& p : result.grid)
          os << "grid_f " << fmt(p.f) << " magnitude " << fmt(p.magnitude)
             << "\n";
      if (!opt.common.no_timing) emit_kv(os, "elapsed_ms", fmt(elapsed));
      break;
    }
  }
  return 0;
}

// --------------------------------------------------------------- ghosts ---

struct GhostsOptions {
  std::uint64_t n = 0;
  std::uint64_t truncation_small = 1;
  double ghost_threshold = 0.95;
  std::uint64_t curve_trial = 0;  // 0 = no curve requested
  std::uint64_t curve_max = 0;    // 0 = fourth-root default
  Common common;
};

int run_ghosts(const GhostsOptions& opt) {
  Stopwatch watch;
  const gsum::GhostReport report =
      gsum::find_ghosts(opt.n, opt.truncation_small, opt.ghost_threshold);
  std::vector<std::pair<std::uint64_t, double>> curve;
  if (opt.curve_trial)
    curve = gsum::suppression_curve(
        opt.n, opt.curve_trial,
        opt.curve_max ? opt.curve_max : gsum::truncation_bound(opt.n));
  const double elapsed = watch.ms();

  switch (opt.common.format) {
    case Format::Csv:
      // like fscan, csv mode emits one table: the curve if requested,
      // otherwise the ghost list
      if (opt.curve_trial) {
        std::cout << "m,magnitude\n";
        for (const auto& [m, magnitude] : curve)
          std::cout << m << "," << fmt(magnitude) << "\n";
        break;
      }
      std::cout << "l,magnitude\n";
      for (const gsum::GhostEntry& g : report.ghosts)
        std::cout << g.trial << "," << fmt(g.magnitude) << "\n";
      break;
    case Format::Json: {
      ordered_json j{
          {"n", report.n},
          {"truncation_small", report.truncation_small},
          {"truncation_suppressed", report.truncation_suppressed},
          {"ghost_threshold", jnum(opt.ghost_threshold)},
          {"ghosts", ordered_json::array()},
          {"max_nonfactor_magnitude_small",
           jnum(report.max_nonfactor_magnitude_small)},
          {"max_nonfactor_magnitude_suppressed",
           jnum(report.max_nonfactor_magnitude_suppressed)}};
      for (const gsum::GhostEntry& g : report.ghosts)
        j["ghosts"].push_back(
            {{"l", g.trial}, {"magnitude", jnum(g.magnitude)}});
      if (opt.curve_trial) {
        j["curve_trial"] = opt.curve_trial;
        j["curve"] = ordered_json::array();
        for (const auto& [m, magnitude] : curve)
          j["curve"].push_back({{"m", m}, {"magnitude", jnum(magnitude)}});
      }
      if (!opt.common.no_timing) j["elapsed_ms"] = jnum(elapsed);
      emit_json(j);
      break;
    }
    case Format::Human: {
      auto& os = std::cout;
      emit_kv(os, "n", std::to_string(report.n));
      emit_kv(os, "truncation_small", std::to_string(report.truncation_small));
      emit_kv(os, "truncation_suppressed",
              std::to_string(report.truncation_suppressed));
      emit_kv(os, "ghost_threshold", fmt(opt.ghost_threshold));
      emit_kv(os, "ghosts", std::to_string(report.ghosts.size()));
      for (const gsum::GhostEntry& g : report.ghosts)
        os << "l " << g.trial << " magnitude " << fmt(g.magnitude) << "\n";
      emit_kv(os, "max_nonfactor_magnitude_small",
              fmt(report.max_nonfactor_magnitude_small));
      emit_kv(os, "max_nonfactor_magnitude_suppressed",
              fmt(report.max_nonfactor_magnitude_suppressed));
      if (opt.curve_trial) {
        emit_kv(os, "curve_trial", std::to_string(opt.curve_trial));
        for (const auto& [m, magnitude] : curve)
          os << "m " << m << " magnitude " << fmt(magnitude) << "\n";
      }
      if (!opt.common.no_timing) emit_kv(os, "elapsed_ms", fmt(elapsed));
      break;
    }
  }
  return 0;
}

// ------------------------------------------------------------ factorize ---

struct FactorizeOptions {
  std::uint64_t n = 0;
  Common common;
};

int run_factorize(const FactorizeOptions& opt) {
  Stopwatch watch;
  const std::vector<std::uint64_t> factors = gsum::factorize(opt.n);
  const double elapsed = watch.ms();

  switch (opt.common.format) {
    case Format::Csv:
      std::cout << "factor\n";
      for (std::uint64_t f : factors) std::cout << f << "\n";
      break;
    case Format::Json: {
      ordered_json j{{"n", opt.n}, {"factors", factors}};
      if (!opt.common.no_timing) j["elapsed_ms"] = jnum(elapsed);
      emit_json(j);
      break;
    }
    case Format::Human: {
      std::cout << opt.n << " =";
      for (std::size_t i = 0; i < factors.size(); ++i)
        std::cout << (i ? " x " : " ") << factors[i];
      std::cout << "\n";
      if (!opt.common.no_timing)
        emit_kv(std::cout, "elapsed_ms", fmt(elapsed));
      break;
    }
  }
  return 0;
}

// --------------------------------------------------------------- primes ---

struct PrimesOptions {
  std::uint64_t x = 0;
  Common common;
};

int run_primes(const PrimesOptions& opt) {
  Stopwatch watch;
  const gsum::PrimeCount pc = gsum::count_primes(opt.x);
  const double elapsed = watch.ms();

  switch (opt.common.format) {
    case Format::Csv:
      std::cout << "x,exact,estimate\n"
                << opt.x << "," << pc.exact << "," << fmt(pc.estimate) << "\n";
      break;
    case Format::Json: {
      ordered_json j{{"x", opt.x},
                     {"exact", pc.exact},
                     {"estimate", jnum(pc.estimate)}};
      if (!opt.common.no_timing) j["elapsed_ms"] = jnum(elapsed);
      emit_json(j);
      break;
    }
    case Format::Human:
      emit_kv(std::cout, "x", std::to_string(opt.x));
      emit_kv(std::cout, "exact", std::to_string(pc.exact));
      emit_kv(std::cout, "estimate", fmt(pc.estimate));
      if (!opt.common.no_timing)
        emit_kv(std::cout, "elapsed_ms", fmt(elapsed));
      break;
  }
  return 0;
}

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--format", common.format, "output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"human", Format::Human},
                                        {"csv", Format::Csv},
                                        {"json", Format::Json}},
          CLI::ignore_case));
  sub->add_flag("--no-timing", common.no_timing,
                "omit elapsed time for byte-identical reruns");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated Gauss sums as a factor test, with a two-level-spin "
               "pulse-sequence simulator"};
  app.set_version_flag("--version", gsum::version);
  app.require_subcommand(1);

  std::function<int()> action;

  CheckOptions check;
  CLI::App* check_app = app.add_subcommand(
      "check", "test one trial factor against one integer");
  check_app->add_option("n", check.n, "number under test")->required();
  check_app->add_option("trial", check.trial, "trial factor")->required();
  check_app->add_option("--truncation", check.truncation,
                        "highest summation index M (default: least M with "
                        "M^4 >= n)");
  check_app->add_option("--power", check.power,
                        "exponent on the summation index");
  auto* samples_opt = check_app->add_option(
      "--samples", check.samples, "use this many randomly drawn indices");
  auto* seed_opt =
      check_app->add_option("--seed", check.seed, "RNG seed for --samples");
  samples_opt->needs(seed_opt);
  seed_opt->needs(samples_opt);
  check_app->add_option("--threshold", check.threshold,
                        "magnitude cut for the diagnostic verdict");
  add_common(check_app, check.common);
  check_app->callback([&] { action = [&] { return run_check(check); }; });

  SweepOptions sweep;
  CLI::App* sweep_app =
      app.add_subcommand("sweep", "test a whole range of trial factors");
  sweep_app->add_option("n", sweep.n, "number under test")->required();
  sweep_app->add_option("--min", sweep.trial_min, "lowest trial");
  sweep_app->add_option("--max", sweep.trial_max,
                        "highest trial (default: floor(sqrt(n)))");
  sweep_app->add_flag("--primes-only", sweep.primes_only,
                      "only test prime trials");
  sweep_app->add_option("--truncation", sweep.truncation,
                        "fixed M (default: least M with M^4 >= n)");
  sweep_app->add_option("--threshold", sweep.threshold,
                        "magnitude cut for the diagnostic verdict");
  add_common(sweep_app, sweep.common);
  sweep_app->callback([&] { action = [&] { return run_sweep(sweep); }; });

  NmrOptions nmr;
  CLI::App* nmr_app = app.add_subcommand(
      "nmr", "simulate the pulse-sequence readout of one trial");
  nmr_app->add_option("n", nmr.n, "number under test")->required();
  nmr_app->add_option("trial", nmr.trial, "trial factor")->required();
  nmr_app->add_option("--truncation", nmr.truncation,
                      "highest summation index M (default: least M with "
                      "M^4 >= n)");
  nmr_app->add_option("--theta", nmr.theta, "flip angle per pulse, radians");
  CLI::Option* exact_form = nmr_app->add_flag(
      "--exact", "simulate the time-ordered pulse product (the default)");
  nmr_app
      ->add_flag("--first-order", nmr.first_order,
                 "simulate the combined single-rotation approximation instead")
      ->excludes(exact_form);
  nmr_app->add_flag("--compare", nmr.compare,
                    "also report the phase-minimized distance between the "
                    "two forms");
  add_common(nmr_app, nmr.common);
  nmr_app->callback([&] { action = [&] { return run_nmr(nmr); }; });

  FscanOptions fscan;
  CLI::App* fscan_app = app.add_subcommand(
      "fscan", "scan the continuous-parameter sum over a frequency window");
  fscan_app->add_option("n", fscan.n, "number the peaks are mapped against")
      ->required();
  fscan_app->add_option("--f-min", fscan.f_min, "window start")->required();
  fscan_app->add_option("--f-max", fscan.f_max, "window end")->required();
  fscan_app->add_option("--step", fscan.step, "grid spacing")->required();
  fscan_app->add_option("--truncation", fscan.truncation,
                        "highest summation index M (default: least M with "
                        "M^4 >= n)");
  fscan_app->add_flag("--dump-grid", fscan.dump_grid,
                      "also emit every grid point");
  add_common(fscan_app, fscan.common);
  fscan_app->callback([&] { action = [&] { return run_fscan(fscan); }; });

  GhostsOptions ghosts;
  CLI::App* ghosts_app = app.add_subcommand(
      "ghosts", "find non-factors that look like factors at small M");
  ghosts_app->add_option("n", ghosts.n, "number under test")->required();
  ghosts_app->add_option("--truncation-small", ghosts.truncation_small,
                         "small truncation the ghosts appear at");
  ghosts_app->add_option("--ghost-threshold", ghosts.ghost_threshold,
                         "magnitude above which a non-factor is a ghost");
  CLI::Option* curve_opt = ghosts_app->add_option(
      "--curve", ghosts.curve_trial,
      "also emit the magnitude-vs-M suppression curve for this trial");
  ghosts_app
      ->add_option("--curve-max", ghosts.curve_max,
                   "highest M of the curve (default: least M with M^4 >= n)")
      ->needs(curve_opt);
  add_common(ghosts_app, ghosts.common);
  ghosts_app->callback([&] { action = [&] { return run_ghosts(ghosts); }; });

  FactorizeOptions factorize;
  CLI::App* factorize_app = app.add_subcommand(
      "factorize", "full prime factorization by repeated checking");
  factorize_app->add_option("n", factorize.n, "number to factor")->required();
  add_common(factorize_app, factorize.common);
  factorize_app->callback(
      [&] { action = [&] { return run_factorize(factorize); }; });

  PrimesOptions primes;
  CLI::App* primes_app = app.add_subcommand(
      "primes", "count primes up to x, with the x/ln x estimate");
  primes_app->add_option("x", primes.x, "upper bound")->required();
  add_common(primes_app, primes.common);
  primes_app->callback([&] { action = [&] { return run_primes(primes); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action();
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
