#include "sta/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "sta/cost.hpp"

namespace sta {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t k) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(k + 0x632BE59BD9B4E019ULL)));
}

std::pair<double, double> sample_fluctuation(std::mt19937_64& rng, const DrivingSpec& drive) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double a = normal(rng);
  const double b = normal(rng);
  return {std::sqrt(drive.var_theta0) * a, std::sqrt(drive.var_P0) * b};
}

double perturbed_frequency(const FrequencyProtocol& p, const DrivingSpec& drive, double theta0, double P0,
                           double t, Perturbation mode) {
  drive.require_constant_rate();
  const double theta = theta0 + P0 * t / drive.M;
  if (mode == Perturbation::Exact) {
    // Omega^2 as a function of the angle Theta = theta_dot t, shifted by theta
    const auto d = p.evaluate(t + theta / drive.theta_dot);
    return counterdiabatic_omega2(d.omega, d.d1, d.d2);
  }
  const auto d = p.evaluate(t);
  return counterdiabatic_omega2(d.omega, d.d1, d.d2) +
         counterdiabatic_omega2_rate(d.omega, d.d1, d.d2, d.d3) / drive.theta_dot * theta;
}

double relative_perturbation(const FrequencyProtocol& p, const DrivingSpec& drive) {
  const Window& w = p.window();
  const int n = 4000;
  double worst = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = w.t_start + w.length() * i / n;
    const auto d = p.evaluate(t);
    const double w2 = counterdiabatic_omega2(d.omega, d.d1, d.d2);
    const double rate = counterdiabatic_omega2_rate(d.omega, d.d1, d.d2, d.d3) / drive.theta_dot;
    const double spread = std::sqrt(drive.var_theta0) + std::sqrt(drive.var_P0) * std::abs(t) / drive.M;
    worst = std::max(worst, std::abs(rate) * spread / w2);
  }
  return worst;
}

DrivingSpec linear_regime_drive(const FrequencyProtocol& p, const DrivingSpec& drive, double target) {
  DrivingSpec d = drive;
  const double r = relative_perturbation(p, drive);
  if (r == 0.0) return d;
  const double k = (target / r) * (target / r);
  d.var_theta0 *= k;
  d.var_P0 *= k;
  return d;
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

OracleReport run_oracle(const FrequencyProtocol& p, const DrivingSpec& drive, const SampleSpec& spec,
                        const OracleOptions& o) {
  drive.validate();
  if (spec.n_samples < 1) throw ConfigError("samples.n_samples must be >= 1");
  if (spec.n_initial < 0) throw ConfigError("samples.n_initial must be >= 0");
  if (o.threads < 1) throw ConfigError("threads must be >= 1");

  // First-order reference built on the same window as the ODE.
  QuadratureOptions q;
  q.domain = IntegralDomain::Window;
  const OscillatoryResult I0 = integral_I0(p, drive, q);
  const OscillatoryResult I1 = integral_I1(p, drive, I1Form::Defining, q);

  const Window& w = p.window();
  const OmegaDerivatives start = p.evaluate(w.t_start);
  const OmegaDerivatives end = p.evaluate(w.t_end);
  const CauchyData initial = CauchyData::adiabatic(start.omega, start.d1);
  ModeOptions mo;
  mo.rtol = o.ode_rtol;
  mo.atol = o.ode_atol;
  mo.output_points = 2;

  const std::size_t N = static_cast<std::size_t>(spec.n_samples);
  std::vector<SampleRecord> rec(N);
  const bool zero = drive.var_theta0 == 0.0 && drive.var_P0 == 0.0;

  auto run_one = [&](std::size_t k) {
    SampleRecord& r = rec[k];
    r.k = static_cast<long>(k);
    auto rng = sample_engine(spec.seed, k);
    std::tie(r.theta0, r.P0) = sample_fluctuation(rng, drive);
    const std::complex<double> lin = std::complex<double>(0.0, 1.0) * (r.theta0 * I0.value + (r.P0 / drive.M) * I1.value);
    r.beta_lin_sq = std::norm(lin);
    if (zero) return;
    bool negative = false;
    auto omega2 = [&](double t) {
      const double v = perturbed_frequency(p, drive, r.theta0, r.P0, t, o.perturbation);
      if (v < 0.0) negative = true;
      return v;
    };
    std::optional<ModeFunction> m;
    try {
      m = solve_mode(omega2, w, initial, mo);
    } catch (const Error&) {
      if (!negative) throw;
    }
    if (negative) {
      r.rejected = true;
      return;
    }
    r.beta_sq = std::norm(bogoliubov(*m, end.omega, end.d1, ReferenceVacuum::Adiabatic, 1.0).beta);
  };

  std::exception_ptr failure;
  std::mutex failure_lock;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= N) return;
      try {
        run_one(k);
      } catch (...) {
        std::lock_guard<std::mutex> g(failure_lock);
        if (!failure) failure = std::current_exception();
        next = N;
        return;
      }
    }
  };
  const int T = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(o.threads), N));
  if (T <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < T; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  OracleReport rep;
  rep.seed = spec.seed;
  rep.n_samples = spec.n_samples;
  rep.n_initial = spec.n_initial;
  rep.I0 = I0.value;
  rep.I1 = I1.value;

  std::vector<double> b, bl;
  b.reserve(N);
  bl.reserve(N);
  for (const auto& r : rec) {
    if (r.rejected) {
      ++rep.rejected;
      continue;
    }
    b.push_back(r.beta_sq);
    bl.push_back(r.beta_lin_sq);
  }
  rep.rejection_warning = static_cast<double>(rep.rejected) > o.rejection_warning * static_cast<double>(N);
  const std::size_t n = b.size();
  if (n > 0) {
    const double sum = pairwise_sum(b.data(), n);
    rep.mean_beta_sq = sum / static_cast<double>(n);
    if (n >= 2) {
      std::vector<double> dev(n);
      for (std::size_t i = 0; i < n; ++i) dev[i] = (b[i] - rep.mean_beta_sq) * (b[i] - rep.mean_beta_sq);
      const double var = pairwise_sum(dev.data(), n) / static_cast<double>(n - 1);
      rep.std_error = std::sqrt(var / static_cast<double>(n));
    }
    const double lin_sum = pairwise_sum(bl.data(), n);
    rep.calibration_constant = lin_sum > 0.0 ? sum / lin_sum : 0.0;
    // per-sample deviation from first order, against the mean first-order value
    if (lin_sum > 0.0) {
      const double scale = lin_sum / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i)
        rep.max_linear_rel_error = std::max(rep.max_linear_rel_error, std::abs(b[i] - bl[i]) / scale);
    }
  }
  rep.delta_n_mc = (2.0 * spec.n_initial + 1.0) * rep.mean_beta_sq;
  rep.nu = 2.0 * drive.var_theta0 * std::norm(I0.value) +
           2.0 * drive.var_P0 * std::norm(I1.value) / (drive.M * drive.M);
  rep.nu_prediction = delta_n(rep.nu, 0.0, spec.n_initial);
  rep.ratio = rep.nu_prediction > 0.0 ? rep.delta_n_mc / rep.nu_prediction : 0.0;
  if (o.keep_samples) rep.samples = std::move(rec);
  return rep;
}

}  // namespace sta
