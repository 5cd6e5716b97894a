#include "cwb/smalldiv.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cwb/errors.hpp"
#include "cwb/util.hpp"

namespace cwb {

namespace {

// All k in Z^b with 0 <= |k| < N (sup norm), lexicographic.
std::vector<std::vector<int>> enumerate_k(int b, int N) {
  std::vector<std::vector<int>> out;
  std::vector<int> k(b, -(N - 1));
  for (;;) {
    out.push_back(k);
    int i = b - 1;
    while (i >= 0) {
      if (++k[i] <= N - 1) break;
      k[i] = -(N - 1);
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

// Spatial modes with |n|^2 <= horizon2, plus the resonant modes.
std::vector<std::vector<int>> spatial_horizon(int d, double horizon2,
                                              const ResonantSet& R) {
  const int rad = static_cast<int>(std::floor(std::sqrt(std::max(0.0, horizon2))));
  std::vector<std::vector<int>> out;
  std::vector<int> n(d, -rad);
  for (;;) {
    double s = 0.0;
    for (int v : n) s += static_cast<double>(v) * v;
    if (s <= horizon2) out.push_back(n);
    int i = d - 1;
    while (i >= 0) {
      if (++n[i] <= rad) break;
      n[i] = -rad;
      --i;
    }
    if (i < 0) break;
  }
  for (const auto& m : R.modes())
    if (std::find(out.begin(), out.end(), m.n) == out.end()) out.push_back(m.n);
  return out;
}

int sup_norm(const std::vector<int>& k) {
  int m = 0;
  for (int v : k) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

DcReport dc_check(const std::vector<double>& lambda, const DiophantineSpec& spec,
                  const Multiplier& mu, const ResonantSet& R) {
  if (static_cast<int>(lambda.size()) != R.b())
    throw std::invalid_argument("dc_check: lambda size != b");
  if (!(spec.C > R.b() + R.d()))
    throw std::invalid_argument("dc_check: exponent C must exceed b + d");

  DcReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  // |k.lambda| <= b (N-1) max|lambda| on the horizon; beyond |n|^2 = b N + 1
  // the divisor exceeds 1 and no gamma <= 1 condition can fail.
  double max_abs_lambda = 0.0;
  for (double v : lambda) max_abs_lambda = std::max(max_abs_lambda, std::abs(v));
  const double horizon2 = R.b() * static_cast<double>(spec.N) *
                              std::max(1.0, max_abs_lambda) +
                          1.0 + spec.gamma;

  const auto ks = enumerate_k(R.b(), spec.N);
  const auto ns = spatial_horizon(R.d(), horizon2, R);
  MultiIndex x;
  for (const auto& n : ns) {
    x.n = n;
    const double mun = mu.eval(std::span<const int>(n.data(), n.size()));
    for (const auto& k : ks) {
      x.k = k;
      if (R.contains(x)) continue;
      // The origin never carries a divisor: k.lambda - mu_0 vanishes
      // identically there and the epsilon block supplies its diagonal.
      if (x.is_zero()) continue;
      double kl = 0.0;
      for (int j = 0; j < R.b(); ++j) kl += k[j] * lambda[j];
      const double value = std::abs(kl - mun);
      const double weight = std::pow(1.0 + sup_norm(k), spec.C);
      report.worst_margin = std::min(report.worst_margin, value * weight);
      if (!(value > spec.gamma / weight)) {
        report.pass = false;
        report.violations.push_back({x, value});
      }
    }
  }
  return report;
}

DcPrimeReport dc_prime_check(const std::vector<double>& lambda_prime,
                             double gamma, double tau, int M) {
  const int b = static_cast<int>(lambda_prime.size());
  if (!(tau > b)) throw std::invalid_argument("dc_prime_check: tau must exceed b");
  DcPrimeReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& k : enumerate_k(b, M)) {
    const int norm = sup_norm(k);
    if (norm == 0) continue;
    double kl = 0.0;
    for (int j = 0; j < b; ++j) kl += k[j] * lambda_prime[j];
    const double weight = std::pow(1.0 + norm, tau);
    report.worst_margin = std::min(report.worst_margin, std::abs(kl) * weight);
    if (!(std::abs(kl) > gamma / weight)) report.pass = false;
  }
  return report;
}

namespace {

bool window_condition(const std::vector<double>& lambda, double gamma,
                      double tau, int M, int N,
                      const std::vector<std::vector<int>>& ks) {
  for (const auto& k : ks) {
    const int norm = sup_norm(k);
    if (norm <= M || norm >= N) continue;
    double kl = 0.0;
    for (size_t j = 0; j < lambda.size(); ++j) kl += k[j] * lambda[j];
    if (!(std::abs(kl) > gamma * std::pow(1.0 + norm, -tau))) return false;
  }
  return true;
}

}  // namespace

RemoveIntervalsResult remove_intervals(const std::vector<double>& lo,
                                       const std::vector<double>& hi, int M,
                                       int N, double gamma, double tau,
                                       int grid_exponent, int samples_per_cell,
                                       uint64_t seed) {
  const int b = static_cast<int>(lo.size());
  if (b < 1 || b > 2)
    throw ConfigError("remove_intervals: grid enumeration supports b <= 2");
  if (hi.size() != lo.size())
    throw std::invalid_argument("remove_intervals: corner size mismatch");
  if (!(tau > b)) throw std::invalid_argument("remove_intervals: tau > b");

  const double cell = std::pow(static_cast<double>(N), -grid_exponent);
  std::vector<long long> counts(b);
  long long total = 1;
  for (int i = 0; i < b; ++i) {
    if (!(hi[i] > lo[i]))
      throw std::invalid_argument("remove_intervals: empty interval");
    counts[i] = static_cast<long long>(std::ceil((hi[i] - lo[i]) / cell));
    total *= counts[i];
    if (total > 5'000'000)
      throw ConfigError("remove_intervals: cell count exceeds enumeration cap");
  }

  const auto ks = enumerate_k(b, N);
  RemoveIntervalsResult result;
  result.cells_total = total;
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<long long> idx(b, 0);
  std::vector<double> cell_lo(b), cell_hi(b), sample(b);
  for (long long c = 0; c < total; ++c) {
    long long rem = c;
    for (int i = b - 1; i >= 0; --i) {
      idx[i] = rem % counts[i];
      rem /= counts[i];
    }
    double measure = 1.0;
    for (int i = 0; i < b; ++i) {
      cell_lo[i] = lo[i] + idx[i] * cell;
      cell_hi[i] = std::min(hi[i], cell_lo[i] + cell);
      measure *= cell_hi[i] - cell_lo[i];
    }
    bool keep = false;
    for (int s = 0; s < samples_per_cell && !keep; ++s) {
      for (int i = 0; i < b; ++i) {
        const double t = (s == 0) ? 0.5 : unit(rng);  // first probe at center
        sample[i] = cell_lo[i] + t * (cell_hi[i] - cell_lo[i]);
      }
      keep = window_condition(sample, 2.0 * gamma, tau, M, N, ks);
    }
    if (keep) {
      result.kept.cells.emplace_back(cell_lo, cell_hi);
      result.kept_measure += measure;
    } else {
      ++result.cells_removed;
      result.removed_measure += measure;
    }
  }
  const double shape = gamma * std::pow(static_cast<double>(M), 1.0 - tau);
  result.bound_constant = shape > 0.0 ? result.removed_measure / shape : 0.0;
  return result;
}

double excluded_measure_mc(
    const DiophantineSpec& spec, const ResonantSet& R, long long samples,
    uint64_t seed,
    const std::function<Multiplier(const std::vector<double>&)>& mu_factory) {
  if (samples < 1) throw std::invalid_argument("excluded_measure_mc: samples >= 1");
  auto factory = mu_factory;
  if (!factory)
    factory = [&R](const std::vector<double>& lambda) {
      return make_multiplier(R, lambda);
    };

  // Disjoint sample blocks with per-block seeds; merge is order-independent.
  const long long block = 4096;
  long long failures = 0;
  std::vector<double> lambda(R.b());
  for (long long start = 0; start < samples; start += block) {
    std::mt19937_64 rng(splitmix64(seed ^ static_cast<uint64_t>(start)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const long long stop = std::min(samples, start + block);
    for (long long i = start; i < stop; ++i) {
      for (int j = 0; j < R.b(); ++j) lambda[j] = unit(rng);
      if (!dc_check(lambda, spec, factory(lambda), R).pass) ++failures;
    }
  }
  return static_cast<double>(failures) / static_cast<double>(samples);
}

}  // namespace cwb
