#pragma once

// Crude Monte Carlo estimate of the failure probability P[g(X) < 1] for a
// limit state in ratio form. Uniforms come from Philox4x32-10 keyed by the
// seed with counter (draw, variable, chunk), so any sample is addressable and
// chunks can be evaluated in any order or in parallel with identical totals.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include "homog/distributions.hpp"
#include "homog/errors.hpp"
#include "homog/reliability.hpp"

namespace homog {

namespace detail {

inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
  constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{m0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{m1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += w0;
    key[1] += w1;
  }
  return ctr;
}

}  // namespace detail

/// Uniform in (0,1) for (seed, chunk, variable, draw); never returns 0 or 1.
inline double uniform(std::uint64_t seed, std::uint64_t chunk, std::uint32_t variable,
                      std::uint64_t draw) {
  const auto out = detail::philox4x32_10(
      {static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(draw >> 32), variable,
       static_cast<std::uint32_t>(chunk)},
      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  const std::uint64_t bits = (std::uint64_t{out[0]} << 32 | out[1]) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1p-53;
}

/// Inverse-transform sample of one variate.
inline double sample_from(const Distribution& d, double u) {
  if (d.degenerate()) return d.spec().mean;
  return u < 0.5 ? d.quantile(u) : d.quantile_upper(1.0 - u);
}

/// n variates of `spec` from stream (seed, chunk 0, variable 0).
inline std::vector<double> sample_variable(const DistributionSpec& spec, std::size_t n,
                                           std::uint64_t seed) {
  if (n == 0) throw DomainError("sample_variable needs n >= 1");
  const Distribution d(spec);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = sample_from(d, uniform(seed, 0, 0, i));
  return out;
}

struct McConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t chunk_size = 65'536;
  unsigned threads = 0;  // 0: hardware concurrency
};

inline void validate(const McConfig& c) {
  if (c.samples == 0 || c.chunk_size == 0) throw ConfigError("MC samples and chunk size must be positive");
  if (c.samples < c.chunk_size) throw ConfigError("MC samples must be at least the chunk size");
  if (c.samples / c.chunk_size >= (std::uint64_t{1} << 32))
    throw ConfigError("too many MC chunks (increase chunk_size)");
}

struct McResult {
  double pf = 0.0;
  double beta = 0.0;               // -Phi^-1(pf); NaN when unbounded
  double ci_halfwidth_beta = 0.0;  // 95% normal approximation, NaN when unbounded
  std::uint64_t failures = 0;
  std::uint64_t samples = 0;
  bool unbounded = false;      // pf is 0 or 1
  double beta_bound = 0.0;     // one-sided 95% bound on beta when unbounded
};

/// g maps one realization (aligned with the variable list) to the ratio-form
/// limit state; failure iff g < 1.
using LimitStateFn = std::function<double(std::span<const double>)>;

/// Failures in chunk `chunk` (draws [chunk*chunk_size, min(samples, ...))).
inline std::uint64_t mc_chunk_failures(const LimitStateFn& g, std::span<const Distribution> dists,
                                       const McConfig& cfg, std::uint64_t chunk) {
  const std::uint64_t begin = chunk * cfg.chunk_size;
  const std::uint64_t end = std::min(cfg.samples, begin + cfg.chunk_size);
  std::vector<double> x(dists.size());
  std::uint64_t fails = 0;
  for (std::uint64_t i = begin; i < end; ++i) {
    const std::uint64_t draw = i - begin;
    for (std::size_t v = 0; v < dists.size(); ++v)
      x[v] = sample_from(dists[v], uniform(cfg.seed, chunk, static_cast<std::uint32_t>(v), draw));
    if (g(x) < 1.0) ++fails;
  }
  return fails;
}

inline McResult mc_result(std::uint64_t failures, std::uint64_t samples) {
  McResult r;
  r.failures = failures;
  r.samples = samples;
  const double n = static_cast<double>(samples);
  r.pf = static_cast<double>(failures) / n;
  if (failures == 0 || failures == samples) {
    r.unbounded = true;
    r.beta = std::nan("");
    r.ci_halfwidth_beta = std::nan("");
    // Rule of three: with no observed events the 95% bound on the rate is 3/n.
    r.beta_bound = failures == 0 ? -std_normal_quantile(3.0 / n) : std_normal_quantile(3.0 / n);
    return r;
  }
  r.beta = -std_normal_quantile(r.pf);
  const double se = std::sqrt(r.pf * (1.0 - r.pf) / n);
  r.ci_halfwidth_beta = 1.96 * se / std_normal_pdf(r.beta);
  return r;
}

inline McResult mc_beta(const LimitStateFn& g, std::span<const BasicVariable> vars,
                        const McConfig& cfg) {
  validate(cfg);
  std::vector<Distribution> dists;
  dists.reserve(vars.size());
  for (const auto& v : vars) dists.emplace_back(v.dist);

  const std::uint64_t chunks = (cfg.samples + cfg.chunk_size - 1) / cfg.chunk_size;
  std::vector<std::uint64_t> per_chunk(chunks, 0);
  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));

  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::uint64_t c = w; c < chunks; c += workers)
        per_chunk[c] = mc_chunk_failures(g, dists, cfg, c);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::uint64_t total = 0;
  for (auto f : per_chunk) total += f;
  return mc_result(total, cfg.samples);
}

}  // namespace homog
