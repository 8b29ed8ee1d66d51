#include "core/martingale.hpp"

#include <algorithm>
#include <cmath>

#include "core/environment.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/stats.hpp"

namespace mdpsim {

namespace {

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

}  // namespace

DecompositionSample sample_decomposition(const ChainSpec& spec, const std::vector<double>& pi,
                                         const CenteredObservable& f,
                                         const PoissonDecomposition& dec, double horizon,
                                         std::uint64_t seed) {
  if (!(horizon > 0.0)) fail(Err::invalid_argument, "decomposition horizon must be positive");
  EnvironmentPath path(spec, pi, seed);

  DecompositionSample out;
  KahanSum integral, qv;
  double t = 0.0;
  auto seg = path.segment_at(0.0);
  const double v0 = dec.h[seg.state];
  double v = v0;

  out.times.push_back(0.0);
  out.states.push_back(seg.state);
  out.integral.push_back(0.0);
  out.v.push_back(v0);
  out.m.push_back(0.0);
  out.qv.push_back(0.0);

  for (;;) {
    const double hi = std::min(seg.hi, horizon);
    integral.add(f.f[seg.state] * (hi - t));
    qv.add(dec.qv[seg.state] * (hi - t));
    t = hi;
    if (t >= horizon) {
      out.times.push_back(horizon);
      out.states.push_back(seg.state);
      out.integral.push_back(integral.s);
      out.v.push_back(v);
      out.m.push_back(v - v0 - integral.s);
      out.qv.push_back(qv.s);
      break;
    }
    seg = path.segment_at(t);
    v = dec.h[seg.state];
    out.times.push_back(t);
    out.states.push_back(seg.state);
    out.integral.push_back(integral.s);
    out.v.push_back(v);
    out.m.push_back(v - v0 - integral.s);
    out.qv.push_back(qv.s);
  }
  return out;
}

double bound_continuous(double r, double q) {
  if (!(r > 0.0) || !(q > 0.0)) fail(Err::invalid_query, "bound requires r > 0 and q > 0");
  return std::min(1.0, 2.0 * std::exp(-r * r / (2.0 * q)));
}

double bound_jump(double r, double q, double K) {
  if (!(r > 0.0) || !(q > 0.0) || K < 0.0)
    fail(Err::invalid_query, "bound requires r > 0, q > 0, K >= 0");
  return std::min(1.0, 2.0 * std::exp(-r * r / (2.0 * (K * r + q))));
}

namespace {

// M is piecewise linear between jumps, so its sup is attained at segment
// endpoints: the value right after each jump and the left limit before the
// next one.
TailPathStats walk_tail(const ChainSpec& spec, const std::vector<double>& pi,
                        const CenteredObservable& f, const PoissonDecomposition& dec,
                        double horizon, std::uint64_t seed) {
  EnvironmentPath path(spec, pi, seed);
  TailPathStats out;
  KahanSum integral, qv;
  double t = 0.0;
  auto seg = path.segment_at(0.0);
  const double v0 = dec.h[seg.state];
  for (;;) {
    const double hi = std::min(seg.hi, horizon);
    integral.add(f.f[seg.state] * (hi - t));
    qv.add(dec.qv[seg.state] * (hi - t));
    const double m_left = dec.h[seg.state] - v0 - integral.s;  // left limit at hi
    out.sup_abs_m = std::max(out.sup_abs_m, std::abs(m_left));
    t = hi;
    if (t >= horizon) break;
    seg = path.segment_at(t);
    const double m_right = dec.h[seg.state] - v0 - integral.s;  // value after the jump
    out.sup_abs_m = std::max(out.sup_abs_m, std::abs(m_right));
  }
  out.qv_horizon = qv.s;
  return out;
}

}  // namespace

std::vector<TailPathStats> tail_walk_batch(const ChainSpec& spec, const std::vector<double>& pi,
                                           const CenteredObservable& f,
                                           const PoissonDecomposition& dec, double horizon,
                                           long n_replicas, std::uint64_t master_seed,
                                           unsigned threads) {
  if (n_replicas <= 0) fail(Err::invalid_query, "tail walk requires replicas > 0");
  std::vector<TailPathStats> batch(static_cast<std::size_t>(n_replicas));
  parallel_for(static_cast<std::size_t>(n_replicas), threads, [&](std::size_t i) {
    batch[i] = walk_tail(spec, pi, f, dec, horizon, derive_stream(master_seed, i));
  });
  return batch;
}

TailCell evaluate_tail_cell(const std::vector<TailPathStats>& batch, double r, double q,
                            double jump_bound) {
  if (!(r > 0.0) || !(q > 0.0)) fail(Err::invalid_query, "tail cell requires r, q > 0");
  long k = 0;
  for (const auto& w : batch)
    if (w.sup_abs_m >= r && w.qv_horizon <= q) ++k;
  const long n = static_cast<long>(batch.size());

  TailCell cell;
  cell.r = r;
  cell.q = q;
  cell.jump_bound = jump_bound;
  cell.n = n;
  cell.freq = static_cast<double>(k) / static_cast<double>(n);
  cell.ucl99 = binom_upper_cl(k, n, 0.99);
  cell.lcl99 = binom_lower_cl(k, n, 0.99);
  cell.bound = bound_jump(r, q, jump_bound);
  cell.violated = cell.lcl99 > cell.bound;
  return cell;
}

TailCell empirical_tail(const ChainSpec& spec, const std::vector<double>& pi,
                        const CenteredObservable& f, const PoissonDecomposition& dec,
                        double horizon, double r, double q, long n_replicas,
                        std::uint64_t master_seed, unsigned threads) {
  const auto batch =
      tail_walk_batch(spec, pi, f, dec, horizon, n_replicas, master_seed, threads);
  return evaluate_tail_cell(batch, r, q, dec.jump_bound);
}

DecompositionCheck verify_decomposition_walk(const ChainSpec& spec,
                                             const std::vector<double>& pi,
                                             const CenteredObservable& f,
                                             const PoissonDecomposition& dec, double horizon,
                                             std::uint64_t seed) {
  EnvironmentPath path(spec, pi, seed);
  const auto lh = matvec(spec.generator, dec.h);  // compensator rates per state

  DecompositionCheck out;
  KahanSum int_f, int_lh, jumps, qv;
  double abs_resid = 0.0, sup_m = 0.0;
  double t = 0.0;
  auto seg = path.segment_at(0.0);
  const double v0 = dec.h[seg.state];
  for (;;) {
    const double hi = std::min(seg.hi, horizon);
    int_f.add(f.f[seg.state] * (hi - t));
    int_lh.add(lh[seg.state] * (hi - t));
    qv.add(dec.qv[seg.state] * (hi - t));
    const double m_identity = dec.h[seg.state] - v0 - int_f.s;
    const double m_compensated = jumps.s - int_lh.s;
    abs_resid = std::max(abs_resid, std::abs(m_identity - m_compensated));
    sup_m = std::max(sup_m, std::abs(m_identity));
    t = hi;
    if (t >= horizon) {
      out.m_horizon = m_identity;
      break;
    }
    const double h_prev = dec.h[seg.state];
    seg = path.segment_at(t);
    const double dh = dec.h[seg.state] - h_prev;
    jumps.add(dh);
    out.max_jump = std::max(out.max_jump, std::abs(dh));
    const double m_identity_after = dec.h[seg.state] - v0 - int_f.s;
    const double m_compensated_after = jumps.s - int_lh.s;
    abs_resid = std::max(abs_resid, std::abs(m_identity_after - m_compensated_after));
    sup_m = std::max(sup_m, std::abs(m_identity_after));
  }
  out.qv_horizon = qv.s;
  out.identity_residual = abs_resid / std::max(1.0, sup_m);
  return out;
}

}  // namespace mdpsim
