#include "mcomp/cantor.hpp"

#include <algorithm>

namespace mcomp {

namespace {

// Subtrees per stage below which the OpenMP region is not worth opening.
constexpr long long kParallelThreshold = 64;

template <class S>
S range_sum(const std::vector<S>& v, std::size_t begin, std::size_t end) {
  S sum(0);
  for (std::size_t i = begin; i < end; ++i) sum += v[i];
  return sum;
}

// Runs stages 1..n in place on `values`. When `trace` is non-null every stage
// and every sibling-sum pair is recorded.
template <class S>
void run_stages(std::vector<S>& values, unsigned depth, CompensationTrace<S>* trace) {
  if (depth == 0) return;

  {
    const long long pairs = 1LL << (depth - 1);
    std::vector<std::pair<S, S>> sums;
    if (trace) sums.resize(static_cast<std::size_t>(pairs));
#pragma omp parallel for schedule(static) if (pairs >= kParallelThreshold)
    for (long long tau = 0; tau < pairs; ++tau) {
      const auto left = static_cast<std::size_t>(2 * tau);
      if (trace) sums[static_cast<std::size_t>(tau)] = {values[left], values[left + 1]};
      const S d = d_fn(values[left], values[left + 1]);
      values[left] += d;
      values[left + 1] -= d;
    }
    if (trace) {
      trace->stages.push_back(values);
      trace->sibling_sums.push_back(std::move(sums));
    }
  }

  for (unsigned k = 2; k <= depth; ++k) {
    const std::size_t half = std::size_t{1} << (k - 1);
    const std::size_t block = half << 1;
    const long long subtrees = 1LL << (depth - k);
    std::vector<std::pair<S, S>> sums;
    if (trace) sums.resize(static_cast<std::size_t>(subtrees));
#pragma omp parallel for schedule(static) if (subtrees >= kParallelThreshold)
    for (long long tau = 0; tau < subtrees; ++tau) {
      const std::size_t begin = static_cast<std::size_t>(tau) * block;
      const S s0 = range_sum(values, begin, begin + half);
      const S s1 = range_sum(values, begin + half, begin + block);
      if (trace) sums[static_cast<std::size_t>(tau)] = {s0, s1};
      if (is_zero(s0) || is_zero(s1)) continue;
      const S d = d_fn(s0, s1);
      if (is_zero(d)) continue;
      const S left_factor = S(1) + d / s0;
      const S right_factor = S(1) - d / s1;
      for (std::size_t i = begin; i < begin + half; ++i) values[i] *= left_factor;
      for (std::size_t i = begin + half; i < begin + block; ++i) values[i] *= right_factor;
    }
    if (trace) {
      trace->stages.push_back(values);
      trace->sibling_sums.push_back(std::move(sums));
    }
  }
}

}  // namespace

template <class S>
DyadicMeasure<S>::DyadicMeasure(unsigned depth) : depth_(depth) {
  require(depth <= kMaxDyadicDepth, "dyadic depth too large");
  leaves_.assign(std::size_t{1} << depth, S(0));
}

template <class S>
DyadicMeasure<S>::DyadicMeasure(unsigned depth, std::vector<S> leaves)
    : depth_(depth), leaves_(std::move(leaves)) {
  require(depth <= kMaxDyadicDepth, "dyadic depth too large");
  if (leaves_.size() != (std::size_t{1} << depth)) {
    throw PreconditionError("dyadic measure of depth " + std::to_string(depth) + " needs " +
                            std::to_string(std::size_t{1} << depth) + " leaves, got " +
                            std::to_string(leaves_.size()));
  }
}

template <class S>
S DyadicMeasure<S>::total_mass() const {
  return range_sum(leaves_, 0, leaves_.size());
}

template <class S>
S DyadicMeasure<S>::cylinder_mass(unsigned length, std::size_t word) const {
  require(length <= depth_, "cylinder word longer than depth");
  require(word < (std::size_t{1} << length), "cylinder word out of range");
  const std::size_t width = std::size_t{1} << (depth_ - length);
  return range_sum(leaves_, word * width, (word + 1) * width);
}

template <class S>
DyadicMeasure<S> compensate_cantor(const DyadicMeasure<S>& mu) {
  if (sign_of(mu.total_mass()) < 0) return DyadicMeasure<S>(mu.depth());
  std::vector<S> values = mu.leaves();
  run_stages<S>(values, mu.depth(), nullptr);
  return DyadicMeasure<S>(mu.depth(), std::move(values));
}

template <class S>
CompensationTrace<S> stage_trace(const DyadicMeasure<S>& mu) {
  require(sign_of(mu.total_mass()) >= 0, "stage_trace: total mass must be non-negative");
  CompensationTrace<S> trace;
  trace.depth = mu.depth();
  trace.stages.push_back(mu.leaves());
  std::vector<S> values = mu.leaves();
  run_stages<S>(values, mu.depth(), &trace);
  return trace;
}

template <class S>
DyadicMeasure<S> marginal(const DyadicMeasure<S>& mu, unsigned m) {
  require(m <= mu.depth(), "marginal: target depth exceeds measure depth");
  const std::size_t width = std::size_t{1} << (mu.depth() - m);
  std::vector<S> leaves(std::size_t{1} << m, S(0));
  for (std::size_t i = 0; i < mu.size(); ++i) leaves[i / width] += mu[i];
  return DyadicMeasure<S>(m, std::move(leaves));
}

template <class S>
ContinuityReport<S> continuity_probe(const DyadicMeasure<S>& mu, const DyadicMeasure<S>& direction,
                                     unsigned steps) {
  require(mu.depth() == direction.depth(), "continuity_probe: depth mismatch");
  require(steps > 0, "continuity_probe: steps must be positive");
  const unsigned n = mu.depth();
  const CompensationTrace<S> base = stage_trace(mu);
  const std::vector<S>& base_out = base.stages.back();

  ContinuityReport<S> report;
  report.deviations.reserve(steps);

  auto probe_at = [&](unsigned long long k) -> S {
    std::vector<S> leaves = mu.leaves();
    const S scale = S(1) / S(static_cast<double>(k));
    for (std::size_t i = 0; i < leaves.size(); ++i) leaves[i] += direction[i] * scale;
    DyadicMeasure<S> probe(n, std::move(leaves));
    if (sign_of(probe.total_mass()) < 0) {
      throw PreconditionError("continuity_probe: probe " + std::to_string(k) +
                              " has negative total mass");
    }
    const CompensationTrace<S> tr = stage_trace(probe);

    S dev(0);
    for (std::size_t i = 0; i < tr.stages.back().size(); ++i) {
      dev = max_of(dev, abs_of(S(tr.stages.back()[i] - base_out[i])));
    }
    report.empirical_modulus = max_of(report.empirical_modulus, S(dev * S(static_cast<double>(k))));

    for (unsigned stage = 1; stage <= n; ++stage) {
      const auto& now = tr.stages[stage];
      const auto& before = tr.stages[stage - 1];
      for (std::size_t i = 0; i < now.size(); ++i) {
        if (gt(abs_of(now[i]), abs_of(before[i]))) {
          report.domination_ok = false;
          report.violations.push_back("probe " + std::to_string(k) + " stage " + std::to_string(stage) +
                                      ": stage magnitude increased at leaf " + leaf_label(i, n));
        }
      }
      if (stage < 2) continue;
      for (std::size_t i = 0; i < now.size(); ++i) {
        const auto& sums = base.sibling_sums[stage - 1][i >> stage];
        const bool right_half = ((i >> (stage - 1)) & 1U) != 0;
        if (!is_zero(right_half ? sums.second : sums.first)) continue;
        const S moved_now = abs_of(S(now[i] - base.stages[stage][i]));
        const S moved_before = abs_of(S(before[i] - base.stages[stage - 1][i]));
        if (gt(moved_now, moved_before)) {
          report.domination_ok = false;
          report.violations.push_back("probe " + std::to_string(k) + " stage " + std::to_string(stage) +
                                      ": domination bound fails at leaf " + leaf_label(i, n));
        }
      }
    }
    return dev;
  };

  for (unsigned k = 1; k <= steps; ++k) report.deviations.push_back(probe_at(k));
  for (unsigned j = 1; j <= kContinuityTailProbes; ++j) {
    report.tail_deviations.push_back(probe_at(static_cast<unsigned long long>(steps) << j));
  }

  const std::size_t m = report.tail_deviations.size();
  for (std::size_t j = m / 2 + 1; j < m; ++j) {
    if (gt(report.tail_deviations[j], report.tail_deviations[j - 1])) {
      report.tail_nonincreasing = false;
      report.violations.push_back("tail deviation increased from k=" +
                                  std::to_string(static_cast<unsigned long long>(steps) << j) + " to k=" +
                                  std::to_string(static_cast<unsigned long long>(steps) << (j + 1)));
    }
  }
  return report;
}

std::string leaf_label(std::size_t index, unsigned depth) {
  std::string word(depth, '0');
  for (unsigned j = 0; j < depth; ++j) {
    if ((index >> (depth - 1 - j)) & 1U) word[j] = '1';
  }
  return word;
}

PointSet leaf_labels(unsigned depth) {
  PointSet labels;
  labels.reserve(std::size_t{1} << depth);
  for (std::size_t i = 0; i < (std::size_t{1} << depth); ++i) labels.push_back(leaf_label(i, depth));
  return labels;
}

template <class S>
AtomicMeasure<S> to_atomic(const DyadicMeasure<S>& mu) {
  return AtomicMeasure<S>(leaf_labels(mu.depth()), mu.leaves());
}

template <class S>
DyadicMeasure<S> from_atomic(const AtomicMeasure<S>& mu) {
  const std::size_t count = mu.size();
  require(count > 0 && (count & (count - 1)) == 0,
          "dyadic reading needs 2^n points, got " + std::to_string(count));
  unsigned depth = 0;
  while ((std::size_t{1} << depth) < count) ++depth;
  std::vector<S> leaves(count, S(0));
  std::vector<bool> filled(count, false);
  for (std::size_t i = 0; i < count; ++i) {
    const std::string& label = mu.points()[i];
    require(label.size() == depth, "label '" + label + "' is not a binary word of length " +
                                       std::to_string(depth));
    std::size_t index = 0;
    for (char c : label) {
      require(c == '0' || c == '1', "label '" + label + "' is not a binary word");
      index = (index << 1) | static_cast<std::size_t>(c - '0');
    }
    require(!filled[index], "label '" + label + "' repeats");
    filled[index] = true;
    leaves[index] = mu[i];
  }
  return DyadicMeasure<S>(depth, std::move(leaves));
}

template <class S>
CompensationProcedure<S> cantor_procedure() {
  return [](const AtomicMeasure<S>& mu) {
    const DyadicMeasure<S> out = compensate_cantor(from_atomic(mu));
    AtomicMeasure<S> result(mu.points());
    for (std::size_t i = 0; i < mu.size(); ++i) {
      std::size_t index = 0;
      for (char c : mu.points()[i]) index = (index << 1) | static_cast<std::size_t>(c - '0');
      result[i] = out[index];
    }
    return result;
  };
}

namespace reference {

template <class S>
DyadicMeasure<S> compensate_cantor_serial(const DyadicMeasure<S>& mu) {
  const unsigned n = mu.depth();
  if (sign_of(mu.total_mass()) < 0) return DyadicMeasure<S>(n);
  const std::size_t leaves = mu.size();
  std::vector<S> prev = mu.leaves();
  for (unsigned k = 1; k <= n; ++k) {
    std::vector<S> next(leaves, S(0));
    for (std::size_t sigma = 0; sigma < leaves; ++sigma) {
      // τ = σ|_{n−k}; the letter σ(n−k+1) picks the half.
      const std::size_t tau = sigma >> k;
      const unsigned letter = static_cast<unsigned>((sigma >> (k - 1)) & 1U);
      S s0(0);
      S s1(0);
      for (std::size_t other = 0; other < leaves; ++other) {
        if ((other >> k) != tau) continue;
        if (((other >> (k - 1)) & 1U) == 0) {
          s0 += prev[other];
        } else {
          s1 += prev[other];
        }
      }
      if (sign_of(s0) * sign_of(s1) == 0) {
        next[sigma] = prev[sigma];
      } else if (letter == 0) {
        next[sigma] = prev[sigma] * (S(1) + d_fn(s0, s1) / s0);
      } else {
        next[sigma] = prev[sigma] * (S(1) - d_fn(s0, s1) / s1);
      }
    }
    prev = std::move(next);
  }
  return DyadicMeasure<S>(n, std::move(prev));
}

}  // namespace reference

#define MCOMP_INSTANTIATE_CANTOR(S)                                                           \
  template class DyadicMeasure<S>;                                                            \
  template DyadicMeasure<S> compensate_cantor(const DyadicMeasure<S>&);                       \
  template CompensationTrace<S> stage_trace(const DyadicMeasure<S>&);                         \
  template DyadicMeasure<S> marginal(const DyadicMeasure<S>&, unsigned);                      \
  template ContinuityReport<S> continuity_probe(const DyadicMeasure<S>&, const DyadicMeasure<S>&, \
                                                unsigned);                                    \
  template AtomicMeasure<S> to_atomic(const DyadicMeasure<S>&);                               \
  template DyadicMeasure<S> from_atomic(const AtomicMeasure<S>&);                             \
  template CompensationProcedure<S> cantor_procedure();                                       \
  template DyadicMeasure<S> reference::compensate_cantor_serial(const DyadicMeasure<S>&);

MCOMP_INSTANTIATE_CANTOR(Rational)
MCOMP_INSTANTIATE_CANTOR(double)

}  // namespace mcomp
