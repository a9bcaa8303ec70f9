#include "qsafe/safe_sim.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "qsafe/error.hpp"

namespace qsafe {

namespace {

std::vector<double> cumulative(std::span<const double> w) {
  std::vector<double> cdf(w.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    acc += w[k];
    cdf[k] = acc;
  }
  return cdf;
}

// First index whose cumulative weight exceeds u. Rounding can leave
// cdf.back() a hair under 1; then fall back to the last positive weight.
std::size_t invert(const std::vector<double>& cdf, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it != cdf.end()) return static_cast<std::size_t>(it - cdf.begin());
  std::size_t k = cdf.size() - 1;
  while (k > 0 && cdf[k] == cdf[k - 1]) --k;
  return k;
}

// Runs body(shard_index, shard_draws, worker) over ceil(n / kShardSize) shards.
// Shard s goes to worker s % threads so the work split is fixed.
template <typename Body>
void for_each_shard(std::uint64_t n, unsigned threads, Body&& body) {
  const std::uint64_t shards = (n + kShardSize - 1) / kShardSize;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(shards, 1))));
  auto work = [&](unsigned worker) {
    for (std::uint64_t s = worker; s < shards; s += threads) {
      const std::uint64_t draws = std::min(kShardSize, n - s * kShardSize);
      body(s, draws, worker);
    }
  };
  if (threads == 1) {
    work(0);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  for (auto& t : pool) t.join();
}

}  // namespace

const char* to_string(EnsembleKind k) {
  return k == EnsembleKind::Independent ? "independent" : "correlated";
}

int EnsembleSpec::dim() const noexcept {
  return std::visit([](const auto& body) { return body.dim(); }, body_);
}

const RowMarkovMatrix& EnsembleSpec::matrix() const {
  if (const auto* q = std::get_if<RowMarkovMatrix>(&body_)) return *q;
  throw Error(ErrorKind::InvalidInput, "ensemble is correlated; it has no defining matrix");
}

const MarkovTensor& EnsembleSpec::tensor() const {
  if (const auto* t = std::get_if<MarkovTensor>(&body_)) return *t;
  throw Error(ErrorKind::InvalidInput, "ensemble is independent; it has no defining tensor");
}

MarkovTensor EnsembleSpec::exact_tensor() const {
  if (kind() == EnsembleKind::Independent) return product_probabilities(matrix());
  return tensor();
}

RowMarkovMatrix EnsembleSpec::marginals() const {
  if (kind() == EnsembleKind::Independent) return matrix();
  return tensor_to_matrix(tensor());
}

SequenceSampler::SequenceSampler(const EnsembleSpec& spec)
    : d_(spec.dim()), independent_(spec.kind() == EnsembleKind::Independent) {
  if (independent_) {
    for (int i = 0; i < d_; ++i) row_cdfs_.push_back(cumulative(spec.matrix().row(i)));
  } else {
    code_cdf_ = cumulative(spec.tensor().weights());
  }
}

std::uint64_t SequenceSampler::draw_code(SeededRng& rng) const {
  if (!independent_) return invert(code_cdf_, rng.uniform());
  std::uint64_t code = 0;
  std::uint64_t place = 1;
  for (int i = 0; i < d_; ++i) {
    code += invert(row_cdfs_[static_cast<std::size_t>(i)], rng.uniform()) * place;
    place *= static_cast<std::uint64_t>(d_);
  }
  return code;
}

void SequenceSampler::draw(SeededRng& rng, std::vector<int>& out) const {
  out.resize(static_cast<std::size_t>(d_));
  if (independent_) {
    for (int i = 0; i < d_; ++i) {
      out[static_cast<std::size_t>(i)] =
          static_cast<int>(invert(row_cdfs_[static_cast<std::size_t>(i)], rng.uniform()));
    }
    return;
  }
  std::uint64_t code = invert(code_cdf_, rng.uniform());
  for (int i = 0; i < d_; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<int>(code % static_cast<std::uint64_t>(d_));
    code /= static_cast<std::uint64_t>(d_);
  }
}

FunctionMap sample_sequence(const EnsembleSpec& spec, SeededRng& rng) {
  std::vector<int> images;
  SequenceSampler(spec).draw(rng, images);
  return FunctionMap(spec.dim(), std::move(images));
}

std::vector<std::uint64_t> empirical_counts(const EnsembleSpec& spec, std::uint64_t n,
                                            const SeededRng& rng, SimOptions opts) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "sample count must be at least 1");
  const std::size_t codes = function_count(spec.dim());
  const SequenceSampler sampler(spec);
  const unsigned threads = std::max(1u, opts.threads);
  std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(codes, 0));
  for_each_shard(n, threads, [&](std::uint64_t shard, std::uint64_t draws, unsigned worker) {
    SeededRng sub = rng.substream(shard);
    auto& counts = partial[worker];
    for (std::uint64_t k = 0; k < draws; ++k) ++counts[sampler.draw_code(sub)];
  });
  std::vector<std::uint64_t> total(codes, 0);
  for (const auto& counts : partial)
    for (std::size_t c = 0; c < codes; ++c) total[c] += counts[c];
  return total;
}

MarkovTensor empirical_tensor(const EnsembleSpec& spec, std::uint64_t n, const SeededRng& rng,
                              SimOptions opts) {
  const auto counts = empirical_counts(spec, n, rng, opts);
  std::vector<double> w(counts.size());
  for (std::size_t c = 0; c < w.size(); ++c) w[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
  return MarkovTensor::validate(spec.dim(), w);
}

double bernoulli_stderr(double p, std::uint64_t n) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

McEstimate collision_probability_mc(const EnsembleSpec& a, const EnsembleSpec& b,
                                    std::uint64_t n, const SeededRng& rng, SimOptions opts) {
  if (a.kind() != EnsembleKind::Independent || b.kind() != EnsembleKind::Independent) {
    throw Error(ErrorKind::CorrelatedSpecRejected,
                "collision probability equals the scalar product only for independent ensembles");
  }
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "ensembles differ in d");
  if (n == 0) throw Error(ErrorKind::InvalidInput, "sample count must be at least 1");

  const SequenceSampler sa(a);
  const SequenceSampler sb(b);
  const unsigned threads = std::max(1u, opts.threads);
  std::vector<std::uint64_t> hits(threads, 0);
  for_each_shard(n, threads, [&](std::uint64_t shard, std::uint64_t draws, unsigned worker) {
    SeededRng sub = rng.substream(shard);
    std::vector<int> x;
    std::vector<int> y;
    std::uint64_t local = 0;
    for (std::uint64_t k = 0; k < draws; ++k) {
      sa.draw(sub, x);
      sb.draw(sub, y);
      if (x == y) ++local;
    }
    hits[worker] += local;
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;

  McEstimate est;
  est.n = n;
  est.seed = rng.seed();
  est.value = static_cast<double>(total) / static_cast<double>(n);
  est.std_error = bernoulli_stderr(est.value, n);
  return est;
}

EnsembleSpec merge(const EnsembleSpec& a, const EnsembleSpec& b, double lambda) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "ensembles differ in d");
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorKind::InvalidInput, "mixing weight outside [0,1]");
  }
  if (lambda == 1.0) return a;
  if (lambda == 0.0) return b;
  return EnsembleSpec::correlated(mix(a.exact_tensor(), b.exact_tensor(), lambda));
}

double total_variation(const MarkovTensor& t, const MarkovTensor& s) {
  if (t.dim() != s.dim()) throw Error(ErrorKind::DimensionMismatch, "tensors differ in d");
  double sum = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) sum += std::abs(t[k] - s[k]);
  return 0.5 * sum;
}

}  // namespace qsafe
