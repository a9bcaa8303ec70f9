#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "qsafe/markov.hpp"
#include "qsafe/rng.hpp"

namespace qsafe {

enum class EnsembleKind { Independent, Correlated };

const char* to_string(EnsembleKind k);

// A random-safe ensemble: either independent positions drawn from the rows
// of q, or opening sequences drawn jointly from a Markov tensor.
class EnsembleSpec {
 public:
  static EnsembleSpec independent(RowMarkovMatrix q) { return EnsembleSpec(std::move(q)); }
  static EnsembleSpec correlated(MarkovTensor t) { return EnsembleSpec(std::move(t)); }

  EnsembleKind kind() const noexcept {
    return std::holds_alternative<RowMarkovMatrix>(body_) ? EnsembleKind::Independent
                                                          : EnsembleKind::Correlated;
  }
  int dim() const noexcept;
  // throws InvalidInput on the wrong kind
  const RowMarkovMatrix& matrix() const;
  const MarkovTensor& tensor() const;

  // joint law over all d^d sequences
  MarkovTensor exact_tensor() const;
  // position marginals
  RowMarkovMatrix marginals() const;

 private:
  explicit EnsembleSpec(RowMarkovMatrix q) : body_(std::move(q)) {}
  explicit EnsembleSpec(MarkovTensor t) : body_(std::move(t)) {}
  std::variant<RowMarkovMatrix, MarkovTensor> body_;
};

// Inverse-CDF sampler over the canonical code order. Building one is
// O(d^d) for correlated specs, so reuse it for repeated draws.
class SequenceSampler {
 public:
  explicit SequenceSampler(const EnsembleSpec& spec);

  int dim() const noexcept { return d_; }
  // code of the sampled FunctionMap
  std::uint64_t draw_code(SeededRng& rng) const;
  // images written into out (size d)
  void draw(SeededRng& rng, std::vector<int>& out) const;

 private:
  int d_;
  bool independent_;
  std::vector<std::vector<double>> row_cdfs_;
  std::vector<double> code_cdf_;
};

FunctionMap sample_sequence(const EnsembleSpec& spec, SeededRng& rng);

inline constexpr std::uint64_t kShardSize = 65536;

struct SimOptions {
  unsigned threads = 1;
};

// Draw n sequences in shards of kShardSize; shard s uses rng.substream(s).
// Counts are identical for every thread count.
std::vector<std::uint64_t> empirical_counts(const EnsembleSpec& spec, std::uint64_t n,
                                            const SeededRng& rng, SimOptions opts = {});

MarkovTensor empirical_tensor(const EnsembleSpec& spec, std::uint64_t n, const SeededRng& rng,
                              SimOptions opts = {});

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

// Bernoulli standard error sqrt(p(1-p)/n).
double bernoulli_stderr(double p, std::uint64_t n);

// Fraction of n paired draws (one safe from each ensemble) that share the
// opening sequence. Only independent ensembles are accepted.
McEstimate collision_probability_mc(const EnsembleSpec& a, const EnsembleSpec& b,
                                    std::uint64_t n, const SeededRng& rng,
                                    SimOptions opts = {});

// lambda = 1 gives a, lambda = 0 gives b, otherwise a correlated spec holding
// lambda t_a + (1-lambda) t_b of the joint laws.
EnsembleSpec merge(const EnsembleSpec& a, const EnsembleSpec& b, double lambda);

// (1/2) sum_f |t[f] - s[f]|
double total_variation(const MarkovTensor& t, const MarkovTensor& s);

}  // namespace qsafe
