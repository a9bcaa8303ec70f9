#include "qsafe/io.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qsafe/error.hpp"
#include "qsafe/reference_cases.hpp"

using namespace qsafe;

namespace {

io::Json reparse(const io::Json& j) { return io::parse(j.dump()); }

}  // namespace

TEST(Io, VectorAndMatrixRoundTrip) {
  oracle::Gen gen(50);
  for (int t = 0; t < 50; ++t) {
    const int d = 2 + t % 6;
    const auto x = ProbVector::validate(gen.prob_vector(d));
    const auto back = io::vector_from_json(reparse(io::to_json(x)));
    EXPECT_EQ(back, x);
    const auto again = ProbVector::validate(back.values());
    EXPECT_EQ(again, x);
    const auto q = RowMarkovMatrix::from_rows(gen.row_markov(d));
    const auto qb = io::matrix_from_json(reparse(io::to_json(q)));
    EXPECT_EQ(max_abs_diff(q, qb), 0.0);
  }
}

TEST(Io, TensorForms) {
  oracle::Gen gen(51);
  const auto t = product_probabilities(RowMarkovMatrix::from_rows(gen.row_markov(3)));
  const auto back = io::tensor_from_json(reparse(io::to_json(t)));
  EXPECT_EQ(back.dim(), 3);
  for (std::uint64_t c = 0; c < t.size(); ++c) EXPECT_EQ(back[c], t[c]);

  const auto sparse = io::parse(R"([{"code": 21, "weight": 0.1}, {"code": 25, "weight": 0.3}, {"code": 16, "weight": 0.6}])");
  const auto kk = io::tensor_from_json(sparse, 3);
  const auto ref = reference::kk_tensor(0.1, 0.4);
  for (std::uint64_t c = 0; c < 27; ++c) EXPECT_NEAR(kk[c], ref[c], 1e-15);
  EXPECT_THROW(io::tensor_from_json(sparse), Error);
  const auto wrapped = io::tensor_from_json(io::parse(R"({"d": 2, "tensor": [0.25, 0.25, 0.25, 0.25]})"));
  EXPECT_EQ(wrapped.dim(), 2);
  EXPECT_THROW(io::tensor_from_json(io::parse("[0.2, 0.2, 0.6]")), Error);
}

TEST(Io, StatesRoundTrip) {
  SeededRng rng(52);
  const auto psi = random_pure_state(9, rng);
  const auto pb = io::pure_from_json(reparse(io::to_json(psi)));
  EXPECT_EQ(pb.amplitudes(), psi.amplitudes());

  const std::vector<PureState> states{random_pure_state(4, rng), random_pure_state(4, rng)};
  const std::vector<double> w{0.3, 0.7};
  const auto rho = DensityMatrix::mixture(states, w);
  const auto rb = io::state_from_json(reparse(io::to_json(rho)));
  EXPECT_EQ(rb.matrix(), rho.matrix());

  const auto nested = io::state_from_json(io::parse(R"({"entries": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]})"));
  EXPECT_EQ(nested.dim(), 2);
  EXPECT_EQ(nested.matrix()(1, 1), Complex(0.5, 0.0));

  const auto basis = io::state_from_json(io::parse(R"({"d": 2, "images": [1, 0]})"));
  EXPECT_EQ(basis.matrix()(1, 1), Complex(1.0, 0.0));

  EXPECT_THROW(io::state_from_json(io::parse(R"({"dim": 2, "amplitudes": [[1, 0], [1, 0]]})")), Error);
  EXPECT_THROW(io::state_from_json(io::parse(R"({"dim": 3, "entries": [1, 0, 0, 0]})")), Error);
}

TEST(Io, SpecsAndEstimates) {
  const auto ind = EnsembleSpec::independent(reference::ab1_matrix(0.2, 0.4));
  const auto ib = io::spec_from_json(reparse(io::to_json(ind)));
  EXPECT_EQ(ib.kind(), EnsembleKind::Independent);
  EXPECT_EQ(max_abs_diff(ib.matrix(), ind.matrix()), 0.0);
  const auto cor = EnsembleSpec::correlated(reference::kk_tensor(0.1, 0.4));
  const auto cb = io::spec_from_json(reparse(io::to_json(cor)));
  EXPECT_EQ(cb.kind(), EnsembleKind::Correlated);
  for (std::uint64_t c = 0; c < 27; ++c) EXPECT_EQ(cb.tensor()[c], cor.tensor()[c]);
  EXPECT_THROW(io::spec_from_json(io::parse(R"({"kind": "mixed"})")), Error);

  const McEstimate est{0.125, 0.0003, 1000000, 7};
  const auto j = io::to_json(est);
  EXPECT_EQ(j.at("value").get<double>(), 0.125);
  EXPECT_EQ(j.at("stderr").get<double>(), 0.0003);
  EXPECT_EQ(j.at("n").get<std::uint64_t>(), 1000000u);
  EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 7u);
}

TEST(Io, FunctionMapAndErrors) {
  const FunctionMap f(3, {1, 2, 1});
  EXPECT_EQ(io::function_from_json(reparse(io::to_json(f))), f);
  EXPECT_THROW(io::parse("{not json"), Error);
  EXPECT_THROW(io::read_file("/nonexistent/file.json"), Error);
  EXPECT_THROW(io::vector_from_json(io::parse("[0.5, 0.6]")), Error);
  EXPECT_THROW(io::vector_from_json(io::parse(R"(["a"])")), std::exception);
}
