#include "qsafe/quantum.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qsafe/error.hpp"

using namespace qsafe;

namespace {

double dist(const CMatrix& a, const CMatrix& b) { return (a - b).norm(); }

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

// |j> -> |-j mod n> on the single index j in Z(n)
CMatrix global_negation(Eigen::Index n) {
  CMatrix p = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) p((n - j) % n, j) = 1.0;
  return p;
}

DensityMatrix random_density(int dim, SeededRng& rng, int terms) {
  std::vector<PureState> states;
  std::vector<double> w;
  for (int k = 0; k < terms; ++k) {
    states.push_back(random_pure_state(dim, rng));
    w.push_back(rng.uniform() + 0.05);
  }
  double s = 0;
  for (double v : w) s += v;
  for (double& v : w) v /= s;
  return DensityMatrix::mixture(states, w);
}

// rank of the coefficient matrix of |psi> split into (component set, rest)
int schmidt_rank(const CVector& v, int d, const std::vector<int>& part) {
  const IndexCodec codec(d);
  Eigen::Index rows = 1;
  for (std::size_t k = 0; k < part.size(); ++k) rows *= d;
  CMatrix m = CMatrix::Zero(rows, static_cast<Eigen::Index>(codec.size()) / rows);
  for (std::uint64_t idx = 0; idx < codec.size(); ++idx) {
    const auto digits = codec.decode(idx);
    Eigen::Index r = 0, c = 0, rm = 1, cm = 1;
    for (int i = 0; i < d; ++i) {
      const bool in = std::find(part.begin(), part.end(), i) != part.end();
      if (in) {
        r += digits[static_cast<std::size_t>(i)] * rm;
        rm *= d;
      } else {
        c += digits[static_cast<std::size_t>(i)] * cm;
        cm *= d;
      }
    }
    m(r, c) = v(static_cast<Eigen::Index>(idx));
  }
  const Eigen::JacobiSVD<CMatrix> svd(m);
  int rank = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > 1e-10) ++rank;
  return rank;
}

}  // namespace

TEST(Codec, Examples) {
  const IndexCodec c(3);
  const std::vector<int> a{2, 1, 2}, b{1, 1, 0};
  EXPECT_EQ(c.encode(a), 23u);
  EXPECT_EQ(c.encode(b), 4u);
  EXPECT_EQ(c.product_mod(23, 4), 11u);
  // the sum 23 + 4 = 27 wraps to 0 in Z(27)
  EXPECT_EQ(c.add_mod(23, 4), 0u);
  for (std::uint64_t k = 0; k < c.size(); ++k) EXPECT_EQ(c.encode(c.decode(k)), k);
  const std::vector<int> neg{-1, 4, 0};
  EXPECT_EQ(c.encode(neg), 2u + 3u);
  const IndexCodec c5(5);
  for (std::uint64_t a5 : {3124ull, 1777ull, 2ull})
    for (std::uint64_t b5 : {3124ull, 999ull})
      EXPECT_EQ(c5.product_mod(a5, b5), (a5 * b5) % 3125u);
  EXPECT_THROW(multipartite_dim(6), Error);
  EXPECT_EQ(local_dim_from(256), 4);
  EXPECT_THROW(local_dim_from(10), Error);
}

TEST(Fourier, SingleExamples) {
  const CMatrix h = fourier_single(2);
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix expect(2, 2);
  expect << r, r, r, -r;
  EXPECT_LE(dist(h, expect), 1e-15);
  EXPECT_LE(dist(h * h, identity(2)), 1e-14);
  for (int d = 2; d <= 7; ++d) {
    const CMatrix f = fourier_single(d);
    EXPECT_LE(dist(f * f.adjoint(), identity(d)), 1e-12);
    EXPECT_LE(dist(f * f, parity_single(d)), 1e-12);
    EXPECT_LE(dist(f * f * f * f, identity(d)), 1e-12);
  }
}

TEST(Fourier, MultipartiteStructure) {
  for (int d = 2; d <= 3; ++d) {
    const CMatrix fl = local_fourier(d);
    const CMatrix fg = global_fourier(d);
    const auto n = fl.rows();
    EXPECT_LE(dist(fl * fl.adjoint(), identity(n)), 1e-10);
    EXPECT_LE(dist(fg * fg.adjoint(), identity(n)), 1e-10);
    EXPECT_LE(dist(fl * fl * fl * fl, identity(n)), 1e-10);
    EXPECT_LE(dist(fg * fg * fg * fg, identity(n)), 1e-10);
    const CMatrix par = parity_multipartite(d);
    EXPECT_LE(dist(fl * fl, par), 1e-10);
    // F_G squares to negation in Z(d^d); carries make that differ from the
    // componentwise parity, e.g. d = 2: index 1 = (1,0) goes to 3 = (1,1)
    EXPECT_LE(dist(fg * fg, global_negation(n)), 1e-10);
    EXPECT_GT(dist(fg * fg, par), 1.0);
    EXPECT_GT(dist(fg, fl), 0.1);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        EXPECT_NEAR(std::norm(fg(j, k)), 1.0 / static_cast<double>(n), 1e-14);
        EXPECT_NEAR(std::norm(fl(j, k)), 1.0 / static_cast<double>(n), 1e-14);
      }
  }
  // F_L is the tensor power of F under the codec: factor i acts on digit i
  const CMatrix f = fourier_single(2);
  const CMatrix fl = local_fourier(2);
  const IndexCodec c(2);
  for (std::uint64_t j = 0; j < 4; ++j)
    for (std::uint64_t k = 0; k < 4; ++k)
      EXPECT_NEAR(std::abs(fl(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) -
                           f(c.digit(j, 0), c.digit(k, 0)) * f(c.digit(j, 1), c.digit(k, 1))),
                  0.0, 1e-15);
  const CVector v = fl * PureState::basis(4, 0).amplitudes();
  for (Eigen::Index k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(v(k) - Complex(0.5, 0)), 0.0, 1e-15);
}

TEST(Fourier, Order4AtD4) {
  const CMatrix& fg = fourier_matrix(FourierMode::Global, 4);
  const CMatrix sq = fg * fg;
  EXPECT_LE(dist(sq, global_negation(256)), 1e-9);
  EXPECT_LE(dist(fourier_matrix(FourierMode::Local, 4) * fourier_matrix(FourierMode::Local, 4),
                 parity_multipartite(4)),
            1e-9);
  EXPECT_EQ(&fourier_matrix(FourierMode::Global, 4), &fg);
}

TEST(Fourier, GlobalOnProductStateIsProduct) {
  const int d = 3;
  const double D = 27.0;
  const CMatrix& fg = fourier_matrix(FourierMode::Global, d);
  const IndexCodec codec(d);
  for (std::uint64_t j = 0; j < 27; ++j) {
    const CVector v = fg.col(static_cast<Eigen::Index>(j));
    // factorised form: prod_i exp(2 pi i k_i j d^i / d^d) / sqrt(d)
    for (std::uint64_t k = 0; k < 27; ++k) {
      Complex amp = 1.0;
      double scale = 1.0;
      for (int i = 0; i < d; ++i) {
        const double phase = 2 * std::numbers::pi * codec.digit(k, i) * static_cast<double>(j) * scale / D;
        amp *= std::polar(1.0 / std::sqrt(3.0), phase);
        scale *= d;
      }
      EXPECT_NEAR(std::abs(v(static_cast<Eigen::Index>(k)) - amp), 0.0, 1e-12);
    }
    for (const auto& part : std::vector<std::vector<int>>{{0}, {1}, {2}}) EXPECT_EQ(schmidt_rank(v, d, part), 1);
  }
  // an entangled input stays entangled somewhere
  const CVector bell = (PureState::basis(27, 0).amplitudes() + PureState::basis(27, 13).amplitudes()) / std::sqrt(2.0);
  EXPECT_EQ(schmidt_rank(bell, d, {0}), 2);
}

TEST(Projectors, Local) {
  const CMatrix p00 = projector_local(0, 0, 2);
  CMatrix expect = CMatrix::Zero(4, 4);
  expect(0, 0) = expect(2, 2) = 1.0;
  EXPECT_EQ(dist(p00, expect), 0.0);
  expect.setZero();
  expect(0, 0) = expect(1, 1) = 1.0;
  EXPECT_EQ(dist(projector_local(1, 0, 2), expect), 0.0);
  EXPECT_THROW(projector_local(2, 0, 2), Error);
  EXPECT_THROW(projector_local(0, -1, 2), Error);

  for (int d = 2; d <= 3; ++d) {
    std::vector<CMatrix> all;
    for (int i = 0; i < d; ++i) {
      CMatrix s = CMatrix::Zero(fourier_matrix(FourierMode::Local, d).rows(), fourier_matrix(FourierMode::Local, d).rows());
      for (int j = 0; j < d; ++j) {
        all.push_back(projector_local(i, j, d));
        s += all.back();
        EXPECT_EQ(dist(all.back() * all.back(), all.back()), 0.0);
      }
      EXPECT_EQ(dist(s, identity(s.rows())), 0.0);
    }
    for (const auto& a : all)
      for (const auto& b : all) EXPECT_EQ(dist(a * b, b * a), 0.0);
  }
}

TEST(Projectors, Function) {
  for (int d = 2; d <= 3; ++d) {
    const auto n = static_cast<Eigen::Index>(multipartite_dim(d));
    CMatrix s = CMatrix::Zero(n, n);
    for (std::uint64_t c = 0; c < function_count(d); ++c) {
      const auto f = FunctionMap::decode(d, c);
      const CMatrix p = projector_function(f);
      s += p;
      // Pi(f) = prod_i Pi(i, f(i))
      CMatrix prod = identity(n);
      for (int i = 0; i < d; ++i) prod = prod * projector_local(i, f(i), d);
      EXPECT_EQ(dist(p, prod), 0.0);
      const CVector fv = PureState::basis(f).amplitudes();
      EXPECT_LE((p * fv - fv).norm(), 0.0);
      for (std::uint64_t g = 0; g < function_count(d); ++g) {
        const CVector gv = PureState::basis(FunctionMap::decode(d, g)).amplitudes();
        EXPECT_EQ(std::abs(gv.dot(p * gv)), g == c ? 1.0 : 0.0);
      }
    }
    EXPECT_EQ(dist(s, identity(n)), 0.0);
  }
}

TEST(States, Validation) {
  CVector v(2);
  v << 1.0, 1.0;
  EXPECT_THROW(PureState::validate(v), Error);
  EXPECT_NO_THROW(PureState::normalized(v));
  EXPECT_THROW(PureState::normalized(CVector::Zero(2)), Error);

  auto kind_of = [](const CMatrix& m, DensityOptions o = {}) {
    try {
      DensityMatrix::validate(m, o);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidInput;
  };
  CMatrix m(2, 2);
  m << 0.5, Complex(0, 0.1), Complex(0, 0.1), 0.5;
  EXPECT_EQ(kind_of(m), ErrorKind::NotHermitian);
  m << 1.0, 0, 0, 1.0;
  EXPECT_EQ(kind_of(m), ErrorKind::NotNormalized);
  m << 1.5, 0, 0, -0.5;
  EXPECT_EQ(kind_of(m), ErrorKind::NotPositive);
  const auto fixed = DensityMatrix::validate(m, DensityOptions{kStateTol, kEigenFloor, true});
  EXPECT_NEAR(std::abs(fixed.matrix()(0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(fixed.matrix()(1, 1)), 0.0, 1e-12);
  m << 0.5, 0.5, 0.5, 0.5;
  EXPECT_NO_THROW(DensityMatrix::validate(m));
}

TEST(States, ReducedDensityConsistency) {
  SeededRng rng(10);
  for (int d = 2; d <= 3; ++d)
    for (int t = 0; t < 10; ++t) {
      const auto rho = random_density(static_cast<int>(multipartite_dim(d)), rng, 1 + t % 3);
      const auto stats = state_stats(rho);
      double s = 0.0;
      for (double w : stats.tensor.weights()) s += w;
      EXPECT_NEAR(s, 1.0, 1e-10);
      double cs = 0.0;
      for (double c : stats.correlations.coeffs) cs += c;
      EXPECT_NEAR(cs, 0.0, 1e-10);
      EXPECT_LE(max_abs_diff(tensor_to_matrix(stats.tensor), stats.markov), 1e-12);
      for (std::size_t c = 0; c < stats.tensor.size(); ++c)
        EXPECT_NEAR(stats.correlations.coeffs[c], stats.tensor[c] - stats.products[c], 1e-15);
      for (int i = 0; i < d; ++i) {
        const auto red = reduced_density(rho, i);
        EXPECT_NEAR(red.matrix().trace().real(), 1.0, 1e-12);
        for (int j = 0; j < d; ++j) {
          const double via_projector = (rho.matrix() * projector_local(i, j, d)).trace().real();
          EXPECT_NEAR(via_projector, red.matrix()(j, j).real(), 1e-12);
          EXPECT_NEAR(via_projector, stats.markov(i, j), 1e-12);
        }
      }
      // q(f) = Tr[rho Pi(f)]
      for (std::uint64_t c = 0; c < function_count(d); c += 5) {
        const double v = (rho.matrix() * projector_function(FunctionMap::decode(d, c))).trace().real();
        EXPECT_NEAR(v, stats.tensor[c], 1e-12);
      }
    }
  // product state -> |j_i><j_i|
  const FunctionMap f(3, {2, 0, 1});
  const auto rho = DensityMatrix::from_pure(PureState::basis(f));
  for (int i = 0; i < 3; ++i) {
    const auto red = reduced_density(rho, i);
    CMatrix e = CMatrix::Zero(3, 3);
    e(f(i), f(i)) = 1.0;
    EXPECT_LE(dist(red.matrix(), e), 1e-15);
  }
  EXPECT_THROW(reduced_density(rho, 3), Error);
}

TEST(Dual, FactoredMatchesDense) {
  SeededRng rng(12);
  for (int d = 2; d <= 3; ++d) {
    const auto psi = random_pure_state(static_cast<int>(multipartite_dim(d)), rng);
    const CVector dense = local_fourier(d).adjoint() * psi.amplitudes();
    EXPECT_LE((dual_state(psi, FourierMode::Local).amplitudes() - dense).norm(), 1e-12);
    CMatrix m = psi.amplitudes();
    const CMatrix fdag = fourier_single(d).adjoint();
    for (int i = 0; i < d; ++i) apply_local_left(m, fdag, d, i);
    EXPECT_LE((m.col(0) - dense).norm(), 1e-12);
    const auto rho = DensityMatrix::from_pure(psi);
    EXPECT_LE(dist(dual_state(rho, FourierMode::Local).matrix(), dense * dense.adjoint()), 1e-12);
    const CVector g = global_fourier(d).adjoint() * psi.amplitudes();
    EXPECT_LE((dual_state(psi, FourierMode::Global).amplitudes() - g).norm(), 1e-12);
  }
  const auto mixed = DensityMatrix::maximally_mixed(27);
  EXPECT_LE(dist(dual_state(mixed, FourierMode::Global).matrix(), mixed.matrix()), 1e-12);
  EXPECT_THROW(dual_state(DensityMatrix::maximally_mixed(5), FourierMode::Local), Error);
}

TEST(Dual, LargeLocalIsFactored) {
  // d = 5: F_L is never materialised; check a product state maps to a product of single duals
  const FunctionMap f(5, {0, 3, 1, 4, 2});
  const auto psi = PureState::basis(f);
  const auto dual = dual_state(psi, FourierMode::Local);
  const CMatrix fs = fourier_single(5).adjoint();
  const IndexCodec codec(5);
  for (std::uint64_t k = 0; k < codec.size(); k += 37) {
    Complex amp = 1.0;
    for (int i = 0; i < 5; ++i) amp *= fs(codec.digit(k, i), f(i));
    EXPECT_NEAR(std::abs(dual.amplitudes()(static_cast<Eigen::Index>(k)) - amp), 0.0, 1e-12);
  }
  const auto stats = state_stats(dual);
  for (double g : stats.gini_vector) EXPECT_NEAR(g, 0.0, 1e-12);
}

TEST(Dual, BlindnessToEntanglingOffDiagonals) {
  SeededRng rng(13);
  bool global_differs = false;
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + t % 2;
    const auto n = function_count(d);
    const auto fc = rng.next_u64() % n;
    auto gc = rng.next_u64() % n;
    if (gc == fc) gc = (gc + 1) % n;
    const double a2 = rng.uniform();
    const auto f = PureState::basis(FunctionMap::decode(d, fc));
    const auto g = PureState::basis(FunctionMap::decode(d, gc));
    const Complex a = std::polar(std::sqrt(a2), 2 * std::numbers::pi * rng.uniform());
    const Complex b = std::polar(std::sqrt(1 - a2), 2 * std::numbers::pi * rng.uniform());
    const std::vector<PureState> pair{f, g};
    const std::vector<double> w{a2, 1 - a2};
    const auto rho_a = DensityMatrix::mixture(pair, w);
    const auto rho_b = DensityMatrix::from_pure(PureState::normalized(a * f.amplitudes() + b * g.amplitudes()));
    const auto sa = state_stats(rho_a);
    const auto sb = state_stats(rho_b);
    for (std::uint64_t c = 0; c < n; ++c) EXPECT_NEAR(sa.tensor[c], sb.tensor[c], 1e-12);
    const auto ga = state_stats(dual_state(rho_a, FourierMode::Global));
    const auto gb = state_stats(dual_state(rho_b, FourierMode::Global));
    for (std::uint64_t c = 0; c < n; ++c)
      if (std::abs(ga.tensor[c] - gb.tensor[c]) > 1e-6) global_differs = true;
  }
  EXPECT_TRUE(global_differs);
}

TEST(Deficits, MaximallyMixed) {
  for (int d = 2; d <= 3; ++d) {
    const auto D = static_cast<double>(multipartite_dim(d));
    const auto u = uncertainty_deficits(DensityMatrix::maximally_mixed(static_cast<int>(D)));
    for (double v : u.local_component) EXPECT_NEAR(v, gini_pair_bound(d), 1e-12);
    for (double v : u.global_component) EXPECT_NEAR(v, gini_pair_bound(d), 1e-12);
    EXPECT_NEAR(u.local_total, gini_pair_bound(D), 1e-12);
    EXPECT_NEAR(u.global_total, gini_pair_bound(D), 1e-12);
  }
}

TEST(Deficits, PositiveOnRandomStates) {
  SeededRng rng(14);
  for (int d = 2; d <= 3; ++d)
    for (int t = 0; t < 200; ++t) {
      const auto psi = random_pure_state(static_cast<int>(multipartite_dim(d)), rng);
      const auto u = uncertainty_deficits(DensityMatrix::from_pure(psi));
      for (double v : u.local_component) EXPECT_GT(v, 0.0);
      for (double v : u.global_component) EXPECT_GT(v, 0.0);
      EXPECT_GT(u.local_total, 0.0);
      EXPECT_GT(u.global_total, 0.0);
    }
}

TEST(Deficits, GlobalComponentZeroIsReachable) {
  // equal superposition of the indices with digit 0 equal to 0: component 0 is
  // certain before and after F_G, so D_0 = 0 while the local Delta_0 stays positive
  for (int d = 2; d <= 3; ++d) {
    const auto D = multipartite_dim(d);
    CVector v = CVector::Zero(static_cast<Eigen::Index>(D));
    for (std::uint64_t k = 0; k < D; k += static_cast<std::uint64_t>(d)) v(static_cast<Eigen::Index>(k)) = 1.0;
    const auto u = uncertainty_deficits(DensityMatrix::from_pure(PureState::normalized(v)));
    EXPECT_NEAR(u.global_component[0], 0.0, 1e-12);
    EXPECT_GT(u.local_component[0], 0.1);
    EXPECT_GT(u.global_total, 0.0);
  }
}

TEST(ScalarProductOfStates, BasisStates) {
  for (std::uint64_t a = 0; a < 27; a += 4)
    for (std::uint64_t b = 0; b < 27; b += 3) {
      const auto ra = DensityMatrix::from_pure(PureState::basis(27, a));
      const auto rb = DensityMatrix::from_pure(PureState::basis(27, b));
      EXPECT_NEAR(state_scalar_product(ra, rb), a == b ? 1.0 : 0.0, 1e-15);
    }
  EXPECT_THROW(state_scalar_product(DensityMatrix::maximally_mixed(4), DensityMatrix::maximally_mixed(27)), Error);
}

TEST(GiniSummary, MatchesTensorRoute) {
  SeededRng rng(15);
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + t % 3;
    const auto psi = random_pure_state(static_cast<int>(multipartite_dim(d)), rng);
    const auto p = psi.probabilities();
    const auto s = gini_summary(p, d);
    const auto st = stats_from_diagonal(p, d);
    EXPECT_NEAR(s.total, oracle::gini_pairs(p), 1e-12);
    for (int i = 0; i < d; ++i) EXPECT_NEAR(s.local[static_cast<std::size_t>(i)], st.gini_vector[static_cast<std::size_t>(i)], 1e-12);
  }
}
