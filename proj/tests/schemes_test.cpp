// Copyright 2026 The qwork Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qwork/schemes.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "test_util.hpp"

namespace qwork {
namespace {

using testing::plus_state;
constexpr double kPi = std::numbers::pi;

Process swap_process(double eps, double eps_prime) {
  return builtin_process("swap_to_coherent", {{"eps", eps}, {"eps_prime", eps_prime}});
}

Process rotation_process(double alpha) { return builtin_process("rotation", {{"alpha", alpha}}); }

ComplexMatrix projector(Index k, Index d) { return states::basis(k, d).matrix(); }

TEST(TransitionMatrix, Examples) {
  const auto h = HermitianOperator::diagonal({0, 1, 3});
  const Process identity(h, h, UnitaryOperator::identity(3));
  EXPECT_EQ(transition_matrix(identity), RealMatrix(RealMatrix::Identity(3, 3)));

  const RealMatrix half = RealMatrix::Constant(2, 2, 0.5);
  EXPECT_LE((transition_matrix(builtin_process("dft", {})) - half).norm(), 1e-15);
  EXPECT_LE((transition_matrix(swap_process(1, 1)) - half).norm(), 1e-15);
}

TEST(TransitionMatrix, DoublyStochastic) {
  testing::Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = transition_matrix(rng.process(rng.integer(2, 7)));
    EXPECT_LE((p.rowwise().sum().array() - 1).abs().maxCoeff(), 1e-12);
    EXPECT_LE((p.colwise().sum().array() - 1).abs().maxCoeff(), 1e-12);
  }
}

TEST(TpmPovm, IdentityProcess) {
  const auto h = HermitianOperator::diagonal({0, 1});
  const auto povm = tpm_povm(Process(h, h, UnitaryOperator::identity(2)));
  EXPECT_EQ(povm.copies, 1);
  for (const auto& e : povm.elements) {
    const ComplexMatrix expected =
        e.initial == e.final ? projector(e.initial, 2) : ComplexMatrix::Zero(2, 2);
    EXPECT_EQ(e.op, expected);
  }
}

TEST(TpmPovm, CoherentSwapProcess) {
  const auto povm = tpm_povm(swap_process(0.4, 1.0));
  for (Index i = 0; i < 2; ++i) {
    for (Index j = 0; j < 2; ++j) {
      EXPECT_LE((povm.element(i, j).op - 0.5 * projector(i, 2)).norm(), 1e-15);
    }
  }
}

TEST(TpmDistribution, Examples) {
  const auto d1 = tpm_distribution(swap_process(1, 1), states::basis(0, 2));
  EXPECT_NEAR(d1.probability_of(0), 0.5, 1e-15);
  EXPECT_NEAR(d1.probability_of(-1), 0.5, 1e-15);
  EXPECT_NEAR(d1.probability_of(1), 0.0, 0.0);

  const auto h = HermitianOperator::diagonal({0, 1});
  testing::Rng rng(2);
  const auto d2 = tpm_distribution(Process(h, h, UnitaryOperator::identity(2)), rng.diagonal_state(h));
  EXPECT_NEAR(d2.probability_of(0), 1.0, 1e-15);

  const auto d3 = tpm_distribution(builtin_process("dft", {}), states::thermal(h, 0));
  ASSERT_EQ(d3.size(), 3u);
  EXPECT_NEAR(d3.probability_of(0), 0.5, 1e-15);
  EXPECT_NEAR(d3.probability_of(1), 0.25, 1e-15);
  EXPECT_NEAR(d3.probability_of(-1), 0.25, 1e-15);
}

TEST(TpmDistribution, MeanMatchesExactOnDiagonalStates) {
  testing::Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = rng.process(rng.integer(2, 6));
    const auto rho = rng.diagonal_state(p.h());
    EXPECT_NEAR(tpm_distribution(p, rho).mean(), exact_average_work(p, rho), 1e-12);
  }
}

TEST(TOperators, Examples) {
  const auto h = HermitianOperator::diagonal({0, 1});
  const auto id = t_operators(Process(h, h, UnitaryOperator::identity(2)));
  for (Index j = 0; j < 2; ++j) {
    EXPECT_LE((id.ops[j].full - projector(j, 2)).norm(), 1e-15);
    EXPECT_LE(id.ops[j].offdiag.norm(), 1e-15);
  }

  const auto dft = t_operators(builtin_process("dft", {}));
  ComplexMatrix half_x(2, 2);
  half_x << 0, 0.5, 0.5, 0;
  EXPECT_LE((dft.ops[0].full - plus_state().matrix()).norm(), 1e-15);
  EXPECT_LE((dft.ops[0].offdiag - half_x).norm(), 1e-15);
}

TEST(TOperators, StructuralInvariants) {
  testing::Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = rng.integer(2, 6);
    const auto p = rng.process(d);
    const auto t = t_operators(p);
    const ComplexMatrix& v = p.initial_basis();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    ComplexMatrix off_sum = ComplexMatrix::Zero(d, d);
    for (Index j = 0; j < d; ++j) {
      const auto& op = t.ops[j];
      EXPECT_LE((op.full - op.diag - op.offdiag).norm(), 1e-13);
      EXPECT_LE((op.full * op.full - op.full).norm(), 1e-10);
      EXPECT_NEAR(op.full.trace().real(), 1.0, 1e-10);
      const ComplexMatrix d_local = v.adjoint() * op.diag * v;
      EXPECT_LE((d_local - ComplexMatrix(d_local.diagonal().asDiagonal())).norm(), 1e-12);
      EXPECT_LE((v.adjoint() * op.offdiag * v).diagonal().norm(), 1e-12);
      const ComplexMatrix expected = p.u().matrix().adjoint() * p.final_basis().col(j) *
                                     p.final_basis().col(j).adjoint() * p.u().matrix();
      EXPECT_LE((op.full - expected).norm(), 1e-12);
      sum += op.full;
      off_sum += op.offdiag;
    }
    EXPECT_LE((sum - ComplexMatrix::Identity(d, d)).norm(), 1e-10);
    EXPECT_LE(off_sum.norm(), 1e-10);
  }
}

TEST(LambdaMax, DftIsOne) {
  for (Index d = 2; d <= 8; ++d) {
    const auto r = lambda_max(builtin_process("dft", {{"d", static_cast<double>(d)}}));
    EXPECT_NEAR(r.lambda, 1.0, 1e-10) << "d = " << d;
    EXPECT_FALSE(r.unconstrained);
  }
}

TEST(LambdaMax, RotationPiOverEight) {
  const auto p = rotation_process(kPi / 8);
  const auto r = lambda_max(p);
  EXPECT_NEAR(r.lambda, 0.41421356237309503, 1e-12);
  EXPECT_NEAR(r.lambda, oracle::bisect_lambda(p), 1e-9);
  ASSERT_TRUE(r.binding_pair.has_value());
}

TEST(LambdaMax, IdentityIsUnconstrained) {
  const auto h = HermitianOperator::diagonal({0, 1, 2});
  const auto r = lambda_max(Process(h, h, UnitaryOperator::identity(3)));
  EXPECT_EQ(r.lambda, 1.0);
  EXPECT_FALSE(r.binding_pair.has_value());
  EXPECT_TRUE(r.unconstrained);
}

TEST(LambdaMax, ZeroTransitionCollapsesToTpm) {
  // Qutrit: |0> stays put, |1>,|2> mix. |U'_00|² = 1, |U'_10|² = 0 while T_1
  // has a coherence between |1> and |2>.
  ComplexMatrix u = ComplexMatrix::Zero(3, 3);
  u(0, 0) = 1;
  u.bottomRightCorner(2, 2) = unitaries::rotation(0.4).matrix();
  const auto h = HermitianOperator::diagonal({0, 1, 2.5});
  const auto r = lambda_max(Process(h, h, UnitaryOperator(u)));
  EXPECT_EQ(r.lambda, 0.0);
  EXPECT_TRUE(r.collapsed_to_tpm);
  ASSERT_TRUE(r.binding_pair.has_value());
  EXPECT_EQ(r.binding_pair->first, 0);
}

TEST(LambdaMax, MatchesBisectionAndIsMaximal) {
  testing::Rng rng(34);
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = rng.process(rng.integer(2, 5));
    const auto r = lambda_max(p);
    EXPECT_GE(r.lambda, 0.0);
    EXPECT_LE(r.lambda, 1.0);
    EXPECT_TRUE(check_povm(two_copy_family(p, r.lambda)).valid());
    EXPECT_NEAR(r.lambda, oracle::bisect_lambda(p), 1e-9);
    if (r.lambda < 1.0) {
      EXPECT_LT(check_povm(two_copy_family(p, r.lambda + 1e-6)).min_eigenvalue, -1e-10);
    }
  }
}

TEST(TwoCopyPovm, RotationMatricesExplicit) {
  for (double alpha : {0.2, kPi / 8, 0.7, 1.1, 2.0}) {
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    const auto scheme = two_copy_povm(rotation_process(alpha));
    const double l = scheme.lambda.lambda;
    const auto second = [&](double diag, double off) {
      ComplexMatrix m(2, 2);
      m << diag, off, off, diag;
      return m;
    };
    const ComplexMatrix expected[2][2] = {
        {tensor(projector(0, 2), second(c * c, -l * c * s)),
         tensor(projector(0, 2), second(s * s, l * c * s))},
        {tensor(projector(1, 2), second(s * s, -l * c * s)),
         tensor(projector(1, 2), second(c * c, l * c * s))}};
    for (Index i = 0; i < 2; ++i) {
      for (Index j = 0; j < 2; ++j) {
        EXPECT_LE((scheme.povm.element(i, j).op - expected[i][j]).norm(), 1e-14)
            << "alpha " << alpha << " (" << i << "," << j << ")";
      }
    }
  }
}

TEST(TwoCopyPovm, DftElementsAreProjectors) {
  for (Index d = 2; d <= 5; ++d) {
    const auto p = builtin_process("dft", {{"d", static_cast<double>(d)}});
    const ComplexMatrix w = unitaries::dft(d).matrix();
    const auto scheme = two_copy_povm(p);
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) {
        const ComplexVector rotated = w.adjoint() * states::basis(j, d).matrix().col(j);
        const ComplexMatrix expected = tensor(projector(i, d), rotated * rotated.adjoint());
        EXPECT_LE((scheme.povm.element(i, j).op - expected).norm(), 1e-10);
      }
    }
  }
}

TEST(TwoCopyPovm, LambdaZeroIsTpmTensorIdentity) {
  testing::Rng rng(35);
  const auto p = rng.process(3);
  const auto family = two_copy_family(p, 0.0);
  const auto tpm = tpm_povm(p);
  for (std::size_t k = 0; k < family.elements.size(); ++k) {
    EXPECT_LE((family.elements[k].op - tensor(tpm.elements[k].op, ComplexMatrix::Identity(3, 3)))
                  .norm(),
              1e-14);
  }
}

TEST(EvaluatePovm, MaximallyCoherentExample) {
  const auto p = builtin_process("dft", {});
  const auto two = outcome_probabilities(two_copy_povm(p).povm, plus_state());
  const double expected_two[] = {0.5, 0.0, 0.5, 0.0};
  const auto tpm = outcome_probabilities(tpm_povm(p), plus_state());
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(two[k].probability, expected_two[k], 1e-12);
    EXPECT_NEAR(tpm[k].probability, 0.25, 1e-12);
  }
  const auto dist = evaluate_povm(two_copy_povm(p).povm, plus_state());
  EXPECT_NEAR(dist.probability_of(0), 0.5, 1e-12);
  EXPECT_NEAR(dist.probability_of(1), 0.5, 1e-12);
  EXPECT_NEAR(dist.probability_of(-1), 0.0, 1e-12);
}

TEST(EvaluatePovm, TwoCopyMatchesTpmOnDiagonalStates) {
  testing::Rng rng(36);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = rng.process(rng.integer(2, 4));
    const auto rho = rng.diagonal_state(p.h());
    const auto a = evaluate_povm(two_copy_povm(p).povm, rho);
    const auto b = tpm_distribution(p, rho);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_NEAR(a.support()[k], b.support()[k], 1e-12);
      EXPECT_NEAR(a.probabilities()[k], b.probabilities()[k], 1e-12);
    }
  }
}

TEST(EvaluatePovm, DimensionMismatch) {
  EXPECT_THROW(evaluate_povm(tpm_povm(builtin_process("dft", {{"d", 3}})), plus_state()),
               DimensionError);
}

TEST(WorkOperator, Examples) {
  for (double eps : {0.0, 0.5, 1.0}) {
    const double ep = 0.8;
    const auto x = work_operator(tpm_povm(swap_process(eps, ep))).matrix();
    ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
    expected(0, 0) = -ep / 2;
    expected(1, 1) = eps - ep / 2;
    EXPECT_LE((x - expected).norm(), 1e-15);
  }
  const auto h = HermitianOperator::diagonal({0, 1});
  EXPECT_LE(work_operator(tpm_povm(Process(h, h, UnitaryOperator::identity(2)))).matrix().norm(),
            0.0);
}

TEST(WorkOperator, DftAtLambdaOneGivesExactAverage) {
  testing::Rng rng(37);
  for (Index d = 2; d <= 4; ++d) {
    const auto p = builtin_process("dft", {{"d", static_cast<double>(d)}});
    const ComplexMatrix x = work_operator(two_copy_povm(p).povm).matrix();
    for (int trial = 0; trial < 10; ++trial) {
      const auto rho = rng.state(d);
      EXPECT_NEAR(oracle::trace_product(tensor(rho.matrix(), rho.matrix()), x).real(),
                  exact_average_work(p, rho), 1e-10);
    }
  }
}

TEST(QubitClosedForm, Lambda) {
  EXPECT_NEAR(qubit_lambda_closed_form(kPi / 4).lambda, 1.0, 1e-15);
  EXPECT_NEAR(qubit_lambda_closed_form(kPi / 8).lambda, 0.41421356237309503, 1e-15);
  EXPECT_NEAR(qubit_lambda_closed_form(kPi / 3).lambda, 0.5773502691896258, 1e-15);
  EXPECT_TRUE(qubit_lambda_closed_form(0).unconstrained);
  EXPECT_TRUE(qubit_lambda_closed_form(kPi / 2).unconstrained);
  EXPECT_TRUE(lambda_max(rotation_process(kPi / 2)).unconstrained);
}

TEST(QubitClosedForm, Probabilities) {
  const auto p = qubit_probabilities_closed_form(kPi / 4, plus_state());
  const double expected[] = {0, 0.5, 0, 0.5};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(p[k], expected[k], 1e-15);

  testing::Rng rng(38);
  const auto rho = rng.diagonal_state(HermitianOperator::diagonal({0, 1}));
  const double r0 = rho.matrix()(0, 0).real();
  const double r1 = rho.matrix()(1, 1).real();
  const double a = 0.3;
  const double c2 = std::cos(a) * std::cos(a);
  const double s2 = std::sin(a) * std::sin(a);
  const auto q = qubit_probabilities_closed_form(a, rho);
  EXPECT_NEAR(q[0], r0 * c2, 1e-15);
  EXPECT_NEAR(q[1], r0 * s2, 1e-15);
  EXPECT_NEAR(q[2], r1 * s2, 1e-15);
  EXPECT_NEAR(q[3], r1 * c2, 1e-15);

  const auto rho2 = rng.state(2);
  const auto z = qubit_probabilities_closed_form(0, rho2);
  EXPECT_NEAR(z[0], rho2.matrix()(0, 0).real(), 1e-15);
  EXPECT_NEAR(z[1], 0.0, 1e-15);
  EXPECT_NEAR(z[2], 0.0, 1e-15);
  EXPECT_NEAR(z[3], rho2.matrix()(1, 1).real(), 1e-15);

  EXPECT_THROW(qubit_probabilities_closed_form(1.0, rho2), ParamError);
  EXPECT_THROW(qubit_probabilities_closed_form(-0.1, rho2), ParamError);
}

TEST(PovmAxioms, AllConstructedSchemes) {
  testing::Rng rng(39);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = rng.process(rng.integer(2, 4));
    for (auto kind : {SchemeKind::tpm, SchemeKind::two_copy}) {
      const auto c = check_povm(scheme_povm(kind, p));
      EXPECT_GE(c.min_eigenvalue, -1e-10);
      EXPECT_LE(c.completeness_defect, 1e-10);
    }
  }
}

TEST(AffineIdentity, MeanInterpolatesBetweenTpmAndExact) {
  testing::Rng rng(40);
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = rng.process(rng.integer(2, 5));
    const auto rho = rng.state(p.dim());
    const auto scheme = two_copy_povm(p);
    const double l = scheme.lambda.lambda;
    const double expected =
        (1 - l) * tpm_distribution(p, rho).mean() + l * exact_average_work(p, rho);
    EXPECT_NEAR(evaluate_povm(scheme.povm, rho).mean(), expected, 1e-10);
  }
}

}  // namespace
}  // namespace qwork
