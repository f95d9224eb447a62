#include <gtest/gtest.h>

#include <cmath>

#include "fgim/errors.hpp"
#include "fgim/numerics/adam.hpp"
#include "fgim/numerics/random.hpp"
#include "fgim/numerics/tape.hpp"
#include "gradcases.hpp"

using namespace fgim;
using num::Tape;
using num::Tensor;

namespace {

std::vector<double> values(const Tensor<double>& t) { return {t.data().begin(), t.data().end()}; }

}  // namespace

TEST(Tensor, ShapeMustMatchValueCount) {
  EXPECT_THROW(Tensor<double>({2, 2}, {1, 2, 3}), DimensionError);
  EXPECT_THROW(Tensor<double>({0, 2}, {}), DimensionError);
  Tensor<double> t({2, 3}, {1, 2, 3, 4, 5, 6}, true);
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(t.grad().size(), 6u);
  EXPECT_DOUBLE_EQ(t.at(1, 2), 6.0);
}

TEST(Tensor, DetachedSharesValuesCloneCopies) {
  Tensor<double> t({1, 2}, {1, 2}, true);
  auto d = t.detached();
  auto c = t.clone();
  EXPECT_FALSE(d.requires_grad());
  t.mutable_data()[0] = 7;
  EXPECT_DOUBLE_EQ(d[0], 7.0);
  EXPECT_DOUBLE_EQ(c[0], 1.0);
}

TEST(Matmul, IdentityLeavesOperandUnchanged) {
  Tape<double> tape;
  Tensor<double> eye({2, 2}, {1, 0, 0, 1});
  Tensor<double> b({2, 3}, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(values(tape.matmul(eye, b)), values(b));
}

TEST(Matmul, HandArithmetic) {
  Tape<double> tape;
  const auto c = tape.matmul(Tensor<double>({2, 2}, {1, 2, 3, 4}), Tensor<double>({2, 1}, {0, 1}));
  EXPECT_EQ(c.shape(), (num::Shape{2, 1}));
  EXPECT_EQ(values(c), (std::vector<double>{2, 4}));
}

TEST(Matmul, MismatchNamesBothShapes) {
  Tape<double> tape;
  try {
    tape.matmul(Tensor<double>::zeros({2, 3}), Tensor<double>::zeros({2, 3}));
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("[2x3]"), std::string::npos) << msg;
  }
}

TEST(Elementwise, SigmoidValueAndSlopeAtZero) {
  Tape<double> tape;
  Tensor<double> x({1, 1}, {0.0}, true);
  const auto s = tape.sigmoid(x);
  EXPECT_DOUBLE_EQ(s.item(), 0.5);
  tape.backward(tape.sum(s));
  EXPECT_DOUBLE_EQ(x.grad()[0], 0.25);
}

TEST(Elementwise, DomainViolationsThrow) {
  Tape<double> tape;
  EXPECT_THROW(tape.log(Tensor<double>({1, 2}, {1.0, 0.0})), DomainError);
  EXPECT_THROW(tape.log(Tensor<double>({1, 1}, {-1.0})), DomainError);
  EXPECT_THROW(tape.exp(Tensor<double>({1, 1}, {1000.0})), DomainError);
}

TEST(Softmax, UniformOnEqualLogits) {
  Tape<double> tape;
  const auto p = tape.softmax_rows(Tensor<double>({1, 3}, {0, 0, 0}));
  for (double v : p.data()) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
}

TEST(Softmax, RowsAreDistributionsForRandomAndExtremeInputs) {
  num::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Tape<double> tape;
    const double spread = trial < 40 ? 5.0 : 800.0;  // last ones would overflow without max subtraction
    const auto p = tape.softmax_rows(num::uniform_init<double>({4, 7}, -spread, spread, rng));
    for (std::size_t r = 0; r < 4; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < 7; ++c) {
        EXPECT_GE(p.at(r, c), 0.0);
        EXPECT_TRUE(std::isfinite(p.at(r, c)));
        s += p.at(r, c);
      }
      EXPECT_NEAR(s, 1.0, 1e-6);
    }
  }
}

TEST(LayerNorm, NormalizesRowsBeforeGainAndBias) {
  Tape<double> tape;
  const auto y = tape.layer_norm(Tensor<double>({1, 4}, {1, 2, 3, 4}), Tensor<double>::filled({1, 4}, 1.0),
                                 Tensor<double>::zeros({1, 4}), 0.0);
  double mean = 0.0, var = 0.0;
  for (double v : y.data()) mean += v / 4;
  for (double v : y.data()) var += (v - mean) * (v - mean) / 4;
  EXPECT_NEAR(mean, 0.0, 1e-12);
  EXPECT_NEAR(var, 1.0, 1e-12);
}

TEST(Embedding, OutOfRangeIdThrows) {
  Tape<double> tape;
  const auto table = Tensor<double>::zeros({3, 2});
  const std::vector<int> bad{0, 3};
  EXPECT_THROW(tape.embedding_lookup(table, bad), IndexError);
  const std::vector<int> negative{-1};
  EXPECT_THROW(tape.embedding_lookup(table, negative), IndexError);
}

TEST(Embedding, ScattersGradientToRepeatedRows) {
  Tape<double> tape;
  Tensor<double> table({3, 2}, {1, 2, 3, 4, 5, 6}, true);
  const std::vector<int> ids{2, 2, 0};
  tape.backward(tape.sum(tape.embedding_lookup(table, ids)));
  EXPECT_EQ(std::vector<double>(table.grad().begin(), table.grad().end()), (std::vector<double>{1, 1, 0, 0, 2, 2}));
}

TEST(Backward, SumGivesOnes) {
  Tape<double> tape;
  Tensor<double> x({2, 3}, std::vector<double>(6, 0.3), true);
  tape.backward(tape.sum(x));
  for (double g : x.grad()) EXPECT_DOUBLE_EQ(g, 1.0);
}

TEST(Backward, SumOfSquares) {
  Tape<double> tape;
  Tensor<double> x({1, 2}, {1, 2}, true);
  tape.backward(tape.sum(tape.mul(x, x)));
  EXPECT_DOUBLE_EQ(x.grad()[0], 2.0);
  EXPECT_DOUBLE_EQ(x.grad()[1], 4.0);
}

TEST(Backward, NonScalarLossIsAContractError) {
  Tape<double> tape;
  Tensor<double> x({1, 2}, {1, 2}, true);
  EXPECT_THROW(tape.backward(tape.scale(x, 2.0)), ContractError);
}

TEST(Backward, SecondCallIsAContractError) {
  Tape<double> tape;
  Tensor<double> x({1, 2}, {1, 2}, true);
  const auto loss = tape.sum(x);
  tape.backward(loss);
  EXPECT_THROW(tape.backward(loss), ContractError);
}

TEST(Backward, SharedSubexpressionAccumulates) {
  // y = x * x + x through a shared node: dy/dx = 2x + 1.
  Tape<double> tape;
  Tensor<double> x({1, 1}, {3.0}, true);
  const auto xx = tape.mul(x, x);
  tape.backward(tape.sum(tape.add(xx, x)));
  EXPECT_DOUBLE_EQ(x.grad()[0], 7.0);
}

TEST(Backward, DisabledTapeRecordsNothing) {
  Tape<double> tape(num::GradMode::disabled);
  Tensor<double> x({1, 2}, {1, 2}, true);
  const auto y = tape.sigmoid(tape.matmul(x, Tensor<double>({2, 1}, {1, 1})));
  EXPECT_EQ(tape.size(), 0u);
  EXPECT_FALSE(y.requires_grad());
}

TEST(Backward, CompositeMlpMatchesFiniteDifferences) {
  num::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto op = [](auto& t, auto& in) {
      const auto h = t.tanh(t.add_row(t.matmul(in[0], in[1]), in[2]));
      return t.sum(t.sigmoid(t.matmul(h, in[3])));
    };
    EXPECT_LT(testkit::check_op<double>(op, {{3, 4}, {4, 5}, {1, 5}, {5, 2}}, rng), 1e-6);
    EXPECT_LT(testkit::check_op<float>(op, {{3, 4}, {4, 5}, {1, 5}, {5, 2}}, rng), 1e-4);
  }
}

TEST(Backward, ResultsStayFinite) {
  num::Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    Tape<float> tape;
    auto x = num::uniform_init<float>({4, 6}, -30, 30, rng, true);
    const auto loss = tape.sum(tape.log_softmax_rows(tape.layer_norm(x, Tensor<float>::filled({1, 6}, 1),
                                                                     Tensor<float>::zeros({1, 6}))));
    tape.backward(loss);
    EXPECT_TRUE(std::isfinite(loss.item()));
    for (float g : x.grad()) EXPECT_TRUE(std::isfinite(g));
  }
}

class PrimitiveGradient : public ::testing::TestWithParam<std::size_t> {};

TEST_P(PrimitiveGradient, MatchesCentralDifferences) {
  const auto cases = testkit::primitive_cases();
  const auto& c = cases[GetParam()];
  num::Rng rng(1000 + GetParam());
  double worst32 = 0.0, worst64 = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    worst32 = std::max(worst32, c.run32(rng));
    worst64 = std::max(worst64, c.run64(rng));
  }
  EXPECT_LT(worst32, 1e-4) << c.name;
  EXPECT_LT(worst64, 1e-6) << c.name;
}

INSTANTIATE_TEST_SUITE_P(AllPrimitives, PrimitiveGradient,
                         ::testing::Range<std::size_t>(0, testkit::primitive_cases().size()),
                         [](const auto& info) { return testkit::primitive_cases()[info.param].name; });

TEST(Adam, ZeroGradientIsANoOp) {
  Tensor<double> p({1, 3}, {1, -2, 3}, true);
  num::Adam<double> opt({p}, {});
  for (int i = 0; i < 5; ++i) opt.step();
  EXPECT_EQ(values(p), (std::vector<double>{1, -2, 3}));
  EXPECT_EQ(opt.state().t, 5u);
  for (double m : opt.state().m[0]) EXPECT_EQ(m, 0.0);
  for (double v : opt.state().v[0]) EXPECT_EQ(v, 0.0);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  // m_hat = v_hat = 1 after one step with g = 1, so delta = -lr / (1 + eps).
  Tensor<double> p({1, 1}, {0.5}, true);
  p.mutable_grad()[0] = 1.0;
  std::vector<Tensor<double>> params{p};
  auto state = num::make_adam_state<double>(params, {0.001, 0.9, 0.999, 1e-8});
  num::adam_step<double>(params, state);
  EXPECT_NEAR(p[0] - 0.5, -0.001 / (1.0 + 1e-8), 1e-15);
  EXPECT_EQ(state.t, 1u);
}

TEST(Adam, MatchesHandRolledRecurrence) {
  const std::vector<double> grads{0.3, -1.2, 0.05, 2.0, -0.4};
  Tensor<double> p({1, 1}, {0.0}, true);
  std::vector<Tensor<double>> params{p};
  auto state = num::make_adam_state<double>(params, {0.01, 0.8, 0.99, 1e-6});
  double x = 0.0, m = 0.0, v = 0.0;
  for (std::size_t t = 1; t <= grads.size(); ++t) {
    const double g = grads[t - 1];
    p.mutable_grad()[0] = g;
    num::adam_step<double>(params, state);
    m = 0.8 * m + 0.2 * g;
    v = 0.99 * v + 0.01 * g * g;
    const double mh = m / (1 - std::pow(0.8, t)), vh = v / (1 - std::pow(0.99, t));
    x -= 0.01 * mh / (std::sqrt(vh) + 1e-6);
    EXPECT_NEAR(p[0], x, 1e-14);
  }
}

TEST(Adam, IdenticalParametersStayIdentical) {
  num::Rng rng(3);
  Tensor<double> a({1, 4}, {0.1, 0.2, 0.3, 0.4}, true);
  Tensor<double> b({1, 4}, {0.1, 0.2, 0.3, 0.4}, true);
  std::vector<Tensor<double>> params{a, b};
  auto state = num::make_adam_state<double>(params);
  for (int step = 0; step < 50; ++step) {
    for (std::size_t i = 0; i < 4; ++i) a.mutable_grad()[i] = b.mutable_grad()[i] = rng.normal();
    num::adam_step<double>(params, state);
  }
  EXPECT_EQ(values(a), values(b));
}

TEST(Adam, MismatchedStateIsADimensionError) {
  std::vector<Tensor<double>> one{Tensor<double>::zeros({1, 2}, true)};
  std::vector<Tensor<double>> two{Tensor<double>::zeros({1, 2}, true), Tensor<double>::zeros({1, 2}, true)};
  auto state = num::make_adam_state<double>(one);
  EXPECT_THROW(num::adam_step<double>(two, state), DimensionError);
  std::vector<Tensor<double>> wider{Tensor<double>::zeros({1, 3}, true)};
  EXPECT_THROW(num::adam_step<double>(wider, state), DimensionError);
}

TEST(Random, UniformUsesTopFiftyThreeBits) {
  num::Rng a(42);
  std::mt19937_64 reference(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(), static_cast<double>(reference() >> 11) * 0x1.0p-53);
}

TEST(Random, SameSeedSameInit) {
  num::Rng a(9), b(9);
  const auto x = num::xavier_init<float>(16, 8, a);
  const auto y = num::xavier_init<float>(16, 8, b);
  EXPECT_EQ(std::vector<float>(x.data().begin(), x.data().end()), std::vector<float>(y.data().begin(), y.data().end()));
}

TEST(Random, XavierBoundsAndVariance) {
  num::Rng rng(17);
  const double bound = std::sqrt(6.0 / 512.0);
  const auto w = num::xavier_init<double>(256, 256, rng);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_LE(std::abs(w[i * 97 % w.size()]), bound);
  double s = 0.0, ss = 0.0;
  const std::size_t n = 10000;
  for (std::size_t i = 0; i < n; ++i) {
    s += w[i];
    ss += w[i] * w[i];
  }
  const double var = ss / n - (s / n) * (s / n);
  EXPECT_NEAR(var, 2.0 / 512.0, 0.1 * 2.0 / 512.0);
}

TEST(Random, ShuffleIsAPermutation) {
  num::Rng rng(4);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  rng.shuffle(std::span<int>(v));
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_NE(v, sorted);
}
