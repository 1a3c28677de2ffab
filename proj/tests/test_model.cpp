#include "robust_trim/errors.hpp"
#include "robust_trim/model.hpp"
#include "support.hpp"

#include <Eigen/Cholesky>
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

using namespace robust_trim;
using test_support::random_dataset;
using test_support::random_vector;

namespace {

Dataset two_column(std::initializer_list<double> xs, std::initializer_list<double> ys)
{
    Matrix f(static_cast<Index>(xs.size()), 1);
    Index i = 0;
    for (double v : xs)
        f(i++, 0) = v;
    Vector y(static_cast<Index>(ys.size()));
    i = 0;
    for (double v : ys)
        y[i++] = v;
    return Dataset::with_intercept(f, y);
}

} // namespace

TEST(Dataset, RejectsInvalidShapes)
{
    EXPECT_THROW(Dataset(Matrix::Ones(3, 1), Vector::Zero(3)), InvalidArgument);
    EXPECT_THROW(Dataset(Matrix::Ones(3, 2), Vector::Zero(2)), DimensionMismatch);
    EXPECT_THROW(Dataset(Matrix::Ones(0, 2), Vector::Zero(0)), InvalidArgument);
    Matrix x = Matrix::Ones(3, 2);
    x(1, 0) = 0.5;
    EXPECT_THROW(Dataset(x, Vector::Zero(3)), InvalidArgument);
    x = Matrix::Ones(3, 2);
    x(2, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(Dataset(x, Vector::Zero(3)), InvalidArgument);
    Vector y = Vector::Zero(3);
    y[0] = std::numeric_limits<double>::infinity();
    EXPECT_THROW(Dataset(Matrix::Ones(3, 2), y), InvalidArgument);
    EXPECT_NO_THROW(Dataset(Matrix::Ones(1, 2), Vector::Zero(1)));
}

TEST(Config, ValidatesTrimmingRange)
{
    TrimPenaltyConfig cfg;
    cfg.h = 5;
    EXPECT_NO_THROW(cfg.validate(10));
    EXPECT_NO_THROW(cfg.validate(9));
    cfg.h = 4;
    EXPECT_THROW(cfg.validate(9), InvalidArgument);
    cfg.h = 11;
    EXPECT_THROW(cfg.validate(10), InvalidArgument);
    cfg.h = 10;
    cfg.lambda1 = -1e-3;
    EXPECT_THROW(cfg.validate(10), InvalidArgument);
    cfg.lambda1 = 0.0;
    cfg.gamma = 0.5;
    EXPECT_THROW(cfg.validate(10), InvalidArgument);
}

TEST(Config, DefaultTrimmingSize)
{
    EXPECT_EQ(default_h(100), 75);
    EXPECT_EQ(default_h(8), 6);
    EXPECT_EQ(default_h(5), 4);
    EXPECT_EQ(default_h(1), 1);
}

TEST(Residuals, DirectArithmetic)
{
    const Dataset d = two_column({2.0}, {5.0});
    Coefficients b(2);
    b << 1.0, 1.0;
    EXPECT_DOUBLE_EQ(residuals(d, b)[0], 2.0);
}

TEST(Residuals, ZeroCoefficientsReturnResponse)
{
    const Dataset d = random_dataset(7, 3, 1);
    EXPECT_EQ(residuals(d, Coefficients::Zero(3)), d.y());
}

TEST(Residuals, NoiselessFitIsZero)
{
    Coefficients truth;
    const Dataset d = random_dataset(20, 4, 2, 0.0, &truth);
    EXPECT_LE(residuals(d, truth).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Residuals, ChecksDimensions)
{
    const Dataset d = random_dataset(5, 3, 3);
    EXPECT_THROW(residuals(d, Coefficients::Zero(2)), DimensionMismatch);
}

TEST(TrimWeights, KeepsSmallest)
{
    Vector r2(3);
    r2 << 4.0, 1.0, 9.0;
    EXPECT_EQ(trim_weights(r2, 2).indices(), (std::vector<Index>{0, 1}));
}

TEST(TrimWeights, FullSetIsAllOnes)
{
    Vector r2(4);
    r2 << 3.0, 0.0, 2.0, 1.0;
    EXPECT_EQ(trim_weights(r2, 4).weights(), Vector::Ones(4));
}

TEST(TrimWeights, TiesGoToLowestIndex)
{
    EXPECT_EQ(trim_weights(Vector::Ones(3), 2).indices(), (std::vector<Index>{0, 1}));
    Vector r2(5);
    r2 << 2.0, 1.0, 2.0, 2.0, 0.0;
    EXPECT_EQ(trim_weights(r2, 3).indices(), (std::vector<Index>{0, 1, 4}));
}

TEST(TrimWeights, AlwaysExactlyH)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> small(0, 3);
    for (int rep = 0; rep < 200; ++rep) {
        const Index n = 1 + rep % 17;
        Vector r2(n);
        for (Index i = 0; i < n; ++i)
            r2[i] = small(rng); // many ties
        for (Index h = 1; h <= n; ++h) {
            const TrimSet t = trim_weights(r2, h);
            ASSERT_EQ(t.h(), h);
            ASSERT_DOUBLE_EQ(t.weights().sum(), static_cast<double>(h));
            // every kept value is <= every dropped value
            double kept_max = -1.0, dropped_min = 1e9;
            for (Index i = 0; i < n; ++i) {
                if (t.contains(i))
                    kept_max = std::max(kept_max, r2[i]);
                else
                    dropped_min = std::min(dropped_min, r2[i]);
            }
            ASSERT_LE(kept_max, dropped_min);
        }
    }
}

TEST(TrimWeights, RejectsBadH)
{
    EXPECT_THROW(trim_weights(Vector::Ones(3), 0), InvalidArgument);
    EXPECT_THROW(trim_weights(Vector::Ones(3), 4), InvalidArgument);
}

TEST(TrimSet, ValidatesIndices)
{
    EXPECT_THROW(TrimSet({0, 0}, 3), InvalidArgument);
    EXPECT_THROW(TrimSet({0, 3}, 3), InvalidArgument);
    EXPECT_THROW(TrimSet({}, 3), InvalidArgument);
    const TrimSet t({2, 0}, 3);
    EXPECT_EQ(t.indices(), (std::vector<Index>{0, 2}));
    EXPECT_TRUE(t.contains(2));
    EXPECT_FALSE(t.contains(1));
}

TEST(Objective, HandComputedValue)
{
    // beta = (1, 1), feature column zero, so r = y - 1 = (2, 1, 3).
    Matrix x(3, 2);
    x << 1, 0, 1, 0, 1, 0;
    Vector y(3);
    y << 3, 2, 4;
    const Dataset d(x, y);
    TrimPenaltyConfig cfg;
    cfg.h = 2;
    cfg.lambda1 = 1.0;
    cfg.lambda2 = 0.5;
    Coefficients b(2);
    b << 1.0, 1.0;
    EXPECT_NEAR(objective(d, b, cfg), 14.0 / 3.0, 1e-14);
}

TEST(Objective, UntrimmedUnpenalizedIsMeanSquaredResidual)
{
    const Dataset d = random_dataset(13, 4, 5);
    const Coefficients b = random_vector(4, 6);
    TrimPenaltyConfig cfg;
    cfg.h = 13;
    EXPECT_NEAR(objective(d, b, cfg), residuals(d, b).squaredNorm() / 13.0, 1e-13);
}

TEST(Objective, MatchesSortingEvaluator)
{
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Index n = 5 + static_cast<Index>(s % 20);
        const Dataset d = random_dataset(n, 3, 100 + s);
        const Coefficients b = random_vector(3, 200 + s);
        TrimPenaltyConfig cfg;
        cfg.h = default_h(n);
        cfg.lambda1 = 0.3;
        cfg.lambda2 = 0.2;
        EXPECT_NEAR(objective(d, b, cfg), test_support::naive_objective(d, b, cfg.h, 0.3, 0.2), 1e-12);
    }
}

TEST(Objective, EqualsMinimumOverAllSubsets)
{
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Index n = 4 + static_cast<Index>(s % 7);
        const Dataset d = random_dataset(n, 2, 300 + s);
        const Coefficients b = random_vector(2, 400 + s);
        TrimPenaltyConfig cfg;
        cfg.h = (n + 1) / 2 + static_cast<Index>(s % 2);
        cfg.lambda1 = 0.1;
        cfg.lambda2 = 0.05;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& sub : test_support::all_subsets(n, cfg.h))
            best = std::min(best, trimmed_loss(d, b, TrimSet(sub, n)) + penalty(b, cfg));
        EXPECT_NEAR(objective(d, b, cfg), best, 1e-13);
    }
}

TEST(Objective, InvariantUnderRowPermutation)
{
    const Dataset d = random_dataset(15, 4, 7);
    std::vector<Index> order(15);
    std::iota(order.begin(), order.end(), Index{0});
    std::mt19937_64 rng(8);
    std::shuffle(order.begin(), order.end(), rng);
    const Dataset q = d.permuted(order);
    TrimPenaltyConfig cfg;
    cfg.h = 11;
    cfg.lambda1 = 0.2;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Coefficients b = random_vector(4, 500 + s);
        EXPECT_NEAR(objective(d, b, cfg), objective(q, b, cfg), 1e-12);
    }
}

TEST(Objective, LipschitzUnderSmallPerturbations)
{
    const Dataset d = random_dataset(30, 5, 9);
    TrimPenaltyConfig cfg;
    cfg.h = 23;
    cfg.lambda1 = 0.4;
    cfg.lambda2 = 0.3;
    std::mt19937_64 rng(10);
    std::normal_distribution<double> z(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const Coefficients b = random_vector(5, 600 + rep);
        Coefficients eps(5);
        for (Index j = 0; j < 5; ++j)
            eps[j] = z(rng);
        eps *= 1e-8 / eps.norm();
        const Vector r = residuals(d, b);
        double k = cfg.lambda1 * std::sqrt(5.0) + 2.0 * cfg.lambda2 * (b.norm() + 1.0);
        for (Index i = 0; i < d.n(); ++i) {
            const double v = d.x().row(i).norm();
            k += 2.0 / 30.0 * v * (std::abs(r[i]) + v);
        }
        EXPECT_LE(std::abs(objective(d, b + eps, cfg) - objective(d, b, cfg)), k * eps.norm() + 1e-15);
    }
}

TEST(Penalty, InterceptExemption)
{
    Coefficients b(3);
    b << 2.0, -1.0, 0.5;
    TrimPenaltyConfig cfg;
    cfg.lambda1 = 1.0;
    cfg.lambda2 = 2.0;
    EXPECT_DOUBLE_EQ(penalty(b, cfg), 3.5 + 2.0 * 5.25);
    cfg.penalize_intercept = false;
    EXPECT_DOUBLE_EQ(penalty(b, cfg), 1.5 + 2.0 * 1.25);
}

TEST(Seminorm, ZeroDelta)
{
    const Dataset d = random_dataset(6, 3, 12);
    EXPECT_EQ(trimmed_seminorm(d, Coefficients::Zero(3), TrimSet({0, 2, 3, 5}, 6)), 0.0);
}

TEST(Seminorm, FullSetReduction)
{
    const Dataset d = random_dataset(9, 3, 13);
    const Coefficients delta = random_vector(3, 14);
    EXPECT_NEAR(trimmed_seminorm(d, delta, TrimSet::all(9)), (d.x() * delta).squaredNorm() / 9.0, 1e-13);
}

TEST(Seminorm, MatchesDenseDiagonalProduct)
{
    const Dataset d = random_dataset(4, 2, 15);
    const Coefficients delta = random_vector(2, 16);
    const TrimSet t({1, 3}, 4);
    Matrix D = Matrix::Zero(4, 4);
    D(1, 1) = 1.0;
    D(3, 3) = 1.0;
    const double dense = (delta.transpose() * d.x().transpose() * D * d.x() * delta)(0, 0) / 4.0;
    EXPECT_NEAR(trimmed_seminorm(d, delta, t), dense, 1e-13);
}

TEST(Seminorm, QuadraticInScale)
{
    const Dataset d = random_dataset(10, 4, 17);
    const Coefficients delta = random_vector(4, 18);
    const TrimSet t({0, 1, 2, 5, 6, 9}, 10);
    const double base = trimmed_seminorm(d, delta, t);
    for (double c : {-3.0, -0.5, 0.0, 0.25, 2.0, 10.0})
        EXPECT_NEAR(trimmed_seminorm(d, c * delta, t), c * c * base, 1e-12 * (1.0 + c * c * base));
}

TEST(Normalize, CompliantColumnsUntouched)
{
    Matrix f(4, 1);
    f << 1.0, -1.0, 0.5, 0.0; // ratio sqrt(2.25/4) < 1
    const Dataset d = Dataset::with_intercept(f, Vector::Zero(4));
    const Normalization nz = normalize_columns(d);
    EXPECT_EQ(nz.data.x(), d.x());
    EXPECT_EQ(nz.scale, Vector::Ones(2));
    EXPECT_EQ(nz.rescaled_columns, 0);
}

TEST(Normalize, HalvesRatioTwoColumn)
{
    Matrix f(4, 1);
    f << 2.0, -2.0, 2.0, -2.0; // ||x||/sqrt(n) = 2
    const Dataset d = Dataset::with_intercept(f, Vector::Zero(4));
    const Normalization nz = normalize_columns(d);
    EXPECT_DOUBLE_EQ(nz.scale[1], 0.5);
    EXPECT_DOUBLE_EQ(nz.data.x()(0, 1), 1.0);
    EXPECT_EQ(nz.rescaled_columns, 1);
}

TEST(Normalize, BoundHoldsAfterwards)
{
    for (std::uint64_t s = 0; s < 20; ++s) {
        Dataset d = random_dataset(25, 6, 700 + s);
        Matrix x = d.x();
        x.col(2) *= 50.0;
        x.col(3) *= 1e-3;
        const Normalization nz = normalize_columns(Dataset(x, d.y()));
        for (Index j = 0; j < 6; ++j)
            EXPECT_LE(nz.data.x().col(j).norm() / 5.0, 1.0 + 1e-12);
        EXPECT_EQ(nz.scale[3], 1.0);
    }
}

TEST(Normalize, DegenerateColumn)
{
    Matrix f = Matrix::Zero(5, 2);
    f.col(0).setOnes();
    EXPECT_THROW(normalize_columns(Dataset::with_intercept(f, Vector::Zero(5))), DegenerateColumn);
}

TEST(Normalize, RoundTripPreservesPredictions)
{
    Dataset d = random_dataset(40, 4, 19);
    Matrix x = d.x();
    x.col(1) *= 30.0;
    const Dataset raw(x, d.y());
    const Normalization nz = normalize_columns(raw);
    // least squares on the normalized design via normal equations
    const Matrix& xn = nz.data.x();
    const Coefficients bn = (xn.transpose() * xn).ldlt().solve(xn.transpose() * raw.y());
    const Coefficients b = denormalize(bn, nz.scale);
    EXPECT_LE((raw.x() * b - xn * bn).cwiseAbs().maxCoeff(), 1e-10);
}
