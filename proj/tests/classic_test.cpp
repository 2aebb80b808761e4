#include <gtest/gtest.h>

#include <vector>

#include "oracle_helpers.hpp"
#include "ruvn/classic.hpp"
#include "ruvn/linalg.hpp"

using ruvn::ChainState;
using ruvn::ClassicConfig;
using ruvn::CountedMatrixOracle;
using ruvn::Matrix;
using ruvn::TransitionKernel;
using ruvn::Xoshiro256;

TEST(ClassicRow, DeterministicScalarChainEqualsGeometricPartialSum) {
    const Matrix a{{0.5}};
    const CountedMatrixOracle oracle(a);
    const TransitionKernel p(Matrix{{1.0}});
    for (std::uint64_t reps : {1, 7}) {
        const auto row = ruvn::classic_estimate_row(oracle, p, 0, {reps, 3, 11});
        EXPECT_DOUBLE_EQ(row.values[0], 1.875);
        EXPECT_FALSE(row.overflow);
    }
}

TEST(ClassicRow, ZeroLengthWalksGiveIdentityRow) {
    const Matrix a = oracle::random_matrix(4, 5);
    const CountedMatrixOracle oracle(a);
    const TransitionKernel p = ruvn::build_support_extended(a, 0.05);
    const auto row = ruvn::classic_estimate_row(oracle, p, 2, {9, 0, 3});
    for (std::size_t j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(row.values[j], j == 2 ? 1.0 : 0.0);
}

TEST(ClassicRow, MatchesNeumannSumOnDeterministicChain) {
    // d = 1 keeps the walk deterministic, so the estimate has zero variance
    // and equals the truncated series exactly.
    const Matrix a{{0.7}};
    const CountedMatrixOracle oracle(a);
    const TransitionKernel p(Matrix{{1.0}});
    for (std::uint64_t rk : {0, 1, 5, 12}) {
        const auto row = ruvn::classic_estimate_row(oracle, p, 0, {3, rk, 1});
        EXPECT_DOUBLE_EQ(row.values[0], ruvn::neumann_partial_sum(a, rk)(0, 0));
    }
}

TEST(ClassicMatrix, TrivialConfigsAndAccessAccounting) {
    const Matrix a{{0.5}};
    {
        const CountedMatrixOracle oracle(a);
        const TransitionKernel p(Matrix{{1.0}});
        const auto report = ruvn::classic_estimate_matrix(oracle, p, {5, 3, 2});
        EXPECT_DOUBLE_EQ(report.c_hat(0, 0), 1.875);
        EXPECT_EQ(report.accesses, 5u * 3u);
    }
    const Matrix a4 = oracle::random_matrix(4, 21);
    const CountedMatrixOracle oracle(a4);
    const TransitionKernel p = ruvn::build_support_extended(a4, 0.02);
    const auto identity = ruvn::classic_estimate_matrix(oracle, p, {1, 0, 9});
    EXPECT_TRUE(identity.c_hat == Matrix::identity(4));

    const std::uint64_t before = oracle.accesses();
    const auto report = ruvn::classic_estimate_matrix(oracle, p, {13, 7, 9});
    EXPECT_EQ(oracle.accesses() - before, 4u * 13u * 7u);
    EXPECT_EQ(report.accesses, 4u * 13u * 7u);
}

// Fixed-k unbiasedness of the weighted indicator: the mean of W_k 1[X(k)=j]
// over replications estimates the (i,j) entry of A^k.
TEST(ClassicWeights, TruncatedTermsAreUnbiased) {
    const std::size_t d = 3;
    const std::uint64_t replications = 200000;
    for (std::uint64_t seed : {101, 202}) {
        const Matrix a = oracle::scaled_random_matrix(d, seed, 0.5);
        const TransitionKernel p = ruvn::build_row_normalized(a);
        const CountedMatrixOracle counted(a);
        const std::size_t start = 0;
        const std::size_t max_k = 3;

        // samples[k][j] collects W_k 1[X(k)=j] per replication.
        std::vector<std::vector<std::vector<double>>> samples(
            max_k + 1, std::vector<std::vector<double>>(d));
        for (std::uint64_t r = 0; r < replications; ++r) {
            ChainState chain(start, Xoshiro256::split(seed * 7 + 1, r));
            double w = 1.0;
            for (std::size_t j = 0; j < d; ++j)
                samples[0][j].push_back(j == start ? 1.0 : 0.0);
            for (std::size_t k = 1; k <= max_k; ++k) {
                const std::size_t prev = chain.current;
                const std::size_t next = ruvn::step(chain, p);
                w *= ruvn::weight_ratio(counted, p, prev, next);
                for (std::size_t j = 0; j < d; ++j)
                    samples[k][j].push_back(j == next ? w : 0.0);
            }
        }

        Matrix power = Matrix::identity(d);
        for (std::size_t k = 0; k <= max_k; ++k) {
            for (std::size_t j = 0; j < d; ++j) {
                const auto stats = oracle::mean_se(samples[k][j]);
                EXPECT_LE(std::abs(stats.mean - power(start, j)), 4.0 * stats.se + 1e-12)
                    << "seed " << seed << " k " << k << " j " << j;
            }
            power = power * a;
        }
    }
}

// Row estimate lands near the exact inverse once replication noise is tamed.
TEST(ClassicRow, ConfidenceIntervalCoversExactInverse) {
    const Matrix a{{0.4, 0.2}, {0.2, 0.4}};
    const Matrix truth{{1.875, 0.625}, {0.625, 1.875}}; // inverse of I - A
    const TransitionKernel p = ruvn::build_row_normalized(a);
    const CountedMatrixOracle counted(a);

    const std::size_t runs = 8;
    std::vector<std::vector<double>> entries(2);
    for (std::size_t run = 0; run < runs; ++run) {
        const auto row = ruvn::classic_estimate_row(counted, p, 0, {12500, 60, 1000 + run});
        entries[0].push_back(row.values[0]);
        entries[1].push_back(row.values[1]);
    }
    for (std::size_t j = 0; j < 2; ++j) {
        const auto stats = oracle::mean_se(entries[j]);
        EXPECT_LE(std::abs(stats.mean - truth(0, j)), 3.0 * stats.se + 1e-3)
            << "entry " << j;
    }
}
