#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "oracle_helpers.hpp"
#include "ruvn/regen.hpp"
#include "ruvn/shuffle.hpp"

using ruvn::BinaryMatrix;
using ruvn::Matrix;
using ruvn::Permutation;
using ruvn::TransitionKernel;
using ruvn::Xoshiro256;

namespace {

BinaryMatrix random_binary(std::size_t d, Xoshiro256& rng) {
    BinaryMatrix m(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = rng.next() & 1;
    return m;
}

std::vector<std::vector<std::size_t>> all_permutations(std::size_t d) {
    std::vector<std::size_t> base(d);
    for (std::size_t k = 0; k < d; ++k) base[k] = k;
    std::vector<std::vector<std::size_t>> out;
    do {
        out.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

} // namespace

TEST(MarkMostRecent, ThreeUpdatesFixTheMatrix) {
    // Applying the updates for 2, then 0, then 1 (0-based) pins every entry,
    // whatever the starting matrix was.
    const BinaryMatrix expected = [] {
        BinaryMatrix m(3);
        m(0, 0) = 1; m(0, 2) = 1;
        m(1, 0) = 1; m(1, 1) = 1; m(1, 2) = 1;
        m(2, 2) = 1;
        return m;
    }();
    Xoshiro256 rng(3, 0);
    for (int trial = 0; trial < 20; ++trial) {
        BinaryMatrix m = random_binary(3, rng);
        m = ruvn::mark_most_recent(m, 2);
        m = ruvn::mark_most_recent(m, 0);
        m = ruvn::mark_most_recent(m, 1);
        EXPECT_TRUE(m == expected);
    }
}

TEST(MarkMostRecent, AscendingSweepYieldsLowerTriangle) {
    Xoshiro256 rng(4, 0);
    for (std::size_t d : {2, 3, 5, 7}) {
        BinaryMatrix m = random_binary(d, rng);
        for (std::size_t j = 0; j < d; ++j) m = ruvn::mark_most_recent(m, j);
        EXPECT_TRUE(m == BinaryMatrix::lower_triangular_ones(d));
    }
}

TEST(MarkMostRecent, Idempotent) {
    Xoshiro256 rng(5, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const BinaryMatrix m = random_binary(4, rng);
        for (std::size_t j = 0; j < 4; ++j) {
            const BinaryMatrix once = ruvn::mark_most_recent(m, j);
            EXPECT_TRUE(ruvn::mark_most_recent(once, j) == once);
        }
    }
}

// Repeats collapse to the last application: T_i o T_J o T_i == T_i o T_J.
TEST(MarkMostRecent, RepetitionCollapses) {
    Xoshiro256 rng(6, 0);
    for (std::size_t d = 2; d <= 5; ++d) {
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t i = static_cast<std::size_t>(rng.below(d));
            const std::size_t len = static_cast<std::size_t>(rng.below(13));
            std::vector<std::size_t> seq(len);
            for (auto& s : seq) s = static_cast<std::size_t>(rng.below(d));
            for (int m_trial = 0; m_trial < 5; ++m_trial) {
                const BinaryMatrix start = random_binary(d, rng);
                BinaryMatrix with_prefix = ruvn::mark_most_recent(start, i);
                BinaryMatrix without = start;
                for (std::size_t s : seq) {
                    with_prefix = ruvn::mark_most_recent(with_prefix, s);
                    without = ruvn::mark_most_recent(without, s);
                }
                EXPECT_TRUE(ruvn::mark_most_recent(with_prefix, i) ==
                            ruvn::mark_most_recent(without, i));
            }
        }
    }
}

// A full sweep through any permutation erases the starting matrix.
TEST(MarkMostRecent, StartIndependenceAfterFullSweep) {
    Xoshiro256 rng(7, 0);
    for (std::size_t d = 2; d <= 5; ++d) {
        for (const auto& perm : all_permutations(d)) {
            const BinaryMatrix a = random_binary(d, rng);
            const BinaryMatrix b = random_binary(d, rng);
            BinaryMatrix ra = a, rb = b;
            for (std::size_t j : perm) {
                ra = ruvn::mark_most_recent(ra, j);
                rb = ruvn::mark_most_recent(rb, j);
            }
            ASSERT_TRUE(ra == rb);
            EXPECT_TRUE(ra.postwarmup_invariants_hold());
        }
    }
}

TEST(DominanceMatrix, IdentityRecencyIsLowerTriangle) {
    for (std::size_t d : {1, 3, 6}) {
        std::vector<std::size_t> recency(d);
        for (std::size_t k = 0; k < d; ++k) recency[k] = d - 1 - k; // most recent first
        EXPECT_TRUE(ruvn::dominance_matrix(Permutation(recency)) ==
                    BinaryMatrix::lower_triangular_ones(d));
    }
}

TEST(DominanceMatrix, MatchesOperatorExample) {
    // Recency (1,0,2) in 0-based indices == the T_1 o T_0 o T_2 image.
    const BinaryMatrix pi = ruvn::dominance_matrix(Permutation({1, 0, 2}));
    BinaryMatrix expected(3);
    expected(0, 0) = 1; expected(0, 2) = 1;
    expected(1, 0) = 1; expected(1, 1) = 1; expected(1, 2) = 1;
    expected(2, 2) = 1;
    EXPECT_TRUE(pi == expected);
}

TEST(DominanceMatrix, InjectiveOnAllPermutations) {
    const std::size_t d = 4;
    std::set<BinaryMatrix> images;
    for (const auto& perm : all_permutations(d)) images.insert(ruvn::dominance_matrix(Permutation(perm)));
    EXPECT_EQ(images.size(), 24u);
}

// d! distinct matrices are reachable after warm-up, and no more.
TEST(DominanceMatrix, WarmupImageHasFactorialCardinality) {
    Xoshiro256 rng(8, 0);
    std::size_t factorial = 1;
    for (std::size_t d = 2; d <= 5; ++d) {
        factorial *= d;
        std::set<BinaryMatrix> images;
        for (const auto& perm : all_permutations(d)) {
            BinaryMatrix m = random_binary(d, rng);
            for (std::size_t j : perm) m = ruvn::mark_most_recent(m, j);
            images.insert(m);
        }
        EXPECT_EQ(images.size(), factorial);
    }
}

TEST(MoveToFront, Examples) {
    // 1-based (2,1,3) with j=3 -> (3,2,1); 0-based below.
    EXPECT_TRUE(ruvn::move_to_front(Permutation({1, 0, 2}), 2) == Permutation({2, 1, 0}));
    EXPECT_TRUE(ruvn::move_to_front(Permutation({1, 0, 2}), 1) == Permutation({1, 0, 2}));
}

TEST(MoveToFront, CommutesWithDominanceMatrix) {
    Xoshiro256 rng(9, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t d = 2 + static_cast<std::size_t>(rng.below(5)); // up to 6
        std::vector<std::size_t> recency(d);
        for (std::size_t k = 0; k < d; ++k) recency[k] = k;
        for (std::size_t k = d; k > 1; --k)
            std::swap(recency[k - 1], recency[static_cast<std::size_t>(rng.below(k))]);
        const Permutation sigma(recency);
        const std::size_t j = static_cast<std::size_t>(rng.below(d));
        EXPECT_TRUE(ruvn::mark_most_recent(ruvn::dominance_matrix(sigma), j) ==
                    ruvn::dominance_matrix(ruvn::move_to_front(sigma, j)));
    }
}

TEST(WarmupComplete, CountsVisitedStates) {
    EXPECT_TRUE(ruvn::warmup_complete({true, true, true}));
    EXPECT_FALSE(ruvn::warmup_complete({true, false, true}));
}

TEST(WarmupComplete, ErgodicChainWarmsUpQuickly) {
    const std::size_t d = 64;
    const Matrix a = oracle::random_matrix(d, 10, 0.0, 1.0);
    const TransitionKernel p = ruvn::build_support_extended(a, 0.01);
    Xoshiro256 rng = Xoshiro256::split(11, 0);
    std::size_t state = static_cast<std::size_t>(rng.below(d));
    std::vector<bool> visited(d, false);
    std::uint64_t steps = 0;
    while (!ruvn::warmup_complete(visited) && steps < 1000000) {
        visited[state] = true;
        state = p.sample(state, rng.uniform01());
        ++steps;
    }
    EXPECT_TRUE(ruvn::warmup_complete(visited));
    EXPECT_LT(steps, 1000000u);
}

TEST(PostWarmup, InvariantsHoldAlongTracedWalk) {
    for (std::size_t d : {3, 8}) {
        const Matrix a = oracle::random_matrix(d, 12 + d, 0.0, 1.0);
        const TransitionKernel p = ruvn::build_support_extended(a, 0.05);
        Xoshiro256 rng = Xoshiro256::split(13, 0);
        std::size_t state = static_cast<std::size_t>(rng.below(d));

        BinaryMatrix pi(d);
        std::vector<bool> visited(d, false);
        bool warm = false;
        for (std::uint64_t t = 0; t < 10000; ++t) {
            visited[state] = true;
            pi = ruvn::mark_most_recent(pi, state);
            if (!warm && ruvn::warmup_complete(visited)) warm = true;
            if (warm) ASSERT_TRUE(pi.postwarmup_invariants_hold()) << "t=" << t;
            state = p.sample(state, rng.uniform01());
        }
        EXPECT_TRUE(warm);
    }
}

// An irreducible aperiodic chain on [d] induces an irreducible chain on the
// d! post-warm-up matrices: a long walk reaches every one of them.
TEST(PostWarmup, InducedChainCoversAllRecencyOrders) {
    const std::size_t d = 4;
    const Matrix a = oracle::random_matrix(d, 77, 0.0, 1.0);
    const TransitionKernel p = ruvn::build_support_extended(a, 0.05);
    Xoshiro256 rng = Xoshiro256::split(19, 0);
    std::size_t state = static_cast<std::size_t>(rng.below(d));

    BinaryMatrix pi(d);
    std::vector<bool> visited(d, false);
    bool warm = false;
    std::set<BinaryMatrix> seen;
    std::size_t factorial = 24;
    for (std::uint64_t t = 0; t < 1000000 && seen.size() < factorial; ++t) {
        visited[state] = true;
        pi = ruvn::mark_most_recent(pi, state);
        if (!warm && ruvn::warmup_complete(visited)) warm = true;
        if (warm) seen.insert(pi);
        state = p.sample(state, rng.uniform01());
    }
    EXPECT_EQ(seen.size(), factorial);
}

TEST(RunGamma, DeterministicScalarChain) {
    const TransitionKernel p(Matrix{{1.0}});
    const auto run = ruvn::run_gamma(p, 5, 3);
    EXPECT_EQ(run.gamma(0, 0), 5u);
    EXPECT_EQ(run.steps, 5u);
    EXPECT_FALSE(run.cap_reached);
}

TEST(RunGamma, TerminationOvershootIsBelowDimension) {
    const TransitionKernel p(Matrix{{0.5, 0.5}, {0.5, 0.5}});
    const auto run = ruvn::run_gamma(p, 100, 17);
    EXPECT_GE(run.gamma.min(), 100u);
    EXPECT_LT(run.gamma.min(), 102u); // min grows at most 1 per step, scan every d=2
}

// Shared-stream equality of the weighted and count-only runners on a strictly
// nonzero matrix.
TEST(RunGamma, MatchesWeightedRunnerOnSharedStream) {
    const std::size_t d = 4;
    for (std::uint64_t seed : {21, 22, 23}) {
        const Matrix a = oracle::scaled_random_matrix(d, seed, 0.6, true);
        const TransitionKernel p = ruvn::build_row_normalized(a);
        const ruvn::CountedMatrixOracle oracle(a);
        const ruvn::RegenState st = ruvn::regen_run(oracle, p, 50, ruvn::kDefaultStepCap, seed);
        const auto gamma_only = ruvn::run_gamma(p, 50, seed);
        EXPECT_TRUE(st.gamma == gamma_only.gamma);
        EXPECT_EQ(st.chain.steps, gamma_only.steps);
    }
}
