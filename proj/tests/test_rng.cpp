#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <vector>

#include "sapt/permutation.hpp"
#include "sapt/rng.hpp"

using namespace sapt;

TEST_CASE("streams are deterministic and label-separated") {
    RngStream a(7, "x", 1, 2);
    RngStream b(7, "x", 1, 2);
    RngStream c(7, "y", 1, 2);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t va = a.next_u64();
        all_equal = all_equal && (va == b.next_u64());
        any_diff = any_diff || (va != c.next_u64());
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("next_below is within range and roughly uniform") {
    RngStream rng(3, "bounded");
    std::vector<int> counts(7, 0);
    const int draws = 70000;
    for (int i = 0; i < draws; ++i) {
        const auto v = rng.next_below(7);
        REQUIRE(v < 7);
        counts[static_cast<std::size_t>(v)]++;
    }
    for (int k = 0; k < 7; ++k) {
        CHECK(std::abs(counts[static_cast<std::size_t>(k)] - draws / 7) < 5 * std::sqrt(draws / 7.0));
    }
}

TEST_CASE("restricted permutation: n = 2 fixes everything") {
    RngStream rng(1, "perm");
    std::vector<int> p;
    for (int i = 0; i < 50; ++i) {
        draw_restricted_permutation(rng, 2, 1, p);
        CHECK(p[0] == 0);
        CHECK(p[1] == 1);
    }
}

TEST_CASE("restricted permutation: fixed point never moves (n = 8)") {
    RngStream rng(11, "perm8");
    std::vector<int> p;
    for (int i = 0; i < 10000; ++i) {
        draw_restricted_permutation(rng, 8, 3, p);
        REQUIRE(p[3] == 3);
        // valid permutation
        std::vector<bool> seen(8, false);
        for (int v : p) {
            REQUIRE(!seen[static_cast<std::size_t>(v)]);
            seen[static_cast<std::size_t>(v)] = true;
        }
    }
}

TEST_CASE("restricted permutation: uniform over the (n-1)! images") {
    // n = 3 fixing 1: two possible permutations, frequency 1/2 each
    {
        RngStream rng(5, "perm3");
        std::vector<int> p;
        int identity = 0;
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) {
            draw_restricted_permutation(rng, 3, 1, p);
            if (p[0] == 0) ++identity;
        }
        CHECK(std::abs(identity - draws / 2) < 4 * std::sqrt(draws * 0.25));
    }
    // n = 4 fixing 0: 6 permutations, chi-square on counts
    {
        RngStream rng(6, "perm4");
        std::vector<int> p;
        std::map<std::vector<int>, int> counts;
        const int draws = 60000;
        for (int i = 0; i < draws; ++i) {
            draw_restricted_permutation(rng, 4, 0, p);
            counts[p]++;
        }
        REQUIRE(counts.size() == 6);
        double chi2 = 0.0;
        const double expect = draws / 6.0;
        for (const auto& [perm, c] : counts) {
            chi2 += (c - expect) * (c - expect) / expect;
        }
        CHECK(chi2 < 20.5); // chi-square(5) 0.999 quantile
    }
}

TEST_CASE("gaussian and exponential draws have the right first moments") {
    RngStream rng(21, "mom");
    const int n = 1000000;
    double gs = 0.0, gss = 0.0, es = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.next_gaussian();
        gs += g;
        gss += g * g;
        es += rng.next_exponential();
    }
    const double gmean = gs / n;
    const double gvar = gss / n - gmean * gmean;
    CHECK(std::abs(gmean) < 0.004);       // ~ 3 sigma
    CHECK(std::abs(gvar - 1.0) < 0.005);
    CHECK(std::abs(es / n - 1.0) < 0.004);
}
