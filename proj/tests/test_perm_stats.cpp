#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ewens/perm_stats.hpp"
#include "oracles.hpp"

using namespace ewens;

namespace {
CycleType pp(const char* s) { return parse_partition(s); }

CycleType random_type(Rng& rng, std::size_t n) {
    return sample_cycle_type(EwensParams(0.5 + double(rng() % 4), n), rng);
}
}  // namespace

TEST_CASE("sieve") {
    const PrimeSieve s(100);
    CHECK(s.is_prime(97));
    CHECK_FALSE(s.is_prime(91));
    CHECK_FALSE(s.is_prime(1));
    CHECK(s.largest_prime_factor(24) == 3);
    CHECK(s.largest_prime_factor(1) == 1);
    for (std::size_t x = 2; x <= 100; ++x) {
        const auto f = oracle::factor(x);
        const auto g = s.factor(x);
        REQUIRE(f.size() == g.size());
        std::size_t i = 0;
        for (auto [p, e] : f) {
            CHECK(g[i].first == p);
            CHECK(g[i].second == e);
            ++i;
        }
    }
}

TEST_CASE("phi and order") {
    CHECK(phi(CycleType::identity(9)).is_one());
    CHECK(phi(pp("3+2")).value() == 6);
    CHECK(phi(pp("2+2")).value() == 4);
    CHECK(phi(pp("2+2")).to_string() == "2^2");
    CHECK(order(CycleType::identity(4)).value() == 1);
    CHECK(order(pp("3+2")).value() == 6);
    CHECK(order(pp("2+2")).value() == 2);
    // huge phi stays factored
    const auto big = phi(pp("97+97+97+97+97+97+97+97+97+97+97"));
    CHECK(big.exponent(97) == 11);
    CHECK_FALSE(big.value().has_value());
    CHECK(big.log() == doctest::Approx(11 * std::log(97.0)));

    Rng rng(1);
    for (int t = 0; t < 500; ++t) {
        const auto ct = random_type(rng, 1 + rng() % 30);
        std::uint64_t l = 1;
        long double prod = 1;
        for (const auto& e : ct.entries()) {
            l = std::lcm(l, std::uint64_t(e.length));
            for (std::size_t i = 0; i < e.multiplicity; ++i) prod *= e.length;
        }
        CHECK(order(ct).value() == l);
        if (prod < 1e18L) CHECK(phi(ct).value() == std::uint64_t(prod));
    }
}

TEST_CASE("minimal degree") {
    CHECK(minimal_degree(pp("3+2")) == 2);
    CHECK(minimal_degree(pp("7")) == 7);
    CHECK(minimal_degree(pp("2+1+1+1")) == 2);
    CHECK(minimal_degree(pp("4")) == 4);     // pi^2 moves all 4 points
    CHECK(minimal_degree(pp("6+3")) == 6);   // pi^3 is a product of three transpositions
    CHECK_THROWS(minimal_degree(CycleType::identity(3)));
}

TEST_CASE("minimal degree agrees with literal powers") {
    Rng rng(2);
    for (int t = 0; t < 2000; ++t) {
        const auto ct = random_type(rng, 2 + rng() % 11);
        if (ct.is_identity()) continue;
        std::vector<std::size_t> lengths;
        for (const auto& e : ct.entries())
            for (std::size_t i = 0; i < e.multiplicity; ++i) lengths.push_back(e.length);
        CHECK(minimal_degree(ct) == oracle::minimal_degree_brute(oracle::perm_of(lengths)));
    }
}

TEST_CASE("minimal degree agrees with enumeration over exponents") {
    // moved points of pi^k = sum of l C_l over l not dividing k
    Rng rng(3);
    const PrimeSieve sieve(40);
    for (int t = 0; t < 10000; ++t) {
        const auto ct = random_type(rng, 2 + rng() % 39);
        if (ct.is_identity()) continue;
        const std::uint64_t ord = order(ct, sieve).value().value();
        std::size_t best = ct.n();
        for (std::uint64_t k = 1; k < ord; ++k) {
            std::size_t moved = 0;
            for (const auto& e : ct.entries())
                if (k % e.length != 0) moved += e.length * e.multiplicity;
            best = std::min(best, moved);
        }
        CHECK(minimal_degree(ct, sieve) == best);
    }
}

TEST_CASE("largest prime of phi") {
    CHECK(largest_prime_of_phi(pp("6+4")) == 3);
    CHECK(largest_prime_of_phi(pp("97")) == 97);
    CHECK_FALSE(largest_prime_of_phi(CycleType::identity(5)).has_value());
    Rng rng(4);
    for (int t = 0; t < 1000; ++t) {
        const auto ct = random_type(rng, 1 + rng() % 200);
        std::uint64_t best = 0;
        for (const auto& e : ct.entries())
            for (auto [p, _] : oracle::factor(e.length)) best = std::max(best, p);
        const auto got = largest_prime_of_phi(ct);
        if (best == 0) CHECK_FALSE(got.has_value());
        else CHECK(got == best);
    }
}

TEST_CASE("max common cycle divisor") {
    CHECK(max_common_cycle_divisor(pp("6+4")) == 2);
    CHECK(max_common_cycle_divisor(pp("3+3")) == 3);
    CHECK(max_common_cycle_divisor(pp("12")) == 0);
    CHECK(max_common_cycle_divisor(pp("5+1")) == 1);
    Rng rng(5);
    for (int t = 0; t < 1000; ++t) {
        const auto ct = random_type(rng, 1 + rng() % 60);
        std::size_t best = 0;
        for (std::size_t d = ct.n(); d >= 1 && best == 0; --d) {
            std::size_t c = 0;
            for (const auto& e : ct.entries())
                if (e.length % d == 0) c += e.multiplicity;
            if (c >= 2) best = d;
        }
        CHECK(max_common_cycle_divisor(ct) == best);
    }
}

TEST_CASE("joint cycle probabilities") {
    const std::vector<std::pair<std::size_t, std::size_t>> pairs{{1, 2}};
    const auto rows = estimate_joint_cycle_probs(EwensParams(1.0, 1000), pairs, 20000, Rng(6));
    REQUIRE(rows.size() == 1);
    // independent Poisson(1) and Poisson(1/2)
    CHECK(std::abs(rows[0].both_present.p_hat - (1 - std::exp(-1.0)) * (1 - std::exp(-0.5))) < 0.02);
    CHECK(std::abs(rows[0].i_repeated.p_hat - (1 - 2 * std::exp(-1.0))) < 0.02);
    const std::vector<std::pair<std::size_t, std::size_t>> same{{2, 2}};
    CHECK_THROWS(estimate_joint_cycle_probs(EwensParams(1.0, 10), same, 10, Rng(1)));
    const std::vector<std::pair<std::size_t, std::size_t>> big{{1, 11}};
    CHECK_THROWS(estimate_joint_cycle_probs(EwensParams(1.0, 10), big, 10, Rng(1)));
}

TEST_CASE("order statistics thresholds") {
    const auto f = estimate_order_stats(EwensParams(1.0, 10000), 0.5, 200, Rng(7));
    CHECK(f.minimal_degree_threshold == doctest::Approx(100.0));
    CHECK(f.gcd_threshold == doctest::Approx(std::pow(10000.0, 1.0 - 1.0 / 7.0)));
    const double ln = std::log(10000.0);
    CHECK(f.largest_prime_threshold == doctest::Approx(10000.0 * std::exp(-std::log(ln) * std::sqrt(ln))));
}
