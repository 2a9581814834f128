#include <doctest.h>

#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "ewens/invgen.hpp"
#include "ewens/sumset.hpp"
#include "oracles.hpp"

using namespace ewens;

namespace {

std::size_t closure_size(const std::vector<oracle::Perm>& gens, std::size_t n) {
    oracle::Perm id(n);
    for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<int>(i);
    std::set<oracle::Perm> seen{id};
    std::vector<oracle::Perm> frontier{id};
    while (!frontier.empty()) {
        std::vector<oracle::Perm> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                auto y = oracle::compose(g, x);
                if (seen.insert(y).second) next.push_back(std::move(y));
            }
        frontier = std::move(next);
    }
    return seen.size();
}

// Every choice of conjugates generates S_n.
bool invgen_by_conjugates(const std::vector<CycleType>& classes) {
    const std::size_t n = classes.front().n();
    const auto perms = oracle::all_perms(static_cast<int>(n));
    std::vector<std::vector<oracle::Perm>> members(classes.size());
    for (const auto& p : perms) {
        const auto ct = CycleType::from_lengths(oracle::cycle_lengths(p));
        for (std::size_t i = 0; i < classes.size(); ++i)
            if (ct == classes[i]) members[i].push_back(p);
    }
    std::size_t full = 1;
    for (std::size_t i = 2; i <= n; ++i) full *= i;
    std::vector<std::size_t> idx(classes.size(), 0);
    for (;;) {
        std::vector<oracle::Perm> gens;
        for (std::size_t i = 0; i < classes.size(); ++i) gens.push_back(members[i][idx[i]]);
        if (closure_size(gens, n) != full) return false;
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == members[i].size()) idx[i++] = 0;
        if (i == idx.size()) return true;
    }
}

std::vector<CycleType> cls(std::initializer_list<const char*> parts) {
    std::vector<CycleType> v;
    for (const char* p : parts) v.push_back(parse_partition(p));
    return v;
}

}  // namespace

TEST_CASE("h formula") {
    CHECK(h_of_alpha(1.0) == HValue{4, false});
    CHECK(h_of_alpha(0.5) == HValue{2, false});
    CHECK(h_of_alpha(0.3) == HValue{2, false});
    CHECK(h_of_alpha(1.0 / std::log(2.0)).infinite);
    CHECK(h_of_alpha(1.5).infinite);
    CHECK(h_of_alpha(1.0).to_string() == "4");
    CHECK(h_of_alpha(3.0).to_string() == "inf");
    CHECK_THROWS(h_of_alpha(0.0));
    unsigned prev = 0;
    const double top = 1.0 / std::log(2.0);
    for (int i = 1; i < 2000; ++i) {
        const double a = top * i / 2000.0;
        const auto h = h_of_alpha(a);
        REQUIRE_FALSE(h.infinite);
        CHECK(h.value >= 2);
        CHECK(h.value >= prev);
        prev = h.value;
    }
}

TEST_CASE("jump points of h") {
    const auto d = discontinuities_of_h(4);
    REQUIRE(d.size() == 4);
    CHECK(d[0] == doctest::Approx(0.72135).epsilon(1e-5));
    CHECK(d[2] == doctest::Approx(1.08202).epsilon(1e-5));
    CHECK(d.back() == doctest::Approx(1.44270).epsilon(1e-5));
    // h jumps exactly there
    for (unsigned m = 2; m <= 4; ++m) {
        const double a = d[m - 2];
        CHECK(h_of_alpha(a - 1e-9).value == m);
        CHECK(h_of_alpha(a + 1e-9).value == m + 1);
    }
    CHECK(distance_to_discontinuity(0.72135) < 1e-4);
    CHECK(distance_to_discontinuity(1.0) == doctest::Approx(1.0 - (2.0 / 3.0) / std::log(2.0)));  // nearest jump is m = 3
    CHECK_THROWS(discontinuities_of_h(1));
}

TEST_CASE("common fixed-set probability") {
    const auto one = estimate_common_fixed_prob(1.0, 1000, 1, 1, 500, 4000, Rng(1));
    CHECK(one.p_hat >= 0.99);
    const auto tiny = estimate_common_fixed_prob(1e-6, 1000, 2, 1, 500, 2000, Rng(2));
    CHECK(tiny.p_hat <= 0.01);
    const auto four = estimate_common_fixed_prob(1.0, 10000, 4, 32, 5000, 2000, Rng(3));
    CHECK(four.p_hat + 5.0 * four.ci_width() < 1.0);
    CHECK_THROWS(estimate_common_fixed_prob(1.0, 100, 2, 1, 51, 10, Rng(1)));
    CHECK_THROWS(estimate_common_fixed_prob(1.0, 100, 2, 0, 10, 10, Rng(1)));
}

TEST_CASE("coupled curves are exactly monotone") {
    const auto c = common_fixed_curve(1.0, 2000, 5, 1, 1000, 3000, Rng(4));
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i].successes <= c[i - 1].successes);
    const auto s = sumset_trivial_curve(0.8, 5, 2000, 3000, Rng(5));
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].successes >= s[i - 1].successes);
    // the coupled curve reproduces the single-m estimator
    const auto single = estimate_sumset_trivial_prob(0.8, 3, 2000, 3000, Rng(5));
    CHECK(single.successes == s[2].successes);
    const auto single_c = estimate_common_fixed_prob(1.0, 2000, 3, 1, 1000, 3000, Rng(4));
    CHECK(single_c.successes == c[2].successes);
}

TEST_CASE("sumset trivial probability") {
    const double expected = std::exp(-0.4 * harmonic(10000));
    const auto m1 = estimate_sumset_trivial_prob(0.4, 1, 10000, 100000, Rng(6));
    CHECK(expected == doctest::Approx(0.0253).epsilon(0.01));
    CHECK(std::abs(oracle::z_score(m1.p_hat, expected, m1.trials)) < 3.0);
    CHECK_THROWS(estimate_sumset_trivial_prob(1.0, 2, 1, 10, Rng(1)));
    CHECK_THROWS(estimate_sumset_trivial_prob(1.0, 0, 10, 10, Rng(1)));
}

TEST_CASE("below h the trivial probability shrinks as K grows") {
    // alpha = 1, m = 3 < h(1) = 4
    std::vector<Estimate> est;
    for (std::size_t K = 64; K <= 8192; K *= 4) est.push_back(estimate_sumset_trivial_prob(1.0, 3, K, 20000, Rng(K)));
    for (std::size_t i = 1; i < est.size(); ++i) {
        const double se = std::hypot(est[i].standard_error(), est[i - 1].standard_error());
        CHECK(est[i].p_hat <= est[i - 1].p_hat + 3.0 * se);
    }
    CHECK(est.back().p_hat < est.front().p_hat);
}

TEST_CASE("empirical thresholds" * doctest::test_suite("pilot_contradicted")) {
    // Example value that the measured frequency (about 0.23) contradicts.
    const auto e = estimate_sumset_trivial_prob(1.0, 3, 10000, 10000, Rng(7));
    MESSAGE("alpha=1 m=3 K=1e4 trivial frequency = " << e.p_hat);
    CHECK(e.p_hat <= 0.05);
}

TEST_CASE("scan rows") {
    const std::vector<double> alphas{0.3, 0.72135, 1.0, 1.5};
    const std::vector<unsigned> ms{2, 4};
    const auto rows = scan_alpha(alphas, ms, ScanMode::sumset, 200, 500, Rng(8));
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].h_alpha == HValue{2, false});
    CHECK_FALSE(rows[0].near_discontinuity);
    CHECK(rows[2].near_discontinuity);
    CHECK(rows[5].m == 4);
    CHECK(rows[5].h_alpha == HValue{4, false});
    CHECK(rows[6].h_alpha.infinite);
    std::ostringstream os;
    write_scan_csv(os, rows);
    std::string header;
    std::getline(std::istringstream(os.str()) >> std::ws, header);
    CHECK(header == kScanCsvHeader);
    CHECK(os.str().find("near_discontinuity") != std::string::npos);

    const auto perm = scan_alpha(std::vector<double>{1.0}, std::vector<unsigned>{4}, ScanMode::permutation, 500,
                                 300, Rng(9));
    CHECK(perm[0].window == 500);
    CHECK(perm[0].h_alpha.value == 4);
}

TEST_CASE("subgroup census") {
    CHECK(subgroup_census(3).subgroup_count == 6);
    CHECK(subgroup_census(4).subgroup_count == 30);
    CHECK(subgroup_census(5).subgroup_count == 156);
    CHECK(subgroup_census(3).conjugacy_classes == 4);
    CHECK(subgroup_census(4).conjugacy_classes == 11);
    CHECK(subgroup_census(5).conjugacy_classes == 19);
    CHECK(subgroup_census(5).partitions.size() == 7);
}

TEST_CASE("subgroup census of S_6") {
    const auto t0 = std::chrono::steady_clock::now();
    CHECK(subgroup_census(6).subgroup_count == 1455);
    CHECK(subgroup_census(6).conjugacy_classes == 56);
    MESSAGE("S_6 census in " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s");
}

TEST_CASE("exact invariable generation") {
    CHECK(exact_invgen(cls({"3", "2+1"})));
    CHECK_FALSE(exact_invgen(cls({"2+1", "2+1"})));
    CHECK_FALSE(exact_invgen(cls({"3"})));
    CHECK(exact_invgen(cls({"1"})));
    // the identity class alone never helps
    CHECK_FALSE(exact_invgen(cls({"1+1+1", "3"})));
    CHECK_FALSE(exact_invgen(cls({"1+1+1+1", "4"})));
    CHECK(exact_invgen(cls({"1+1+1+1+1", "5", "3+2"})) == exact_invgen(cls({"5", "3+2"})));
    // but it does not block generation by the other classes
    CHECK(exact_invgen(cls({"3", "2+1", "1+1+1"})));
    // classical S_4 and S_5 facts
    CHECK(exact_invgen(cls({"4", "3+1"})));
    CHECK_FALSE(exact_invgen(cls({"4", "2+2"})));
    CHECK(exact_invgen(cls({"5", "3+2"})));
    CHECK_FALSE(exact_invgen(cls({"5", "4+1"})));  // both lie in the affine group of order 20
    CHECK_THROWS(exact_invgen(cls({"7"})));
    CHECK_THROWS(exact_invgen(cls({"3", "4"})));
    CHECK_THROWS(exact_invgen(std::vector<CycleType>{}));
}

TEST_CASE("exact invariable generation against literal conjugates") {
    for (std::size_t n : {3u, 4u}) {
        const auto& parts = subgroup_census(n).partitions;
        const std::size_t P = parts.size();
        for (std::size_t a = 0; a < P; ++a)
            for (std::size_t b = a; b < P; ++b) {
                std::vector<CycleType> v{parts[a], parts[b]};
                CAPTURE(parts[a].to_string());
                CAPTURE(parts[b].to_string());
                CHECK(exact_invgen(v) == invgen_by_conjugates(v));
                if (n == 3)
                    for (std::size_t c = b; c < P; ++c) {
                        std::vector<CycleType> w{parts[a], parts[b], parts[c]};
                        CHECK(exact_invgen(w) == invgen_by_conjugates(w));
                    }
            }
    }
}

TEST_CASE("invariable generation implies no common fixed-set size") {
    for (std::size_t n : {4u, 5u}) {
        const auto& parts = subgroup_census(n).partitions;
        const std::size_t P = parts.size();
        for (std::size_t a = 0; a < P; ++a)
            for (std::size_t b = a; b < P; ++b)
                for (std::size_t c = b; c < P; ++c) {
                    for (const auto& v : {std::vector{parts[a]}, std::vector{parts[a], parts[b]},
                                          std::vector{parts[a], parts[b], parts[c]}})
                        if (exact_invgen(v)) CHECK_FALSE(common_fixed_set_size(v, 1, n - 1).has_value());
                }
    }
}
