#include <doctest.h>

#include <map>

#include "oracles.hpp"
#include "sigdev/errors.hpp"
#include "sigdev/freeprob.hpp"

using namespace sigdev;

TEST_CASE("nc2_enumerate") {
    CHECK(nc2_enumerate(0).size() == 1);
    CHECK(nc2_enumerate(3).empty());
    REQUIRE(nc2_enumerate(2).size() == 1);
    CHECK(nc2_enumerate(2)[0].pairs == std::vector<std::pair<int, int>>{{1, 2}});

    const auto four = nc2_enumerate(4);
    REQUIRE(four.size() == 2);
    CHECK(four[0].pairs == std::vector<std::pair<int, int>>{{1, 2}, {3, 4}});
    CHECK(four[1].pairs == std::vector<std::pair<int, int>>{{1, 4}, {2, 3}});

    // cross-check against brute-force filtering of all pairings
    for (int n = 0; n <= 10; n += 2) {
        std::size_t brute = 0;
        for (const auto& p : oracle::all_pairings(n)) brute += oracle::crosses(p) ? 0 : 1;
        if (n == 0) brute = 1;
        CHECK(nc2_enumerate(n).size() == brute);
        for (const auto& p : nc2_enumerate(n)) CHECK(p.is_valid_noncrossing());
    }
    for (int k = 0; k <= 8; ++k) CHECK(nc2_enumerate(2 * k).size() == catalan(k));
    CHECK_THROWS_AS(nc2_enumerate(22), ResourceError);
}

TEST_CASE("catalan") {
    CHECK(catalan(0) == 1);
    CHECK(catalan(1) == 1);
    CHECK(catalan(5) == 42);
    // recurrence C_{k+1} = Σ C_i C_{k-i}
    for (int k = 0; k < 30; ++k) {
        std::uint64_t s = 0;
        for (int i = 0; i <= k; ++i) s += catalan(i) * catalan(k - i);
        CHECK(catalan(k + 1) == s);
    }
    CHECK_THROWS_AS(catalan(31), DomainError);
}

TEST_CASE("Dyck words and partitions") {
    CHECK_THROWS_AS(DyckWord(")("), DomainError);
    CHECK_THROWS_AS(DyckWord("(()"), DomainError);
    CHECK_THROWS_AS(DyckWord("(x)"), DomainError);
    CHECK(partition_from_dyck(DyckWord("()")).pairs == std::vector<std::pair<int, int>>{{1, 2}});
    const PairPartition p{{{1, 6}, {2, 3}, {4, 5}, {7, 8}}};
    CHECK(dyck_from_partition(p).str() == "(()())()");
    CHECK(partition_from_dyck(DyckWord("(()())()")) == p);
    CHECK(dyck_to_tree_text(DyckWord("(()())()")) == "[[[],[]],[]]");
    CHECK(dyck_to_tree_text(DyckWord("")) == "[]");
    for (const auto& q : nc2_enumerate(8)) CHECK(partition_from_dyck(dyck_from_partition(q)) == q);
    for (std::size_t len = 0; len <= 12; len += 2) {
        CHECK(DyckWord::all(len).size() == catalan(static_cast<int>(len / 2)));
        for (const auto& d : DyckWord::all(len)) CHECK(dyck_from_partition(partition_from_dyck(d)) == d);
    }
}

TEST_CASE("generation_labels") {
    SUBCASE("small words") {
        const auto one = generation_labels(DyckWord("()"));
        CHECK(one.generation == std::vector<int>{1});
        CHECK(one.word_generation == 1);
        const auto two = generation_labels(DyckWord("(())"));
        CHECK(two.partition.pairs == std::vector<std::pair<int, int>>{{1, 4}, {2, 3}});
        CHECK(two.generation == std::vector<int>{1, 2});
        CHECK(generation_labels(DyckWord("")).word_generation == 0);
    }
    SUBCASE("three-generation example") {
        const auto g = generation_labels(DyckWord("()()(()(()))"));
        REQUIRE(g.partition.pairs.size() == 6);
        CHECK(g.partition.pairs ==
              std::vector<std::pair<int, int>>{{1, 2}, {3, 4}, {5, 12}, {6, 7}, {8, 11}, {9, 10}});
        CHECK(g.generation == std::vector<int>{3, 2, 1, 3, 2, 3});
        CHECK(g.word_generation == 3);
        CHECK(g.maximal_pairs() == std::vector<std::pair<int, int>>{{1, 2}, {6, 7}, {9, 10}});
    }
    SUBCASE("maximal pairs are adjacent") {
        for (std::size_t len = 2; len <= 12; len += 2) {
            for (const auto& d : DyckWord::all(len)) {
                for (const auto& [a, b] : generation_labels(d).maximal_pairs()) CHECK(b == a + 1);
            }
        }
    }
}

TEST_CASE("insert_generation") {
    CHECK(insert_generation(DyckWord("")) == std::set<DyckWord>{DyckWord("()")});
    CHECK(insert_generation(DyckWord("()")) ==
          std::set<DyckWord>{DyckWord("()()"), DyckWord("(())"), DyckWord("()(())")});

    // Words of generation n+1 arise from exactly one word of generation n,
    // checked over all Dyck words up to length 10.
    std::map<DyckWord, int> source_count;
    for (std::size_t len = 0; len <= 10; len += 2) {
        for (const auto& d : DyckWord::all(len)) {
            const int gen = generation_labels(d).word_generation;
            for (const auto& w : insert_generation(d)) {
                CHECK(generation_labels(w).word_generation == gen + 1);
                ++source_count[w];
            }
        }
    }
    for (std::size_t len = 2; len <= 10; len += 2) {
        for (const auto& d : DyckWord::all(len)) {
            INFO(d.str());
            CHECK(source_count[d] == 1);
        }
    }
}

TEST_CASE("semicircular_moment") {
    CHECK(semicircular_moment(word_from_string("")) == 1);
    CHECK(semicircular_moment(word_from_string("11")) == 1);
    CHECK(semicircular_moment(word_from_string("12")) == 0);
    CHECK(semicircular_moment(word_from_string("1212")) == 0);
    CHECK(semicircular_moment(word_from_string("1221")) == 1);
    CHECK(semicircular_moment(word_from_string("112")) == 0);
    CHECK(semicircular_moment(word_from_string("211")) == 0);
    for (int k = 0; k <= 8; ++k) {
        CHECK(semicircular_moment(Word(static_cast<std::size_t>(2 * k), 1)) ==
              static_cast<std::int64_t>(catalan(k)));
    }
    MomentTable table;
    for (int len = 0; len <= 8; ++len) {
        for (const auto& w : all_words(len, 3)) {
            INFO(word_to_string(w));
            const auto expected = oracle::brute_moment(w);
            CHECK(semicircular_moment(w) == expected);
            CHECK(table(w) == expected);
        }
    }
}

TEST_CASE("schwinger_dyson_check") {
    CHECK(schwinger_dyson_check(6, 2));
    for (int d = 1; d <= 3; ++d) CHECK(schwinger_dyson_check(8, d));
    CHECK_THROWS_AS(schwinger_dyson_check(11, 2), DomainError);
}
