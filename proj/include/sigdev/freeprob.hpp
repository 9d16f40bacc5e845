#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sigdev {

/// Letters are 1-based indices into the alphabet {1..d}.
using Word = std::vector<int>;

/// Parses a digit string such as "1212" into a word.
Word word_from_string(std::string_view digits);
std::string word_to_string(std::span<const int> word);

/// Pair partition of {1..2k}; pairs are stored (first, second) with
/// first < second, ordered by first element.
struct PairPartition {
    std::vector<std::pair<int, int>> pairs;

    int points() const { return 2 * static_cast<int>(pairs.size()); }
    /// Pairs are disjoint, cover 1..2k and do not cross.
    bool is_valid_noncrossing() const;

    friend auto operator<=>(const PairPartition&, const PairPartition&) = default;
};

/// Balanced parenthesis string over '(' and ')'.
class DyckWord {
public:
    DyckWord() = default;
    /// Throws DomainError on unbalanced input or foreign characters.
    explicit DyckWord(std::string parens);

    const std::string& str() const { return parens_; }
    std::size_t size() const { return parens_.size(); }
    bool empty() const { return parens_.empty(); }

    /// Every balanced string of the given length, in lexicographic order
    /// with '(' < ')'. Odd lengths give an empty list.
    static std::vector<DyckWord> all(std::size_t length);

    friend auto operator<=>(const DyckWord&, const DyckWord&) = default;

private:
    std::string parens_;
};

/// All non-crossing pair partitions of {1..n}. Odd n yields an empty list;
/// n > 20 throws ResourceError.
std::vector<PairPartition> nc2_enumerate(int n);

DyckWord dyck_from_partition(const PairPartition& p);
PairPartition partition_from_dyck(const DyckWord& d);

/// Nested-list rendering of the plane tree of a Dyck word, e.g. "(()())()"
/// becomes "[[[],[]],[]]".
std::string dyck_to_tree_text(const DyckWord& d);

/// Generation of every pair of a Dyck word.
///
/// The pair closing the word has generation 1; a pair whose closing
/// parenthesis is followed by a parenthesis of a generation-k pair has
/// generation k + 1.
struct GenerationLabels {
    PairPartition partition;      ///< pairs in order of their opening position
    std::vector<int> generation;  ///< one label per pair, same order
    int word_generation = 0;      ///< max label, 0 for the empty word

    /// Pairs whose label equals word_generation.
    std::vector<std::pair<int, int>> maximal_pairs() const;
};

GenerationLabels generation_labels(const DyckWord& d);

/// Words obtained by inserting "()" immediately left of at least one
/// parenthesis belonging to a maximal-generation pair. The empty word maps
/// to {"()"}.
std::set<DyckWord> insert_generation(const DyckWord& d);

/// Exact Catalan number C_k for 0 ≤ k ≤ 30.
std::uint64_t catalan(int k);

/// Mixed moment φ(I) of free standard semicircular variables, counted as the
/// number of non-crossing pair partitions whose pairs join equal letters.
/// Enumerates NC₂(|I|); |I| ≤ 20.
std::int64_t semicircular_moment(std::span<const int> word);

/// Memoized moment table driven by the recursion φ(I j) = Σ_{I = K j L} φ(K) φ(L).
/// Used as the fast path by the series oracle.
class MomentTable {
public:
    std::int64_t operator()(std::span<const int> word);
    std::size_t cached() const { return memo_.size(); }

private:
    std::unordered_map<std::string, std::int64_t> memo_;
};

/// φ of every word of length 0..max_length over {1..alphabet}, from the same
/// recursion. Entry [m][idx] belongs to the word whose letters are the base-d
/// digits of idx (first letter most significant), matching the coefficient
/// order of a signature level. Odd levels are all zero.
std::vector<std::vector<std::int64_t>> moment_levels(int alphabet, int max_length);

/// Checks cyclic invariance φ(IJ) = φ(JI) and the recursion φ(Ij) = Σ φ(K)φ(L)
/// for every word of length ≤ max_len over {1..d}, using the enumerating
/// moment. max_len ≤ 10.
bool schwinger_dyson_check(int max_len, int alphabet);

/// Every word of exactly `length` letters over {1..alphabet}, lexicographic.
std::vector<Word> all_words(int length, int alphabet);

}  // namespace sigdev
