#include "sigdev/freeprob.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "sigdev/errors.hpp"

namespace sigdev {

Word word_from_string(std::string_view digits) {
    Word w;
    w.reserve(digits.size());
    for (char c : digits) {
        if (c < '1' || c > '9') throw DomainError("word letters must be digits 1-9");
        w.push_back(c - '0');
    }
    return w;
}

std::string word_to_string(std::span<const int> word) {
    std::string s;
    for (int letter : word) s += std::to_string(letter);
    return s;
}

bool PairPartition::is_valid_noncrossing() const {
    const int n = points();
    std::vector<int> mate(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& [a, b] : pairs) {
        if (a < 1 || b > n || a >= b) return false;
        if (mate[static_cast<std::size_t>(a)] || mate[static_cast<std::size_t>(b)]) return false;
        mate[static_cast<std::size_t>(a)] = b;
        mate[static_cast<std::size_t>(b)] = a;
    }
    for (const auto& [a, c] : pairs) {
        for (const auto& [b, e] : pairs) {
            if (a < b && b < c && c < e) return false;
        }
    }
    return true;
}

DyckWord::DyckWord(std::string parens) : parens_(std::move(parens)) {
    int depth = 0;
    for (char c : parens_) {
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            if (--depth < 0) throw DomainError("Dyck word closes an unopened pair: " + parens_);
        } else {
            throw DomainError("Dyck word may only contain '(' and ')'");
        }
    }
    if (depth != 0) throw DomainError("Dyck word is unbalanced: " + parens_);
}

std::vector<DyckWord> DyckWord::all(std::size_t length) {
    std::vector<DyckWord> out;
    if (length % 2 != 0) return out;
    const std::size_t half = length / 2;
    std::string buf;
    buf.reserve(length);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t open, std::size_t close) {
        if (buf.size() == length) {
            DyckWord d;
            d.parens_ = buf;
            out.push_back(std::move(d));
            return;
        }
        if (open < half) {
            buf.push_back('(');
            rec(open + 1, close);
            buf.pop_back();
        }
        if (close < open) {
            buf.push_back(')');
            rec(open, close + 1);
            buf.pop_back();
        }
    };
    rec(0, 0);
    return out;
}

std::vector<PairPartition> nc2_enumerate(int n) {
    if (n < 0) throw DomainError("nc2_enumerate: negative size");
    if (n > 20) throw ResourceError("nc2_enumerate: n above 20");
    std::vector<PairPartition> out;
    if (n % 2 != 0) return out;

    // Point `first` pairs with some `partner` so that the block strictly
    // between them is closed under pairing; recurse inside and to the right.
    std::vector<std::pair<int, int>> current;
    std::function<void(std::vector<std::pair<int, int>>&)> emit;
    std::function<void(int, int, const std::function<void()>&)> fill =
        [&](int lo, int hi, const std::function<void()>& done) {
            if (lo > hi) {
                done();
                return;
            }
            for (int partner = lo + 1; partner <= hi; partner += 2) {
                current.emplace_back(lo, partner);
                fill(lo + 1, partner - 1, [&, partner, hi] { fill(partner + 1, hi, done); });
                current.pop_back();
            }
        };
    fill(1, n, [&] {
        PairPartition p{current};
        std::sort(p.pairs.begin(), p.pairs.end());
        out.push_back(std::move(p));
    });
    std::sort(out.begin(), out.end());
    return out;
}

DyckWord dyck_from_partition(const PairPartition& p) {
    std::string s(static_cast<std::size_t>(p.points()), '?');
    for (const auto& [a, b] : p.pairs) {
        s[static_cast<std::size_t>(a - 1)] = '(';
        s[static_cast<std::size_t>(b - 1)] = ')';
    }
    return DyckWord(std::move(s));
}

PairPartition partition_from_dyck(const DyckWord& d) {
    PairPartition p;
    std::vector<int> stack;
    const auto& s = d.str();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const int pos = static_cast<int>(i) + 1;
        if (s[i] == '(') {
            stack.push_back(pos);
        } else {
            p.pairs.emplace_back(stack.back(), pos);
            stack.pop_back();
        }
    }
    std::sort(p.pairs.begin(), p.pairs.end());
    return p;
}

std::string dyck_to_tree_text(const DyckWord& d) {
    std::string out = "[";
    char prev = '(';
    for (char c : d.str()) {
        if (c == '(') {
            if (prev == ')') out += ',';
            out += '[';
        } else {
            out += ']';
        }
        prev = c;
    }
    out += ']';
    return out;
}

std::vector<std::pair<int, int>> GenerationLabels::maximal_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < generation.size(); ++i) {
        if (generation[i] == word_generation) out.push_back(partition.pairs[i]);
    }
    return out;
}

GenerationLabels generation_labels(const DyckWord& d) {
    GenerationLabels out;
    out.partition = partition_from_dyck(d);
    const std::size_t n = d.size();
    const std::size_t k = out.partition.pairs.size();
    out.generation.assign(k, 0);
    if (k == 0) return out;

    // owner[pos] = index of the pair containing 1-based position pos.
    std::vector<std::size_t> owner(n + 2, 0);
    for (std::size_t i = 0; i < k; ++i) {
        owner[static_cast<std::size_t>(out.partition.pairs[i].first)] = i;
        owner[static_cast<std::size_t>(out.partition.pairs[i].second)] = i;
    }
    // The parenthesis after a closing one always belongs to a pair that closes
    // later, so labelling in decreasing order of closing position is well founded.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.partition.pairs[a].second > out.partition.pairs[b].second;
    });
    for (std::size_t idx : order) {
        const auto close = static_cast<std::size_t>(out.partition.pairs[idx].second);
        out.generation[idx] = close == n ? 1 : out.generation[owner[close + 1]] + 1;
    }
    out.word_generation = *std::max_element(out.generation.begin(), out.generation.end());
    return out;
}

std::set<DyckWord> insert_generation(const DyckWord& d) {
    std::set<DyckWord> out;
    if (d.empty()) {
        out.insert(DyckWord("()"));
        return out;
    }
    const auto labels = generation_labels(d);
    std::vector<int> sites;  // 1-based positions to insert before
    for (const auto& [a, b] : labels.maximal_pairs()) {
        sites.push_back(a);
        sites.push_back(b);
    }
    std::sort(sites.begin(), sites.end());
    const std::size_t m = sites.size();
    const auto& s = d.str();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
        std::vector<bool> before(s.size() + 1, false);
        for (std::size_t i = 0; i < m; ++i) {
            if (mask >> i & 1U) before[static_cast<std::size_t>(sites[i])] = true;
        }
        std::string w;
        w.reserve(s.size() + 2 * m);
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (before[i + 1]) w += "()";
            w += s[i];
        }
        out.insert(DyckWord(std::move(w)));
    }
    return out;
}

std::uint64_t catalan(int k) {
    if (k < 0 || k > 30) throw DomainError("catalan: k must lie in 0..30");
    std::uint64_t c = 1;
    for (int i = 0; i < k; ++i) {
        // C_{i+1} = C_i * 2(2i+1) / (i+2); the product fits in 64 bits for i < 30.
        c = c * static_cast<std::uint64_t>(2 * (2 * i + 1)) / static_cast<std::uint64_t>(i + 2);
    }
    return c;
}

std::int64_t semicircular_moment(std::span<const int> word) {
    const int n = static_cast<int>(word.size());
    if (n > 20) throw ResourceError("semicircular_moment: word longer than 20");
    if (n == 0) return 1;
    if (n % 2 != 0) return 0;
    std::int64_t count = 0;
    for (const auto& p : nc2_enumerate(n)) {
        const bool match = std::all_of(p.pairs.begin(), p.pairs.end(), [&](const auto& pr) {
            return word[static_cast<std::size_t>(pr.first - 1)] ==
                   word[static_cast<std::size_t>(pr.second - 1)];
        });
        count += match ? 1 : 0;
    }
    return count;
}

std::int64_t MomentTable::operator()(std::span<const int> word) {
    const std::size_t n = word.size();
    if (n == 0) return 1;
    if (n % 2 != 0) return 0;
    std::string key(word.begin(), word.end());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    // φ(I j): the last letter pairs with an equal letter at position p, which
    // splits I into K = word[0, p) and L = word(p, n-1).
    const int last = word[n - 1];
    std::int64_t total = 0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        if (word[p] != last) continue;
        if (p % 2 != 0) continue;  // K must have even length
        const std::int64_t left = (*this)(word.subspan(0, p));
        if (left == 0) continue;
        total += left * (*this)(word.subspan(p + 1, n - 2 - p));
    }
    memo_.emplace(std::move(key), total);
    return total;
}

std::vector<std::vector<std::int64_t>> moment_levels(int alphabet, int max_length) {
    if (alphabet < 1 || max_length < 0) throw DomainError("moment_levels: bad alphabet or length");
    const auto d = static_cast<std::size_t>(alphabet);
    std::vector<std::size_t> pow(static_cast<std::size_t>(max_length) + 1, 1);
    for (std::size_t m = 1; m < pow.size(); ++m) {
        if (pow[m - 1] > (std::size_t{1} << 26) / d) throw ResourceError("moment_levels: table too large");
        pow[m] = pow[m - 1] * d;
    }
    std::vector<std::vector<std::int64_t>> table(pow.size());
    table[0] = {1};
    for (std::size_t m = 1; m < pow.size(); ++m) {
        table[m].assign(pow[m], 0);
        if (m % 2 != 0) continue;
        for (std::size_t idx = 0; idx < pow[m]; ++idx) {
            const std::size_t last = idx % d;
            const std::size_t prefix = idx / d;  // I, length m - 1
            std::int64_t total = 0;
            for (std::size_t p = 0; p + 1 < m; p += 2) {
                if ((prefix / pow[m - 2 - p]) % d != last) continue;
                const std::int64_t left = table[p][prefix / pow[m - 1 - p]];
                if (left == 0) continue;
                total += left * table[m - 2 - p][prefix % pow[m - 2 - p]];
            }
            table[m][idx] = total;
        }
    }
    return table;
}

std::vector<Word> all_words(int length, int alphabet) {
    if (length < 0 || alphabet < 1) throw DomainError("all_words: bad length or alphabet");
    std::vector<Word> out;
    Word w(static_cast<std::size_t>(length), 1);
    while (true) {
        out.push_back(w);
        int pos = length - 1;
        while (pos >= 0 && w[static_cast<std::size_t>(pos)] == alphabet) {
            w[static_cast<std::size_t>(pos)] = 1;
            --pos;
        }
        if (pos < 0) break;
        ++w[static_cast<std::size_t>(pos)];
    }
    return out;
}

bool schwinger_dyson_check(int max_len, int alphabet) {
    if (max_len < 0 || max_len > 10) throw DomainError("schwinger_dyson_check: max_len must be ≤ 10");
    if (alphabet < 1) throw DomainError("schwinger_dyson_check: alphabet must be ≥ 1");

    // Moments of every word up to max_len, by enumeration.
    std::unordered_map<std::string, std::int64_t> phi;
    for (int len = 0; len <= max_len; ++len) {
        for (const auto& w : all_words(len, alphabet)) {
            phi.emplace(std::string(w.begin(), w.end()), semicircular_moment(w));
        }
    }
    auto lookup = [&](std::span<const int> w) { return phi.at(std::string(w.begin(), w.end())); };

    for (int len = 1; len <= max_len; ++len) {
        for (const auto& w : all_words(len, alphabet)) {
            const std::int64_t value = lookup(w);
            // φ(IJ) = φ(JI) for every split point.
            for (int cut = 1; cut < len; ++cut) {
                Word rotated(w.begin() + cut, w.end());
                rotated.insert(rotated.end(), w.begin(), w.begin() + cut);
                if (lookup(rotated) != value) return false;
            }
            // φ(I j) = Σ_{I = K j L} φ(K) φ(L), with I = w without its last letter.
            const std::span<const int> ws(w);
            const int j = w.back();
            std::int64_t rhs = 0;
            for (int p = 0; p + 1 < len; ++p) {
                if (w[static_cast<std::size_t>(p)] != j) continue;
                rhs += lookup(ws.subspan(0, static_cast<std::size_t>(p))) *
                       lookup(ws.subspan(static_cast<std::size_t>(p) + 1,
                                         static_cast<std::size_t>(len - 2 - p)));
            }
            if (rhs != value) return false;
        }
    }
    return true;
}

}  // namespace sigdev
