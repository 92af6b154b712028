#include "ctlab/word.hpp"

#include <algorithm>
#include <cstdlib>

#include "ctlab/error.hpp"

namespace ctlab {

namespace {

constexpr std::string_view kLetterChars = "aAbBcCdD";

// Cyclic words r and r^{-1}. Each letter occurs exactly once in each.
struct RelatorTables {
    std::array<std::array<Letter, 8>, 2> cyclic{};
    std::array<std::array<int, kLetterCount>, 2> position{};

    constexpr RelatorTables() {
        cyclic[0] = kRelator;
        for (int i = 0; i < 8; ++i) {
            cyclic[1][i] = inverse(kRelator[7 - i]);
        }
        for (int r = 0; r < 2; ++r) {
            for (int i = 0; i < 8; ++i) {
                position[r][index_of(cyclic[r][i])] = i;
            }
        }
    }
};

constexpr RelatorTables kTables{};

void free_reduce(Letters& w) {
    std::size_t top = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (top > 0 && w[top - 1] == inverse(w[i])) {
            --top;
        } else {
            w[top++] = w[i];
        }
    }
    w.resize(top);
}

// Replaces the first (leftmost, longest) relator piece of length >= 5.
bool dehn_step(Letters& w) {
    const std::size_t n = w.size();
    for (std::size_t i = 0; i + 5 <= n; ++i) {
        int best_len = 0;
        int best_rel = 0;
        int best_start = 0;
        for (int r = 0; r < 2; ++r) {
            const int start = kTables.position[r][index_of(w[i])];
            int len = 0;
            while (len < 8 && i + len < n && w[i + len] == kTables.cyclic[r][(start + len) % 8]) {
                ++len;
            }
            if (len > best_len) {
                best_len = len;
                best_rel = r;
                best_start = start;
            }
        }
        if (best_len >= 5) {
            Letters replacement;
            for (int k = 7; k >= best_len; --k) {
                replacement.push_back(inverse(kTables.cyclic[best_rel][(best_start + k) % 8]));
            }
            Letters out;
            out.reserve(n - best_len + replacement.size());
            out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
            out.insert(out.end(), replacement.begin(), replacement.end());
            out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(i + best_len), w.end());
            w = std::move(out);
            return true;
        }
    }
    return false;
}

}  // namespace

char to_char(Letter x) { return kLetterChars[index_of(x)]; }

Letter letter_from_char(char ch) {
    const auto pos = kLetterChars.find(ch);
    if (pos == std::string_view::npos) {
        throw ConfigError(std::string("not a generator letter: '") + ch + "'");
    }
    return letter_at(static_cast<int>(pos));
}

Word reduce(std::span<const Letter> letters) {
    Letters w(letters.begin(), letters.end());
    do {
        free_reduce(w);
    } while (dehn_step(w));
    return Word(std::move(w));
}

Word reduce(std::string_view text) {
    Letters raw;
    for (char ch : text) {
        if (ch == '1' || ch == ' ') continue;
        raw.push_back(letter_from_char(ch));
    }
    return reduce(raw);
}

Word Word::parse(std::string_view text) { return reduce(text); }

Word Word::inverse() const {
    Letters inv(letters_.rbegin(), letters_.rend());
    for (auto& x : inv) x = ctlab::inverse(x);
    return Word(std::move(inv));
}

std::string Word::str() const { return to_string(letters_); }

std::strong_ordering Word::operator<=>(const Word& other) const {
    if (auto c = letters_.size() <=> other.letters_.size(); c != 0) return c;
    return letters_ <=> other.letters_;
}

Word operator*(const Word& lhs, const Word& rhs) {
    Letters cat = lhs.letters();
    cat.insert(cat.end(), rhs.letters().begin(), rhs.letters().end());
    return reduce(cat);
}

Word power(Letter x, int exponent) {
    const Letter step = exponent >= 0 ? x : inverse(x);
    return reduce(Letters(static_cast<std::size_t>(std::abs(exponent)), step));
}

bool is_trivial(std::span<const Letter> letters) { return reduce(letters).empty(); }

bool same_element(const Word& lhs, const Word& rhs) { return (lhs.inverse() * rhs).empty(); }

std::array<int, 4> abelianization(std::span<const Letter> letters) {
    std::array<int, 4> sums{};
    for (Letter x : letters) {
        const int i = index_of(x);
        sums[i / 2] += (i % 2 == 0) ? 1 : -1;
    }
    return sums;
}

int abelian_length_bound(std::span<const Letter> letters) {
    int total = 0;
    for (int s : abelianization(letters)) total += std::abs(s);
    return total;
}

bool same_coset(const Word& lhs, const Word& rhs, Letter sigma, int max_exponent) {
    const Word diff = lhs.inverse() * rhs;
    // The exponent is pinned by the abelianization: sigma contributes +-1 to one coordinate.
    const auto ab = abelianization(diff.letters());
    const int axis = index_of(sigma) / 2;
    const int sign = index_of(sigma) % 2 == 0 ? 1 : -1;
    for (int i = 0; i < 4; ++i) {
        if (i != axis && ab[i] != 0) return false;
    }
    const int k = sign * ab[axis];
    if (std::abs(k) > max_exponent) return false;
    return (diff * power(sigma, -k)).empty();
}

std::string to_string(std::span<const Letter> letters) {
    if (letters.empty()) return "1";
    std::string s;
    s.reserve(letters.size());
    for (Letter x : letters) s.push_back(to_char(x));
    return s;
}

}  // namespace ctlab
