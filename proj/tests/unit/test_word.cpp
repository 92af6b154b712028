#include <gtest/gtest.h>

#include <random>

#include "ctlab/error.hpp"
#include "ctlab/word.hpp"

using namespace ctlab;

namespace {

Letters random_letters(std::mt19937_64& rng, std::size_t n) {
    Letters w;
    while (w.size() < n) {
        const auto x = letter_at(static_cast<int>(rng() % 8));
        if (!w.empty() && w.back() == inverse(x)) continue;
        w.push_back(x);
    }
    return w;
}

Letters invert(const Letters& w) {
    Letters out(w.rbegin(), w.rend());
    for (auto& x : out) x = inverse(x);
    return out;
}

Letters relator_rotation(std::mt19937_64& rng) {
    Letters r(kRelator.begin(), kRelator.end());
    std::rotate(r.begin(), r.begin() + static_cast<long>(rng() % 8), r.end());
    if (rng() % 2) r = invert(r);
    return r;
}

// Free reduction only, written without the library.
Letters free_only(const Letters& w) {
    Letters out;
    for (Letter x : w) {
        if (!out.empty() && out.back() == inverse(x)) {
            out.pop_back();
        } else {
            out.push_back(x);
        }
    }
    return out;
}

}  // namespace

TEST(Word, FreeCancellation) {
    EXPECT_TRUE(reduce("aA").empty());
    EXPECT_TRUE(reduce("bBcC").empty());
    EXPECT_EQ(reduce("abBc").str(), "ac");
}

TEST(Word, RelatorIsTrivial) {
    EXPECT_TRUE(reduce("abABcdCD").empty());
    EXPECT_TRUE(reduce("dcDCbaBA").empty());
    EXPECT_TRUE(reduce("bABcdCDa").empty());
}

TEST(Word, ConjugatedRelator) {
    const Word g = Word::parse("abc");
    const Word r = reduce("abABcdCD");
    EXPECT_TRUE((g * r * g.inverse()).empty());
    Letters raw = {Letter::a, Letter::b, Letter::c};
    raw.insert(raw.end(), kRelator.begin(), kRelator.end());
    raw.insert(raw.end(), {Letter::C, Letter::B, Letter::A});
    EXPECT_TRUE(is_trivial(raw));
}

TEST(Word, IdentityParsing) {
    EXPECT_TRUE(Word::parse("1").empty());
    EXPECT_TRUE(Word::parse("").empty());
    EXPECT_EQ(Word().str(), "1");
    EXPECT_THROW(Word::parse("ax"), ConfigError);
}

TEST(Word, InverseIsInvolution) {
    const Word w = Word::parse("abCd");
    EXPECT_EQ(w.inverse().str(), "DcBA");
    EXPECT_EQ(w.inverse().inverse(), w);
}

TEST(Word, ReducedOutputHasNoLongRelatorPiece) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 300; ++t) {
        const Word w = reduce(random_letters(rng, 12));
        const auto& l = w.letters();
        for (std::size_t i = 0; i + 1 < l.size(); ++i) EXPECT_NE(l[i], inverse(l[i + 1]));
        // length >= 5 pieces of r or r^-1 would have been replaced
        const std::string s = w.str();
        const std::string r = "abABcdCDabABcdCD";
        const std::string ri = "dcDCbaBAdcDCbaBA";
        for (std::size_t i = 0; i + 5 <= s.size(); ++i) {
            EXPECT_EQ(r.find(s.substr(i, 5)), std::string::npos) << s;
            EXPECT_EQ(ri.find(s.substr(i, 5)), std::string::npos) << s;
        }
    }
}

TEST(Word, RandomTrivialProducts) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 1000; ++t) {
        Letters w;
        const int k = 1 + static_cast<int>(rng() % 5);
        for (int j = 0; j < k; ++j) {
            const Letters g = random_letters(rng, rng() % 6);
            const Letters r = relator_rotation(rng);
            w.insert(w.end(), g.begin(), g.end());
            w.insert(w.end(), r.begin(), r.end());
            const Letters gi = invert(g);
            w.insert(w.end(), gi.begin(), gi.end());
        }
        EXPECT_TRUE(is_trivial(w)) << to_string(w);
    }
}

TEST(Word, RandomNontrivialShortWords) {
    std::mt19937_64 rng(2);
    int checked = 0;
    while (checked < 1000) {
        const Letters w = random_letters(rng, 1 + rng() % 6);
        // Greendlinger: a nonempty trivial word contains more than half of a relator.
        const std::string s = to_string(w);
        bool has_half = false;
        for (const std::string r : {"abABcdCDabABcdCD", "dcDCbaBAdcDCbaBA"}) {
            for (std::size_t i = 0; i + 4 <= s.size(); ++i) {
                if (r.find(s.substr(i, 4)) != std::string::npos) has_half = true;
            }
        }
        if (has_half) continue;
        ++checked;
        EXPECT_FALSE(is_trivial(w)) << s;
    }
}

TEST(Word, AbelianizationBoundsLength) {
    Letters w(16, Letter::a);
    w.insert(w.begin(), Letter::b);
    EXPECT_EQ(abelian_length_bound(w), 17);
    EXPECT_EQ(abelian_length_bound(Letters(kRelator.begin(), kRelator.end())), 0);
}

TEST(Word, SameCoset) {
    const Word b = Word::parse("b");
    EXPECT_TRUE(same_coset(b, Word::parse("baaa"), Letter::a, 5));
    EXPECT_TRUE(same_coset(b, Word::parse("bAA"), Letter::a, 5));
    EXPECT_FALSE(same_coset(b, Word::parse("baaa"), Letter::a, 2));
    EXPECT_FALSE(same_coset(b, Word::parse("ab"), Letter::a, 5));
    EXPECT_FALSE(same_coset(Word(), b, Letter::a, 5));
}

TEST(Word, ShortlexOrder) {
    EXPECT_LT(Word::parse("b"), Word::parse("aa"));
    EXPECT_LT(Word::parse("a"), Word::parse("A"));
    EXPECT_LT(Word::parse("ab"), Word::parse("aB"));
}

TEST(Word, ReductionPreservesParity) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        Letters raw;
        for (int i = 0; i < 10; ++i) raw.push_back(letter_at(static_cast<int>(rng() % 8)));
        const Letters f = free_only(raw);
        const Word w = reduce(raw);
        EXPECT_LE(w.size(), f.size());
        EXPECT_EQ(w.size() % 2, f.size() % 2);  // relator has even length
    }
}
