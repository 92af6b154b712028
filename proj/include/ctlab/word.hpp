#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ctlab {

// Generators of the closed genus-2 surface group <a,b,c,d | [a,b][c,d]>.
// Upper case is the inverse letter. The numeric order is the shortlex order
// used for every tie-break in the library.
enum class Letter : std::uint8_t { a = 0, A = 1, b = 2, B = 3, c = 4, C = 5, d = 6, D = 7 };

inline constexpr int kLetterCount = 8;

constexpr Letter inverse(Letter x) { return static_cast<Letter>(static_cast<std::uint8_t>(x) ^ 1u); }
constexpr int index_of(Letter x) { return static_cast<int>(x); }
constexpr Letter letter_at(int i) { return static_cast<Letter>(i); }
char to_char(Letter x);
Letter letter_from_char(char ch);  // throws ConfigError

inline constexpr std::array<Letter, kLetterCount> kAllLetters = {
    Letter::a, Letter::A, Letter::b, Letter::B, Letter::c, Letter::C, Letter::d, Letter::D};

// The defining relator a b A B c d C D.
inline constexpr std::array<Letter, 8> kRelator = {
    Letter::a, Letter::b, Letter::A, Letter::B, Letter::c, Letter::d, Letter::C, Letter::D};

using Letters = std::vector<Letter>;

/// A group element written as a freely reduced, Dehn-reduced word.
///
/// Words are only produced by `reduce` (or by composing reduced words), so
/// the empty word is exactly the identity. Distinct reduced words may still
/// name the same element: use `same_element` for equality in the group.
class Word {
public:
    Word() = default;

    static Word parse(std::string_view text);  // letters aAbBcCdD, '1' or "" for identity

    const Letters& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }

    Word inverse() const;
    std::string str() const;

    // Shortlex order on the letter sequence.
    std::strong_ordering operator<=>(const Word& other) const;
    bool operator==(const Word& other) const = default;

    friend Word reduce(std::span<const Letter> letters);

private:
    explicit Word(Letters letters) : letters_(std::move(letters)) {}
    Letters letters_;
};

/// Free reduction followed by Dehn's algorithm to a fixed point.
///
/// Any subword of length >= 5 of a cyclic rotation of the relator (or its
/// inverse) is replaced by the inverse of the complementary piece. The
/// presentation is C'(1/7), so the result is empty iff the element is trivial.
Word reduce(std::span<const Letter> letters);
Word reduce(std::string_view text);

Word operator*(const Word& lhs, const Word& rhs);
Word power(Letter x, int exponent);  // x^k, negative k uses the inverse letter

bool is_trivial(std::span<const Letter> letters);
bool same_element(const Word& lhs, const Word& rhs);

// Exponent sums of a, b, c, d: the image in H_1 = Z^4.
std::array<int, 4> abelianization(std::span<const Letter> letters);

// Lower bound on word length coming from the abelianization (L1 norm).
int abelian_length_bound(std::span<const Letter> letters);

// True iff lhs^{-1} rhs is a power sigma^k with |k| <= max_exponent.
bool same_coset(const Word& lhs, const Word& rhs, Letter sigma, int max_exponent);

std::string to_string(std::span<const Letter> letters);

}  // namespace ctlab
