#pragma once

// Exact calculus for compositions of the two backward Loewner vector fields
//   V0 = (-a / z) d/dz,  a = 2 / kappa   (time direction)
//   V1 = d/dz                             (noise direction)
// applied to the identity map. Every composition is a single Laurent monomial
// c * a^j * z^p, so the whole algebra is carried by three numbers.

#include "sle/halfplane.hpp"

#include <boost/rational.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sle {

using Rational = boost::rational<std::int64_t>;

enum class Letter : std::uint8_t { Time = 0, Noise = 1 };

/// Word over {0, 1}: 0 pairs with dt and V0, 1 with dB and V1.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<Letter> letters) : letters_(std::move(letters)) {}
    MultiIndex(std::initializer_list<int> letters);

    /// Parses a string of '0' / '1' characters; "" is the empty word.
    static MultiIndex parse(std::string_view text);

    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }
    std::span<const Letter> letters() const { return letters_; }

    /// Number of time letters (m).
    std::size_t time_count() const;
    /// Number of noise letters (n).
    std::size_t noise_count() const;

    MultiIndex appended(Letter letter) const;

    std::string str() const;

    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<Letter> letters_;
};

/// (1,2)-degree m + n/2: the time-scaling exponent of the matching iterated integral.
Rational degree(const MultiIndex& word);

/// All 2^r words of length r, in lexicographic order.
std::vector<MultiIndex> words_of_length(std::size_t r);

/// All words of length <= r, shortest first.
std::vector<MultiIndex> words_up_to(std::size_t r);

/// coeff * a^a_power * z^z_power.
struct LaurentTerm {
    Rational coeff{0};
    int a_power = 0;
    int z_power = 0;

    static LaurentTerm identity() { return {Rational(1), 0, 1}; }
    bool is_zero() const { return coeff.numerator() == 0; }

    friend bool operator==(const LaurentTerm&, const LaurentTerm&) = default;
};

/// V_{i1} ... V_{ik} Id, with the rightmost letter acting first.
/// Throws NumericalError if the integer coefficient would overflow.
LaurentTerm compose(const MultiIndex& word);

inline constexpr std::size_t kDefaultLevelCap = 12;

struct ComposedWord {
    MultiIndex word;
    LaurentTerm term;
};

/// Every word of length r with its composed term (2^r entries).
std::vector<ComposedWord> enumerate_level(std::size_t r, std::size_t cap = kDefaultLevelCap);

/// coeff * (2/kappa)^a_power * z^z_power. Throws NumericalError at the pole z = 0.
Complex eval_term(const LaurentTerm& term, Complex z, double kappa);

} // namespace sle
