#include "sle/vf_algebra.hpp"

#include "sle/errors.hpp"

#include <cmath>

namespace sle {

MultiIndex::MultiIndex(std::initializer_list<int> letters) {
    letters_.reserve(letters.size());
    for (int l : letters) {
        require(l == 0 || l == 1, "multi-index letters must be 0 or 1");
        letters_.push_back(static_cast<Letter>(l));
    }
}

MultiIndex MultiIndex::parse(std::string_view text) {
    std::vector<Letter> letters;
    letters.reserve(text.size());
    for (char c : text) {
        require(c == '0' || c == '1', "multi-index must be a string of 0/1, got '" + std::string(text) + "'");
        letters.push_back(c == '0' ? Letter::Time : Letter::Noise);
    }
    return MultiIndex(std::move(letters));
}

std::size_t MultiIndex::time_count() const {
    std::size_t m = 0;
    for (Letter l : letters_) m += l == Letter::Time;
    return m;
}

std::size_t MultiIndex::noise_count() const { return length() - time_count(); }

MultiIndex MultiIndex::appended(Letter letter) const {
    MultiIndex out = *this;
    out.letters_.push_back(letter);
    return out;
}

std::string MultiIndex::str() const {
    std::string s;
    s.reserve(letters_.size());
    for (Letter l : letters_) s.push_back(l == Letter::Time ? '0' : '1');
    return s;
}

Rational degree(const MultiIndex& word) {
    return Rational(static_cast<std::int64_t>(word.time_count())) +
           Rational(static_cast<std::int64_t>(word.noise_count()), 2);
}

std::vector<MultiIndex> words_of_length(std::size_t r) {
    require(r < 63, "word length too large");
    const std::uint64_t count = std::uint64_t{1} << r;
    std::vector<MultiIndex> out;
    out.reserve(count);
    for (std::uint64_t bits = 0; bits < count; ++bits) {
        std::vector<Letter> letters(r);
        for (std::size_t j = 0; j < r; ++j) {
            letters[j] = static_cast<Letter>((bits >> (r - 1 - j)) & 1U);
        }
        out.emplace_back(std::move(letters));
    }
    return out;
}

std::vector<MultiIndex> words_up_to(std::size_t r) {
    std::vector<MultiIndex> out;
    for (std::size_t len = 0; len <= r; ++len) {
        auto level = words_of_length(len);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

namespace {

std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
    std::int64_t out = 0;
    if (__builtin_mul_overflow(x, y, &out)) throw NumericalError("Laurent coefficient overflow");
    return out;
}

} // namespace

LaurentTerm compose(const MultiIndex& word) {
    // Coefficients stay integral: d/dz z^p = p z^(p-1).
    std::int64_t coeff = 1;
    int a_power = 0;
    int z_power = 1;
    for (std::size_t k = word.length(); k-- > 0;) {
        if (coeff == 0) break;
        if (word[k] == Letter::Noise) {
            coeff = checked_mul(coeff, z_power);
            z_power -= 1;
        } else {
            coeff = checked_mul(coeff, -z_power);
            a_power += 1;
            z_power -= 2;
        }
    }
    if (coeff == 0) return LaurentTerm{};
    return LaurentTerm{Rational(coeff), a_power, z_power};
}

std::vector<ComposedWord> enumerate_level(std::size_t r, std::size_t cap) {
    require(r <= cap, "level " + std::to_string(r) + " exceeds cap " + std::to_string(cap));
    std::vector<ComposedWord> out;
    for (auto& word : words_of_length(r)) {
        LaurentTerm term = compose(word);
        out.push_back({std::move(word), term});
    }
    return out;
}

namespace {

Complex integer_power(Complex z, int p) {
    Complex base = p < 0 ? Complex(1.0) / z : z;
    unsigned e = static_cast<unsigned>(p < 0 ? -p : p);
    Complex acc(1.0);
    while (e != 0) {
        if (e & 1U) acc *= base;
        base *= base;
        e >>= 1U;
    }
    return acc;
}

} // namespace

Complex eval_term(const LaurentTerm& term, Complex z, double kappa) {
    require(kappa > 0.0, "kappa must be positive");
    if (term.is_zero()) return {0.0, 0.0};
    if (term.z_power < 0 && z == Complex(0.0)) throw NumericalError("Laurent term evaluated at its pole z = 0");
    const double c = boost::rational_cast<double>(term.coeff) * std::pow(2.0 / kappa, term.a_power);
    return c * integer_power(z, term.z_power);
}

} // namespace sle
