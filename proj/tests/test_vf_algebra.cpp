#include "sle/errors.hpp"
#include "sle/vf_algebra.hpp"

#include "fd_oracle.hpp"

#include <doctest.h>

#include <random>

using sle::Complex;
using sle::LaurentTerm;
using sle::MultiIndex;
using sle::Rational;

TEST_CASE("degree is m + n/2") {
    CHECK(sle::degree(MultiIndex{0}) == Rational(1));
    CHECK(sle::degree(MultiIndex{1}) == Rational(1, 2));
    CHECK(sle::degree(MultiIndex{0, 1, 1}) == Rational(2));
    CHECK(sle::degree(MultiIndex{}) == Rational(0));
}

TEST_CASE("multi-index parsing and printing") {
    const auto w = MultiIndex::parse("0110");
    CHECK(w.length() == 4);
    CHECK(w.time_count() == 2);
    CHECK(w.noise_count() == 2);
    CHECK(w.str() == "0110");
    CHECK(MultiIndex::parse("").empty());
    CHECK(w == (MultiIndex{0, 1, 1, 0}));
    CHECK_THROWS_AS(MultiIndex::parse("012"), sle::ValidationError);
}

TEST_CASE("compose: hand-computed terms") {
    CHECK(sle::compose(MultiIndex{}) == LaurentTerm{Rational(1), 0, 1});
    CHECK(sle::compose(MultiIndex{0}) == LaurentTerm{Rational(-1), 1, -1});
    CHECK(sle::compose(MultiIndex{1}) == LaurentTerm{Rational(1), 0, 0});
    CHECK(sle::compose(MultiIndex{1, 1}).is_zero());
    CHECK(sle::compose(MultiIndex{0, 0}) == LaurentTerm{Rational(-1), 2, -3});
    CHECK(sle::compose(MultiIndex{1, 0}) == LaurentTerm{Rational(1), 1, -2});
    CHECK(sle::compose(MultiIndex{0, 1}).is_zero());
}

TEST_CASE("enumerate_level counts and cap") {
    CHECK(sle::enumerate_level(0).size() == 1);
    CHECK(sle::enumerate_level(1).size() == 2);
    CHECK(sle::enumerate_level(2).size() == 4);
    const auto level3 = sle::enumerate_level(3);
    REQUIRE(level3.size() == 8);
    // Brute force: a word of length >= 2 survives iff the first operator applied
    // (its last letter) is the time field; a trailing noise letter leaves a constant.
    std::size_t nonzero = 0;
    for (const auto& [word, term] : level3) {
        const bool expected_nonzero = word[2] == sle::Letter::Time;
        CHECK(!term.is_zero() == expected_nonzero);
        nonzero += !term.is_zero();
    }
    CHECK(nonzero == 4);
    CHECK_THROWS_AS(sle::enumerate_level(13), sle::ValidationError);
    CHECK(sle::enumerate_level(13, 13).size() == 8192);
}

TEST_CASE("nonzero terms follow the power law z^(1 - 2m - n)") {
    for (std::size_t r = 0; r <= 10; ++r) {
        for (const auto& [word, term] : sle::enumerate_level(r)) {
            if (term.is_zero()) continue;
            const int m = static_cast<int>(word.time_count());
            const int n = static_cast<int>(word.noise_count());
            REQUIRE(term.z_power == 1 - 2 * m - n);
            REQUIRE(term.a_power == m);
        }
    }
}

TEST_CASE("eval_term") {
    const double eps = 0.01;
    const Complex v = sle::eval_term(sle::compose(MultiIndex{0}), Complex(0.0, eps), 2.0);
    CHECK(v.real() == doctest::Approx(0.0));
    CHECK(v.imag() == doctest::Approx(1.0 / eps).epsilon(1e-15));

    const Complex z(0.3, 0.7);
    CHECK(sle::eval_term(LaurentTerm::identity(), z, 3.0) == z);
    CHECK(sle::eval_term(LaurentTerm{}, z, 3.0) == Complex(0.0));
    CHECK(sle::eval_term(LaurentTerm{}, Complex(0.0), 3.0) == Complex(0.0));
    CHECK_THROWS_AS(sle::eval_term(sle::compose(MultiIndex{0}), Complex(0.0), 2.0), sle::NumericalError);
}

TEST_CASE("|eval_term| at eps*i scales as eps^(1 - 2m - n)") {
    for (const auto& [word, term] : sle::enumerate_level(4)) {
        if (term.is_zero()) continue;
        const double k = 8.0 / 3.0;
        const double a = 2.0 / k;
        for (double eps : {0.1, 0.01}) {
            const double expected = std::abs(boost::rational_cast<double>(term.coeff)) * std::pow(a, term.a_power) *
                                    std::pow(eps, 1.0 - 2.0 * word.time_count() - word.noise_count());
            CHECK(std::abs(sle::eval_term(term, Complex(0.0, eps), k)) == doctest::Approx(expected).epsilon(1e-13));
        }
    }
}

TEST_CASE("symbolic composition matches the finite-difference operator chain") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> re(-2.0, 2.0);
    std::uniform_real_distribution<double> im(0.2, 2.0);
    std::uniform_real_distribution<double> kap(0.5, 8.0);
    for (std::size_t r = 1; r <= 4; ++r) {
        for (const auto& word : sle::words_of_length(r)) {
            for (int trial = 0; trial < 3; ++trial) {
                const Complex z(re(rng), im(rng));
                const double kappa = kap(rng);
                const Complex symbolic = sle::eval_term(sle::compose(word), z, kappa);
                const Complex numeric = sle::test::apply_operator_chain(word, z, kappa);
                const double scale = std::max(std::abs(numeric), 1e-300);
                INFO("word " << word.str() << " z " << z);
                if (sle::compose(word).is_zero()) {
                    CHECK(std::abs(numeric) < 1e-8);
                } else {
                    CHECK(std::abs(symbolic - numeric) / scale < 1e-6);
                }
            }
        }
    }
}

TEST_CASE("coefficient overflow is reported") {
    std::vector<sle::Letter> letters(40, sle::Letter::Time);
    CHECK_THROWS_AS(sle::compose(MultiIndex(letters)), sle::NumericalError);
}
