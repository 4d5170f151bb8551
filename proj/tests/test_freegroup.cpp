#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <heegaard/freegroup.hpp>
#include <heegaard/homology.hpp>

using namespace heegaard;

namespace {

const Basis F3_basis{{"x", "y", "z"}};
const Basis F2_basis{{"x", "y"}};

// first presentation word of the (3,3,3) exterior
const char* kD1 = "(x^-1 y)^2 (x y^-1) (x z^-1)^2 (x^-1 z)";
const char* kD2 = "(z y^-1)^2 (z^-1 y) (z^-1 x)^2 (z x^-1)";
const char* kLambda = "(y^-1 x) (y^-1 z)^2 (x^-1 z) (x^-1 y)^2 (z^-1 y) (z^-1 x)^2";

Word rand_word(std::mt19937& rng, const Basis& b, size_t len) {
    std::uniform_int_distribution<int> gen(0, b.rank() - 1);
    std::uniform_int_distribution<int> sgn(0, 1);
    std::vector<Letter> ls;
    for (size_t i = 0; i < len; ++i) ls.push_back({gen(rng), sgn(rng) ? 1 : -1});
    return Word(b, std::move(ls));
}

} // namespace

TEST_CASE("parse of the presentation word has 12 letters") {
    Word w = parse_word(kD1, F3_basis);
    CHECK(w.length() == 12);
    CHECK(format_word(w) == "x^-1 y x^-1 y x y^-1 x z^-1 x z^-1 x^-1 z");
}

TEST_CASE("free cancellation and zero powers") {
    CHECK(format_word(parse_word("x x^-1 y", F2_basis)) == "y");
    CHECK(parse_word("(x y)^0", F2_basis).empty());
    CHECK(format_word(parse_word("(x y)^-1", F2_basis)) == "y^-1 x^-1");
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_word("x w", F2_basis), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("(x y", F2_basis), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("x^", F2_basis), std::invalid_argument);
    CHECK_THROWS_AS(parse_word("x) y", F2_basis), std::invalid_argument);
}

TEST_CASE("cyclic reduction strips conjugating prefixes") {
    Word w = parse_word("x y x^-1", F3_basis);
    CyclicWord c(w);
    CHECK(c.length() == 1);
    CHECK(format_word(c) == "y");

    // free mode keeps the ends
    Word f = parse_word("x y y^-1 x", F3_basis);
    CHECK(format_word(f) == "x x");

    CyclicWord d1(parse_word(kD1, F3_basis));
    CHECK(d1.length() == 12);  // already cyclically reduced
}

TEST_CASE("cyclic word equality is rotation invariant") {
    CyclicWord a(parse_word("x y z", F3_basis));
    CyclicWord b(parse_word("y z x", F3_basis));
    CyclicWord c(parse_word("z y x", F3_basis));
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("abelianization of the fixture words") {
    AbelianVector d1 = abelianize(parse_word(kD1, F3_basis));
    CHECK(d1 == AbelianVector{0, 1, -1});
    AbelianVector d2 = abelianize(parse_word(kD2, F3_basis));
    CHECK(d2 == AbelianVector{1, -1, 0});
    AbelianVector lam = abelianize(parse_word(kLambda, F3_basis));
    CHECK(lam == AbelianVector{0, 0, 0});
    CHECK(abelianize(Word(F3_basis, {})) == AbelianVector{0, 0, 0});
}

TEST_CASE("word algebra") {
    Word xy = parse_word("x y", F2_basis);
    CHECK(format_word(invert(xy)) == "y^-1 x^-1");
    CHECK(invert(invert(xy)) == xy);
    CHECK(concat(parse_word("x", F2_basis), parse_word("x^-1", F2_basis)).empty());
    CHECK(power(xy, 0).empty());

    Word lam = parse_word(kLambda, F3_basis);
    Word boundary = concat(power(lam, 1), power(parse_word("x", F3_basis), 6));
    CHECK(boundary.length() == 24);
    CHECK(format_word(boundary) ==
          "y^-1 x y^-1 z y^-1 z x^-1 z x^-1 y x^-1 y z^-1 y z^-1 x z^-1 x x x x x x x");
}

TEST_CASE("homology of the pretzel presentation is Z") {
    HomologyResult h = homology(
        {parse_word(kD1, F3_basis), parse_word(kD2, F3_basis)}, F3_basis);
    CHECK(h.free_rank == 1);
    CHECK(h.torsion.empty());
}

TEST_CASE("homology basic cases") {
    CHECK(homology(std::vector<Word>{}, F3_basis).free_rank == 3);

    Basis f1{{"x"}};
    HomologyResult h = homology({parse_word("x^2", f1)}, f1);
    CHECK(h.free_rank == 0);
    CHECK(h.torsion == std::vector<std::int64_t>{2});

    Basis f2{{"a", "b"}};
    HomologyResult k = homology({parse_word("a^2", f2), parse_word("b^4", f2)}, f2);
    CHECK(k.free_rank == 0);
    CHECK(k.torsion == std::vector<std::int64_t>{2, 4});
}

TEST_CASE("homology is invariant under relator conjugation and inversion") {
    std::mt19937 rng(1234);
    Word d1 = parse_word(kD1, F3_basis);
    Word d2 = parse_word(kD2, F3_basis);
    HomologyResult ref = homology({d1, d2}, F3_basis);
    for (int trial = 0; trial < 30; ++trial) {
        Word c1 = conjugate(d1, rand_word(rng, F3_basis, 5));
        Word c2 = invert(conjugate(d2, rand_word(rng, F3_basis, 4)));
        CHECK(homology({c1, c2}, F3_basis) == ref);
    }
}

TEST_CASE("reduction is idempotent and parse/format round trips") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        Word w = rand_word(rng, F3_basis, static_cast<size_t>(trial % 17));
        CHECK(free_reduce(w.letters()) == w.letters());
        CyclicWord c(w);
        CHECK(cyclic_reduce(c.letters()) == c.letters());
        CHECK(parse_word(format_word(w), F3_basis) == w);
    }
}

TEST_CASE("abelianize is a homomorphism with bounded one-norm") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        Word a = rand_word(rng, F3_basis, 8);
        Word b = rand_word(rng, F3_basis, 6);
        AbelianVector va = abelianize(a), vb = abelianize(b), vc = abelianize(concat(a, b));
        std::int64_t norm = 0;
        for (size_t i = 0; i < va.size(); ++i) {
            CHECK(vc[i] == va[i] + vb[i]);
            norm += std::abs(va[i]);
        }
        CHECK(norm <= static_cast<std::int64_t>(a.length()));
    }
}

TEST_CASE("empty words and rank-1 bases are legal") {
    Basis f1{{"t"}};
    Word e(f1, {});
    CHECK(e.empty());
    CHECK(CyclicWord(e).empty());
    CHECK(format_word(e).empty());
    CHECK(homology({e}, f1).free_rank == 1);
}
