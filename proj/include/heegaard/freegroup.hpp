// Words in finitely generated free groups: parsing, free/cyclic reduction,
// inversion, abelianization.  Everything here is an immutable value; all
// operations are pure functions.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace heegaard {

/// A free basis: an ordered list of distinct generator names.
/// Names may not contain `^`, `(`, `)`, `-` or whitespace.
class Basis {
public:
    Basis() = default;

    explicit Basis(std::vector<std::string> names) : names_(std::move(names)) {
        std::set<std::string> seen;
        for (const auto& n : names_) {
            if (n.empty())
                throw std::invalid_argument("basis: empty generator name");
            for (char c : n)
                if (is_reserved(c))
                    throw std::invalid_argument("basis: reserved character in name '" + n + "'");
            if (!seen.insert(n).second)
                throw std::invalid_argument("basis: duplicate generator name '" + n + "'");
        }
    }

    static bool is_reserved(char c) {
        return c == '^' || c == '(' || c == ')' || c == '-' ||
               c == ' ' || c == '\t' || c == '\n' || c == '\r';
    }

    int rank() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_.at(static_cast<size_t>(i)); }
    const std::vector<std::string>& names() const { return names_; }

    int index(const std::string& name) const {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        return -1;
    }

    bool operator==(const Basis& o) const { return names_ == o.names_; }
    bool operator!=(const Basis& o) const { return !(*this == o); }

private:
    std::vector<std::string> names_;
};

/// One signed generator occurrence.
struct Letter {
    int gen = 0;   // index into the basis
    int sign = 1;  // +1 or -1

    Letter inverse() const { return {gen, -sign}; }
    bool operator==(const Letter& o) const { return gen == o.gen && sign == o.sign; }
    bool operator!=(const Letter& o) const { return !(*this == o); }
    // positive letter sorts before its inverse
    bool operator<(const Letter& o) const {
        if (gen != o.gen) return gen < o.gen;
        return sign > o.sign;
    }
};

inline bool cancels(const Letter& a, const Letter& b) {
    return a.gen == b.gen && a.sign == -b.sign;
}

inline std::vector<Letter> free_reduce(std::vector<Letter> in) {
    std::vector<Letter> out;
    out.reserve(in.size());
    for (const Letter& l : in) {
        if (!out.empty() && cancels(out.back(), l))
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

inline std::vector<Letter> cyclic_reduce(std::vector<Letter> in) {
    std::vector<Letter> w = free_reduce(std::move(in));
    size_t lo = 0, hi = w.size();
    while (hi - lo >= 2 && cancels(w[lo], w[hi - 1])) { ++lo; --hi; }
    return std::vector<Letter>(w.begin() + static_cast<long>(lo),
                               w.begin() + static_cast<long>(hi));
}

/// A freely reduced word over a fixed basis.
class Word {
public:
    Word() = default;
    Word(Basis basis, std::vector<Letter> letters)
        : basis_(std::move(basis)), letters_(free_reduce(std::move(letters))) {
        check_letters();
    }

    const Basis& basis() const { return basis_; }
    const std::vector<Letter>& letters() const { return letters_; }
    size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    bool operator==(const Word& o) const {
        return basis_ == o.basis_ && letters_ == o.letters_;
    }

private:
    void check_letters() const {
        for (const Letter& l : letters_) {
            if (l.gen < 0 || l.gen >= basis_.rank())
                throw std::invalid_argument("word: letter outside basis");
            if (l.sign != 1 && l.sign != -1)
                throw std::invalid_argument("word: bad letter sign");
        }
    }

    Basis basis_;
    std::vector<Letter> letters_;
};

inline std::vector<Letter> rotate_letters(const std::vector<Letter>& w, size_t k) {
    std::vector<Letter> out;
    out.reserve(w.size());
    for (size_t i = 0; i < w.size(); ++i) out.push_back(w[(i + k) % w.size()]);
    return out;
}

inline std::vector<Letter> least_rotation(const std::vector<Letter>& w) {
    if (w.empty()) return w;
    std::vector<Letter> best = w;
    for (size_t k = 1; k < w.size(); ++k) {
        std::vector<Letter> r = rotate_letters(w, k);
        if (std::lexicographical_compare(r.begin(), r.end(), best.begin(), best.end()))
            best = r;
    }
    return best;
}

/// A cyclically reduced cyclic word.  Equality and ordering use the
/// lexicographically least rotation, so CyclicWord is usable as a map key
/// and hashes deterministically.  The constructor keeps the rotation it was
/// given; `canonical()` exposes the least rotation.
class CyclicWord {
public:
    CyclicWord() = default;
    CyclicWord(Basis basis, std::vector<Letter> letters)
        : basis_(std::move(basis)), letters_(cyclic_reduce(std::move(letters))) {
        for (const Letter& l : letters_)
            if (l.gen < 0 || l.gen >= basis_.rank())
                throw std::invalid_argument("cyclic word: letter outside basis");
    }

    explicit CyclicWord(const Word& w) : CyclicWord(w.basis(), w.letters()) {}

    const Basis& basis() const { return basis_; }
    const std::vector<Letter>& letters() const { return letters_; }
    size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    std::vector<Letter> canonical() const { return least_rotation(letters_); }

    CyclicWord inverse() const {
        std::vector<Letter> inv;
        inv.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
            inv.push_back(it->inverse());
        return CyclicWord(basis_, std::move(inv));
    }

    bool operator==(const CyclicWord& o) const {
        return basis_ == o.basis_ && canonical() == o.canonical();
    }
    bool operator!=(const CyclicWord& o) const { return !(*this == o); }
    bool operator<(const CyclicWord& o) const {
        auto a = canonical(), b = o.canonical();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }

private:
    Basis basis_;
    std::vector<Letter> letters_;
};

// ---- word algebra ----------------------------------------------------------

inline Word concat(const Word& a, const Word& b) {
    if (a.basis() != b.basis())
        throw std::invalid_argument("concat: basis mismatch");
    std::vector<Letter> ls = a.letters();
    ls.insert(ls.end(), b.letters().begin(), b.letters().end());
    return Word(a.basis(), std::move(ls));
}

inline Word invert(const Word& a) {
    std::vector<Letter> ls;
    ls.reserve(a.length());
    for (auto it = a.letters().rbegin(); it != a.letters().rend(); ++it)
        ls.push_back(it->inverse());
    return Word(a.basis(), std::move(ls));
}

inline Word power(const Word& a, int n) {
    Word r(a.basis(), {});
    Word base = n < 0 ? invert(a) : a;
    for (int i = 0; i < std::abs(n); ++i) r = concat(r, base);
    return r;
}

inline Word conjugate(const Word& a, const Word& by) {
    return concat(concat(invert(by), a), by);
}

// ---- parsing and formatting ------------------------------------------------

namespace detail {

struct Parser {
    const std::string& text;
    const Basis& basis;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' ||
                                     text[pos] == '\n' || text[pos] == '\r'))
            ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    int parse_int() {
        skip_ws();
        size_t start = pos;
        if (pos < text.size() && text[pos] == '-') ++pos;
        size_t digits = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == digits)
            throw std::invalid_argument("parse: malformed exponent at position " +
                                        std::to_string(start));
        return std::stoi(text.substr(start, pos - start));
    }

    std::vector<Letter> parse_word(bool inside_paren) {
        std::vector<Letter> acc;
        while (true) {
            skip_ws();
            if (pos >= text.size()) break;
            char c = text[pos];
            if (c == ')') {
                if (!inside_paren)
                    throw std::invalid_argument("parse: unbalanced ')'");
                break;
            }
            std::vector<Letter> atom;
            if (c == '(') {
                ++pos;
                atom = parse_word(true);
                skip_ws();
                if (pos >= text.size() || text[pos] != ')')
                    throw std::invalid_argument("parse: unbalanced '('");
                ++pos;
            } else {
                size_t start = pos;
                while (pos < text.size() && !Basis::is_reserved(text[pos])) ++pos;
                std::string name = text.substr(start, pos - start);
                if (name.empty())
                    throw std::invalid_argument("parse: unexpected character '" +
                                                std::string(1, c) + "'");
                int g = basis.index(name);
                if (g < 0)
                    throw std::invalid_argument("parse: unknown generator '" + name + "'");
                atom.push_back({g, 1});
            }
            int exp = 1;
            skip_ws();
            if (pos < text.size() && text[pos] == '^') {
                ++pos;
                exp = parse_int();
            }
            std::vector<Letter> powered;
            if (exp != 0) {
                std::vector<Letter> unit = atom;
                if (exp < 0) {
                    std::reverse(unit.begin(), unit.end());
                    for (Letter& l : unit) l = l.inverse();
                }
                for (int i = 0; i < std::abs(exp); ++i)
                    powered.insert(powered.end(), unit.begin(), unit.end());
            }
            acc.insert(acc.end(), powered.begin(), powered.end());
        }
        return acc;
    }
};

} // namespace detail

/// Grammar: word := term {term} ; term := atom ["^" integer] ;
/// atom := name | "(" word ")".  Terms are whitespace separated; inversion
/// is written with a negative exponent.
inline Word parse_word(const std::string& text, const Basis& basis) {
    detail::Parser p{text, basis};
    std::vector<Letter> ls = p.parse_word(false);
    if (!p.at_end())
        throw std::invalid_argument("parse: trailing input");
    return Word(basis, std::move(ls));
}

inline std::string format_letter(const Basis& basis, const Letter& l) {
    std::string s = basis.name(l.gen);
    if (l.sign < 0) s += "^-1";
    return s;
}

inline std::string format_letters(const Basis& basis, const std::vector<Letter>& ls) {
    std::string out;
    for (size_t i = 0; i < ls.size(); ++i) {
        if (i) out += ' ';
        out += format_letter(basis, ls[i]);
    }
    return out;
}

inline std::string format_word(const Word& w) { return format_letters(w.basis(), w.letters()); }
inline std::string format_word(const CyclicWord& w) { return format_letters(w.basis(), w.letters()); }

// ---- abelianization --------------------------------------------------------

/// Exponent-sum vector, one entry per generator.
using AbelianVector = std::vector<std::int64_t>;

inline AbelianVector abelianize_letters(const Basis& basis, const std::vector<Letter>& ls) {
    AbelianVector v(static_cast<size_t>(basis.rank()), 0);
    for (const Letter& l : ls) v[static_cast<size_t>(l.gen)] += l.sign;
    return v;
}

inline AbelianVector abelianize(const Word& w) { return abelianize_letters(w.basis(), w.letters()); }
inline AbelianVector abelianize(const CyclicWord& w) { return abelianize_letters(w.basis(), w.letters()); }

} // namespace heegaard
