/* ------------------------------------------------------------------------- */
/* Exact text I/O.                                                           */
/*                                                                           */
/* Rendering: canonical strings for scalars, polynomials, matrices, quivers  */
/* and representations.  Parsing: a small exact expression grammar           */
/*                                                                           */
/*   expr   := term (('+'|'-') term)*                                        */
/*   term   := factor (('*'|'/') factor)*                                    */
/*   factor := '-' factor | atom ('^' uint)?                                 */
/*   atom   := uint | letter | '(' expr ')'                                  */
/*                                                                           */
/* evaluated exactly over the coefficient field, with an optional            */
/* polynomial indeterminate.  Over a rational-function base field the        */
/* letter `t` denotes the field generator and `x` the indeterminate; over    */
/* plain fields both `t` and `x` are accepted for the indeterminate.         */
/*                                                                           */
/* File grammars (line oriented, `#` starts a comment, blank lines are       */
/* skipped):                                                                 */
/*   quiver:  `vertices <n>` then `arrow <label> <src> <tgt>` (1-based)      */
/*   rep:     `dims <d1> ... <dn>` then per arrow `arrow <label>` followed   */
/*            by dim(tgt) rows of dim(src) whitespace-separated entries      */
/*   matrix:  `rows <r> cols <c>` then r rows of c entries                   */
/* ------------------------------------------------------------------------- */
#pragma once

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "arq/error.hpp"
#include "arq/matrix.hpp"
#include "arq/poly.hpp"
#include "arq/quiver.hpp"
#include "arq/rep.hpp"
#include "arq/scalar.hpp"

namespace arq {

/* ---------------------------------------------------------------- *
 *  scalar and polynomial rendering
 * ---------------------------------------------------------------- */

template <FieldLike K>
std::string poly_str(const Poly<K>& p, const std::string& var);

inline std::string scalar_str(const Rat& r) {
    std::ostringstream os;
    os << rat_num(r);
    if (rat_den(r) != 1) os << "/" << rat_den(r);
    return os.str();
}

template <std::uint64_t P>
std::string scalar_str(const Fp<P>& a) {
    return std::to_string(a.v);
}

/* true when the string has a top-level '+', or '-' past position 0; such a
 * string needs parentheses before '*' or '/' can be applied to it */
inline bool needs_parens_sum(const std::string& s) {
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '(') ++depth;
        else if (c == ')') --depth;
        else if (depth == 0 && (c == '+' || (c == '-' && i > 0))) return true;
    }
    return false;
}

/* true when the string is a bare integer, a letter, or letter^uint */
inline bool is_atom_power(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (std::isdigit(static_cast<unsigned char>(s[0]))) {
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        return i == s.size();
    }
    if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    if (s.size() == 1) return true;
    if (s[1] != '^' || s.size() == 2) return false;
    for (i = 2; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

template <FieldLike K>
std::string scalar_str(const RatFunc<K>& f) {
    std::string n = poly_str(f.num, "t");
    if (f.den.degree() == 0) return n;
    std::string d = poly_str(f.den, "t");
    if (needs_parens_sum(n)) n = "(" + n + ")";
    if (!is_atom_power(d)) d = "(" + d + ")";
    return n + "/" + d;
}

template <FieldLike K>
std::string poly_str(const Poly<K>& p, const std::string& var) {
    if (p.is_zero()) return "0";
    std::string out;
    for (long long d = p.degree(); d >= 0; --d) {
        K c = p.coeff(d);
        if (arq::is_zero(c)) continue;
        std::string piece;
        if (d == 0) {
            piece = scalar_str(c);
            if (!out.empty() && needs_parens_sum(piece) && piece[0] != '-')
                piece = "(" + piece + ")";
        } else {
            std::string vp = (d == 1) ? var : var + "^" + std::to_string(d);
            if (arq::is_zero(c - field_traits<K>::one())) {
                piece = vp;
            } else if (arq::is_zero(c + field_traits<K>::one())) {
                piece = "-" + vp;
            } else {
                std::string cs = scalar_str(c);
                if (needs_parens_sum(cs)) cs = "(" + cs + ")";
                piece = cs + "*" + vp;
            }
        }
        if (out.empty()) out = piece;
        else if (piece[0] == '-') out += piece;
        else out += "+" + piece;
    }
    return out;
}

/* ---------------------------------------------------------------- *
 *  expression parsing
 * ---------------------------------------------------------------- */

template <FieldLike K>
K scalar_from_digits(const std::string& s) {
    K v = field_traits<K>::zero();
    for (char c : s) v = v * K(10) + K(static_cast<long long>(c - '0'));
    return v;
}

template <FieldLike K>
class ExprParser {
  public:
    /* vars: letters evaluating to the polynomial indeterminate */
    ExprParser(const std::string& text, std::string vars) : s_(strip(text)), vars_(std::move(vars)) {}

    Poly<K> parse() {
        if (s_.empty()) throw parse_error("empty expression");
        Poly<K> v = expr();
        if (pos_ != s_.size())
            throw parse_error("unexpected character '" + std::string(1, s_[pos_]) + "' in expression");
        return v;
    }

  private:
    std::string s_;
    std::string vars_;
    std::size_t pos_ = 0;

    static std::string strip(const std::string& t) {
        std::string r;
        for (char c : t)
            if (!std::isspace(static_cast<unsigned char>(c))) r += c;
        return r;
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Poly<K> expr() {
        Poly<K> v = term();
        for (;;) {
            if (eat('+')) v = v + term();
            else if (eat('-')) v = v - term();
            else return v;
        }
    }

    Poly<K> term() {
        Poly<K> v = factor();
        for (;;) {
            if (eat('*')) {
                v = v * factor();
            } else if (eat('/')) {
                Poly<K> d = factor();
                if (d.is_zero()) throw parse_error("division by zero in expression");
                if (d.degree() == 0) {
                    v = v * Poly<K>::from_coeffs({field_traits<K>::one() / d.coeff(0)});
                } else {
                    auto [q, r] = poly_divmod(v, d);
                    if (!r.is_zero()) throw parse_error("nonexact polynomial division in expression");
                    v = q;
                }
            } else {
                return v;
            }
        }
    }

    Poly<K> factor() {
        if (eat('-')) return Poly<K>::zero() - factor();
        Poly<K> v = atom();
        if (eat('^')) {
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                throw parse_error("exponent must be a nonnegative integer");
            long long e = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                e = e * 10 + (s_[pos_++] - '0');
                if (e > 512) throw parse_error("exponent too large");
            }
            v = poly_pow(v, static_cast<int>(e));
        }
        return v;
    }

    Poly<K> atom() {
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (std::isdigit(static_cast<unsigned char>(peek()))) digits += s_[pos_++];
            return Poly<K>::from_coeffs({scalar_from_digits<K>(digits)});
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            ++pos_;
            if (vars_.find(c) != std::string::npos) return Poly<K>::x();
            if constexpr (field_traits<K>::is_rational_function) {
                if (c == 't') return Poly<K>::from_coeffs({K::t()});
            }
            throw parse_error("unknown symbol '" + std::string(1, c) + "' in expression");
        }
        if (eat('(')) {
            Poly<K> v = expr();
            if (!eat(')')) throw parse_error("missing ')' in expression");
            return v;
        }
        throw parse_error("malformed expression");
    }
};

/* a pure field scalar: no polynomial indeterminate allowed */
template <FieldLike K>
K parse_scalar(const std::string& text) {
    Poly<K> p = ExprParser<K>(text, "").parse();
    if (p.degree() > 0) throw parse_error("expected a scalar, got a polynomial: " + text);
    return p.is_zero() ? field_traits<K>::zero() : p.coeff(0);
}

/* the display letter for polynomials over K */
template <FieldLike K>
const char* poly_var() {
    return field_traits<K>::is_rational_function ? "x" : "t";
}

template <FieldLike K>
Poly<K> parse_poly(const std::string& text) {
    const char* vs = field_traits<K>::is_rational_function ? "x" : "tx";
    return ExprParser<K>(text, vs).parse();
}

/* ---------------------------------------------------------------- *
 *  projective-line point labels: `inf` or a nonconstant polynomial
 *  (normalized monic); nullopt encodes the point at infinity
 * ---------------------------------------------------------------- */

template <FieldLike K>
std::optional<Poly<K>> point_poly(const std::string& label) {
    if (label == "inf") return std::nullopt;
    Poly<K> p = parse_poly<K>(label);
    ARQ_REQUIRE(p.degree() >= 1, "point label must be a nonconstant polynomial: " + label);
    return p.monic();
}

template <FieldLike K>
std::string point_str(const std::optional<Poly<K>>& p) {
    if (!p) return "inf";
    return poly_str(*p, poly_var<K>());
}

template <FieldLike K>
std::string canonical_point(const std::string& label) {
    return point_str<K>(point_poly<K>(label));
}

/* ---------------------------------------------------------------- *
 *  line-oriented file helpers
 * ---------------------------------------------------------------- */

inline std::vector<std::string> significant_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (!blank) out.push_back(line);
    }
    return out;
}

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline long long parse_int_str(const std::string& s) {
    std::size_t idx = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &idx);
    } catch (...) {
        throw parse_error("expected an integer, got '" + s + "'");
    }
    if (idx != s.size()) throw parse_error("expected an integer, got '" + s + "'");
    return v;
}

/* ---------------------------------------------------------------- *
 *  quiver files
 * ---------------------------------------------------------------- */

inline Quiver parse_quiver_text(const std::string& text) {
    auto lines = significant_lines(text);
    if (lines.empty()) throw parse_error("empty quiver description");
    auto head = split_ws(lines[0]);
    if (head.size() != 2 || head[0] != "vertices")
        throw parse_error("quiver description must start with 'vertices <n>'");
    Quiver q;
    q.n = static_cast<int>(parse_int_str(head[1]));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto f = split_ws(lines[i]);
        if (f.size() != 4 || f[0] != "arrow")
            throw parse_error("expected 'arrow <label> <src> <tgt>', got: " + lines[i]);
        int s = static_cast<int>(parse_int_str(f[2]));
        int t = static_cast<int>(parse_int_str(f[3]));
        q.arrows.push_back({f[1], s - 1, t - 1});
    }
    q.validate();
    return q;
}

inline std::string quiver_str(const Quiver& q) {
    std::ostringstream os;
    os << "vertices " << q.n << "\n";
    for (const auto& a : q.arrows) os << "arrow " << a.label << " " << a.src + 1 << " " << a.tgt + 1 << "\n";
    return os.str();
}

/* ---------------------------------------------------------------- *
 *  matrix blocks and representation files
 * ---------------------------------------------------------------- */

template <FieldLike K>
std::string matrix_rows_str(const Matrix<K>& m) {
    std::ostringstream os;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) os << " ";
            os << scalar_str(m.at(r, c));
        }
        os << "\n";
    }
    return os.str();
}

template <FieldLike K>
Matrix<K> parse_matrix_rows(const std::vector<std::string>& lines, std::size_t& i, std::size_t rows,
                            std::size_t cols) {
    Matrix<K> m(rows, cols);
    if (rows == 0 || cols == 0) return m;
    for (std::size_t r = 0; r < rows; ++r) {
        if (i >= lines.size()) throw parse_error("matrix block ends early");
        auto f = split_ws(lines[i++]);
        if (f.size() != cols)
            throw parse_error("matrix row has " + std::to_string(f.size()) + " entries, expected " +
                              std::to_string(cols));
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = parse_scalar<K>(f[c]);
    }
    return m;
}

template <FieldLike K>
Matrix<K> parse_matrix_text(const std::string& text) {
    auto lines = significant_lines(text);
    if (lines.empty()) throw parse_error("empty matrix description");
    auto head = split_ws(lines[0]);
    if (head.size() != 4 || head[0] != "rows" || head[2] != "cols")
        throw parse_error("matrix description must start with 'rows <r> cols <c>'");
    std::size_t r = static_cast<std::size_t>(parse_int_str(head[1]));
    std::size_t c = static_cast<std::size_t>(parse_int_str(head[3]));
    std::size_t i = 1;
    Matrix<K> m = parse_matrix_rows<K>(lines, i, r, c);
    if (i != lines.size()) throw parse_error("trailing content after matrix rows");
    return m;
}

template <FieldLike K>
std::string matrix_str(const Matrix<K>& m) {
    std::ostringstream os;
    os << "rows " << m.rows() << " cols " << m.cols() << "\n" << matrix_rows_str(m);
    return os.str();
}

template <FieldLike K>
Rep<K> parse_rep_text(const Quiver& q, const std::string& text) {
    auto lines = significant_lines(text);
    if (lines.empty()) throw parse_error("empty representation description");
    auto head = split_ws(lines[0]);
    if (head.empty() || head[0] != "dims")
        throw parse_error("representation description must start with 'dims <d1> ... <dn>'");
    if (head.size() != static_cast<std::size_t>(q.n) + 1)
        throw parse_error("dims line must list one dimension per vertex");
    Rep<K> x;
    x.q = q;
    x.dims.resize(q.n);
    for (int v = 0; v < q.n; ++v) {
        x.dims[v] = parse_int_str(head[v + 1]);
        if (x.dims[v] < 0) throw parse_error("negative dimension in dims line");
    }
    x.mats.clear();
    for (const auto& a : q.arrows)
        x.mats.emplace_back(static_cast<std::size_t>(x.dims[a.tgt]), static_cast<std::size_t>(x.dims[a.src]));
    std::vector<bool> seen(q.arrows.size(), false);
    std::size_t i = 1;
    while (i < lines.size()) {
        auto f = split_ws(lines[i]);
        if (f.size() != 2 || f[0] != "arrow")
            throw parse_error("expected 'arrow <label>', got: " + lines[i]);
        std::size_t ai = q.arrows.size();
        for (std::size_t j = 0; j < q.arrows.size(); ++j)
            if (q.arrows[j].label == f[1]) ai = j;
        if (ai == q.arrows.size()) throw parse_error("unknown arrow label '" + f[1] + "'");
        if (seen[ai]) throw parse_error("duplicate arrow block '" + f[1] + "'");
        seen[ai] = true;
        ++i;
        x.mats[ai] = parse_matrix_rows<K>(lines, i, static_cast<std::size_t>(x.dims[q.arrows[ai].tgt]),
                                          static_cast<std::size_t>(x.dims[q.arrows[ai].src]));
    }
    for (std::size_t j = 0; j < q.arrows.size(); ++j)
        if (!seen[j]) throw parse_error("missing arrow block '" + q.arrows[j].label + "'");
    x.validate();
    return x;
}

template <FieldLike K>
std::string rep_str(const Rep<K>& x) {
    std::ostringstream os;
    os << "dims";
    for (auto d : x.dims) os << " " << d;
    os << "\n";
    for (std::size_t j = 0; j < x.q.arrows.size(); ++j)
        os << "arrow " << x.q.arrows[j].label << "\n" << matrix_rows_str(x.mats[j]);
    return os.str();
}

/* dimension vectors as `[d1,d2,...]` */
inline std::string dimvec_str(const DimVec& d) {
    std::string s = "[";
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(d[i]);
    }
    return s + "]";
}

}  // namespace arq
