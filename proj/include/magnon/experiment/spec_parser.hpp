#pragma once

#include "../core/builders.hpp"
#include "../core/errors.hpp"
#include "../core/sector_basis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace magnon::experiment {

/// State template grammar
///
///   spec  := name '(' [entry (sep entry)*] ')'
///   sep   := ',' | ';'
///   entry := [ident '='] item
///   item  := expr ['^' expr]              repetition, only inside lists
///   expr  := term (('+' | '-') term)*
///   term  := unary (('*' | '/') unary)*
///   unary := '-' unary | atom
///   atom  := number | 'N' | 'pi' | '(' expr ')' | '{' expr '}'
///
/// Names: magnons(N, k...), dicke(N, m), band(N, m, extras...),
/// product(N, theta, alpha), ghz(N), w(N), modexp(N1, x, M).
/// Unnamed entries after a list parameter extend that list. Inside the
/// arguments the identifier N is the scan variable supplied at instantiation.

enum class StateKind { magnons, dicke, band, product, ghz, w, modexp };

inline constexpr int kMaxExpressionDepth = 64;

/// Concrete, validated state description.
struct StateSpec {
    StateKind kind = StateKind::ghz;
    int n = 0;                 // sites (first register size for modexp)
    int m = 0;                 // dicke, band
    std::vector<int> js;       // magnons: wavenumber indices; band: extras
    double theta = 0.0;
    double alpha = 0.0;
    std::uint64_t base = 0;    // modexp x
    std::uint64_t modulus = 0; // modexp M

    /// Total number of sites of the built state.
    int sites() const
    {
        return kind == StateKind::modexp ? n + core::modexp_register_bits(modulus) : n;
    }

    /// Number of magnons for single-sector families, -1 otherwise.
    int magnons() const
    {
        switch (kind) {
        case StateKind::magnons:
            return static_cast<int>(js.size());
        case StateKind::dicke:
            return m;
        case StateKind::band:
            return m + static_cast<int>(js.size());
        case StateKind::w:
            return 1;
        default:
            return -1;
        }
    }

    std::string text() const
    {
        std::ostringstream os;
        os.precision(12);
        auto list = [&] {
            for (std::size_t i = 0; i < js.size(); ++i) {
                os << (i ? "," : "") << js[i];
            }
        };
        switch (kind) {
        case StateKind::magnons:
            os << "magnons(N=" << n << ";k=";
            list();
            os << ')';
            break;
        case StateKind::dicke:
            os << "dicke(N=" << n << ",m=" << m << ')';
            break;
        case StateKind::band:
            os << "band(N=" << n << ",m=" << m;
            if (!js.empty()) {
                os << ";extras=";
                list();
            }
            os << ')';
            break;
        case StateKind::product:
            os << "product(N=" << n << ",theta=" << theta << ",alpha=" << alpha << ')';
            break;
        case StateKind::ghz:
            os << "ghz(N=" << n << ')';
            break;
        case StateKind::w:
            os << "w(N=" << n << ')';
            break;
        case StateKind::modexp:
            os << "modexp(N1=" << n << ",x=" << base << ",M=" << modulus << ')';
            break;
        }
        return os.str();
    }
};

namespace detail {

struct Token {
    enum class Type { ident, number, symbol, end } type = Type::end;
    std::string text;
    double value = 0.0;
    std::size_t pos = 0;
};

inline std::vector<Token> tokenize(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        Token t;
        t.pos = i;
        if (std::isalpha(c) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) {
                ++j;
            }
            t.type = Token::Type::ident;
            t.text = std::string(s.substr(i, j - i));
            i = j;
        } else if (std::isdigit(c) || c == '.') {
            std::size_t j = i;
            while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) {
                ++j;
            }
            if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < s.size() && (s[k] == '+' || s[k] == '-')) {
                    ++k;
                }
                if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
                    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
                        ++k;
                    }
                    j = k;
                }
            }
            t.type = Token::Type::number;
            t.text = std::string(s.substr(i, j - i));
            std::istringstream is(t.text);
            is >> t.value;
            if (!is || is.peek() != std::char_traits<char>::eof()) {
                throw SpecSyntaxError(i, "malformed number '" + t.text + "'");
            }
            i = j;
        } else if (std::string_view("(){},;=^+-*/").find(static_cast<char>(c)) != std::string_view::npos) {
            t.type = Token::Type::symbol;
            t.text = std::string(1, static_cast<char>(c));
            ++i;
        } else {
            throw SpecSyntaxError(i, "unexpected character");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.pos = s.size();
    out.push_back(end);
    return out;
}

struct Expr {
    enum class Op { number, var_n, pi, add, sub, mul, div, neg } op = Op::number;
    double value = 0.0;
    std::shared_ptr<const Expr> lhs;
    std::shared_ptr<const Expr> rhs;
    std::size_t pos = 0;

    bool uses_n() const
    {
        return op == Op::var_n || (lhs && lhs->uses_n()) || (rhs && rhs->uses_n());
    }

    double eval(std::optional<int> n_value) const
    {
        switch (op) {
        case Op::number:
            return value;
        case Op::var_n:
            if (!n_value) {
                throw InputError("spec uses N but no value of N was supplied");
            }
            return *n_value;
        case Op::pi:
            return std::numbers::pi;
        case Op::add:
            return lhs->eval(n_value) + rhs->eval(n_value);
        case Op::sub:
            return lhs->eval(n_value) - rhs->eval(n_value);
        case Op::mul:
            return lhs->eval(n_value) * rhs->eval(n_value);
        case Op::div:
            return lhs->eval(n_value) / rhs->eval(n_value);
        case Op::neg:
            return -lhs->eval(n_value);
        }
        return 0.0;
    }
};

using ExprPtr = std::shared_ptr<const Expr>;

struct Item {
    ExprPtr value;
    ExprPtr count; // null unless '^' given
    std::size_t pos = 0;
};

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

    const Token& peek(std::size_t ahead = 0) const
    {
        return tokens_[std::min(i_ + ahead, tokens_.size() - 1)];
    }
    const Token& take() { return tokens_[i_ < tokens_.size() - 1 ? i_++ : i_]; }

    bool at_symbol(const char* s) const
    {
        return peek().type == Token::Type::symbol && peek().text == s;
    }

    void expect(const char* s)
    {
        if (!at_symbol(s)) {
            throw SpecSyntaxError(peek().pos, std::string("expected '") + s + "'");
        }
        take();
    }

    ExprPtr expr(int depth)
    {
        guard(depth);
        ExprPtr left = term(depth + 1);
        while (at_symbol("+") || at_symbol("-")) {
            const Token& op = take();
            ExprPtr right = term(depth + 1);
            left = binary(op.text == "+" ? Expr::Op::add : Expr::Op::sub, left, right, op.pos);
        }
        return left;
    }

    Item item()
    {
        Item it;
        it.pos = peek().pos;
        it.value = expr(0);
        if (at_symbol("^")) {
            take();
            it.count = expr(0);
        }
        return it;
    }

private:
    void guard(int depth) const
    {
        if (depth > kMaxExpressionDepth) {
            throw SpecSyntaxError(peek().pos, "expression nested too deeply");
        }
    }

    static ExprPtr binary(Expr::Op op, ExprPtr a, ExprPtr b, std::size_t pos)
    {
        auto e = std::make_shared<Expr>();
        e->op = op;
        e->lhs = std::move(a);
        e->rhs = std::move(b);
        e->pos = pos;
        return e;
    }

    ExprPtr term(int depth)
    {
        guard(depth);
        ExprPtr left = unary(depth + 1);
        while (at_symbol("*") || at_symbol("/")) {
            const Token& op = take();
            ExprPtr right = unary(depth + 1);
            left = binary(op.text == "*" ? Expr::Op::mul : Expr::Op::div, left, right, op.pos);
        }
        return left;
    }

    ExprPtr unary(int depth)
    {
        guard(depth);
        if (at_symbol("-")) {
            const std::size_t pos = take().pos;
            auto e = std::make_shared<Expr>();
            e->op = Expr::Op::neg;
            e->lhs = unary(depth + 1);
            e->pos = pos;
            return e;
        }
        return atom(depth + 1);
    }

    ExprPtr atom(int depth)
    {
        guard(depth);
        const Token& t = peek();
        auto e = std::make_shared<Expr>();
        e->pos = t.pos;
        if (t.type == Token::Type::number) {
            e->op = Expr::Op::number;
            e->value = t.value;
            take();
            return e;
        }
        if (t.type == Token::Type::ident && (t.text == "N" || t.text == "pi")) {
            e->op = t.text == "N" ? Expr::Op::var_n : Expr::Op::pi;
            take();
            return e;
        }
        if (at_symbol("(") || at_symbol("{")) {
            const char* close = t.text == "(" ? ")" : "}";
            take();
            ExprPtr inner = expr(depth + 1);
            expect(close);
            return inner;
        }
        if (t.type == Token::Type::end) {
            throw SpecSyntaxError(t.pos, "unexpected end of spec");
        }
        throw SpecSyntaxError(t.pos, "expected a number, N, pi or '('");
    }

    std::vector<Token> tokens_;
    std::size_t i_ = 0;
};

struct Param {
    const char* name;
    bool list;
    bool required;
};

inline std::vector<Param> schema(StateKind k)
{
    switch (k) {
    case StateKind::magnons:
        return {{"N", false, true}, {"k", true, true}};
    case StateKind::dicke:
        return {{"N", false, true}, {"m", false, true}};
    case StateKind::band:
        return {{"N", false, true}, {"m", false, true}, {"extras", true, false}};
    case StateKind::product:
        return {{"N", false, true}, {"theta", false, true}, {"alpha", false, true}};
    case StateKind::ghz:
    case StateKind::w:
        return {{"N", false, true}};
    case StateKind::modexp:
        return {{"N1", false, true}, {"x", false, true}, {"M", false, true}};
    }
    return {};
}

inline std::optional<StateKind> kind_from_name(const std::string& s)
{
    if (s == "magnons") return StateKind::magnons;
    if (s == "dicke") return StateKind::dicke;
    if (s == "band") return StateKind::band;
    if (s == "product") return StateKind::product;
    if (s == "ghz") return StateKind::ghz;
    if (s == "w") return StateKind::w;
    if (s == "modexp") return StateKind::modexp;
    return std::nullopt;
}

} // namespace detail

/// Parsed spec whose arguments may depend on the scan variable N.
class StateTemplate {
public:
    StateKind kind() const noexcept { return kind_; }
    const std::string& text() const noexcept { return text_; }

    bool depends_on_n() const
    {
        for (const auto& items : args_) {
            for (const auto& it : items) {
                if (it.value->uses_n() || (it.count && it.count->uses_n())) {
                    return true;
                }
            }
        }
        return false;
    }

    /// Evaluates every argument and validates the result.
    StateSpec instantiate(std::optional<int> n_value = std::nullopt) const
    {
        const auto params = detail::schema(kind_);
        auto scalar = [&](std::size_t p) -> const detail::Item& { return args_[p].front(); };
        auto real = [&](std::size_t p) {
            const double v = scalar(p).value->eval(n_value);
            if (!std::isfinite(v)) {
                throw InputError(std::string(params[p].name) + " evaluates to a non-finite value");
            }
            return v;
        };
        auto integer = [&](const detail::ExprPtr& e, const char* name) {
            const double v = e->eval(n_value);
            const double r = std::round(v);
            if (!std::isfinite(v) || std::abs(v - r) > 1e-9 || std::abs(r) > 1e9) {
                throw InputError(std::string(name) + " must be an integer, got " + std::to_string(v));
            }
            return static_cast<int>(r);
        };
        auto list = [&](std::size_t p) {
            std::vector<int> out;
            for (const auto& it : args_[p]) {
                const int reps = it.count ? integer(it.count, "repetition count") : 1;
                if (reps < 0) {
                    throw InputError("negative repetition count");
                }
                if (out.size() + static_cast<std::size_t>(reps) > static_cast<std::size_t>(core::kMaxSites)) {
                    throw SectorRangeError("more than " + std::to_string(core::kMaxSites) + " magnons");
                }
                const int j = integer(it.value, params[p].name);
                out.insert(out.end(), static_cast<std::size_t>(reps), j);
            }
            return out;
        };

        StateSpec s;
        s.kind = kind_;
        switch (kind_) {
        case StateKind::magnons:
            s.n = integer(scalar(0).value, "N");
            s.js = list(1);
            break;
        case StateKind::dicke:
            s.n = integer(scalar(0).value, "N");
            s.m = integer(scalar(1).value, "m");
            break;
        case StateKind::band:
            s.n = integer(scalar(0).value, "N");
            s.m = integer(scalar(1).value, "m");
            s.js = list(2);
            break;
        case StateKind::product:
            s.n = integer(scalar(0).value, "N");
            s.theta = real(1);
            s.alpha = real(2);
            break;
        case StateKind::ghz:
        case StateKind::w:
            s.n = integer(scalar(0).value, "N");
            break;
        case StateKind::modexp: {
            s.n = integer(scalar(0).value, "N1");
            const int x = integer(scalar(1).value, "x");
            const int mod = integer(scalar(2).value, "M");
            if (x < 0 || mod < 0) {
                throw InvalidModulus("x and M must be nonnegative");
            }
            s.base = static_cast<std::uint64_t>(x);
            s.modulus = static_cast<std::uint64_t>(mod);
            break;
        }
        }
        validate(s);
        return s;
    }

    static void validate(const StateSpec& s)
    {
        if (s.kind == StateKind::modexp) {
            if (s.n < 1) {
                throw InputError("first register needs at least one qubit");
            }
            if (s.modulus < 3) {
                throw InvalidModulus("modulus must be at least 3");
            }
            if (std::gcd(s.base, s.modulus) != 1) {
                throw InvalidModulus("x and M must be coprime");
            }
            if (s.n < 63 && (std::uint64_t{1} << s.n) / s.modulus < s.modulus) {
                throw InputError("first register too small: need 2^N1 >= M^2");
            }
            core::check_sites(s.sites());
            return;
        }
        core::check_sites(s.n);
        switch (s.kind) {
        case StateKind::magnons:
            if (s.js.empty() || static_cast<int>(s.js.size()) > s.n) {
                throw SectorRangeError("magnon count " + std::to_string(s.js.size()) + " outside 1..N");
            }
            break;
        case StateKind::dicke:
        case StateKind::band:
            if (s.m < 0 || s.magnons() > s.n) {
                throw SectorRangeError("magnon count " + std::to_string(s.magnons()) + " outside 0..N");
            }
            break;
        case StateKind::product:
            if (s.theta < 0.0 || s.theta > std::numbers::pi) {
                throw InputError("theta must lie in [0, pi]");
            }
            break;
        default:
            break;
        }
        for (int j : s.js) {
            core::WavenumberIndex(j, s.n);
        }
    }

    friend StateTemplate parse_state_template(std::string_view text);

private:
    StateKind kind_ = StateKind::ghz;
    std::string text_;
    std::vector<std::vector<detail::Item>> args_;
};

inline StateTemplate parse_state_template(std::string_view text)
{
    detail::Parser p(text);
    const detail::Token& name = p.peek();
    if (name.type != detail::Token::Type::ident) {
        throw SpecSyntaxError(name.pos, "expected a state name");
    }
    const auto kind = detail::kind_from_name(name.text);
    if (!kind) {
        throw SpecSyntaxError(name.pos, "unknown state family '" + name.text + "'");
    }
    p.take();
    p.expect("(");

    StateTemplate t;
    t.kind_ = *kind;
    t.text_ = std::string(text);
    const auto params = detail::schema(*kind);
    t.args_.resize(params.size());
    std::vector<bool> seen(params.size(), false);
    std::size_t next_positional = 0;
    std::optional<std::size_t> open_list;

    auto assign = [&](std::size_t slot, detail::Item item, std::size_t pos) {
        if (seen[slot] && !params[slot].list) {
            throw SpecSyntaxError(pos, std::string("argument '") + params[slot].name + "' given twice");
        }
        if (!params[slot].list && item.count) {
            throw SpecSyntaxError(pos, std::string("repetition not allowed for '") + params[slot].name + "'");
        }
        seen[slot] = true;
        t.args_[slot].push_back(std::move(item));
        open_list = params[slot].list ? std::optional<std::size_t>(slot) : std::nullopt;
    };

    if (!p.at_symbol(")")) {
        while (true) {
            const std::size_t pos = p.peek().pos;
            std::optional<std::size_t> slot;
            const detail::Token& first = p.peek();
            if (first.type == detail::Token::Type::ident) {
                const detail::Token& after = p.peek(1);
                if (after.type == detail::Token::Type::symbol && after.text == "=") {
                    for (std::size_t i = 0; i < params.size(); ++i) {
                        if (first.text == params[i].name) {
                            slot = i;
                        }
                    }
                    if (!slot) {
                        throw SpecSyntaxError(pos, "unknown argument '" + first.text + "'");
                    }
                    if (seen[*slot]) {
                        throw SpecSyntaxError(pos, "argument '" + first.text + "' given twice");
                    }
                    p.take();
                    p.take();
                }
            }
            detail::Item item = p.item();
            if (!slot) {
                if (open_list) {
                    slot = open_list;
                } else {
                    next_positional = 0;
                    while (next_positional < params.size() && seen[next_positional]) {
                        ++next_positional;
                    }
                    if (next_positional >= params.size()) {
                        throw SpecSyntaxError(pos, "too many arguments");
                    }
                    slot = next_positional;
                }
            }
            assign(*slot, std::move(item), pos);
            if (p.at_symbol(",") || p.at_symbol(";")) {
                p.take();
                continue;
            }
            break;
        }
    }
    const std::size_t close = p.peek().pos;
    p.expect(")");
    if (p.peek().type != detail::Token::Type::end) {
        throw SpecSyntaxError(p.peek().pos, "trailing input after ')'");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].required && !seen[i]) {
            throw SpecSyntaxError(close, std::string("missing argument '") + params[i].name + "'");
        }
    }
    return t;
}

/// Parses and instantiates a spec. `n_value` substitutes the variable N.
inline StateSpec parse_state_spec(std::string_view text, std::optional<int> n_value = std::nullopt)
{
    return parse_state_template(text).instantiate(n_value);
}

inline core::PureState build_state(const StateSpec& s)
{
    switch (s.kind) {
    case StateKind::magnons:
        return core::m_magnon_state(s.n, s.js);
    case StateKind::dicke:
        return core::dicke_state(s.n, s.m);
    case StateKind::band:
        return core::band_state(s.n, s.m, s.js);
    case StateKind::product:
        return core::product_state(s.n, s.theta, s.alpha);
    case StateKind::ghz:
        return core::ghz_state(s.n);
    case StateKind::w:
        return core::w_state(s.n);
    case StateKind::modexp:
        return core::modexp_state(s.n, s.base, s.modulus);
    }
    throw InputError("unknown state kind");
}

} // namespace magnon::experiment
