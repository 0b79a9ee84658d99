#include "homcube/laurent.hpp"

#include <cctype>
#include <sstream>

namespace homcube::rings {

namespace {

void check_vars(const LaurentPoly& f, const LaurentPoly& g) {
    if (f.vars != g.vars)
        throw StructuralError("variable count mismatch: " + std::to_string(f.vars) +
                              " vs " + std::to_string(g.vars));
}

void insert_term(const Ring& r, LaurentPoly& f, const Exponent& e, const Scalar& c) {
    Scalar v = canon(r, c);
    if (is_zero(v)) return;
    auto it = f.terms.find(e);
    if (it == f.terms.end()) {
        f.terms.emplace(e, std::move(v));
    } else {
        it->second = add(r, it->second, v);
        if (is_zero(it->second)) f.terms.erase(it);
    }
}

} // namespace

LaurentPoly lp_zero(int vars) { return LaurentPoly{vars, {}}; }

LaurentPoly lp_constant(const Ring& r, const Scalar& c) {
    return lp_monomial(r, Exponent(static_cast<size_t>(r.variables), 0), c);
}

LaurentPoly lp_monomial(const Ring& r, Exponent e, const Scalar& c) {
    if (static_cast<int>(e.size()) != r.variables)
        throw StructuralError("monomial exponent length mismatch");
    LaurentPoly f{r.variables, {}};
    insert_term(r, f, e, c);
    return f;
}

LaurentPoly lp_one(const Ring& r) { return lp_constant(r, Scalar(1)); }

LaurentPoly lp_variable(const Ring& r, int k) {
    if (k < 0 || k >= r.variables) throw StructuralError("variable index out of range");
    Exponent e(static_cast<size_t>(r.variables), 0);
    e[static_cast<size_t>(k)] = 1;
    return lp_monomial(r, std::move(e), Scalar(1));
}

LaurentPoly lp_add(const Ring& r, const LaurentPoly& f, const LaurentPoly& g) {
    check_vars(f, g);
    LaurentPoly out = f;
    for (const auto& [e, c] : g.terms) insert_term(r, out, e, c);
    return out;
}

LaurentPoly lp_sub(const Ring& r, const LaurentPoly& f, const LaurentPoly& g) {
    check_vars(f, g);
    LaurentPoly out = f;
    for (const auto& [e, c] : g.terms) insert_term(r, out, e, neg(r, c));
    return out;
}

LaurentPoly lp_neg(const Ring& r, const LaurentPoly& f) {
    LaurentPoly out{f.vars, {}};
    for (const auto& [e, c] : f.terms) out.terms.emplace(e, neg(r, c));
    return out;
}

LaurentPoly lp_mul(const Ring& r, const LaurentPoly& f, const LaurentPoly& g) {
    check_vars(f, g);
    LaurentPoly out{f.vars, {}};
    for (const auto& [ef, cf] : f.terms) {
        for (const auto& [eg, cg] : g.terms) {
            Exponent e(ef.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ef[i] + eg[i];
            insert_term(r, out, e, mul(r, cf, cg));
        }
    }
    return out;
}

LaurentPoly lp_scale(const Ring& r, const Scalar& c, const LaurentPoly& f) {
    LaurentPoly out{f.vars, {}};
    for (const auto& [e, v] : f.terms) insert_term(r, out, e, mul(r, c, v));
    return out;
}

Scalar lp_specialize(const Ring& r, const LaurentPoly& f, const std::vector<Scalar>& point) {
    if (static_cast<int>(point.size()) != f.vars)
        throw StructuralError("specialization point has wrong length");
    Ring base = r.base();
    std::vector<Scalar> inverses;
    inverses.reserve(point.size());
    for (const Scalar& p : point) {
        if (!is_unit(base, p))
            throw DomainError("specialization coordinate is not a unit: " + scalar_to_string(p));
        inverses.push_back(inv(base, p));
    }
    Scalar total(0);
    for (const auto& [e, c] : f.terms) {
        Scalar term = c;
        for (size_t i = 0; i < e.size(); ++i) {
            const Scalar& b = e[i] >= 0 ? point[i] : inverses[i];
            std::int64_t n = e[i] >= 0 ? e[i] : -e[i];
            for (std::int64_t j = 0; j < n; ++j) term = mul(base, term, b);
        }
        total = add(base, total, term);
    }
    return total;
}

std::optional<std::pair<Exponent, Scalar>> lp_is_monomial_unit(const Ring& r, const LaurentPoly& f) {
    if (f.terms.size() != 1) return std::nullopt;
    const auto& [e, c] = *f.terms.begin();
    if (!is_unit(r.base(), c)) return std::nullopt;
    return std::make_pair(e, c);
}

LaurentPoly lp_substitute(const Ring& r_out, const LaurentPoly& f,
                          const std::vector<LaurentPoly>& images) {
    if (static_cast<int>(images.size()) != f.vars)
        throw StructuralError("substitution image count mismatch");
    LaurentPoly out = lp_zero(r_out.variables);
    for (const auto& [e, c] : f.terms) {
        LaurentPoly term = lp_constant(r_out, c);
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            LaurentPoly base = images[i];
            if (e[i] < 0) {
                auto unit = lp_is_monomial_unit(r_out, base);
                if (!unit) throw DomainError("negative exponent at non-monomial substitution");
                Exponent ei = unit->first;
                for (auto& x : ei) x = -x;
                base = lp_monomial(r_out, std::move(ei), inv(r_out.base(), unit->second));
            }
            for (std::int64_t j = 0; j < (e[i] >= 0 ? e[i] : -e[i]); ++j)
                term = lp_mul(r_out, term, base);
        }
        out = lp_add(r_out, out, term);
    }
    return out;
}

std::string lp_to_string(const LaurentPoly& f) {
    if (f.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : f.terms) {
        bool negative = c < 0;
        Scalar mag = negative ? Scalar(-c) : c;
        if (first) {
            if (negative) os << "-";
            first = false;
        } else {
            os << (negative ? "-" : "+");
        }
        bool has_var = false;
        for (auto a : e)
            if (a != 0) has_var = true;
        if (!has_var || mag != 1) {
            os << scalar_to_string(mag);
            if (has_var) os << "*";
        }
        bool first_var = true;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!first_var) os << "*";
            first_var = false;
            os << "x" << (i + 1);
            if (e[i] != 1) os << "^" << e[i];
        }
    }
    return os.str();
}

namespace {

struct Parser {
    const Ring& ring;
    const std::string& text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) { ++pos; return true; }
        return false;
    }

    std::int64_t parse_integer() {
        skip_ws();
        size_t start = pos;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw StructuralError("expected integer at position " + std::to_string(start));
        return std::stoll(text.substr(start, pos - start));
    }

    Scalar parse_coeff() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/'))
            ++pos;
        if (pos == start) throw StructuralError("expected coefficient");
        return scalar_from_string(ring, text.substr(start, pos - start));
    }

    // term := [coeff] factor*  |  coeff
    void parse_term(LaurentPoly& acc, bool negative) {
        skip_ws();
        Scalar coeff(1);
        bool saw_coeff = false;
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            coeff = parse_coeff();
            saw_coeff = true;
        }
        Exponent e(static_cast<size_t>(ring.variables), 0);
        bool saw_var = false;
        for (;;) {
            skip_ws();
            if (saw_coeff || saw_var) {
                size_t save = pos;
                if (!eat('*')) break;
                skip_ws();
                if (pos >= text.size() || text[pos] != 'x') { pos = save; break; }
            }
            if (pos >= text.size() || text[pos] != 'x') break;
            ++pos;
            size_t dstart = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == dstart) throw StructuralError("expected variable index after 'x'");
            int idx = std::stoi(text.substr(dstart, pos - dstart));
            if (idx < 1 || idx > ring.variables)
                throw StructuralError("variable x" + std::to_string(idx) + " out of range");
            std::int64_t exp = 1;
            if (eat('^')) exp = parse_integer();
            e[static_cast<size_t>(idx - 1)] += exp;
            saw_var = true;
        }
        if (!saw_coeff && !saw_var) throw StructuralError("empty term in polynomial text");
        if (negative) coeff = -coeff;
        acc = lp_add(ring, acc, lp_monomial(ring, e, coeff));
    }

    LaurentPoly parse() {
        LaurentPoly acc = lp_zero(ring.variables);
        skip_ws();
        if (pos >= text.size()) throw StructuralError("empty polynomial text");
        bool negative = eat('-');
        if (!negative) eat('+');
        skip_ws();
        if (!negative && pos < text.size() && text[pos] == '0' && pos + 1 >= text.size())
            return acc; // the zero polynomial
        parse_term(acc, negative);
        for (;;) {
            skip_ws();
            if (pos >= text.size()) break;
            if (eat('+')) parse_term(acc, false);
            else if (eat('-')) parse_term(acc, true);
            else throw StructuralError("unexpected character at position " + std::to_string(pos));
        }
        return acc;
    }
};

} // namespace

LaurentPoly lp_parse(const Ring& r, const std::string& text) {
    Parser p{r, text};
    return p.parse();
}

} // namespace homcube::rings
