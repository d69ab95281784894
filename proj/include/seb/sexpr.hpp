#pragma once

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seb {

/// Raised for lexical and syntactic errors; carries a 1-based source position.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column), detail_(what) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& detail() const { return detail_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string detail_;
};

/// A node of a parenthesised expression: a list, a bare atom or a quoted string.
struct SExpr {
    enum class Type { List, Atom, String };

    Type type = Type::Atom;
    std::string text;
    std::vector<SExpr> items;
    std::size_t line = 1;
    std::size_t column = 1;

    bool is_list() const { return type == Type::List; }
    bool is_atom() const { return type == Type::Atom; }
    bool is_atom(std::string_view s) const { return type == Type::Atom && text == s; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(line, column, what); }
};

namespace detail {

class SExprReader {
public:
    explicit SExprReader(std::string_view src) : src_(src) {}

    std::vector<SExpr> read_all() {
        std::vector<SExpr> out;
        skip_space();
        while (pos_ < src_.size()) {
            out.push_back(read());
            skip_space();
        }
        return out;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;

    char peek() const { return src_[pos_]; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = peek();
            if (c == ';') {
                while (pos_ < src_.size() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    static bool is_delim(char c) {
        return c == '(' || c == ')' || c == ';' || c == '"' || std::isspace(static_cast<unsigned char>(c));
    }

    SExpr read() {
        SExpr e;
        e.line = line_;
        e.column = col_;
        char c = peek();
        if (c == ')') throw ParseError(line_, col_, "unexpected ')'");
        if (c == '(') {
            e.type = SExpr::Type::List;
            advance();
            skip_space();
            while (true) {
                if (pos_ >= src_.size()) throw ParseError(e.line, e.column, "unbalanced '('");
                if (peek() == ')') {
                    advance();
                    break;
                }
                e.items.push_back(read());
                skip_space();
            }
            return e;
        }
        if (c == '"') {
            e.type = SExpr::Type::String;
            advance();
            while (true) {
                if (pos_ >= src_.size() || peek() == '\n') throw ParseError(e.line, e.column, "unterminated string");
                if (peek() == '"') {
                    advance();
                    break;
                }
                e.text.push_back(peek());
                advance();
            }
            return e;
        }
        e.type = SExpr::Type::Atom;
        while (pos_ < src_.size() && !is_delim(peek())) {
            e.text.push_back(peek());
            advance();
        }
        return e;
    }
};

}  // namespace detail

/// Reads every top-level expression of `src`. Comments run from ';' to end of line.
inline std::vector<SExpr> read_sexprs(std::string_view src) { return detail::SExprReader(src).read_all(); }

}  // namespace seb
