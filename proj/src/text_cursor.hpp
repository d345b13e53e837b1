#pragma once

#include "bbp/bigmath.hpp"
#include "bbp/error.hpp"

#include <cctype>
#include <string>
#include <string_view>

namespace bbp::detail {

// Whitespace-skipping scanner shared by the text grammars.
class Cursor {
public:
    explicit Cursor(std::string_view text, std::size_t offset = 0) : text_(text), pos_(offset) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool accept(std::string_view word) {
        skip_ws();
        if (text_.substr(pos_, word.size()) == word) {
            pos_ += word.size();
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    void expect(std::string_view word) {
        if (!accept(word)) fail("expected '" + std::string(word) + "'");
    }
    bool peek_digit() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }
    bool peek_alpha() { return std::isalpha(static_cast<unsigned char>(peek())) != 0; }

    // identifier: letters, digits, underscore; starts with a letter
    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_')) {
            ++pos_;
        }
        if (start == pos_) fail("expected identifier");
        return std::string(text_.substr(start, pos_ - start));
    }

    BigInt unsigned_int() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return BigInt(std::string(text_.substr(start, pos_ - start)));
    }

    long small_int() {
        std::size_t start = pos();
        BigInt v = unsigned_int();
        if (v > 1000000000) throw ParseError("integer too large", start);
        return v.get_si();
    }

    // int ["^" int], non-negative
    BigInt power_factor() {
        BigInt b = unsigned_int();
        if (accept('^')) {
            std::size_t at = pos();
            long e = small_int();
            if (e > 100000) throw ParseError("exponent too large", at);
            b = ipow(b, static_cast<unsigned long>(e));
        }
        return b;
    }

    // ["-"] factor ("*" factor)*   where factor := int ["^" int]
    BigInt signed_product() {
        bool neg = accept('-');
        if (!neg) accept('+');
        BigInt v = power_factor();
        while (peek() == '*') {
            ++pos_;
            v *= power_factor();
        }
        return neg ? BigInt(-v) : v;
    }

    std::size_t pos() {
        skip_ws();
        return pos_;
    }
    std::size_t raw_pos() const { return pos_; }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos()); }

private:
    std::string_view text_;
    std::size_t pos_;
};

}  // namespace bbp::detail
