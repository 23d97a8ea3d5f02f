#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "sato/errors.hpp"

namespace sato::detail {

// Character cursor shared by the small text grammars (scalars, series, operators).
class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

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
    // Raw peek without skipping whitespace, with lookahead.
    char raw(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) error(std::string("expected '") + c + "'");
    }
    bool peek_digit() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }

    mpz_class unsigned_integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) error("expected integer");
        return mpz_class(std::string(text_.substr(start, pos_ - start)));
    }
    long small_integer() {
        bool neg = accept('-');
        if (!neg) accept('+');
        mpz_class v = unsigned_integer();
        if (!v.fits_slong_p()) error("integer out of range");
        return neg ? -v.get_si() : v.get_si();
    }
    void advance(std::size_t n = 1) { pos_ += n; }
    std::size_t pos() const { return pos_; }

    [[noreturn]] void error(const std::string& what) const {
        fail(ErrorKind::Parse, what + " at column " + std::to_string(pos_ + 1) + " in \"" +
                                   std::string(text_) + "\"");
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace sato::detail
