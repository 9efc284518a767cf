#include "narrative/text.hpp"

namespace narrative::text {

namespace {

// Length of a space sequence starting at `pos`, 0 if none.
std::size_t space_at(std::string_view s, std::size_t pos) {
    unsigned char c = static_cast<unsigned char>(s[pos]);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') return 1;
    if (s.substr(pos, 2) == "\xC2\xA0") return 2;
    if (s.substr(pos, 3) == "\xE3\x80\x80") return 3;
    return 0;
}

std::size_t space_ending_at(std::string_view s, std::size_t end) {
    unsigned char c = static_cast<unsigned char>(s[end - 1]);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') return 1;
    if (end >= 2 && s.substr(end - 2, 2) == "\xC2\xA0") return 2;
    if (end >= 3 && s.substr(end - 3, 3) == "\xE3\x80\x80") return 3;
    return 0;
}

}  // namespace

std::string_view trim_space(std::string_view s) {
    std::size_t b = 0;
    while (b < s.size()) {
        std::size_t n = space_at(s, b);
        if (!n) break;
        b += n;
    }
    std::size_t e = s.size();
    while (e > b) {
        std::size_t n = space_ending_at(s.substr(0, e), e);
        if (!n) break;
        e -= n;
    }
    return s.substr(b, e - b);
}

std::size_t utf8_length(unsigned char lead) {
    if (lead < 0x80) return 1;
    if ((lead & 0xE0) == 0xC0) return 2;
    if ((lead & 0xF0) == 0xE0) return 3;
    if ((lead & 0xF8) == 0xF0) return 4;
    return 1;
}

std::vector<std::string_view> code_points(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t n = utf8_length(static_cast<unsigned char>(s[i]));
        bool valid = i + n <= s.size();
        for (std::size_t k = 1; valid && k < n; ++k) {
            valid = (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
        }
        if (!valid) n = 1;
        out.push_back(s.substr(i, n));
        i += n;
    }
    return out;
}

bool is_ascii_alnum(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

}  // namespace narrative::text
