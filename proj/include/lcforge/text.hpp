#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lcforge {

inline constexpr bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s) noexcept {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

/// Number of maximal non-whitespace runs.
inline std::size_t count_words(std::string_view s) noexcept {
    std::size_t n = 0;
    bool in_word = false;
    for (char c : s) {
        if (is_space(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++n;
        }
    }
    return n;
}

inline std::vector<std::string_view> split_words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t start = i;
        while (i < s.size() && !is_space(s[i])) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

inline std::vector<std::string_view> split_lines(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == '\n') {
            auto line = s.substr(start, i - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            out.push_back(line);
            start = i + 1;
        }
    }
    return out;
}

inline std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline bool contains_ci(std::string_view haystack, std::string_view needle) {
    return to_lower_ascii(haystack).find(to_lower_ascii(needle)) != std::string::npos;
}

inline bool is_word_char(char c) noexcept {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           (static_cast<unsigned char>(c) & 0x80) != 0;
}

/// Case-insensitive whole-word (or whole-phrase) search.
inline bool contains_word_ci(std::string_view haystack, std::string_view phrase) {
    const std::string h = to_lower_ascii(haystack);
    const std::string p = to_lower_ascii(phrase);
    if (p.empty()) return false;
    for (std::size_t pos = h.find(p); pos != std::string::npos; pos = h.find(p, pos + 1)) {
        bool left = pos == 0 || !is_word_char(h[pos - 1]);
        std::size_t end = pos + p.size();
        bool right = end >= h.size() || !is_word_char(h[end]);
        if (left && right) return true;
    }
    return false;
}

inline std::string replace_all(std::string s, std::string_view from, std::string_view to) {
    if (from.empty()) return s;
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
    }
    return s;
}

/// Decodes UTF-8 into code points. Malformed sequences decode to U+FFFD.
inline std::vector<char32_t> decode_utf8(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        int len = 0;
        char32_t cp = 0;
        if (b0 < 0x80) {
            len = 1;
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            out.push_back(U'\uFFFD');
            ++i;
            continue;
        }
        if (i + static_cast<std::size_t>(len) > s.size()) {
            out.push_back(U'\uFFFD');
            ++i;
            continue;
        }
        bool ok = true;
        for (int k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
            if ((b & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        if (!ok) {
            out.push_back(U'\uFFFD');
            ++i;
            continue;
        }
        out.push_back(cp);
        i += static_cast<std::size_t>(len);
    }
    return out;
}

inline std::string encode_utf8(char32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
    return out;
}

/// Scripts the language filter can forbid.
enum class Script { Han, Hiragana, Katakana, Hangul };

inline constexpr std::string_view script_name(Script s) {
    switch (s) {
        case Script::Han: return "Han";
        case Script::Hiragana: return "Hiragana";
        case Script::Katakana: return "Katakana";
        case Script::Hangul: return "Hangul";
    }
    return "";
}

inline std::optional<Script> script_from_name(std::string_view name) {
    for (Script s : {Script::Han, Script::Hiragana, Script::Katakana, Script::Hangul}) {
        if (script_name(s) == name) return s;
    }
    return std::nullopt;
}

inline std::optional<Script> classify_script(char32_t cp) noexcept {
    auto in = [cp](char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; };
    if (in(0x3040, 0x309F)) return Script::Hiragana;
    if (in(0x30A0, 0x30FF) || in(0x31F0, 0x31FF) || in(0xFF66, 0xFF9F)) return Script::Katakana;
    if (in(0xAC00, 0xD7AF) || in(0x1100, 0x11FF) || in(0x3130, 0x318F) || in(0xA960, 0xA97F) ||
        in(0xD7B0, 0xD7FF)) {
        return Script::Hangul;
    }
    if (in(0x4E00, 0x9FFF) || in(0x3400, 0x4DBF) || in(0xF900, 0xFAFF) || in(0x20000, 0x2A6DF) ||
        in(0x2A700, 0x2EBEF) || in(0x30000, 0x3134F) || in(0x2F800, 0x2FA1F)) {
        return Script::Han;
    }
    return std::nullopt;
}

}  // namespace lcforge
