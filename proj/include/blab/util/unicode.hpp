#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace blab {

// UTF-8 helpers. All budget math in the system counts Unicode code points,
// never bytes and never grapheme clusters.

inline char32_t decode_utf8(std::string_view s, size_t& pos) {
  const auto byte = [&](size_t i) {
    return static_cast<unsigned char>(s[i]);
  };
  unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  auto cont = [&](size_t i) {
    return i < s.size() && (byte(i) & 0xC0) == 0x80;
  };
  if ((b0 & 0xE0) == 0xC0 && cont(pos + 1)) {
    char32_t cp = (b0 & 0x1Fu) << 6 | (byte(pos + 1) & 0x3Fu);
    pos += 2;
    return cp;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(pos + 1) && cont(pos + 2)) {
    char32_t cp = (b0 & 0x0Fu) << 12 | (byte(pos + 1) & 0x3Fu) << 6 |
                  (byte(pos + 2) & 0x3Fu);
    pos += 3;
    return cp;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
    char32_t cp = (b0 & 0x07u) << 18 | (byte(pos + 1) & 0x3Fu) << 12 |
                  (byte(pos + 2) & 0x3Fu) << 6 | (byte(pos + 3) & 0x3Fu);
    pos += 4;
    return cp;
  }
  ++pos;  // invalid byte, consume as replacement
  return 0xFFFD;
}

inline void encode_utf8(char32_t cp, std::string& out) {
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
}

inline std::vector<char32_t> to_codepoints(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  size_t pos = 0;
  while (pos < s.size()) out.push_back(decode_utf8(s, pos));
  return out;
}

inline std::string from_codepoints(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) encode_utf8(cp, out);
  return out;
}

inline size_t count_codepoints(std::string_view s) {
  size_t pos = 0, n = 0;
  while (pos < s.size()) {
    decode_utf8(s, pos);
    ++n;
  }
  return n;
}

// Lowercases Latin letters (ASCII, Latin-1, Latin Extended-A).
inline char32_t lower_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp == 0x178) return 0xFF;  // Ÿ
  if (cp >= 0x100 && cp <= 0x177 && cp % 2 == 0) return cp + 1;
  if (cp >= 0x179 && cp <= 0x17E && cp % 2 == 1) return cp + 1;
  return cp;
}

inline char32_t upper_cp(char32_t cp) {
  if (cp >= U'a' && cp <= U'z') return cp - 0x20;
  if (cp >= 0xE0 && cp <= 0xFE && cp != 0xF7) return cp - 0x20;
  return cp;
}

// Maps an accented Latin letter to its base ASCII letter; expects lowercase
// input. Returns the input unchanged when no mapping applies.
inline char32_t strip_diacritic_cp(char32_t cp) {
  switch (cp) {
    case 0xE0: case 0xE1: case 0xE2: case 0xE3: case 0xE4: case 0xE5:
      return U'a';
    case 0xE7: return U'c';
    case 0xE8: case 0xE9: case 0xEA: case 0xEB: return U'e';
    case 0xEC: case 0xED: case 0xEE: case 0xEF: return U'i';
    case 0xF1: return U'n';
    case 0xF2: case 0xF3: case 0xF4: case 0xF5: case 0xF6: return U'o';
    case 0xF9: case 0xFA: case 0xFB: case 0xFC: return U'u';
    case 0xFD: case 0xFF: return U'y';
    default: break;
  }
  if (cp >= 0x100 && cp <= 0x17F) {
    if (cp <= 0x105) return U'a';
    if (cp <= 0x10D) return U'c';
    if (cp <= 0x111) return U'd';
    if (cp <= 0x11B) return U'e';
    if (cp <= 0x123) return U'g';
    if (cp <= 0x127) return U'h';
    if (cp <= 0x131) return U'i';
    if (cp <= 0x135) return U'j';
    if (cp <= 0x138) return U'k';
    if (cp <= 0x142) return U'l';
    if (cp <= 0x149) return U'n';
    if (cp <= 0x153) return U'o';
    if (cp <= 0x159) return U'r';
    if (cp <= 0x161) return U's';
    if (cp <= 0x167) return U't';
    if (cp <= 0x173) return U'u';
    if (cp <= 0x175) return U'w';
    if (cp <= 0x178) return U'y';
    return U'z';
  }
  return cp;
}

inline bool is_combining_mark(char32_t cp) { return cp >= 0x300 && cp <= 0x36F; }

// Case + diacritic folding for matching. Combining marks fold to nothing.
// Everything pt-BR folds into ASCII; scripts outside the Latin tables pass
// through unchanged.
inline bool fold_cp(char32_t cp, char32_t& out) {
  if (is_combining_mark(cp)) return false;
  out = strip_diacritic_cp(lower_cp(cp));
  return true;
}

inline std::string fold_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  size_t pos = 0;
  while (pos < s.size()) {
    char32_t folded;
    if (fold_cp(decode_utf8(s, pos), folded)) encode_utf8(folded, out);
  }
  return out;
}

// Word characters for whole-word matching, evaluated on folded text.
inline bool is_word_cp(char32_t cp) {
  return (cp >= U'a' && cp <= U'z') || (cp >= U'0' && cp <= U'9') ||
         (cp >= U'A' && cp <= U'Z');
}

}  // namespace blab
