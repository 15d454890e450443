#include "mf/normalize.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <stdexcept>

namespace mf {
namespace {

const icu::Normalizer2 &Nfd() {
  static const icu::Normalizer2 *nfd = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2 *n = icu::Normalizer2::getNFDInstance(status);
    if (U_FAILURE(status)) throw std::runtime_error("ICU NFD unavailable");
    return n;
  }();
  return *nfd;
}

// Appends the folded form of one code point to `out`. Returns false if the
// code point is a separator.
bool FoldCodePoint(UChar32 c, std::string &out) {
  if (c < 0x80) {
    if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c - 'A' + 'a'));
      return true;
    }
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      out.push_back(static_cast<char>(c));
      return true;
    }
    return false;
  }
  if (u_getCombiningClass(c) != 0 || u_charType(c) == U_NON_SPACING_MARK) {
    // A bare combining mark glues onto the current token without output.
    return true;
  }
  icu::UnicodeString decomposed;
  UChar buffer[2];
  int32_t len = 0;
  U16_APPEND_UNSAFE(buffer, len, c);
  UErrorCode status = U_ZERO_ERROR;
  Nfd().normalize(icu::UnicodeString(buffer, len), decomposed, status);
  if (U_FAILURE(status)) return false;

  bool any = false;
  for (int32_t i = 0; i < decomposed.length();) {
    UChar32 d = decomposed.char32At(i);
    i += U16_LENGTH(d);
    if (u_charType(d) == U_NON_SPACING_MARK) continue;
    if (!u_isalnum(d)) continue;
    UChar32 lower = u_tolower(d);
    char bytes[4];
    int32_t n = 0;
    U8_APPEND_UNSAFE(bytes, n, lower);
    out.append(bytes, n);
    any = true;
  }
  return any;
}

}  // namespace

std::vector<Token> Tokenize(std::string_view utf8) {
  std::vector<Token> tokens;
  const auto *data = reinterpret_cast<const uint8_t *>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  Token current;
  bool open = false;
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(data, i, length, c);
    bool kept = false;
    if (c >= 0) {
      std::string folded;
      kept = FoldCodePoint(c, folded);
      // Leading combining marks do not open a token.
      if (kept && folded.empty() && !open) kept = false;
      if (kept) {
        if (!open) {
          current = Token{};
          current.begin = static_cast<std::size_t>(start);
          open = true;
        }
        current.text += folded;
        current.end = static_cast<std::size_t>(i);
      }
    }
    if (!kept && open) {
      tokens.push_back(std::move(current));
      open = false;
    }
  }
  if (open) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> Normalize(std::string_view utf8) {
  std::vector<std::string> out;
  for (auto &token : Tokenize(utf8)) out.push_back(std::move(token.text));
  return out;
}

std::string NormalizedKey(std::string_view utf8) {
  std::string key;
  for (const auto &token : Tokenize(utf8)) {
    if (!key.empty()) key.push_back(' ');
    key += token.text;
  }
  return key;
}

std::size_t CodePointCount(std::string_view utf8) {
  std::size_t count = 0;
  for (unsigned char c : utf8) {
    if ((c & 0xC0) != 0x80) ++count;
  }
  return count;
}

}  // namespace mf
