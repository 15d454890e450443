#ifndef MF_NORMALIZE_H_
#define MF_NORMALIZE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mf {

// A normalized token together with the byte range it came from in the
// original UTF-8 input.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Lowercases, decomposes (NFD) and strips combining marks, then splits on
// runs of non-alphanumeric code points. Invalid UTF-8 bytes act as
// separators.
std::vector<Token> Tokenize(std::string_view utf8);

// Token texts only.
std::vector<std::string> Normalize(std::string_view utf8);

// Normalized tokens joined by a single space; the canonical label key.
std::string NormalizedKey(std::string_view utf8);

// Number of code points in a UTF-8 string.
std::size_t CodePointCount(std::string_view utf8);

}  // namespace mf

#endif  // MF_NORMALIZE_H_
