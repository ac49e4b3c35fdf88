#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wikies {

// ASCII case folding; bytes outside ASCII pass through unchanged.
std::string fold_case(std::string_view s);

// Splits text into folded word tokens. Word characters are ASCII
// alphanumerics plus any non-ASCII byte, so multi-byte UTF-8 sequences stay
// inside one token; everything else separates.
std::vector<std::string> tokenize(std::string_view text);

// Key for label lookups: folded tokens joined by a separator that cannot
// occur inside a token.
std::string label_key(std::span<const std::string> tokens, std::size_t begin, std::size_t count);

// Tokenizes a free-form surface string and returns its label key. Empty
// when the surface holds no word characters.
std::string label_key_of(std::string_view surface);

}  // namespace wikies
