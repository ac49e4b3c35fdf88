#include "wikies/text.hpp"

namespace wikies {

namespace {

constexpr char kSep = '\x1f';

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char fold_byte(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

std::string fold_case(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(fold_byte(c));
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : text) {
    if (is_word_byte(static_cast<unsigned char>(raw))) {
      current.push_back(fold_byte(raw));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string label_key(std::span<const std::string> tokens, std::size_t begin, std::size_t count) {
  std::string key;
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0) key.push_back(kSep);
    key += tokens[begin + i];
  }
  return key;
}

std::string label_key_of(std::string_view surface) {
  std::vector<std::string> tokens = tokenize(surface);
  return label_key(tokens, 0, tokens.size());
}

}  // namespace wikies
