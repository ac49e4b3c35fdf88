#include "wikies/digest.hpp"

#include <cstdio>
#include <fstream>

#include <openssl/evp.h>

#include "wikies/error.hpp"

namespace wikies {
namespace {

std::string to_hex(const unsigned char* bytes, unsigned len) {
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", bytes[i]);
    out += buf;
  }
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr))
    throw Error("SHA-256 computation failed");
  return to_hex(digest, len);
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for digest: " + path);

  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw Error("SHA-256 computation failed");
  if (!EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr)) {
    EVP_MD_CTX_free(ctx);
    throw Error("SHA-256 computation failed");
  }
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    if (!EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()))) {
      EVP_MD_CTX_free(ctx);
      throw Error("SHA-256 computation failed");
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (!EVP_DigestFinal_ex(ctx, digest, &len)) {
    EVP_MD_CTX_free(ctx);
    throw Error("SHA-256 computation failed");
  }
  EVP_MD_CTX_free(ctx);
  return to_hex(digest, len);
}

}  // namespace wikies
