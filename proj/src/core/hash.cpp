#include "repaint/hash.hpp"

#include <openssl/evp.h>

#include "repaint/errors.hpp"

namespace repaint {

namespace {

std::string to_hex(const unsigned char* data, unsigned int len) {
    static const char* digits = "0123456789abcdef";
    std::string out(len * 2, '0');
    for (unsigned int i = 0; i < len; ++i) {
        out[2 * i] = digits[data[i] >> 4];
        out[2 * i + 1] = digits[data[i] & 0x0f];
    }
    return out;
}

void digest_parts(std::initializer_list<std::string_view> parts, unsigned char* md,
                  unsigned int* md_len) {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        raise(ErrorCode::Encoding, "sha256 init failed");
    }
    bool first = true;
    const char sep = '\x1f';
    for (const auto& part : parts) {
        if (!first) EVP_DigestUpdate(ctx, &sep, 1);
        first = false;
        EVP_DigestUpdate(ctx, part.data(), part.size());
    }
    EVP_DigestFinal_ex(ctx, md, md_len);
    EVP_MD_CTX_free(ctx);
}

} // namespace

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int md_len = 0;
    digest_parts({bytes}, md, &md_len);
    return to_hex(md, md_len);
}

std::string sha256_hex_parts(std::initializer_list<std::string_view> parts) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int md_len = 0;
    digest_parts(parts, md, &md_len);
    return to_hex(md, md_len);
}

std::uint64_t stable_seed(std::initializer_list<std::string_view> parts) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int md_len = 0;
    digest_parts(parts, md, &md_len);
    std::uint64_t seed = 0;
    for (int i = 7; i >= 0; --i) {
        seed = (seed << 8) | md[i];
    }
    return seed;
}

} // namespace repaint
