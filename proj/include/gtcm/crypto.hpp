#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <openssl/core_names.h>
#include <openssl/evp.h>

namespace gtcm {

using Bytes = std::vector<uint8_t>;

inline std::array<uint8_t, 32> sha256(const uint8_t* data, size_t len) {
    std::array<uint8_t, 32> out;
    unsigned int outlen = 0;
    if (EVP_Digest(data, len, out.data(), &outlen, EVP_sha256(), nullptr) != 1 || outlen != 32)
        throw std::runtime_error("sha256 failed");
    return out;
}

inline std::array<uint8_t, 32> sha256(const Bytes& data) {
    return sha256(data.data(), data.size());
}

inline std::array<uint8_t, 32> hmac_sha256(const Bytes& key, const uint8_t* data, size_t len) {
    std::array<uint8_t, 32> out;
    EVP_MAC* mac = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
    if (!mac) throw std::runtime_error("hmac fetch failed");
    EVP_MAC_CTX* ctx = EVP_MAC_CTX_new(mac);
    EVP_MAC_free(mac);
    if (!ctx) throw std::runtime_error("hmac context failed");
    char digest_name[] = "SHA256";
    OSSL_PARAM params[] = {
        OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST, digest_name, 0),
        OSSL_PARAM_construct_end()};
    size_t outlen = 0;
    bool ok = EVP_MAC_init(ctx, key.data(), key.size(), params) == 1 &&
              EVP_MAC_update(ctx, data, len) == 1 &&
              EVP_MAC_final(ctx, out.data(), &outlen, out.size()) == 1 && outlen == 32;
    EVP_MAC_CTX_free(ctx);
    if (!ok) throw std::runtime_error("hmac failed");
    return out;
}

namespace detail {

inline std::array<uint8_t, 16> aes128_block(const std::array<uint8_t, 16>& key,
                                            const std::array<uint8_t, 16>& block,
                                            bool encrypt) {
    std::array<uint8_t, 16> out;
    EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
    if (!ctx) throw std::runtime_error("cipher context failed");
    int len = 0, len2 = 0;
    bool ok = EVP_CipherInit_ex(ctx, EVP_aes_128_ecb(), nullptr, key.data(), nullptr,
                                encrypt ? 1 : 0) == 1 &&
              EVP_CIPHER_CTX_set_padding(ctx, 0) == 1 &&
              EVP_CipherUpdate(ctx, out.data(), &len, block.data(), int(block.size())) == 1 &&
              EVP_CipherFinal_ex(ctx, out.data() + len, &len2) == 1 && len + len2 == 16;
    EVP_CIPHER_CTX_free(ctx);
    if (!ok) throw std::runtime_error("aes block failed");
    return out;
}

}  // namespace detail

inline std::array<uint8_t, 16> aes128_encrypt_block(const std::array<uint8_t, 16>& key,
                                                    const std::array<uint8_t, 16>& block) {
    return detail::aes128_block(key, block, true);
}

inline std::array<uint8_t, 16> aes128_decrypt_block(const std::array<uint8_t, 16>& key,
                                                    const std::array<uint8_t, 16>& block) {
    return detail::aes128_block(key, block, false);
}

}  // namespace gtcm
