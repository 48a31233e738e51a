#include "graad/crypto/sym.hpp"

#include <memory>

#include <openssl/evp.h>

#include "graad/crypto/error.hpp"

namespace graad {

namespace {

using CtxPtr = std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)>;

CtxPtr new_ctx() {
  CtxPtr ctx(EVP_CIPHER_CTX_new(), &EVP_CIPHER_CTX_free);
  if (!ctx) throw Error("EVP_CIPHER_CTX_new failed");
  return ctx;
}

}  // namespace

Bytes sym_encrypt(const SymKey& key, ByteView plaintext, Rng& rng) {
  Bytes out(kSymIvBytes + plaintext.size() + kSymTagBytes);
  rng.fill(std::span<std::uint8_t>(out.data(), kSymIvBytes));

  auto ctx = new_ctx();
  int len = 0;
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.data(), out.data()) != 1) {
    throw Error("AES-GCM init failed");
  }
  if (!plaintext.empty() &&
      EVP_EncryptUpdate(ctx.get(), out.data() + kSymIvBytes, &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1) {
    throw Error("AES-GCM encrypt failed");
  }
  if (EVP_EncryptFinal_ex(ctx.get(), out.data() + kSymIvBytes + plaintext.size(), &len) != 1) {
    throw Error("AES-GCM final failed");
  }
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kSymTagBytes,
                          out.data() + kSymIvBytes + plaintext.size()) != 1) {
    throw Error("AES-GCM tag failed");
  }
  return out;
}

Bytes sym_decrypt(const SymKey& key, ByteView ciphertext) {
  if (ciphertext.size() < kSymOverhead) throw VerifyError("ciphertext too short");
  std::size_t body = ciphertext.size() - kSymOverhead;
  Bytes out(body);
  Bytes tag(ciphertext.end() - kSymTagBytes, ciphertext.end());

  auto ctx = new_ctx();
  int len = 0;
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.data(),
                         ciphertext.data()) != 1) {
    throw Error("AES-GCM init failed");
  }
  if (body > 0 && EVP_DecryptUpdate(ctx.get(), out.data(), &len,
                                    ciphertext.data() + kSymIvBytes,
                                    static_cast<int>(body)) != 1) {
    throw VerifyError("AES-GCM decrypt failed");
  }
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kSymTagBytes, tag.data()) != 1) {
    throw Error("AES-GCM set tag failed");
  }
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + body, &len) != 1) {
    throw VerifyError("authentication tag mismatch");
  }
  return out;
}

}  // namespace graad
