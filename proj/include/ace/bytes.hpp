/****************************************************************************
byte-level utilities: canonical big-endian integer encoding, SHA-256,
base64/hex, and a small length-prefixed reader/writer used for every
wire and file format in the protocol
*****************************************************************************/
#ifndef ACE_BYTES_HPP_
#define ACE_BYTES_HPP_

#include <boost/multiprecision/gmp.hpp>
#include <openssl/sha.h>

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace ace {

using Bigint = boost::multiprecision::mpz_int;
using Bytes = std::vector<uint8_t>;

inline Bytes to_bytes(const std::string& s) {
    return Bytes(s.begin(), s.end());
}

inline void append_bytes(Bytes& out, const Bytes& in) {
    out.insert(out.end(), in.begin(), in.end());
}

// fixed-width big-endian encoding; throws if the value does not fit
inline Bytes encode_bigint(const Bigint& v, size_t width) {
    if (v < 0) throw std::invalid_argument("encode_bigint: negative value");
    Bytes out(width, 0);
    Bigint x = v;
    for (size_t i = 0; i < width; ++i) {
        out[width - 1 - i] = static_cast<uint8_t>(x & 0xff);
        x >>= 8;
    }
    if (x != 0) throw std::invalid_argument("encode_bigint: value too wide");
    return out;
}

inline Bigint decode_bigint(const uint8_t* data, size_t width) {
    Bigint x = 0;
    for (size_t i = 0; i < width; ++i) {
        x <<= 8;
        x += data[i];
    }
    return x;
}

inline Bytes sha256(const Bytes& data) {
    Bytes digest(SHA256_DIGEST_LENGTH);
    SHA256(data.data(), data.size(), digest.data());
    return digest;
}

inline std::string to_hex(const Bytes& data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

inline Bytes from_hex(const std::string& hex) {
    if (hex.size() % 2) throw std::invalid_argument("from_hex: odd length");
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("from_hex: bad digit");
    };
    Bytes out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<uint8_t>((nib(hex[2 * i]) << 4) | nib(hex[2 * i + 1]));
    return out;
}

inline std::string to_base64(const Bytes& data) {
    static const char* tab =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    size_t i = 0;
    for (; i + 2 < data.size(); i += 3) {
        uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out.push_back(tab[(v >> 18) & 63]);
        out.push_back(tab[(v >> 12) & 63]);
        out.push_back(tab[(v >> 6) & 63]);
        out.push_back(tab[v & 63]);
    }
    if (i + 1 == data.size()) {
        uint32_t v = data[i] << 16;
        out.push_back(tab[(v >> 18) & 63]);
        out.push_back(tab[(v >> 12) & 63]);
        out += "==";
    } else if (i + 2 == data.size()) {
        uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
        out.push_back(tab[(v >> 18) & 63]);
        out.push_back(tab[(v >> 12) & 63]);
        out.push_back(tab[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

inline Bytes from_base64(const std::string& s) {
    auto val = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        if (c == '=') return -1;
        throw std::invalid_argument("from_base64: bad character");
    };
    if (s.size() % 4) throw std::invalid_argument("from_base64: bad length");
    Bytes out;
    for (size_t i = 0; i < s.size(); i += 4) {
        int a = val(s[i]), b = val(s[i + 1]), c = val(s[i + 2]), d = val(s[i + 3]);
        if (a < 0 || b < 0) throw std::invalid_argument("from_base64: bad padding");
        uint32_t v = (a << 18) | (b << 12) | ((c < 0 ? 0 : c) << 6) | (d < 0 ? 0 : d);
        out.push_back((v >> 16) & 0xff);
        if (c >= 0) out.push_back((v >> 8) & 0xff);
        if (d >= 0) out.push_back(v & 0xff);
    }
    return out;
}

// length-prefixed canonical writer; every multi-field structure in the
// protocol serializes through this so hashes are unambiguous
class ByteWriter {
  public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u32(uint32_t v) {
        for (int i = 3; i >= 0; --i) buf_.push_back((v >> (8 * i)) & 0xff);
    }
    void u64(uint64_t v) {
        for (int i = 7; i >= 0; --i) buf_.push_back((v >> (8 * i)) & 0xff);
    }
    void blob(const Bytes& b) {
        u32(static_cast<uint32_t>(b.size()));
        append_bytes(buf_, b);
    }
    void raw(const Bytes& b) { append_bytes(buf_, b); }
    const Bytes& bytes() const { return buf_; }
    Bytes take() { return std::move(buf_); }

  private:
    Bytes buf_;
};

class ByteReader {
  public:
    explicit ByteReader(const Bytes& b) : buf_(b) {}
    uint8_t u8() { return take(1)[0]; }
    uint32_t u32() {
        Bytes b = take(4);
        return (uint32_t(b[0]) << 24) | (uint32_t(b[1]) << 16) | (uint32_t(b[2]) << 8) | b[3];
    }
    uint64_t u64() {
        uint64_t v = 0;
        Bytes b = take(8);
        for (uint8_t x : b) v = (v << 8) | x;
        return v;
    }
    Bytes blob() {
        uint32_t n = u32();
        return take(n);
    }
    Bytes raw(size_t n) { return take(n); }
    bool done() const { return pos_ == buf_.size(); }
    size_t remaining() const { return buf_.size() - pos_; }

  private:
    Bytes take(size_t n) {
        if (pos_ + n > buf_.size()) throw std::out_of_range("ByteReader: truncated input");
        Bytes out(buf_.begin() + pos_, buf_.begin() + pos_ + n);
        pos_ += n;
        return out;
    }
    const Bytes& buf_;
    size_t pos_ = 0;
};

}  // namespace ace

#endif  // ACE_BYTES_HPP_
