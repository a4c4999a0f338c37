#ifndef GSGC_RANGE_CODER_HPP
#define GSGC_RANGE_CODER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "gsgc/error.hpp"

namespace gsgc {

// Adaptive binary context: 12-bit probability of a 1 bit, never 0 or 4096.
struct BinProb {
  uint16_t p = 2048;
};

namespace rc_detail {

inline void adapt(BinProb& ctx, int bit) {
  if (bit)
    ctx.p = static_cast<uint16_t>(ctx.p + ((4096 - ctx.p) >> 5));
  else
    ctx.p = static_cast<uint16_t>(ctx.p - (ctx.p >> 5));
  if (ctx.p < 1) ctx.p = 1;
  if (ctx.p > 4095) ctx.p = 4095;
}

}  // namespace rc_detail

// Byte-oriented binary range encoder: 64-bit low accumulator for carry
// propagation, 32-bit range renormalized above 2^24. Integer-only, so the
// byte stream is identical across platforms for a given bit/context
// sequence. The stream carries no length; framing is the caller's job.
class RangeEncoder {
public:
  void encode(BinProb& ctx, int bit) {
    const uint32_t threshold = (range_ >> 12) * ctx.p;
    if (bit) {
      range_ = threshold;
    } else {
      low_ += threshold;
      range_ -= threshold;
    }
    rc_detail::adapt(ctx, bit);
    while (range_ < (uint32_t(1) << 24)) {
      range_ <<= 8;
      shift_low();
    }
  }

  // Terminates the stream with a 5-byte tail and returns the buffer.
  std::vector<uint8_t> finish() {
    for (int i = 0; i < 5; i++)
      shift_low();
    return std::move(out_);
  }

  size_t bytes_pending() const { return out_.size(); }

private:
  void shift_low() {
    if (static_cast<uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
      const uint8_t carry = static_cast<uint8_t>(low_ >> 32);
      do {
        out_.push_back(static_cast<uint8_t>(cache_ + carry));
        cache_ = 0xFF;
      } while (--cache_size_ != 0);
      cache_ = static_cast<uint8_t>(low_ >> 24);
    }
    cache_size_++;
    low_ = static_cast<uint64_t>(static_cast<uint32_t>(low_) << 8);
  }

  uint64_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint8_t cache_ = 0;
  uint64_t cache_size_ = 1;
  std::vector<uint8_t> out_;
};

// Matching decoder. Consumes exactly the bytes the encoder produced; a
// shorter stream raises InputExhausted at the bit where it runs dry.
class RangeDecoder {
public:
  explicit RangeDecoder(std::span<const uint8_t> bytes) : in_(bytes) {
    for (int i = 0; i < 5; i++)
      code_ = (code_ << 8) | read_byte();
  }

  int decode(BinProb& ctx) {
    const uint32_t threshold = (range_ >> 12) * ctx.p;
    int bit;
    if (code_ < threshold) {
      bit = 1;
      range_ = threshold;
    } else {
      bit = 0;
      code_ -= threshold;
      range_ -= threshold;
    }
    rc_detail::adapt(ctx, bit);
    while (range_ < (uint32_t(1) << 24)) {
      code_ = (code_ << 8) | read_byte();
      range_ <<= 8;
    }
    return bit;
  }

  size_t consumed() const { return pos_; }

private:
  uint8_t read_byte() {
    if (pos_ >= in_.size())
      fail(Err::InputExhausted, "range coder ran past the end of its input");
    return in_[pos_++];
  }

  std::span<const uint8_t> in_;
  size_t pos_ = 0;
  uint32_t code_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
};

}  // namespace gsgc

#endif
