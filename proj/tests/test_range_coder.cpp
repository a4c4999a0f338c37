#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "gsgc/range_coder.hpp"
#include "support/check_error.hpp"
#include "support/test_util.hpp"

using namespace gsgc;

namespace {

// Independent model tracker: replays the probability schedule and sums the
// ideal code length, without touching the coder's state.
struct ModelOracle {
  std::vector<uint16_t> p;
  double bits = 0.0;

  explicit ModelOracle(size_t contexts) : p(contexts, 2048) {}

  void observe(size_t ctx, int bit) {
    const double prob = bit ? p[ctx] / 4096.0 : 1.0 - p[ctx] / 4096.0;
    bits += -std::log2(prob);
    if (bit)
      p[ctx] = static_cast<uint16_t>(p[ctx] + ((4096 - p[ctx]) >> 5));
    else
      p[ctx] = static_cast<uint16_t>(p[ctx] - (p[ctx] >> 5));
    if (p[ctx] < 1) p[ctx] = 1;
    if (p[ctx] > 4095) p[ctx] = 4095;
  }
};

std::vector<uint8_t> encode_all(const std::vector<int>& bits, size_t contexts,
                                const std::vector<size_t>& schedule) {
  RangeEncoder enc;
  std::vector<BinProb> ctx(contexts);
  for (size_t i = 0; i < bits.size(); i++)
    enc.encode(ctx[schedule[i]], bits[i]);
  return enc.finish();
}

std::vector<int> decode_all(std::span<const uint8_t> payload, size_t nbits, size_t contexts,
                            const std::vector<size_t>& schedule) {
  RangeDecoder dec(payload);
  std::vector<BinProb> ctx(contexts);
  std::vector<int> out(nbits);
  for (size_t i = 0; i < nbits; i++)
    out[i] = dec.decode(ctx[schedule[i]]);
  return out;
}

}  // namespace

TEST_CASE("adaptation follows the stated update rule") {
  BinProb ctx;
  RangeEncoder enc;
  enc.encode(ctx, 1);
  CHECK(ctx.p == 2112);  // 2048 + (2048 >> 5)
  ctx = BinProb{};
  enc.encode(ctx, 0);
  CHECK(ctx.p == 1984);  // 2048 - (2048 >> 5)
}

TEST_CASE("probabilities never reach 0 or 4096") {
  BinProb up, down;
  RangeEncoder enc;
  for (int i = 0; i < 100000; i++) {
    enc.encode(up, 1);
    enc.encode(down, 0);
    CHECK(up.p >= 1);
    CHECK(up.p <= 4095);
    CHECK(down.p >= 1);
    CHECK(down.p <= 4095);
  }
}

TEST_CASE("short shared-context sequence round trips") {
  const std::vector<int> bits{1, 0, 1, 1, 0};
  const std::vector<size_t> schedule(bits.size(), 0);
  const auto payload = encode_all(bits, 1, schedule);
  CHECK(decode_all(payload, bits.size(), 1, schedule) == bits);
}

TEST_CASE("empty message flushes to at most 8 bytes and decodes no bits") {
  RangeEncoder enc;
  const auto payload = enc.finish();
  CHECK(payload.size() <= 8);
  RangeDecoder dec(payload);  // consumes the tail, decodes nothing
  CHECK(dec.consumed() == payload.size());
}

TEST_CASE("randomized round trips over 64 interleaved contexts") {
  test::Rng rng(211);
  for (int iter = 0; iter < 50; iter++) {
    const size_t n = rng.below(4000);
    std::vector<int> bits(n);
    std::vector<size_t> schedule(n);
    // a few contexts get biased bits so adaptation actually moves
    for (size_t i = 0; i < n; i++) {
      schedule[i] = rng.below(64);
      bits[i] = schedule[i] < 32 ? (rng.below(10) == 0) : rng.bit();
    }
    const auto payload = encode_all(bits, 64, schedule);
    CHECK(decode_all(payload, n, 64, schedule) == bits);
  }
}

TEST_CASE("decoder consumes exactly the encoded stream; truncation is detected") {
  test::Rng rng(223);
  std::vector<int> bits(1000);
  std::vector<size_t> schedule(1000);
  for (size_t i = 0; i < bits.size(); i++) {
    bits[i] = rng.bit();
    schedule[i] = rng.below(8);
  }
  const auto payload = encode_all(bits, 8, schedule);
  {
    RangeDecoder dec(payload);
    std::vector<BinProb> ctx(8);
    for (size_t i = 0; i < bits.size(); i++)
      CHECK(dec.decode(ctx[schedule[i]]) == bits[i]);
    CHECK(dec.consumed() == payload.size());
  }
  {
    auto cut = payload;
    cut.pop_back();
    CHECK_FAILS(decode_all(cut, bits.size(), 8, schedule), Err::InputExhausted);
  }
  CHECK_FAILS(RangeDecoder(std::span<const uint8_t>()), Err::InputExhausted);
}

TEST_CASE("ten thousand zero bits compress to nearly nothing") {
  RangeEncoder enc;
  BinProb ctx;
  ModelOracle oracle(1);
  for (int i = 0; i < 10000; i++) {
    oracle.observe(0, 0);
    enc.encode(ctx, 0);
  }
  const auto payload = enc.finish();
  CHECK(payload.size() < 120);
  // payload tracks the model's own cross-entropy up to flush slack
  const double ideal_bytes = oracle.bits / 8.0;
  CHECK(payload.size() <= ideal_bytes * 1.10 + 6.0);
  CHECK(payload.size() + 0.0 >= ideal_bytes);
}

TEST_CASE("stream size matches accumulated model cross-entropy") {
  test::Rng rng(227);
  const size_t n = 200000;
  RangeEncoder enc;
  std::vector<BinProb> ctx(64);
  ModelOracle oracle(64);
  for (size_t i = 0; i < n; i++) {
    const size_t c = rng.below(64);
    // mixed biases across contexts
    const int bit = c < 16 ? (rng.below(20) == 0) : c < 32 ? (rng.below(4) == 0) : rng.bit();
    oracle.observe(c, bit);
    enc.encode(ctx[c], bit);
  }
  const auto payload = enc.finish();
  const double measured_bits = 8.0 * static_cast<double>(payload.size());
  CHECK(measured_bits <= oracle.bits * 1.001 + 64.0);
  CHECK(measured_bits >= oracle.bits * 0.999 - 64.0);
}

TEST_CASE("expansion stays bounded at the example scale") {
  // incompressible input, every context schedule: <= ceil(n/8) + 40 bytes
  test::Rng rng(229);
  for (size_t n : {size_t(0), size_t(1), size_t(64), size_t(1000), size_t(10000)}) {
    std::vector<int> bits(n);
    std::vector<size_t> schedule(n);
    for (size_t i = 0; i < n; i++) {
      bits[i] = rng.bit();
      schedule[i] = rng.below(16);
    }
    const auto payload = encode_all(bits, 16, schedule);
    CHECK(payload.size() <= (n + 7) / 8 + 40);
  }
}

TEST_CASE("measured worst-case expansion on large inputs") {
  // Random data costs ~1.1% over 1 bit/bit (model wander), an adversary
  // that always sends the less probable bit ~5%; both documented here as
  // measured ceilings.
  {
    test::Rng rng(233);
    const size_t n = 2000000;
    RangeEncoder enc;
    BinProb ctx;
    for (size_t i = 0; i < n; i++)
      enc.encode(ctx, rng.bit());
    const auto payload = enc.finish();
    CHECK(8.0 * double(payload.size()) <= 1.03 * double(n));
  }
  {
    const size_t n = 500000;
    RangeEncoder enc;
    BinProb ctx;
    for (size_t i = 0; i < n; i++)
      enc.encode(ctx, ctx.p <= 2048 ? 1 : 0);
    const auto payload = enc.finish();
    CHECK(8.0 * double(payload.size()) <= 1.06 * double(n));
  }
}

TEST_CASE("byte streams are identical across independent runs") {
  auto run = [] {
    test::Rng rng(241);
    RangeEncoder enc;
    std::vector<BinProb> ctx(4);
    for (int i = 0; i < 4096; i++)
      enc.encode(ctx[rng.below(4)], rng.below(3) == 0);
    return enc.finish();
  };
  const auto a = run();
  const auto b = run();
  CHECK(a == b);
}

TEST_CASE("golden stream bytes are stable") {
  // 256 bits: i-th bit set iff i % 3 == 0, contexts alternate 0/1
  RangeEncoder enc;
  std::vector<BinProb> ctx(2);
  for (int i = 0; i < 256; i++)
    enc.encode(ctx[i & 1], i % 3 == 0 ? 1 : 0);
  const auto payload = enc.finish();

  const std::vector<uint8_t> golden = {
    // GOLDEN_RC_STREAM
  };
  CHECK(payload == golden);
}
