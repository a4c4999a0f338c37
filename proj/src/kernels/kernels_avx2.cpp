// AVX2 variants of the batch kernels. Kept bit-identical to the scalar
// reference: same operation order, same IEEE rounding, no FMA contraction.

#include "kernels_impl.hpp"

#ifdef GSGC_HAVE_AVX2

#include <immintrin.h>

#include <cmath>

namespace gsgc::kernels::avx2 {

namespace {

inline __m256i spread3_vec(__m256i x) {
  x = _mm256_and_si256(x, _mm256_set1_epi64x(0x1FFFFF));
  x = _mm256_and_si256(_mm256_or_si256(x, _mm256_slli_epi64(x, 32)),
                       _mm256_set1_epi64x(0x001F00000000FFFFll));
  x = _mm256_and_si256(_mm256_or_si256(x, _mm256_slli_epi64(x, 16)),
                       _mm256_set1_epi64x(0x001F0000FF0000FFll));
  x = _mm256_and_si256(_mm256_or_si256(x, _mm256_slli_epi64(x, 8)),
                       _mm256_set1_epi64x(0x100F00F00F00F00Fll));
  x = _mm256_and_si256(_mm256_or_si256(x, _mm256_slli_epi64(x, 4)),
                       _mm256_set1_epi64x(0x10C30C30C30C30C3ll));
  x = _mm256_and_si256(_mm256_or_si256(x, _mm256_slli_epi64(x, 2)),
                       _mm256_set1_epi64x(0x1249249249249249ll));
  return x;
}

inline __m256i collect3_vec(__m256i x) {
  x = _mm256_and_si256(x, _mm256_set1_epi64x(0x1249249249249249ll));
  x = _mm256_and_si256(_mm256_or_si256(x, _mm256_srli_epi64(x, 2)),
                       _mm256_set1_epi64x(0x10C30C30C30C30C3ll));
  x = _mm256_and_si256(_mm256_or_si256(x, _mm256_srli_epi64(x, 4)),
                       _mm256_set1_epi64x(0x100F00F00F00F00Fll));
  x = _mm256_and_si256(_mm256_or_si256(x, _mm256_srli_epi64(x, 8)),
                       _mm256_set1_epi64x(0x001F0000FF0000FFll));
  x = _mm256_and_si256(_mm256_or_si256(x, _mm256_srli_epi64(x, 16)),
                       _mm256_set1_epi64x(0x001F00000000FFFFll));
  x = _mm256_and_si256(_mm256_or_si256(x, _mm256_srli_epi64(x, 32)),
                       _mm256_set1_epi64x(0x1FFFFF));
  return x;
}

// round-half-away-from-zero, matching std::round lane for lane
inline __m256d round_away(__m256d x) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d t = _mm256_round_pd(x, _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
  __m256d frac = _mm256_andnot_pd(sign_mask, _mm256_sub_pd(x, t));
  __m256d is_half = _mm256_cmp_pd(frac, _mm256_set1_pd(0.5), _CMP_EQ_OQ);
  __m256d sign_one = _mm256_or_pd(_mm256_and_pd(x, sign_mask), _mm256_set1_pd(1.0));
  __m256d away = _mm256_add_pd(t, sign_one);
  __m256d even = _mm256_round_pd(x, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  return _mm256_blendv_pd(even, away, is_half);
}

}  // namespace

void morton_encode_batch(const uint32_t* coords, size_t n, uint64_t* keys) {
  const __m128i gidx = _mm_set_epi32(9, 6, 3, 0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const int* base = reinterpret_cast<const int*>(coords + 3 * i);
    __m256i ex = spread3_vec(_mm256_cvtepu32_epi64(_mm_i32gather_epi32(base + 0, gidx, 4)));
    __m256i ey = spread3_vec(_mm256_cvtepu32_epi64(_mm_i32gather_epi32(base + 1, gidx, 4)));
    __m256i ez = spread3_vec(_mm256_cvtepu32_epi64(_mm_i32gather_epi32(base + 2, gidx, 4)));
    __m256i key = _mm256_or_si256(
      _mm256_or_si256(_mm256_slli_epi64(ex, 2), _mm256_slli_epi64(ey, 1)), ez);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(keys + i), key);
  }
  for (; i < n; i++) {
    keys[i] = (spread3(coords[3 * i]) << 2) | (spread3(coords[3 * i + 1]) << 1)
      | spread3(coords[3 * i + 2]);
  }
}

void morton_decode_batch(const uint64_t* keys, size_t n, uint32_t* coords) {
  size_t i = 0;
  alignas(32) uint64_t bx[4], by[4], bz[4];
  for (; i + 4 <= n; i += 4) {
    __m256i k = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(keys + i));
    _mm256_store_si256(reinterpret_cast<__m256i*>(bx), collect3_vec(_mm256_srli_epi64(k, 2)));
    _mm256_store_si256(reinterpret_cast<__m256i*>(by), collect3_vec(_mm256_srli_epi64(k, 1)));
    _mm256_store_si256(reinterpret_cast<__m256i*>(bz), collect3_vec(k));
    for (size_t j = 0; j < 4; j++) {
      coords[3 * (i + j)] = static_cast<uint32_t>(bx[j]);
      coords[3 * (i + j) + 1] = static_cast<uint32_t>(by[j]);
      coords[3 * (i + j) + 2] = static_cast<uint32_t>(bz[j]);
    }
  }
  for (; i < n; i++) {
    coords[3 * i] = collect3(keys[i] >> 2);
    coords[3 * i + 1] = collect3(keys[i] >> 1);
    coords[3 * i + 2] = collect3(keys[i]);
  }
}

size_t quantize_batch(const double* positions, size_t n, const double origin[3],
                      double step, int depth, uint32_t* coords) {
  const double upper = static_cast<double>(uint64_t(1) << depth);
  const double hi = upper - 1.0;
  const size_t nslots = 3 * n;

  // per-block origin lanes; slot s uses axis s % 3, blocks advance 4 slots
  __m256d pat[3];
  for (int k = 0; k < 3; k++)
    pat[k] = _mm256_setr_pd(origin[k], origin[(k + 1) % 3], origin[(k + 2) % 3], origin[k]);

  const __m256d vstep = _mm256_set1_pd(step);
  const __m256d vupper = _mm256_set1_pd(upper);
  const __m256d vneg_half = _mm256_set1_pd(-0.5);
  const __m256d vzero = _mm256_setzero_pd();
  const __m256d vhi = _mm256_set1_pd(hi);

  auto scalar_from = [&](size_t s0) -> size_t {
    for (size_t s = s0; s < nslots; s++) {
      double raw = (positions[s] - origin[s % 3]) / step;
      if (!(raw >= -0.5 && raw < upper))
        return s / 3;
      double r = std::round(raw);
      if (r < 0.0) r = 0.0;
      if (r > hi) r = hi;
      coords[s] = static_cast<uint32_t>(r);
    }
    return n;
  };

  size_t s = 0;
  for (; s + 4 <= nslots; s += 4) {
    __m256d p = _mm256_loadu_pd(positions + s);
    __m256d raw = _mm256_div_pd(_mm256_sub_pd(p, pat[s % 3]), vstep);
    __m256d bad = _mm256_or_pd(_mm256_cmp_pd(raw, vneg_half, _CMP_LT_OQ),
                               _mm256_cmp_pd(raw, vupper, _CMP_NLT_UQ));
    if (_mm256_movemask_pd(bad))
      return scalar_from(s);
    __m256d r = _mm256_min_pd(_mm256_max_pd(round_away(raw), vzero), vhi);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(coords + s), _mm256_cvttpd_epi32(r));
  }
  return scalar_from(s);
}

void dequantize_batch(const uint32_t* coords, size_t n, const double origin[3],
                      double step, double* positions) {
  const size_t nslots = 3 * n;
  __m256d pat[3];
  for (int k = 0; k < 3; k++)
    pat[k] = _mm256_setr_pd(origin[k], origin[(k + 1) % 3], origin[(k + 2) % 3], origin[k]);
  const __m256d vstep = _mm256_set1_pd(step);

  size_t s = 0;
  for (; s + 4 <= nslots; s += 4) {
    __m128i c = _mm_loadu_si128(reinterpret_cast<const __m128i*>(coords + s));
    __m256d v = _mm256_cvtepi32_pd(c);  // coords < 2^21, sign-safe
    _mm256_storeu_pd(positions + s, _mm256_add_pd(_mm256_mul_pd(v, vstep), pat[s % 3]));
  }
  for (; s < nslots; s++)
    positions[s] = origin[s % 3] + static_cast<double>(coords[s]) * step;
}

}  // namespace gsgc::kernels::avx2

#endif  // GSGC_HAVE_AVX2
