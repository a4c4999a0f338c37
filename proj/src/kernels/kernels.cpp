#include "gsgc/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "gsgc/error.hpp"
#include "kernels_impl.hpp"

namespace gsgc::kernels {

// ---- scalar reference kernels ----------------------------------------------

namespace scalar {

void morton_encode_batch(const uint32_t* coords, size_t n, uint64_t* keys) {
  for (size_t i = 0; i < n; i++) {
    keys[i] = (spread3(coords[3 * i]) << 2) | (spread3(coords[3 * i + 1]) << 1)
      | spread3(coords[3 * i + 2]);
  }
}

void morton_decode_batch(const uint64_t* keys, size_t n, uint32_t* coords) {
  for (size_t i = 0; i < n; i++) {
    coords[3 * i] = collect3(keys[i] >> 2);
    coords[3 * i + 1] = collect3(keys[i] >> 1);
    coords[3 * i + 2] = collect3(keys[i]);
  }
}

size_t quantize_batch(const double* positions, size_t n, const double origin[3],
                      double step, int depth, uint32_t* coords) {
  const double upper = static_cast<double>(uint64_t(1) << depth);
  const double hi = upper - 1.0;
  for (size_t s = 0; s < 3 * n; s++) {
    double raw = (positions[s] - origin[s % 3]) / step;
    if (!(raw >= -0.5 && raw < upper))
      return s / 3;
    double r = std::round(raw);
    if (r < 0.0) r = 0.0;
    if (r > hi) r = hi;
    coords[s] = static_cast<uint32_t>(r);
  }
  return n;
}

void dequantize_batch(const uint32_t* coords, size_t n, const double origin[3],
                      double step, double* positions) {
  for (size_t s = 0; s < 3 * n; s++)
    positions[s] = origin[s % 3] + static_cast<double>(coords[s]) * step;
}

}  // namespace scalar

// ---- dispatch ---------------------------------------------------------------

namespace {

struct Vtable {
  void (*morton_encode)(const uint32_t*, size_t, uint64_t*);
  void (*morton_decode)(const uint64_t*, size_t, uint32_t*);
  size_t (*quantize)(const double*, size_t, const double*, double, int, uint32_t*);
  void (*dequantize)(const uint32_t*, size_t, const double*, double, double*);
};

constexpr Vtable kScalarVtable = {
  &scalar::morton_encode_batch,
  &scalar::morton_decode_batch,
  &scalar::quantize_batch,
  &scalar::dequantize_batch,
};

#ifdef GSGC_HAVE_AVX2
constexpr Vtable kAvx2Vtable = {
  &avx2::morton_encode_batch,
  &avx2::morton_decode_batch,
  &avx2::quantize_batch,
  &avx2::dequantize_batch,
};
#endif

bool impl_supported(Impl impl) {
  switch (impl) {
    case Impl::Scalar:
      return true;
    case Impl::Avx2:
#ifdef GSGC_HAVE_AVX2
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
  }
  return false;
}

const Vtable* vtable_for(Impl impl) {
#ifdef GSGC_HAVE_AVX2
  if (impl == Impl::Avx2)
    return &kAvx2Vtable;
#endif
  (void)impl;
  return &kScalarVtable;
}

Impl initial_impl() {
  if (const char* env = std::getenv("GSGC_KERNELS")) {
    std::string v(env);
    if (v == "scalar")
      return Impl::Scalar;
    if (v == "avx2" && impl_supported(Impl::Avx2))
      return Impl::Avx2;
  }
  return impl_supported(Impl::Avx2) ? Impl::Avx2 : Impl::Scalar;
}

std::atomic<const Vtable*> g_vtable{nullptr};
std::atomic<Impl> g_impl{Impl::Scalar};

const Vtable* table() {
  const Vtable* t = g_vtable.load(std::memory_order_acquire);
  if (!t) {
    Impl impl = initial_impl();
    g_impl.store(impl, std::memory_order_relaxed);
    t = vtable_for(impl);
    g_vtable.store(t, std::memory_order_release);
  }
  return t;
}

}  // namespace

const char* impl_name(Impl impl) {
  switch (impl) {
    case Impl::Scalar: return "scalar";
    case Impl::Avx2: return "avx2";
  }
  return "?";
}

Impl best_supported() {
  return impl_supported(Impl::Avx2) ? Impl::Avx2 : Impl::Scalar;
}

Impl active() {
  table();
  return g_impl.load(std::memory_order_relaxed);
}

void set_active(Impl impl) {
  if (!impl_supported(impl))
    fail(Err::InvalidArgument,
         std::string("kernel implementation not supported on this CPU: ") + impl_name(impl));
  g_impl.store(impl, std::memory_order_relaxed);
  g_vtable.store(vtable_for(impl), std::memory_order_release);
}

void morton_encode_batch(const uint32_t* coords, size_t n, uint64_t* keys) {
  table()->morton_encode(coords, n, keys);
}

void morton_decode_batch(const uint64_t* keys, size_t n, uint32_t* coords) {
  table()->morton_decode(keys, n, coords);
}

size_t quantize_batch(const double* positions, size_t n, const double origin[3],
                      double step, int depth, uint32_t* coords) {
  return table()->quantize(positions, n, origin, step, depth, coords);
}

void dequantize_batch(const uint32_t* coords, size_t n, const double origin[3],
                      double step, double* positions) {
  table()->dequantize(coords, n, origin, step, positions);
}

}  // namespace gsgc::kernels
