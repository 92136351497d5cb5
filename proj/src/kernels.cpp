// Copyright 2026 The visekit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "visekit/kernels.hpp"

#include <cassert>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace visekit::kernels {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double l2sq_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void add_inplace_scalar(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

bool avx2_supported() {
#if defined(VISEKIT_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Backend pick_backend() {
  if (const char* env = std::getenv("VISEKIT_SIMD")) {
    std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && avx2_supported()) return Backend::avx2;
    // "auto" or anything else falls through to the probe
  }
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

Backend& backend_slot() {
  static Backend b = pick_backend();
  return b;
}

}  // namespace

Backend active_backend() { return backend_slot(); }

std::string_view backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_supported()) {
    throw std::runtime_error("avx2 backend not supported on this CPU");
  }
  backend_slot() = b;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
#if defined(VISEKIT_HAVE_AVX2)
  if (active_backend() == Backend::avx2) return dot_avx2(a.data(), b.data(), a.size());
#endif
  return dot_scalar(a.data(), b.data(), a.size());
}

double l2sq(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
#if defined(VISEKIT_HAVE_AVX2)
  if (active_backend() == Backend::avx2) return l2sq_avx2(a.data(), b.data(), a.size());
#endif
  return l2sq_scalar(a.data(), b.data(), a.size());
}

void add_inplace(std::span<double> acc, std::span<const double> x) {
  assert(acc.size() == x.size());
#if defined(VISEKIT_HAVE_AVX2)
  if (active_backend() == Backend::avx2) {
    add_inplace_avx2(acc.data(), x.data(), acc.size());
    return;
  }
#endif
  add_inplace_scalar(acc.data(), x.data(), acc.size());
}

}  // namespace visekit::kernels
