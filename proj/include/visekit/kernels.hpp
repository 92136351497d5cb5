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

#ifndef VISEKIT_KERNELS_HPP
#define VISEKIT_KERNELS_HPP

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision kernels behind the embedding analysis: dot products,
// squared L2 distances, and vector accumulation. A scalar reference
// implementation is always present; on x86 an AVX2/FMA variant is selected at
// runtime when the CPU supports it. The two are equivalence-tested.
namespace visekit::kernels {

enum class Backend { scalar, avx2 };

// Backend chosen at startup (CPU probe, overridable via VISEKIT_SIMD=scalar|avx2).
Backend active_backend();
std::string_view backend_name(Backend b);

// Force a backend; throws if unavailable on this CPU. Intended for tests.
void force_backend(Backend b);

double dot(std::span<const double> a, std::span<const double> b);
double l2sq(std::span<const double> a, std::span<const double> b);
void add_inplace(std::span<double> acc, std::span<const double> x);

// Reference implementations, fixed evaluation order.
double dot_scalar(const double* a, const double* b, std::size_t n);
double l2sq_scalar(const double* a, const double* b, std::size_t n);
void add_inplace_scalar(double* acc, const double* x, std::size_t n);

bool avx2_supported();
#if defined(VISEKIT_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
double l2sq_avx2(const double* a, const double* b, std::size_t n);
void add_inplace_avx2(double* acc, const double* x, std::size_t n);
#endif

}  // namespace visekit::kernels

#endif  // VISEKIT_KERNELS_HPP
