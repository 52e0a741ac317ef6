#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace kgm {

using cplx = std::complex<double>;

// Thread count used by the element-wise kernels. Reads KGM_THREADS once;
// defaults to the hardware concurrency, capped at 8.
int worker_threads();

// Static partition of [0, n) over worker threads. fn(begin, end) per chunk.
// Falls back to a single inline call for small n.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

// Deterministic reduction: sums fn over fixed 4096-element blocks, then sums
// the block results in block order. The result does not depend on the thread
// count, which keeps all derived output byte-stable.
double parallel_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& block_fn);
cplx parallel_sum_c(std::size_t n, const std::function<cplx(std::size_t, std::size_t)>& block_fn);

// FNV-1a, used to derive per-run seeds from a base seed and cell labels.
std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull);
std::uint64_t fnv1a_mix(std::uint64_t h, std::uint64_t v);

// Shortest-width decimal with 17 significant digits; used for all CSV output
// so that identical runs produce byte-identical files.
std::string fmt17(double v);

std::string sha256_hex(const std::string& data);

}  // namespace kgm
