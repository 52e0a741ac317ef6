#include "util.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <thread>

namespace kgm {

int worker_threads() {
  static int n = [] {
    if (const char* env = std::getenv("KGM_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1) return std::min(v, 64);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
  }();
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  const int nt = worker_threads();
  if (nt <= 1 || n < (1u << 14)) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt - 1);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (int t = 1; t < nt; ++t) {
    std::size_t b = std::min(n, t * chunk), e = std::min(n, (t + 1) * chunk);
    if (b < e) pool.emplace_back(fn, b, e);
  }
  fn(0, std::min(n, chunk));
  for (auto& th : pool) th.join();
}

namespace {
constexpr std::size_t kBlock = 4096;
}

double parallel_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& block_fn) {
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks, 0.0);
  parallel_for(nblocks, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b)
      partial[b] = block_fn(b * kBlock, std::min(n, (b + 1) * kBlock));
  });
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

cplx parallel_sum_c(std::size_t n, const std::function<cplx(std::size_t, std::size_t)>& block_fn) {
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<cplx> partial(nblocks, cplx(0, 0));
  parallel_for(nblocks, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b)
      partial[b] = block_fn(b * kBlock, std::min(n, (b + 1) * kBlock));
  });
  cplx s(0, 0);
  for (cplx v : partial) s += v;
  return s;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a_mix(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

}  // namespace kgm
