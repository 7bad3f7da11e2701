#include "hring/random.hpp"

namespace hring {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 seeded_engine(std::uint64_t key) {
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : key_(splitmix64(seed)), engine_(seeded_engine(key_)) {}

RandomStream RandomStream::child(std::uint64_t index) const {
  RandomStream out(0);
  out.key_ = splitmix64(key_ ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  out.engine_ = seeded_engine(out.key_);
  return out;
}

std::uint64_t RandomStream::below(std::uint64_t bound) {
  // Rejection on the top of the range keeps the result exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

}  // namespace hring
