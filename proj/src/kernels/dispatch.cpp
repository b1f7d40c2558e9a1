#include <atomic>
#include <cstdlib>
#include <string>

#include "clt/errors.hpp"
#include "clt/kernels.hpp"

namespace clt::kernels {
namespace {

const Table* best() {
  const Table* t = avx2_table();
  return t ? t : &scalar_table();
}

const Table* from_env() {
  const char* env = std::getenv("CLT_KERNELS");
  if (env == nullptr || *env == '\0') return best();
  try {
    const Isa isa = parse_isa(env);
    if (isa == Isa::avx2 && avx2_table() == nullptr) return &scalar_table();
    return isa == Isa::avx2 ? avx2_table() : &scalar_table();
  } catch (const UsageError&) {
    return best();
  }
}

std::atomic<const Table*>& slot() {
  static std::atomic<const Table*> current{from_env()};
  return current;
}

}  // namespace

const Table& active() { return *slot().load(std::memory_order_acquire); }

void select(Isa isa) {
  const Table* t = isa == Isa::avx2 ? avx2_table() : &scalar_table();
  if (t == nullptr) throw UsageError("kernel variant 'avx2' is not available on this CPU");
  slot().store(t, std::memory_order_release);
}

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  if (name == "auto") return best()->isa;
  throw UsageError("unknown kernel variant '" + std::string(name) + "'");
}

}  // namespace clt::kernels
