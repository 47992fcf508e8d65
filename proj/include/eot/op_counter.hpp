#ifndef EOT_OP_COUNTER_HPP
#define EOT_OP_COUNTER_HPP

#include <cstdint>

namespace eot {

// Tally of scalar operations executed inside solver kernels.
// Every add/sub, mul, div, exp, log and comparison counts as one.
struct OpCounter {
  std::uint64_t adds = 0;
  std::uint64_t muls = 0;
  std::uint64_t divs = 0;
  std::uint64_t exps = 0;
  std::uint64_t logs = 0;
  std::uint64_t compares = 0;

  std::uint64_t total() const noexcept { return adds + muls + divs + exps + logs + compares; }

  OpCounter& operator+=(const OpCounter& o) noexcept {
    adds += o.adds;
    muls += o.muls;
    divs += o.divs;
    exps += o.exps;
    logs += o.logs;
    compares += o.compares;
    return *this;
  }

  bool operator==(const OpCounter&) const = default;
};

// Kernels take an optional counter; nullptr means "don't count".
namespace ops {
inline void add(OpCounter* c, std::uint64_t k) { if (c) c->adds += k; }
inline void mul(OpCounter* c, std::uint64_t k) { if (c) c->muls += k; }
inline void div(OpCounter* c, std::uint64_t k) { if (c) c->divs += k; }
inline void exp(OpCounter* c, std::uint64_t k) { if (c) c->exps += k; }
inline void log(OpCounter* c, std::uint64_t k) { if (c) c->logs += k; }
inline void cmp(OpCounter* c, std::uint64_t k) { if (c) c->compares += k; }
}  // namespace ops

}  // namespace eot

#endif  // EOT_OP_COUNTER_HPP
