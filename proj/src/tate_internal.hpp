#pragma once

#include "kurisym/curves.hpp"

namespace kurisym {

struct TateResult {
  LocalData local;
  WeierstrassModel model;  // integral, minimal at the prime
};

TateResult run_tate(const WeierstrassModel& model, i64 l);

}  // namespace kurisym
