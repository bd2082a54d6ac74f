#pragma once

#include <algorithm>

#include "hcbo/design_space.hpp"

namespace fixtures {

// Turbofan-like discrete architecture: fan, gearbox, mixed nozzle, shaft count,
// power and bleed offtake shafts; nine continuous sizing variables.
inline hcbo::DesignSpace jet_engine() {
  using hcbo::VariableDef;
  std::vector<VariableDef> vars = {
      VariableDef::categorical(2, "fan"),      VariableDef::categorical(2, "gearbox"),
      VariableDef::categorical(2, "mixed"),    VariableDef::integer(1, 3, "n_shafts"),
      VariableDef::integer(0, 2, "power_off"), VariableDef::integer(0, 2, "bleed_off"),
      VariableDef::continuous(2, 15, "bpr"),   VariableDef::continuous(1.1, 1.8, "fan_pr"),
      VariableDef::continuous(1, 5, "gear"),   VariableDef::continuous(1.1, 15, "pr1"),
      VariableDef::continuous(1.1, 15, "pr2"), VariableDef::continuous(1.1, 15, "pr3"),
      VariableDef::continuous(1e3, 2e4, "rpm1"), VariableDef::continuous(1e3, 2e4, "rpm2"),
      VariableDef::continuous(1e3, 2e4, "rpm3")};
  auto rule = [](std::vector<int>& d, std::vector<bool>& active) {
    const bool fan = d[0] == 1;
    const int shafts = d[3] + 1;
    if (!fan) active[1] = active[2] = false;
    for (int k : {4, 5}) {
      d[k] = std::min(d[k], shafts - 1);
      if (shafts == 1) active[k] = false;
    }
    active[6] = active[7] = fan;
    active[8] = fan && d[1] == 1;
    active[10] = active[13] = shafts >= 2;
    active[11] = active[14] = shafts == 3;
  };
  return hcbo::DesignSpace(std::move(vars), rule);
}

}  // namespace fixtures
