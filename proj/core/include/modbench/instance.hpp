#pragma once

#include <memory>
#include <utility>

#include "modbench/modular.hpp"
#include "modbench/rvd.hpp"
#include "modbench/space.hpp"

namespace modbench {

/// A space together with both routes to its modular data. Movable; the
/// space lives on the heap so the derived data can keep referring to it.
class Instance {
 public:
  explicit Instance(WStarSpace space)
      : space_(std::make_unique<WStarSpace>(std::move(space))),
        modular_(std::make_unique<ModularData>(build_modular(*space_))),
        rvd_(std::make_unique<RvdData>(build_rvd(*space_))) {}

  const WStarSpace& space() const { return *space_; }
  const ModularData& modular() const { return *modular_; }
  const RvdData& rvd() const { return *rvd_; }

 private:
  std::unique_ptr<WStarSpace> space_;
  std::unique_ptr<ModularData> modular_;
  std::unique_ptr<RvdData> rvd_;
};

}  // namespace modbench
