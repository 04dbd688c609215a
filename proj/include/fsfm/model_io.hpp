// FSFM1 checkpoint container for both model kinds. Byte layout is documented
// in docs/formats.md; round trips are bit-exact.
#pragma once

#include "fsfm/pde_net.hpp"

#include <string>

namespace fsfm {

inline constexpr std::uint32_t kCheckpointKindOde = 0;
inline constexpr std::uint32_t kCheckpointKindPde = 1;

// Extra fields stored with a PDE flow map so predictions can rebuild fields.
struct PdeModelMeta {
  int components = 1;
  std::string grid;  // e.g. "periodic1d n=50 x=[0,5]"
};

void save_checkpoint(const std::string& path, const Mlp<double>& model);
void save_checkpoint(const std::string& path, const PdeFlowMap<double>& model,
                     const PdeModelMeta& meta);

// Peeks at the header; throws IoError for non-checkpoint files.
std::uint32_t checkpoint_kind(const std::string& path);

Mlp<double> load_ode_checkpoint(const std::string& path);
PdeFlowMap<double> load_pde_checkpoint(const std::string& path, PdeModelMeta* meta = nullptr);

}  // namespace fsfm
