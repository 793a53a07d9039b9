#pragma once

#include <map>
#include <string>

#include "ggan/trainer.hpp"

namespace ggan {

// Checkpoint layout: <path> is a JSON manifest (format "ggan-ckpt-1") and
// <path>.bin is a little-endian double sidecar holding, in manifest order,
// each parameter's value followed by its Adam m and v tensors.
//
// `meta` carries instance-specific fields (model kind, dims) so a loader can
// rebuild the matching ModelBundle before restoring tensors.
void save_checkpoint(const std::string& path, const TrainerState& state,
                     const std::map<std::string, std::string>& meta = {});

// Restores parameters, Adam buffers and step counts, trainer step, and the
// RNG stream bitwise. Parameters present in the manifest but absent from
// state.store are created; shapes of existing entries must match.
std::map<std::string, std::string> load_checkpoint(const std::string& path, TrainerState& state);

}  // namespace ggan
