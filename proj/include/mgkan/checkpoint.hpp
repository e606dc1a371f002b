#ifndef MGKAN_CHECKPOINT_HPP
#define MGKAN_CHECKPOINT_HPP

#include <map>
#include <string>

#include "mgkan/matrix.hpp"
#include "mgkan/model.hpp"

namespace mgkan {

/// Versioned binary checkpoint: named parameter tensors with a shape
/// header, plus the JSON run manifest they were trained under.
struct Checkpoint {
    std::string manifest_json;
    std::map<std::string, Matrix> tensors;
};

void save_checkpoint(const std::string& path, const Model& model,
                     const std::string& manifest_json);

/// Throws CheckpointError on unreadable, corrupt or wrong-version files.
Checkpoint load_checkpoint(const std::string& path);

/// Copies tensors into the model; every parameter must be present with
/// a matching shape, otherwise CheckpointError.
void apply_checkpoint(const Checkpoint& ckpt, Model& model);

} // namespace mgkan

#endif // MGKAN_CHECKPOINT_HPP
