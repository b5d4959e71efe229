#pragma once

#include <map>
#include <string>
#include <vector>

#include "stylebench/nn/serialize.hpp"
#include "stylebench/policy/model.hpp"

namespace stylebench::policy {

// A model plus any number of per-player embeddings, as stored on disk.
struct ModelBundle {
  PolicyModel model;
  std::map<std::string, PlayerEmbedding> players;

  std::span<const double> embedding_for(const std::string& player) const {
    auto it = players.find(player);
    if (it != players.end()) return it->second.values;
    return model.generic_embedding;
  }
};

inline std::vector<nn::NamedTensor> to_tensors(const ModelBundle& bundle) {
  std::vector<nn::NamedTensor> tensors;
  const PolicyModel& m = bundle.model;
  for (size_t k = 0; k < m.backbone.layers.size(); ++k) {
    const auto& layer = m.backbone.layers[k];
    tensors.push_back({"backbone/layer" + std::to_string(k) + "/w",
                       {uint32_t(layer.out), uint32_t(layer.in)}, layer.w.data});
    tensors.push_back({"backbone/layer" + std::to_string(k) + "/b", {uint32_t(layer.out)},
                       layer.b});
  }
  tensors.push_back({"move_table",
                     {uint32_t(m.move_table.rows), uint32_t(m.move_table.cols)},
                     m.move_table.data});
  tensors.push_back({"value_head/w", {1, uint32_t(kContextDim)}, m.value_head.w.data});
  tensors.push_back({"value_head/b", {1}, m.value_head.b});
  tensors.push_back({"embedding/__generic__", {uint32_t(kEmbedDim)}, m.generic_embedding});
  for (const auto& [name, emb] : bundle.players)
    tensors.push_back({"embedding/" + name, {uint32_t(kEmbedDim)}, emb.values});
  return tensors;
}

inline void save_model(const std::string& path, const ModelBundle& bundle) {
  nn::save_weights(path, to_tensors(bundle));
}

inline ModelBundle load_model(const std::string& path) {
  const auto tensors = nn::load_weights(path);
  ModelBundle bundle;
  PolicyModel& m = bundle.model;

  auto require = [&](const std::string& name) -> const nn::NamedTensor& {
    const nn::NamedTensor* t = nn::find_tensor(tensors, name);
    if (!t) throw DataError("model file missing tensor '" + name + "': " + path);
    return *t;
  };

  for (size_t k = 0; k < m.backbone.layers.size(); ++k) {
    auto& layer = m.backbone.layers[k];
    const auto& w = require("backbone/layer" + std::to_string(k) + "/w");
    const auto& b = require("backbone/layer" + std::to_string(k) + "/b");
    if (w.values.size() != layer.w.size() || b.values.size() != layer.b.size())
      throw DataError("model tensor shape mismatch in " + path);
    layer.w.data = w.values;
    layer.b = b.values;
    layer.sync_transpose();
  }
  m.move_table.data = require("move_table").values;
  if (m.move_table.data.size() != dataset::kLabelSpace * kContextDim)
    throw DataError("move_table shape mismatch in " + path);
  m.value_head.w.data = require("value_head/w").values;
  m.value_head.b = require("value_head/b").values;
  m.value_head.sync_transpose();
  m.generic_embedding = require("embedding/__generic__").values;

  for (const auto& t : tensors) {
    constexpr std::string_view prefix = "embedding/";
    if (t.name.rfind(prefix, 0) == 0 && t.name != "embedding/__generic__") {
      PlayerEmbedding emb;
      emb.player_id = t.name.substr(prefix.size());
      emb.values = t.values;
      emb.provenance = PlayerEmbedding::Provenance::FineTuned;
      bundle.players[emb.player_id] = std::move(emb);
    }
  }
  return bundle;
}

}  // namespace stylebench::policy
