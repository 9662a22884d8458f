#include "brl/checkpoint.hpp"

#include <filesystem>
#include <fstream>

#include "brl/error.hpp"
#include "json.hpp"

namespace brl::gan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json conv_meta(const ConvLayer& l, const std::string& kind) {
  return json{{"kind", kind},
              {"in", l.w.dim(2)},
              {"out", l.w.dim(3)},
              {"kernel", l.w.dim(0)},
              {"stride", l.stride},
              {"pad", l.pad}};
}

json spec_to_json(const data::ShapeWorldSpec& spec) {
  json colors = json::array();
  for (const auto& c : spec.palette) colors.push_back({c[0], c[1], c[2]});
  json shapes = json::array();
  for (const auto& s : spec.shapes) shapes.push_back(data::shape_name(s));
  return json{{"image_size", spec.image_size}, {"palette", colors},     {"shapes", shapes},
              {"per_class", spec.per_class},   {"noise_std", spec.noise_std}};
}

data::ShapeWorldSpec spec_from_json(const json& j) {
  data::ShapeWorldSpec spec;
  spec.image_size = j.at("image_size").get<std::size_t>();
  for (const auto& c : j.at("palette")) {
    spec.palette.push_back({c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()});
  }
  for (const auto& s : j.at("shapes")) {
    spec.shapes.push_back(data::shape_from_name(s.get<std::string>()));
  }
  spec.per_class = j.at("per_class").get<std::size_t>();
  spec.noise_std = j.at("noise_std").get<double>();
  return spec;
}

json config_to_json(const TrainConfig& cfg) {
  return json{{"learning_rate", cfg.learning_rate},
              {"beta1", cfg.beta1},
              {"beta2", cfg.beta2},
              {"batch_size", cfg.batch_size},
              {"epochs", cfg.epochs},
              {"rank", cfg.rank},
              {"depth", cfg.depth},
              {"seed", cfg.seed},
              {"embed_dim", cfg.embed_dim},
              {"channels", cfg.channels},
              {"d_channels", cfg.d_channels},
              {"checkpoint_every", cfg.checkpoint_every},
              {"squash_output", cfg.squash_output}};
}

TrainConfig config_from_json(const json& j) {
  TrainConfig cfg;
  cfg.learning_rate = j.at("learning_rate").get<double>();
  cfg.beta1 = j.at("beta1").get<double>();
  cfg.beta2 = j.at("beta2").get<double>();
  cfg.batch_size = j.at("batch_size").get<int>();
  cfg.epochs = j.at("epochs").get<int>();
  cfg.rank = j.at("rank").get<int>();
  cfg.depth = j.at("depth").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.embed_dim = j.at("embed_dim").get<std::size_t>();
  cfg.channels = j.at("channels").get<std::vector<std::size_t>>();
  cfg.d_channels = j.at("d_channels").get<std::vector<std::size_t>>();
  cfg.checkpoint_every = j.at("checkpoint_every").get<int>();
  cfg.squash_output = j.at("squash_output").get<bool>();
  return cfg;
}

}  // namespace

void save_checkpoint(const std::string& dir, const Checkpoint& ckpt) {
  fs::create_directories(dir);

  json manifest;
  manifest["format"] = "brlgan-checkpoint";
  manifest["version"] = 1;
  manifest["method"] = "brl";
  manifest["image_size"] = ckpt.generator.image_size;
  manifest["num_classes"] = ckpt.generator.num_classes;
  manifest["dataset_seed"] = ckpt.dataset_seed;
  manifest["config"] = config_to_json(ckpt.config);
  manifest["dataset"] = spec_to_json(ckpt.data_spec);

  json layers = json::array();
  for (const auto& l : ckpt.generator.encoder) layers.push_back(conv_meta(l, "g_conv"));
  for (const auto& f : ckpt.generator.fusing) {
    layers.push_back(json{{"kind", "bilinear_residual"},
                          {"feat_dim", f.u.dim(0)},
                          {"cond_dim", f.v.dim(0)},
                          {"out_dim", f.p.dim(0)},
                          {"rank", f.u.dim(1)}});
  }
  for (const auto& l : ckpt.generator.decoder) layers.push_back(conv_meta(l, "g_deconv"));
  for (const auto& l : ckpt.discriminator.encoder) layers.push_back(conv_meta(l, "d_conv"));
  for (const auto& l : ckpt.discriminator.head) layers.push_back(conv_meta(l, "d_conv"));
  manifest["layers"] = layers;

  json params = json::object();
  for (const auto& [name, tensor] : ckpt.generator.parameters()) {
    const std::string file = name + ".ten";
    save_tensor(*tensor, (fs::path(dir) / file).string());
    params[name] = file;
  }
  for (const auto& [name, tensor] : ckpt.discriminator.parameters()) {
    const std::string file = name + ".ten";
    save_tensor(*tensor, (fs::path(dir) / file).string());
    params[name] = file;
  }
  manifest["params"] = params;

  std::ofstream os(fs::path(dir) / "manifest.json");
  if (!os) throw IoError("cannot write manifest in " + dir);
  os << manifest.dump(2) << "\n";
}

Checkpoint load_checkpoint(const std::string& dir) {
  std::ifstream is(fs::path(dir) / "manifest.json");
  if (!is) throw IoError("no manifest.json under " + dir);
  json manifest;
  try {
    is >> manifest;
  } catch (const json::exception& e) {
    throw IoError("malformed manifest in " + dir + ": " + e.what());
  }
  if (manifest.value("format", "") != "brlgan-checkpoint") {
    throw IoError("not a checkpoint directory: " + dir);
  }

  Checkpoint ckpt;
  ckpt.config = config_from_json(manifest.at("config"));
  ckpt.data_spec = spec_from_json(manifest.at("dataset"));
  ckpt.dataset_seed = manifest.at("dataset_seed").get<std::uint64_t>();
  const auto image_size = manifest.at("image_size").get<std::size_t>();
  const auto num_classes = manifest.at("num_classes").get<std::size_t>();

  Rng scratch(0);
  ckpt.generator = Generator::create(image_size, num_classes, ckpt.config, scratch);
  ckpt.discriminator = Discriminator::create(image_size, num_classes, ckpt.config, scratch);

  const json& params = manifest.at("params");
  const auto load_into = [&](NamedParams named) {
    for (auto& [name, tensor] : named) {
      if (!params.contains(name)) throw IoError("manifest missing parameter " + name);
      const std::string file = params.at(name).get<std::string>();
      Tensor loaded = load_tensor((fs::path(dir) / file).string());
      if (!loaded.same_shape(*tensor)) {
        throw IoError("parameter " + name + " has shape " + loaded.shape_str() +
                      ", expected " + tensor->shape_str());
      }
      *tensor = std::move(loaded);
    }
  };
  load_into(ckpt.generator.parameters());
  load_into(ckpt.discriminator.parameters());
  return ckpt;
}

}  // namespace brl::gan
