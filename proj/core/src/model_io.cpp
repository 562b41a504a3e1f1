#include <fstream>
#include <sstream>

#include "dfcnn/error.hpp"
#include "dfcnn/model.hpp"
#include "json.hpp"

namespace dfcnn {
namespace {

using nlohmann::json;

std::vector<double> doubles(const json& j, const char* key) {
  return j.at(key).get<std::vector<double>>();
}

}  // namespace

std::string model_to_json(const FittedModel& model) {
  const NetworkParams& p = model.params();
  const ModelConfig& c = model.config();
  const BoundaryGrid& g = model.grid();
  json doc;
  doc["schema_version"] = kModelSchemaVersion;
  doc["kind"] = "dfcnn-model";
  doc["config"] = {{"lookback", c.lookback},
                   {"out", c.out},
                   {"epochs", c.epochs},
                   {"learning_rate", c.learning_rate},
                   {"seed", c.seed}};
  doc["grid"] = {{"left", g.left()},
                 {"right", g.right()},
                 {"m", g.m()},
                 {"boundaries", std::vector<double>(g.boundaries().begin(), g.boundaries().end())}};
  doc["batch_norm"] = {{"channels", p.norm.channels()},   {"gamma", p.norm.gamma},
                       {"beta", p.norm.beta},             {"running_mean", p.norm.running_mean},
                       {"running_var", p.norm.running_var}, {"epsilon", p.norm.epsilon},
                       {"momentum", p.norm.momentum}};
  doc["conv"] = {{"shape", {p.conv.out_channels, p.conv.in_channels, p.conv.width}},
                 {"kernels", p.conv.kernels},
                 {"bias", p.conv.bias}};
  doc["linear"] = {{"weights", p.linear.weights}, {"bias", p.linear.bias}};
  doc["last_values"] = std::vector<double>(model.last_values().begin(), model.last_values().end());
  doc["loss_history"] =
      std::vector<double>(model.loss_history().begin(), model.loss_history().end());
  return doc.dump(2);
}

FittedModel model_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    const int version = doc.at("schema_version").get<int>();
    if (version != kModelSchemaVersion) {
      throw DataError("unsupported model schema version " + std::to_string(version));
    }
    const json& jc = doc.at("config");
    ModelConfig config;
    config.lookback = jc.at("lookback").get<std::size_t>();
    config.out = jc.at("out").get<std::size_t>();
    config.epochs = jc.at("epochs").get<std::size_t>();
    config.learning_rate = jc.at("learning_rate").get<double>();
    config.seed = jc.at("seed").get<std::uint64_t>();

    const json& jg = doc.at("grid");
    BoundaryGrid grid(jg.at("left").get<double>(), jg.at("right").get<double>(),
                      jg.at("m").get<std::size_t>());

    NetworkParams p;
    const json& jb = doc.at("batch_norm");
    p.norm.gamma = doubles(jb, "gamma");
    p.norm.beta = doubles(jb, "beta");
    p.norm.running_mean = doubles(jb, "running_mean");
    p.norm.running_var = doubles(jb, "running_var");
    p.norm.epsilon = jb.at("epsilon").get<double>();
    p.norm.momentum = jb.at("momentum").get<double>();
    p.norm.mode = NormMode::kInference;
    p.norm.validate();

    const json& jconv = doc.at("conv");
    const auto shape = jconv.at("shape").get<std::vector<std::size_t>>();
    if (shape.size() != 3) throw DataError("conv shape must have three entries");
    p.conv.out_channels = shape[0];
    p.conv.in_channels = shape[1];
    p.conv.width = shape[2];
    p.conv.kernels = doubles(jconv, "kernels");
    p.conv.bias = doubles(jconv, "bias");
    p.conv.validate();

    const json& jl = doc.at("linear");
    p.linear.weights = doubles(jl, "weights");
    p.linear.bias = jl.at("bias").get<double>();
    if (p.linear.weights.size() != p.conv.out_channels ||
        p.norm.channels() != p.conv.in_channels) {
      throw ShapeError("model layer dimensions do not chain");
    }
    return FittedModel(std::move(grid), std::move(p), config, doubles(doc, "last_values"),
                       doubles(doc, "loss_history"));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model document: ") + e.what());
  }
}

void save_model(const FittedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << model_to_json(model) << '\n';
  if (!out) throw DataError("failed writing " + path.string());
}

FittedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace dfcnn
