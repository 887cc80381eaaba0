#include "oud/model.hpp"

#include <json.hpp>
#include <stdexcept>

#include "oud/io.hpp"

namespace oud {

using nlohmann::json;

PredictionTarget target_from_name(const std::string& name) {
  if (name == "epsilon") return PredictionTarget::epsilon;
  if (name == "x0") return PredictionTarget::x0;
  if (name == "mu") return PredictionTarget::mu;
  throw std::invalid_argument("unknown prediction target '" + name +
                              "' (epsilon, x0, mu)");
}

std::string target_name(PredictionTarget t) {
  switch (t) {
    case PredictionTarget::epsilon: return "epsilon";
    case PredictionTarget::x0: return "x0";
    case PredictionTarget::mu: return "mu";
  }
  throw std::logic_error("unknown target");
}

TimestepSampling timestep_sampling_from_name(const std::string& name) {
  if (name == "random") return TimestepSampling::random_step;
  if (name == "all") return TimestepSampling::all_steps;
  throw std::invalid_argument("unknown timestep sampling '" + name + "' (random, all)");
}

std::string timestep_sampling_name(TimestepSampling t) {
  return t == TimestepSampling::random_step ? "random" : "all";
}

std::vector<double> NoiseModel::predict(std::span<const double> x, int n_next) const {
  return mlp_forward(net, x, schedule.time_fraction(n_next));
}

void save_model(const NoiseModel& m, const std::string& path) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = "ou-diffuse-model";
  j["schedule"] = {{"n_steps", m.schedule.params().n_steps},
                   {"b_min", m.schedule.params().b_min},
                   {"b_max", m.schedule.params().b_max}};
  j["network"] = {{"layer_dims", m.net.layer_dims},
                  {"activation", activation_name(m.net.activation)},
                  {"weights", m.net.weights},
                  {"biases", m.net.biases}};
  j["scaler"] = {{"mean", m.scaler.mean}, {"stddev", m.scaler.stddev}};
  j["features"] = m.feature_names;
  j["training"] = {{"target", target_name(m.config.target)},
                   {"hidden_dims", m.config.hidden_dims},
                   {"activation", activation_name(m.config.activation)},
                   {"optimizer", optimizer_name(m.config.optimizer)},
                   {"learning_rate", m.config.learning_rate},
                   {"epochs", m.config.epochs},
                   {"batch_size", m.config.batch_size},
                   {"seed", m.config.seed},
                   {"timestep_sampling", timestep_sampling_name(m.config.timestep_sampling)},
                   {"literal_trajectories", m.config.literal_trajectories},
                   {"plateau_patience", m.config.plateau_patience},
                   {"plateau_tol", m.config.plateau_tol}};
  j["rng"] = {{"algorithm", kRngAlgorithm}, {"normal_transform", kNormalTransform}};
  atomic_write_text(path, j.dump(2) + "\n");
}

NoiseModel load_model(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error("model file '" + path + "': " + e.what());
  }
  try {
    if (!j.is_object()) throw std::runtime_error("not a JSON object");
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw std::runtime_error("unsupported format_version " + std::to_string(version) +
                               " (expected " + std::to_string(kModelFormatVersion) + ")");
    }
    if (j.at("kind").get<std::string>() != "ou-diffuse-model") {
      throw std::runtime_error("not an ou-diffuse model bundle");
    }

    NoiseModel m;
    const auto& sch = j.at("schedule");
    m.schedule = build_schedule(sch.at("n_steps").get<int>(),
                                sch.at("b_min").get<double>(),
                                sch.at("b_max").get<double>());

    const auto& net = j.at("network");
    m.net.layer_dims = net.at("layer_dims").get<std::vector<int>>();
    m.net.activation = activation_from_name(net.at("activation").get<std::string>());
    m.net.weights = net.at("weights").get<std::vector<std::vector<double>>>();
    m.net.biases = net.at("biases").get<std::vector<std::vector<double>>>();
    validate_params(m.net);

    m.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
    m.scaler.stddev = j.at("scaler").at("stddev").get<std::vector<double>>();
    m.feature_names = j.at("features").get<std::vector<std::string>>();
    const std::size_t dim = m.feature_names.size();
    if (m.scaler.mean.size() != dim || m.scaler.stddev.size() != dim ||
        static_cast<std::size_t>(m.net.input_dim()) != dim + 1 ||
        static_cast<std::size_t>(m.net.output_dim()) != dim) {
      throw std::runtime_error("feature/scaler/network dimensions disagree");
    }
    for (double sd : m.scaler.stddev) {
      if (!(sd > 0.0)) throw std::runtime_error("scaler stddev must be positive");
    }

    const auto& tr = j.at("training");
    m.config.target = target_from_name(tr.at("target").get<std::string>());
    m.config.hidden_dims = tr.at("hidden_dims").get<std::vector<int>>();
    m.config.activation = activation_from_name(tr.at("activation").get<std::string>());
    m.config.optimizer = optimizer_from_name(tr.at("optimizer").get<std::string>());
    m.config.learning_rate = tr.at("learning_rate").get<double>();
    m.config.epochs = tr.at("epochs").get<int>();
    m.config.batch_size = tr.at("batch_size").get<int>();
    m.config.seed = tr.at("seed").get<std::uint64_t>();
    m.config.timestep_sampling =
        timestep_sampling_from_name(tr.at("timestep_sampling").get<std::string>());
    m.config.literal_trajectories = tr.at("literal_trajectories").get<bool>();
    m.config.plateau_patience = tr.at("plateau_patience").get<int>();
    m.config.plateau_tol = tr.at("plateau_tol").get<double>();

    const auto& rng = j.at("rng");
    if (rng.at("algorithm").get<std::string>() != kRngAlgorithm ||
        rng.at("normal_transform").get<std::string>() != kNormalTransform) {
      throw std::runtime_error("model was produced with a different RNG scheme");
    }
    return m;
  } catch (const json::exception& e) {
    throw std::runtime_error("model file '" + path + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("model file '" + path + "': " + e.what());
  }
}

}  // namespace oud
