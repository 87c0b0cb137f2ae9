#include "ecmlfd/model_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ecmlfd/errors.hpp"

namespace ecmlfd {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw DataError(std::string("model file: missing field '") + name + "'");
  }
  return obj.at(name);
}

template <typename T>
T get_as(const json& obj, const char* name) {
  try {
    return field(obj, name).get<T>();
  } catch (const json::exception&) {
    throw DataError(std::string("model file: field '") + name + "' has the wrong type");
  }
}

std::optional<double> optional_number(const json& obj, const char* name) {
  const json& v = field(obj, name);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw DataError(std::string("model file: field '") + name + "' is not a number");
  return v.get<double>();
}

}  // namespace

std::string model_to_json(const GaussianMixture& model) {
  model.validate();
  const int d = model.dim();
  json doc;
  doc["format"] = "ecmlfd-gmm";
  doc["version"] = kModelFormatVersion;
  doc["dim_labels"] = model.dim_labels;
  doc["position_unit"] = model.position_unit;
  doc["spec"] = {{"input_dims", model.spec.input_dims}, {"output_dims", model.spec.output_dims}};
  doc["K"] = model.size();
  json priors = json::array(), means = json::array(), covs = json::array();
  for (const GaussianComponent& c : model.components) {
    priors.push_back(c.prior);
    means.push_back(std::vector<double>(c.mean.data(), c.mean.data() + d));
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(d) * d);
    for (int r = 0; r < d; ++r) {
      for (int col = 0; col < d; ++col) flat.push_back(c.covariance(r, col));
    }
    covs.push_back(std::move(flat));
  }
  doc["priors"] = std::move(priors);
  doc["means"] = std::move(means);
  doc["covariances"] = std::move(covs);

  const TrainingMetadata& m = model.metadata;
  json table = json::array();
  for (const SweepEntry& e : m.bic_table) {
    json row;
    row["k"] = e.k;
    row["log_likelihood"] = e.log_likelihood ? json(*e.log_likelihood) : json(nullptr);
    row["bic"] = e.bic ? json(*e.bic) : json(nullptr);
    row["iterations"] = e.iterations;
    row["error"] = e.error;
    table.push_back(std::move(row));
  }
  doc["training"] = {{"seed", m.seed},
                     {"tol", m.tol},
                     {"max_iter", m.max_iter},
                     {"log_likelihood", m.log_likelihood},
                     {"bic", m.bic},
                     {"n_train", m.n_train},
                     {"preset", m.preset},
                     {"bic_table", std::move(table)}};
  return doc.dump(1) + "\n";
}

GaussianMixture model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (get_as<std::string>(doc, "format") != "ecmlfd-gmm") throw DataError("model file: unknown format");
  if (get_as<int>(doc, "version") != kModelFormatVersion) {
    throw DataError("model file: unsupported version");
  }

  GaussianMixture model;
  model.dim_labels = get_as<std::vector<std::string>>(doc, "dim_labels");
  model.position_unit = get_as<double>(doc, "position_unit");
  const json& spec = field(doc, "spec");
  model.spec.input_dims = get_as<std::vector<int>>(spec, "input_dims");
  model.spec.output_dims = get_as<std::vector<int>>(spec, "output_dims");

  const int k = get_as<int>(doc, "K");
  const auto priors = get_as<std::vector<double>>(doc, "priors");
  const auto means = get_as<std::vector<std::vector<double>>>(doc, "means");
  const auto covs = get_as<std::vector<std::vector<double>>>(doc, "covariances");
  if (k < 1 || priors.size() != static_cast<std::size_t>(k) || means.size() != priors.size() ||
      covs.size() != priors.size()) {
    throw DataError("model file: K does not match priors/means/covariances");
  }
  const std::size_t d = model.dim_labels.size();
  model.components.resize(k);
  for (int c = 0; c < k; ++c) {
    if (means[c].size() != d || covs[c].size() != d * d) {
      throw DataError("model file: component " + std::to_string(c) + " has wrong dimensions");
    }
    GaussianComponent& comp = model.components[c];
    comp.prior = priors[c];
    comp.mean = Eigen::Map<const Vector>(means[c].data(), static_cast<Eigen::Index>(d));
    comp.covariance.resize(d, d);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t col = 0; col < d; ++col) comp.covariance(r, col) = covs[c][r * d + col];
    }
  }

  const json& t = field(doc, "training");
  TrainingMetadata& m = model.metadata;
  m.seed = get_as<std::uint64_t>(t, "seed");
  m.tol = get_as<double>(t, "tol");
  m.max_iter = get_as<int>(t, "max_iter");
  m.log_likelihood = get_as<double>(t, "log_likelihood");
  m.bic = get_as<double>(t, "bic");
  m.n_train = get_as<std::uint64_t>(t, "n_train");
  m.preset = get_as<std::string>(t, "preset");
  const json& table = field(t, "bic_table");
  if (!table.is_array()) throw DataError("model file: bic_table is not an array");
  for (const json& row : table) {
    SweepEntry e;
    e.k = get_as<int>(row, "k");
    e.log_likelihood = optional_number(row, "log_likelihood");
    e.bic = optional_number(row, "bic");
    e.iterations = get_as<int>(row, "iterations");
    e.error = get_as<std::string>(row, "error");
    m.bic_table.push_back(std::move(e));
  }

  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  return model;
}

void write_model(const GaussianMixture& model, const std::filesystem::path& path) {
  const std::string text = model_to_json(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

GaussianMixture read_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace ecmlfd
