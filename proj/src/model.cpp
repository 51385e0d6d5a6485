#include <fstream>

#include "json.hpp"
#include "robsvm/svm.hpp"

namespace robsvm {

namespace {

using nlohmann::json;

json vec_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vec_from_json(const json& arr) {
  Eigen::VectorXd v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  return v;
}

json mat_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd mat_from_json(const json& rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j)
      m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)].get<double>();
  return m;
}

const char* variant_name(SvmVariant v) {
  switch (v) {
    case SvmVariant::CSvm: return "c-svm";
    case SvmVariant::SpSvm: return "sp-svm";
    case SvmVariant::EelSvm: return "eel-svm";
  }
  return "c-svm";
}

SvmVariant variant_from_name(const std::string& s) {
  if (s == "c-svm") return SvmVariant::CSvm;
  if (s == "sp-svm") return SvmVariant::SpSvm;
  if (s == "eel-svm") return SvmVariant::EelSvm;
  fail(ErrorCode::MalformedCell, "unknown model variant '" + s + "'");
}

}  // namespace

std::string model_to_json(const TrainedModel& m) {
  json j;
  j["format_version"] = 1;
  j["variant"] = variant_name(m.variant);
  j["kernel"] = {{"kind", m.kernel.kind == KernelKind::Rbf ? "rbf" : "linear"},
                 {"gamma", m.kernel.gamma}};
  j["penalty"] = m.penalty;
  j["level"] = m.level;
  j["bias"] = m.bias;
  j["z_star"] = m.z_star;
  j["dual_objective"] = m.dual_objective;
  j["alpha"] = vec_to_json(m.alpha);
  if (m.variant != SvmVariant::CSvm) {
    j["beta"] = vec_to_json(m.beta);
    j["gamma_coef"] = vec_to_json(m.gamma_coef);
  }
  if (m.variant == SvmVariant::SpSvm) {
    j["noise"] = {{"family",
                   m.noise_family == NoiseFamily::StudentT ? "t" : "gaussian"},
                  {"dof", m.noise_dof}};
    j["perturbation"] = {{"feature_index", m.perturbation.feature_index},
                         {"magnitudes", vec_to_json(m.perturbation.magnitudes)}};
  }
  j["support_labels"] = vec_to_json(m.support_labels);
  j["support_data"] = mat_to_json(m.support_data);
  if (!m.rescale.is_identity())
    j["rescale"] = {{"min", vec_to_json(m.rescale.min)},
                    {"max", vec_to_json(m.rescale.max)}};
  return j.dump(1);
}

TrainedModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedCell, std::string("model file is not valid JSON: ") + e.what());
  }
  require(j.value("format_version", 0) == 1, ErrorCode::MalformedCell,
          "unsupported model format version");

  TrainedModel m;
  m.variant = variant_from_name(j.at("variant").get<std::string>());
  const auto& k = j.at("kernel");
  m.kernel = k.at("kind").get<std::string>() == "rbf"
                 ? KernelSpec::rbf(k.at("gamma").get<double>())
                 : KernelSpec::linear();
  m.penalty = j.at("penalty").get<double>();
  m.level = j.at("level").get<double>();
  m.bias = j.at("bias").get<double>();
  m.z_star = j.at("z_star").get<double>();
  m.dual_objective = j.at("dual_objective").get<double>();
  m.alpha = vec_from_json(j.at("alpha"));
  if (m.variant != SvmVariant::CSvm) {
    m.beta = vec_from_json(j.at("beta"));
    m.gamma_coef = vec_from_json(j.at("gamma_coef"));
  }
  if (m.variant == SvmVariant::SpSvm) {
    const auto& noise = j.at("noise");
    m.noise_family = noise.at("family").get<std::string>() == "t"
                         ? NoiseFamily::StudentT
                         : NoiseFamily::Gaussian;
    m.noise_dof = noise.at("dof").get<double>();
    const auto& pv = j.at("perturbation");
    m.perturbation.feature_index = pv.at("feature_index").get<Eigen::Index>();
    m.perturbation.magnitudes = vec_from_json(pv.at("magnitudes"));
  }
  m.support_labels = vec_from_json(j.at("support_labels"));
  m.support_data = mat_from_json(j.at("support_data"));
  if (j.contains("rescale")) {
    m.rescale.min = vec_from_json(j.at("rescale").at("min"));
    m.rescale.max = vec_from_json(j.at("rescale").at("max"));
  }
  return m;
}

void save_model(const TrainedModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::MissingFile, "cannot write '" + path + "'");
  out << model_to_json(m) << '\n';
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::MissingFile, "cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace robsvm
