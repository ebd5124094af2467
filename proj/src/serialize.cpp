#include "mpdp/serialize.hpp"

#include <fstream>
#include <string>

namespace mpdp {

namespace {

void flatten_into(const nlohmann::json& node, std::vector<double>& out) {
  if (node.is_array()) {
    for (const auto& child : node) flatten_into(child, out);
  } else if (node.is_number()) {
    out.push_back(node.get<double>());
  } else {
    throw InputError("MDP document: expected a number or an array");
  }
}

std::size_t require_size(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_unsigned()) {
    throw InputError(std::string("MDP document: missing or invalid '") + key + "'");
  }
  return doc[key].get<std::size_t>();
}

}  // namespace

nlohmann::json mdp_to_json(const NonStationaryMdp& mdp) {
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();
  nlohmann::json doc;
  doc["num_states"] = S;
  doc["num_actions"] = A;
  doc["horizon"] = mdp.horizon();
  auto kernels = nlohmann::json::array();
  auto rewards = nlohmann::json::array();
  for (Time t = 0; t < mdp.num_epochs(); ++t) {
    auto kt = nlohmann::json::array();
    auto rt = nlohmann::json::array();
    for (StateId s = 0; s < S; ++s) {
      auto ks = nlohmann::json::array();
      auto rs = nlohmann::json::array();
      for (ActionId a = 0; a < A; ++a) {
        ks.push_back(mdp.kernel(t).dense_row(s, a));
        rs.push_back(mdp.reward(t)(s, a));
      }
      kt.push_back(std::move(ks));
      rt.push_back(std::move(rs));
    }
    kernels.push_back(std::move(kt));
    rewards.push_back(std::move(rt));
  }
  doc["kernels"] = std::move(kernels);
  doc["rewards"] = std::move(rewards);
  return doc;
}

NonStationaryMdp mdp_from_json(const nlohmann::json& doc) {
  const std::size_t S = require_size(doc, "num_states");
  const std::size_t A = require_size(doc, "num_actions");
  const std::size_t T = require_size(doc, "horizon");
  if (!doc.contains("kernels") || !doc["kernels"].is_array() || !doc.contains("rewards") ||
      !doc["rewards"].is_array()) {
    throw InputError("MDP document: 'kernels' and 'rewards' must be arrays");
  }
  const auto& kdoc = doc["kernels"];
  const auto& rdoc = doc["rewards"];
  if (kdoc.size() != T + 1 || rdoc.size() != T + 1) {
    throw DimensionError("MDP document: expected horizon+1 = " + std::to_string(T + 1) +
                         " kernels and reward tables");
  }
  std::vector<TransitionKernel> kernels;
  std::vector<RewardTable> rewards;
  for (Time t = 0; t <= T; ++t) {
    std::vector<double> k;
    std::vector<double> r;
    flatten_into(kdoc[t], k);
    flatten_into(rdoc[t], r);
    kernels.push_back(TransitionKernel::from_dense(S, A, k));
    rewards.emplace_back(S, A, std::move(r));
  }
  return NonStationaryMdp(std::move(kernels), std::move(rewards));
}

void save_mdp(const NonStationaryMdp& mdp, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << mdp_to_json(mdp).dump(1) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

NonStationaryMdp load_mdp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return mdp_from_json(doc);
}

}  // namespace mpdp
