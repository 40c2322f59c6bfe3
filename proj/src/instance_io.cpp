#include "dpc/instance_io.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dpc {

using nlohmann::json;

json instance_to_json(const ProblemInstance& inst) {
  json j;
  j["num_users"] = inst.num_users;
  j["num_tx_antennas"] = inst.num_tx_antennas;
  j["rate_targets"] = inst.rate_targets;
  json channels = json::array();
  for (const auto& h : inst.channels) {
    json row = json::array();
    for (Eigen::Index a = 0; a < h.size(); ++a)
      row.push_back({h(a).real(), h(a).imag()});
    channels.push_back(std::move(row));
  }
  j["channels"] = std::move(channels);
  return j;
}

ProblemInstance instance_from_json(const json& j) {
  ProblemInstance inst;
  try {
    inst.num_users = j.at("num_users").get<int>();
    inst.num_tx_antennas = j.at("num_tx_antennas").get<int>();
    inst.rate_targets = j.at("rate_targets").get<std::vector<double>>();
    const auto& channels = j.at("channels");
    if (!channels.is_array())
      throw std::invalid_argument("instance: \"channels\" must be an array");
    for (const auto& row : channels) {
      CVec h(row.size());
      Eigen::Index a = 0;
      for (const auto& entry : row) {
        if (!entry.is_array() || entry.size() != 2)
          throw std::invalid_argument(
              "instance: channel entries must be [re, im] pairs");
        h(a++) = Cplx(entry[0].get<double>(), entry[1].get<double>());
      }
      inst.channels.push_back(std::move(h));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("instance: malformed JSON: ") +
                                e.what());
  }
  inst.validate();
  return inst;
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open instance file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("instance: parse error in " + path + ": " +
                                e.what());
  }
  return instance_from_json(j);
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write instance file: " + path);
  out << instance_to_json(inst).dump(2) << "\n";
}

}  // namespace dpc
