#pragma once

// Scenario documents (JSON).
//
//   {
//     "description": "optional free text",
//     "params": { "tx_power_w" | "tx_power_dbm", "noise_w" | "noise_dbm",
//                 "gamma0" | "gamma0_db", "alpha", "wavelength", "packet_len" },
//     "nodes":  [ { "id", "x", "y", "energy", "remaining"?, "rate" }, ... ],
//     "edges":  [ { "src", "dst", "kind": "direct"|"cbct", "helpers"?: [ids] }, ... ]
//   }
//
// "params" entries are all optional and default to ChannelParams::defaults().
// Writers emit linear units so that a document round-trips exactly. "edges"
// may be omitted, in which case the caller builds them from positions.
// Any key not listed above is rejected.

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "wsnlife/errors.hpp"
#include "wsnlife/network.hpp"

namespace wsnlife::io {

using ordered_json = nlohmann::ordered_json;

struct Scenario {
  net::Network network;
  bool has_edges = false;
  std::string description;
};

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& path) {
  if (!obj.is_object()) throw ParseError("expected an object", path);
  for (const auto& [key, value] : obj.items())
    if (!allowed.contains(key)) throw ParseError("unknown field '" + key + "'", path + "/" + key);
}

template <class T>
T required(const nlohmann::json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ParseError("missing field '" + key + "'", path);
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("bad value for '" + key + "': " + e.what(), path + "/" + key);
  }
}

inline double number_or(const nlohmann::json& obj, const std::string& key, double fallback, const std::string& path) {
  return obj.contains(key) ? required<double>(obj, key, path) : fallback;
}

// Value of a quantity that may be given in linear units or in dB(m).
inline double linear_or_log(const nlohmann::json& obj, const std::string& linear_key, const std::string& log_key,
                            double fallback, double (*from_log)(double), const std::string& path) {
  const bool lin = obj.contains(linear_key), log = obj.contains(log_key);
  if (lin && log) throw ParseError("give only one of '" + linear_key + "' and '" + log_key + "'", path);
  if (lin) return required<double>(obj, linear_key, path);
  if (log) return from_log(required<double>(obj, log_key, path));
  return fallback;
}

}  // namespace detail

inline link::ChannelParams params_from_json(const nlohmann::json& j, const std::string& path = "/params") {
  detail::reject_unknown(j, {"tx_power_w", "tx_power_dbm", "noise_w", "noise_dbm", "gamma0", "gamma0_db", "alpha",
                             "wavelength", "packet_len"},
                         path);
  const auto def = link::ChannelParams::defaults();
  link::ChannelParams p;
  p.tx_power = detail::linear_or_log(j, "tx_power_w", "tx_power_dbm", def.tx_power, link::dbm_to_watt, path);
  p.noise = detail::linear_or_log(j, "noise_w", "noise_dbm", def.noise, link::dbm_to_watt, path);
  p.gamma0 = detail::linear_or_log(j, "gamma0", "gamma0_db", def.gamma0, link::db_to_linear, path);
  p.alpha = detail::number_or(j, "alpha", def.alpha, path);
  p.wavelength = detail::number_or(j, "wavelength", def.wavelength, path);
  p.packet_len = j.contains("packet_len") ? detail::required<int>(j, "packet_len", path) : def.packet_len;
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ParseError(e.what(), path);
  }
  return p;
}

inline ordered_json params_to_json(const link::ChannelParams& p) {
  ordered_json j;
  j["tx_power_w"] = p.tx_power;
  j["noise_w"] = p.noise;
  j["gamma0"] = p.gamma0;
  j["alpha"] = p.alpha;
  j["wavelength"] = p.wavelength;
  j["packet_len"] = p.packet_len;
  return j;
}

inline Scenario scenario_from_json(const nlohmann::json& doc) {
  detail::reject_unknown(doc, {"description", "params", "nodes", "edges"}, "");
  Scenario sc;
  if (doc.contains("description")) sc.description = detail::required<std::string>(doc, "description", "");
  if (doc.contains("params")) sc.network.params = params_from_json(doc.at("params"));

  if (!doc.contains("nodes") || !doc.at("nodes").is_array()) throw ParseError("'nodes' must be an array", "/nodes");
  const auto& nodes = doc.at("nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = "/nodes/" + std::to_string(i);
    const auto& jn = nodes[i];
    detail::reject_unknown(jn, {"id", "x", "y", "energy", "remaining", "rate"}, path);
    net::NodeState n;
    n.id = detail::required<int>(jn, "id", path);
    n.position.x = detail::required<double>(jn, "x", path);
    n.position.y = detail::required<double>(jn, "y", path);
    n.energy_initial = detail::required<double>(jn, "energy", path);
    n.energy_remaining = detail::number_or(jn, "remaining", n.energy_initial, path);
    n.rate = detail::required<double>(jn, "rate", path);
    sc.network.nodes.push_back(n);
  }

  if (doc.contains("edges")) {
    sc.has_edges = true;
    const auto& edges = doc.at("edges");
    if (!edges.is_array()) throw ParseError("'edges' must be an array", "/edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string path = "/edges/" + std::to_string(i);
      const auto& je = edges[i];
      detail::reject_unknown(je, {"src", "dst", "kind", "helpers"}, path);
      net::Edge e;
      e.src = detail::required<int>(je, "src", path);
      e.dst = detail::required<int>(je, "dst", path);
      const auto kind = detail::required<std::string>(je, "kind", path);
      if (kind == "direct")
        e.kind = net::EdgeKind::Direct;
      else if (kind == "cbct")
        e.kind = net::EdgeKind::CbCt;
      else
        throw ParseError("unknown edge kind '" + kind + "'", path + "/kind");
      if (je.contains("helpers")) e.helpers = detail::required<std::vector<int>>(je, "helpers", path);
      sc.network.edges.push_back(std::move(e));
    }
  }

  try {
    sc.network.validate();
  } catch (const DomainError& e) {
    throw ParseError(e.what(), "/");
  }
  return sc;
}

inline ordered_json scenario_to_json(const net::Network& net, bool with_edges = true, const std::string& description = {}) {
  ordered_json doc;
  if (!description.empty()) doc["description"] = description;
  doc["params"] = params_to_json(net.params);
  doc["nodes"] = ordered_json::array();
  for (const auto& n : net.nodes) {
    ordered_json jn;
    jn["id"] = n.id;
    jn["x"] = n.position.x;
    jn["y"] = n.position.y;
    jn["energy"] = n.energy_initial;
    jn["remaining"] = n.energy_remaining;
    jn["rate"] = n.rate;
    doc["nodes"].push_back(jn);
  }
  if (with_edges) {
    doc["edges"] = ordered_json::array();
    for (const auto& e : net.edges) {
      ordered_json je;
      je["src"] = e.src;
      je["dst"] = e.dst;
      je["kind"] = net::to_string(e.kind);
      if (e.kind == net::EdgeKind::CbCt) je["helpers"] = e.helpers;
      doc["edges"].push_back(je);
    }
  }
  return doc;
}

inline std::string serialize(const net::Network& net, bool with_edges = true, const std::string& description = {}) {
  return scenario_to_json(net, with_edges, description).dump(2) + "\n";
}

inline Scenario deserialize(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), "byte " + std::to_string(e.byte));
  }
  return scenario_from_json(doc);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scenario file", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

}  // namespace wsnlife::io
