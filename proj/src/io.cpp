#include "sigtree/io.hpp"

#include <fstream>
#include <map>
#include <set>

namespace sigtree::io {

namespace {

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::decision:
      return "dm";
    case NodeKind::chance:
      return "nature";
    default:
      return "terminal";
  }
}

template <typename T>
T field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw InputError(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

// ---- trees -----------------------------------------------------------------

Json tree_to_json(const DecisionTree& tree) {
  Json nodes = Json::array();
  Json edges = Json::array();
  for (const auto& n : tree.nodes()) {
    Json node{{"id", n.id}, {"kind", kind_name(n.kind)}};
    if (n.info_set) node["info_set"] = tree.info_set(*n.info_set).name;
    if (n.kind == NodeKind::terminal) node["payoff"] = n.payoff;
    nodes.push_back(std::move(node));
    for (const auto& b : n.branches)
      edges.push_back(
          {{"from", n.id}, {"to", tree.node(b.child).id}, {"branch_label", b.label}, {"branch_index", b.index}});
  }
  Json probs = Json::object();
  for (auto s : tree.chance_sets()) probs[tree.info_set(s).name] = tree.info_set(s).probs;
  return {{"nodes", nodes}, {"edges", edges}, {"nature_probs", probs}};
}

DecisionTree tree_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("tree: expected a JSON object");
  auto nodes = field<std::vector<Json>>(j, "nodes", "tree");
  TreeBuilder b;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string where = "tree.nodes[" + std::to_string(i) + "]";
    auto id = field<std::string>(nodes[i], "id", where);
    auto kind = field<std::string>(nodes[i], "kind", where);
    try {
      if (kind == "dm")
        b.add_decision(id, field<std::string>(nodes[i], "info_set", where));
      else if (kind == "nature")
        b.add_chance(id, field<std::string>(nodes[i], "info_set", where));
      else if (kind == "terminal")
        b.add_terminal(id, field<double>(nodes[i], "payoff", where));
      else
        throw InputError(where + ": unknown kind '" + kind + "'");
    } catch (const TreeError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  if (j.contains("edges")) {
    auto edges = field<std::vector<Json>>(j, "edges", "tree");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      std::string where = "tree.edges[" + std::to_string(i) + "]";
      auto label = edges[i].contains("branch_label") ? field<std::string>(edges[i], "branch_label", where)
                                                     : std::string{};
      int index = edges[i].contains("branch_index") ? field<int>(edges[i], "branch_index", where) : 0;
      if (edges[i].contains("branch_index") && index < 1) throw InputError(where + ": branch_index must be >= 1");
      try {
        b.add_edge(field<std::string>(edges[i], "from", where), field<std::string>(edges[i], "to", where), label,
                   index);
      } catch (const TreeError& e) {
        throw InputError(where + ": " + e.what());
      }
    }
  }
  if (j.contains("nature_probs")) {
    if (!j["nature_probs"].is_object()) throw InputError("tree.nature_probs: expected an object");
    for (const auto& [name, probs] : j["nature_probs"].items()) {
      try {
        b.set_probs(name, probs.get<std::vector<double>>());
      } catch (const Json::exception&) {
        throw InputError("tree.nature_probs." + name + ": expected a list of numbers");
      }
    }
  }
  try {
    return b.build();
  } catch (const TreeError& e) {
    throw InputError(std::string("tree: ") + e.what());
  }
}

// ---- models ----------------------------------------------------------------

namespace {

Json site_json(const Site& s) {
  Json j{{"id", s.id}, {"info_set", s.info_set}};
  if (s.visit_index) j["visit_index"] = *s.visit_index;
  j["alphabet"] = s.alphabet;
  return j;
}

}  // namespace

Json model_to_json(const EmpiricalModel& model) {
  Json sites = Json::array();
  for (const auto& s : model.sites()) sites.push_back(site_json(s));
  Json contexts = Json::array();
  Json dists = Json::object();
  for (const auto& ctx : model.contexts()) {
    Json ids = Json::array();
    for (int s : ctx.sites) ids.push_back(model.site(s).id);
    contexts.push_back(ids);
    Json dist = Json::object();
    for (std::size_t o = 0; o < ctx.probs.size(); ++o) dist[model.outcome_string(ctx, o)] = ctx.probs[o];
    dists[model.context_key(ctx)] = dist;
  }
  return {{"sites", sites}, {"contexts", contexts}, {"distributions", dists}};
}

EmpiricalModel model_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("model: expected a JSON object");
  auto raw_sites = field<std::vector<Json>>(j, "sites", "model");
  std::vector<Site> sites;
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < raw_sites.size(); ++i) {
    std::string where = "model.sites[" + std::to_string(i) + "]";
    Site s;
    s.id = field<std::string>(raw_sites[i], "id", where);
    s.info_set = field<std::string>(raw_sites[i], "info_set", where);
    if (raw_sites[i].contains("visit_index")) s.visit_index = field<int>(raw_sites[i], "visit_index", where);
    s.alphabet = field<std::vector<std::string>>(raw_sites[i], "alphabet", where);
    if (s.alphabet.empty()) throw InputError(where + ": empty alphabet");
    if (!index.emplace(s.id, static_cast<int>(i)).second) throw InputError(where + ": duplicate id " + s.id);
    sites.push_back(std::move(s));
  }

  auto raw_contexts = field<std::vector<std::vector<std::string>>>(j, "contexts", "model");
  auto dists = j.contains("distributions") ? j.at("distributions") : Json::object();
  if (!dists.is_object()) throw InputError("model.distributions: expected an object");

  std::vector<Context> contexts;
  for (std::size_t c = 0; c < raw_contexts.size(); ++c) {
    Context ctx;
    std::string key;
    std::size_t size = 1;
    for (const auto& id : raw_contexts[c]) {
      auto it = index.find(id);
      if (it == index.end()) throw InputError("model.contexts[" + std::to_string(c) + "]: unknown site " + id);
      ctx.sites.push_back(it->second);
      size *= sites[it->second].alphabet.size();
      key += (key.empty() ? "" : ",") + id;
    }
    if (!dists.contains(key)) throw InputError("model.distributions: no entry for context " + key);
    const auto& dist = dists.at(key);
    if (!dist.is_object()) throw InputError("model.distributions." + key + ": expected an object");

    std::map<std::string, std::size_t> outcome_of;
    std::vector<int> digits(ctx.sites.size(), 1);
    std::vector<int> radix;
    for (int s : ctx.sites) radix.push_back(static_cast<int>(sites[s].alphabet.size()));
    for (std::size_t flat = 0; flat < size; ++flat) {
      std::string label;
      for (std::size_t i = 0; i < digits.size(); ++i) label += sites[ctx.sites[i]].alphabet[digits[i] - 1];
      if (!outcome_of.emplace(label, flat).second)
        throw InputError("model.distributions." + key + ": outcome string '" + label + "' is ambiguous");
      next_tuple(digits, radix);
    }
    ctx.probs.assign(size, 0.0);
    for (const auto& [label, p] : dist.items()) {
      auto it = outcome_of.find(label);
      if (it == outcome_of.end())
        throw InputError("model.distributions." + key + ": unknown outcome '" + label + "'");
      if (!p.is_number()) throw InputError("model.distributions." + key + "." + label + ": expected a number");
      ctx.probs[it->second] = p.get<double>();
    }
    contexts.push_back(std::move(ctx));
  }
  try {
    return EmpiricalModel(std::move(sites), std::move(contexts));
  } catch (const ModelError& e) {
    throw InputError(std::string("model: ") + e.what());
  }
}

Json joint_to_json(const JointSignalMeasure& joint) {
  Json sites = Json::array();
  for (const auto& s : joint.sites) sites.push_back(site_json(s));
  Json dist = Json::object();
  for (std::size_t flat = 0; flat < joint.probs.size(); ++flat) {
    if (joint.probs[flat] == 0.0) continue;
    auto digits = joint.decode(flat);
    std::string label;
    for (std::size_t i = 0; i < digits.size(); ++i) label += joint.sites[i].alphabet[digits[i]];
    dist[label] = joint.probs[flat];
  }
  return {{"sites", sites}, {"distribution", dist}};
}

Json hardy_to_json(const quantum::HardyInstance& h) {
  Json amps = Json::array();
  for (const auto& a : h.state.amplitudes()) amps.push_back({a.real(), a.imag()});
  Json measurements = Json::array();
  for (const auto& s : h.layout.sites) {
    const auto& v = s.measurement.vector(0);
    measurements.push_back({{"site", s.id},
                            {"info_set", s.info_set},
                            {"particle", s.particle},
                            {"first_outcome", s.measurement.labels()[0]},
                            {"first_vector", {{v[0].real(), v[0].imag()}, {v[1].real(), v[1].imag()}}}});
  }
  return {{"state", {{"basis", {"00", "01", "10", "11"}}, {"amplitudes", amps}}},
          {"cos_weight", h.cos_weight},
          {"sin_weight", h.sin_weight},
          {"angle_first", h.angle_first},
          {"angle_second", h.angle_second},
          {"measurements", measurements},
          {"model", model_to_json(h.model)}};
}

Json policy_to_json(const ResponsePolicy& policy, const SignalScenario& scenario) {
  const auto& tree = scenario.tree();
  const auto sets = tree.decision_sets();
  Json out = Json::object();
  for (std::size_t k = 0; k < sets.size() && k < policy.moves.size(); ++k) {
    Json map = Json::object();
    int ord = static_cast<int>(k);
    int site = scenario.has_signal(ord) ? scenario.site_for(ord, 1) : -1;
    for (std::size_t o = 0; o < policy.moves[k].size(); ++o) {
      std::string key = site >= 0 ? scenario.model().site(site).alphabet[o] : "*";
      map[key] = tree.branch_label(sets[k], policy.moves[k][o]);
    }
    out[tree.info_set(sets[k]).name] = map;
  }
  return out;
}

Json strategy_to_json(const Strategy& s, const DecisionTree& tree) {
  Json out = Json::object();
  const auto sets = tree.decision_sets();
  for (std::size_t k = 0; k < sets.size() && k < s.choices.size(); ++k)
    out[tree.info_set(sets[k]).name] = tree.branch_label(sets[k], s.choices[k]);
  return out;
}

}  // namespace sigtree::io
